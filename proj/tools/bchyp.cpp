// bchyp: command-line evaluation, classification, and verification front end.

#include <cstdio>
#include <fstream>
#include <iostream>
#include <optional>
#include <sstream>
#include <thread>

#include "CLI11.hpp"
#include "json.hpp"

#include "bchyp/analysis.hpp"
#include "bchyp/errors.hpp"
#include "bchyp/evaluator.hpp"
#include "bchyp/rank1.hpp"
#include "bchyp/report.hpp"
#include "bchyp/sampling.hpp"

using namespace bch;

namespace {

std::vector<std::string> splitList(const std::string& s) {
    std::vector<std::string> parts;
    std::string cur;
    for (char c : s) {
        if (c == ',') {
            parts.push_back(cur);
            cur.clear();
        } else if (!isspace(static_cast<unsigned char>(c))) {
            cur += c;
        }
    }
    parts.push_back(cur);
    return parts;
}

// "1.3", "1.3+0.5i", "-2i"
Cplx parseComplex(const std::string& tok) {
    if (tok.empty()) throw Error(ErrKind::Domain, "empty number");
    std::string s = tok;
    bool imagOnly = false;
    if (s.back() == 'i' || s.back() == 'j') {
        s.pop_back();
        imagOnly = true;
    }
    // split into real and imaginary parts at the last sign not in an exponent
    if (imagOnly) {
        std::size_t split = std::string::npos;
        for (std::size_t k = s.size(); k-- > 1;) {
            if ((s[k] == '+' || s[k] == '-') && s[k - 1] != 'e' && s[k - 1] != 'E') {
                split = k;
                break;
            }
        }
        if (split == std::string::npos)
            return Cplx(0.0, s.empty() || s == "+" ? 1.0 : s == "-" ? -1.0 : std::stod(s));
        const std::string re = s.substr(0, split);
        std::string im = s.substr(split);
        if (im == "+") im = "1";
        if (im == "-") im = "-1";
        return Cplx(std::stod(re), std::stod(im));
    }
    return Cplx(std::stod(s), 0.0);
}

struct RunConfig {
    int rank = 2;
    double p = 2.0;
    std::string mult = "2,2,1";
    std::string deformStr;
    std::string lambdaStr = "rho";
    std::string xStr;
    std::string method = "auto";
    int trunc = 60;
    double tol = 1e-8;
    std::uint64_t seed = 42;
    std::string outPath;
    std::string format = "text";
    int threads = std::max(1u, std::thread::hardware_concurrency());
    int samples = 200;
};

Multiplicity parseMult(const RunConfig& cfg) {
    auto parts = splitList(cfg.mult);
    if (cfg.rank == 1 && parts.size() == 2)
        return Multiplicity::rankOne(std::stod(parts[0]), std::stod(parts[1]));
    if (parts.size() != 3)
        throw Error(ErrKind::Domain, "--mult expects m_s,m_m,m_l");
    Multiplicity m(std::stod(parts[0]), std::stod(parts[1]), std::stod(parts[2]));
    if (cfg.rank == 1) m.mm = 0.0;
    return m;
}

std::optional<Deformation> parseDeform(const RunConfig& cfg) {
    if (cfg.deformStr.empty()) return std::nullopt;
    auto parts = splitList(cfg.deformStr);
    if (parts.size() == 1) return Deformation(std::stod(parts[0]), 0.0);
    if (parts.size() != 2) throw Error(ErrKind::Domain, "--deform expects ell[,elltilde]");
    return Deformation(std::stod(parts[0]), std::stod(parts[1]));
}

CVec parseLambda(const RunConfig& cfg, const RootSystemBC& rs, const Multiplicity& m,
                 const std::optional<Deformation>& d) {
    if (cfg.lambdaStr == "rho") {
        // rho(m), or the deformed hull vector rho(m(2*elltilde)) under --deform
        Vec r = d ? rhoDeformedHull(rs, m, d->ellTilde) : rho(rs, m);
        return toComplex(r);
    }
    auto parts = splitList(cfg.lambdaStr);
    if (static_cast<int>(parts.size()) != cfg.rank)
        throw Error(ErrKind::Domain, "--lambda needs rank entries (or 'rho')");
    CVec out(parts.size());
    for (std::size_t i = 0; i < parts.size(); ++i) out[i] = parseComplex(parts[i]);
    return out;
}

Vec parseX(const RunConfig& cfg) {
    auto parts = splitList(cfg.xStr);
    if (static_cast<int>(parts.size()) != cfg.rank)
        throw Error(ErrKind::Domain, "--x needs rank entries");
    Vec out(parts.size());
    for (std::size_t i = 0; i < parts.size(); ++i) out[i] = std::stod(parts[i]);
    return out;
}

void emit(const RunConfig& cfg, const std::string& text) {
    if (cfg.outPath.empty()) {
        std::cout << text;
        if (!text.empty() && text.back() != '\n') std::cout << "\n";
    } else {
        std::ofstream f(cfg.outPath, std::ios::binary);
        f << text;
    }
}

int cmdEval(const RunConfig& cfg) {
    RootSystemBC rs(cfg.rank, cfg.p);
    const Multiplicity m = parseMult(cfg);
    const auto d = parseDeform(cfg);
    const CVec lambda = parseLambda(cfg, rs, m, d);
    const Vec x = parseX(cfg);

    EvalOptions opt;
    opt.method = cfg.method;
    opt.tol = cfg.tol;
    opt.series.maxHeight = cfg.trunc;

    Cplx value;
    std::string method;
    double err = 0.0;
    if (d) {
        DeformedEval ev = fDeformed(rs, m, *d, lambda, x, opt);
        value = ev.value;
        method = ev.method;
        err = ev.errEstimate;
    } else {
        EvalResult ev = fEval(rs, m, lambda, x, opt);
        value = ev.value;
        method = ev.method;
        err = ev.errEstimate;
    }
    nlohmann::json j;
    j["value_re"] = value.real();
    j["value_im"] = value.imag();
    j["method"] = method;
    j["err_est"] = err;
    if (cfg.format == "json")
        emit(cfg, j.dump(2) + "\n");
    else
        emit(cfg, "F = " + formatDouble(value.real()) +
                      (value.imag() != 0.0 ? " + " + formatDouble(value.imag()) + "i"
                                           : "") +
                      "   [" + method + ", err<=" + formatDouble(err) + "]\n");
    return 0;
}

int cmdClassify(const RunConfig& cfg) {
    const Multiplicity m = parseMult(cfg);
    const MultClass c = classify(m, cfg.rank);
    auto [lo, hi] = ellRange(m);
    nlohmann::json j;
    j["labels"] = c.labels();
    j["ell_min"] = lo;
    j["ell_max"] = hi;
    const auto dec = decomposeM1(m, cfg.rank);
    if (dec) {
        j["decomposition"] = {{"base", {dec->base.ms, dec->base.mm, dec->base.ml}},
                              {"ell", dec->ell},
                              {"strict", dec->strict}};
    }
    if (cfg.format == "json") {
        emit(cfg, j.dump(2) + "\n");
    } else {
        std::string line;
        for (const auto& l : c.labels()) line += l + " ";
        line += "; ell_range=[" + formatDouble(lo) + ", " + formatDouble(hi) + "]";
        emit(cfg, line + "\n");
    }
    return 0;
}

int cmdCfun(const RunConfig& cfg) {
    RootSystemBC rs(cfg.rank, cfg.p);
    const Multiplicity m = parseMult(cfg);
    const CVec lambda = parseLambda(cfg, rs, m, std::nullopt);
    CFuncValue cv = cfunction(rs, m, lambda);
    nlohmann::json j;
    j["c_re"] = cv.value.real();
    j["c_im"] = cv.value.imag();
    j["pole"] = cv.poleFlag;
    j["zero"] = cv.zeroFlag;
    if (m.ms != 0.0) {
        j["b0_nonsingular"] = b0Nonsingular(rs, m, lambda);
    } else {
        j["b0_nonsingular"] = nullptr;   // undefined for m_s = 0
    }
    emit(cfg, cfg.format == "json"
                  ? j.dump(2) + "\n"
                  : "c = " + formatDouble(cv.value.real()) + " + " +
                        formatDouble(cv.value.imag()) + "i  pole=" +
                        (cv.poleFlag ? "1" : "0") + " zero=" + (cv.zeroFlag ? "1" : "0") +
                        "\n");
    return 0;
}

int cmdBounded(const RunConfig& cfg) {
    RootSystemBC rs(cfg.rank, cfg.p);
    const Multiplicity m = parseMult(cfg);
    const auto d = parseDeform(cfg);
    const CVec lambda = parseLambda(cfg, rs, m, d);
    HullQuery q = isBounded(rs, m, lambda, d);
    nlohmann::json j;
    j["bounded"] = q.bounded;
    j["hull_vector"] = q.hullVector;
    j["hypothesis_satisfied"] = q.hypothesisSatisfied;
    j["note"] = q.hypothesisNote;
    emit(cfg, cfg.format == "json"
                  ? j.dump(2) + "\n"
                  : std::string(q.bounded ? "bounded" : "unbounded") +
                        (q.hypothesisSatisfied ? "" : "  (advisory: " + q.hypothesisNote + ")") +
                        "\n");
    return 0;
}

int cmdCatalog(const RunConfig& cfg, const std::string& nameFilter, int nFilter) {
    std::ostringstream os;
    nlohmann::json arr = nlohmann::json::array();
    for (const auto& e : catalog()) {
        if (!nameFilter.empty() && e.name.find(nameFilter) == std::string::npos) continue;
        if (nFilter >= 0) {
            // interpret --n as the Sp(1)-type index for the sp(p,1) family
            if (e.family == "sp(p,1)" &&
                e.name.find("tau_" + std::to_string(nFilter)) == std::string::npos)
                continue;
        }
        arr.push_back(nlohmann::json::parse(catalogEntryJson(e)));
        os << e.name << ": base=(" << e.baseMult.ms << "," << e.baseMult.mm << ","
           << e.baseMult.ml << ") ell=" << e.deform.ell << " ellT=" << e.deform.ellTilde
           << " deformed=(" << e.sigmaTauMult.ms << "," << e.sigmaTauMult.mm << ","
           << e.sigmaTauMult.ml << ") rho=(";
        for (std::size_t j = 0; j < e.rhoCoords.size(); ++j)
            os << (j ? "," : "") << e.rhoCoords[j];
        os << ")\n";
    }
    emit(cfg, cfg.format == "json" ? arr.dump(2) + "\n" : os.str());
    return 0;
}

int cmdScan(const RunConfig& cfg, const std::string& x0Str, const std::string& dirStr,
            const std::string& boxHiStr, double tMax, int steps) {
    RootSystemBC rs(cfg.rank, cfg.p);
    const Multiplicity m = parseMult(cfg);
    const auto d = parseDeform(cfg);
    const CVec lambda = parseLambda(cfg, rs, m, d);
    RunConfig tmp = cfg;
    tmp.xStr = x0Str;
    const Vec x0 = parseX(tmp);

    // evaluation points: a ray x0 + t dir, or the grid of a box [x0, boxHi]
    std::vector<Vec> points;
    if (!boxHiStr.empty()) {
        tmp.xStr = boxHiStr;
        const Vec hi = parseX(tmp);
        const int per = std::max(1, steps);
        std::vector<int> idx(cfg.rank, 0);
        for (;;) {
            Vec x(cfg.rank);
            for (int j = 0; j < cfg.rank; ++j)
                x[j] = x0[j] + (hi[j] - x0[j]) * double(idx[j]) / double(per);
            points.push_back(std::move(x));
            int j = 0;
            while (j < cfg.rank && ++idx[j] > per) idx[j++] = 0;
            if (j == cfg.rank) break;
        }
    } else {
        tmp.xStr = dirStr;
        const Vec dir = parseX(tmp);
        for (int k = 0; k <= steps; ++k) {
            const double t = tMax * double(k) / double(std::max(1, steps));
            Vec x = x0;
            for (int j = 0; j < cfg.rank; ++j) x[j] += t * dir[j];
            points.push_back(std::move(x));
        }
    }

    EvalOptions opt;
    opt.method = cfg.method;
    opt.tol = cfg.tol;
    opt.series.maxHeight = cfg.trunc;

    std::vector<ScanRow> rows;
    for (std::size_t k = 0; k < points.size(); ++k) {
        ScanRow row;
        row.id = static_cast<int>(k);
        row.m = m;
        row.d = d.value_or(Deformation());
        row.lambda = lambda;
        row.x = points[k];
        try {
            if (d) {
                DeformedEval ev = fDeformed(rs, m, *d, lambda, points[k], opt);
                row.value = ev.value;
                row.method = ev.method;
                row.errEstimate = ev.errEstimate;
            } else {
                EvalResult ev = fEval(rs, m, lambda, points[k], opt);
                row.value = ev.value;
                row.method = ev.method;
                row.errEstimate = ev.errEstimate;
            }
        } catch (const Error& e) {
            row.method = std::string("error:") + errKindName(e.kind());
        }
        rows.push_back(row);
    }
    emit(cfg, scanToCsv(rows, cfg.rank));
    return 0;
}

int cmdVerify(const RunConfig& cfg, const std::string& suite) {
    SuiteConfig sc;
    sc.seed = cfg.seed;
    sc.samples = cfg.samples;
    sc.threads = cfg.threads;
    std::vector<CheckReport> reports;
    if (suite == "all" || suite == "estimates") {
        auto est = estimateSuite(sc);
        reports.insert(reports.end(), est.begin(), est.end());
    }
    if (suite == "all" || suite == "cross") {
        reports.push_back(crossEngineCheck(sc));
    }
    if (suite == "all" || suite == "hull") {
        // fast hull test against the LP oracle
        CheckReport rep;
        rep.checkName = "hull-oracle-agreement";
        rep.hypothesisSet = "dominance criterion == vertex LP (outside 1e-9 band)";
        rep.declaredTolerance = 0.0;
        Rng rng(cfg.seed + 17);
        for (int r = 1; r <= 3; ++r) {
            RootSystemBC rs(r);
            Multiplicity m(2, r == 1 ? 0 : 1.5, 0.5);
            const Vec rhoV = rho(rs, m);
            for (int i = 0; i < sc.samples; ++i) {
                Vec xi(r);
                for (int j = 0; j < r; ++j)
                    xi[j] = rng.uniform(-1.5, 1.5) * (1.0 + norm(rhoV));
                double margin = 0.0;
                const bool fast = inHullFast(rs, rhoV, xi, &margin);
                if (std::fabs(margin) <= 1e-9 * (1.0 + norm(rhoV))) continue;
                const bool lp = inHullLP(rs, rhoV, xi);
                ++rep.samplesTried;
                std::string params = "rank=" + std::to_string(r) + " xi=(";
                for (int j = 0; j < r; ++j)
                    params += (j ? "," : "") + formatDouble(xi[j]);
                params += ")";
                rep.record(fast == lp ? 0.0 : 1.0, params);
            }
        }
        reports.push_back(rep);
    }
    const std::string csv = checksToCsv(reports);
    const std::string json = checksToJson(reports, cfg.seed);
    if (!cfg.outPath.empty()) {
        // per-sample rows to <out>, per-check summary to <out>.json
        std::ofstream f(cfg.outPath, std::ios::binary);
        f << samplesToCsv(reports);
        std::ofstream fj(cfg.outPath + ".json", std::ios::binary);
        fj << json;
        std::cout << csv;
    } else {
        std::cout << (cfg.format == "json" ? json : csv);
    }
    for (const auto& r : reports)
        if (!r.passed) return 4;
    return 0;
}

} // namespace

int main(int argc, char** argv) {
    CLI::App app{"numerics for BC-type hypergeometric functions with deformed multiplicities"};
    app.require_subcommand(1);

    RunConfig cfg;
    std::string x0Str, dirStr, boxHiStr, suite = "all", nameFilter;
    double tMax = 5.0;
    int steps = 50, nFilter = -1;

    auto addCommon = [&](CLI::App* sub) {
        sub->add_option("--rank", cfg.rank, "rank r of the BC root system");
        sub->add_option("--p", cfg.p, "norm of the long roots (default 2)");
        sub->add_option("--mult", cfg.mult, "multiplicity triple m_s,m_m,m_l");
        sub->add_option("--deform", cfg.deformStr, "deformation ell[,elltilde]");
        sub->add_option("--lambda", cfg.lambdaStr, "spectral parameter (tuple or 'rho')");
        sub->add_option("--method", cfg.method, "series | ode | auto");
        sub->add_option("--trunc", cfg.trunc, "series truncation height");
        sub->add_option("--tol", cfg.tol, "target tolerance");
        sub->add_option("--seed", cfg.seed, "sampler seed");
        sub->add_option("--out", cfg.outPath, "output file (default stdout)");
        sub->add_option("--format", cfg.format, "text | json | csv");
        sub->add_option("--threads", cfg.threads, "worker threads for sweeps");
        sub->add_option("--samples", cfg.samples, "samples per verification check");
    };

    auto* eval = app.add_subcommand("eval", "evaluate F (or its deformation) at a point");
    addCommon(eval);
    eval->add_option("--x", cfg.xStr, "evaluation point")->required();

    auto* cls = app.add_subcommand("classify", "multiplicity set membership and ell range");
    addCommon(cls);

    auto* cfun = app.add_subcommand("cfun", "c-function value and b0 status");
    addCommon(cfun);

    auto* bounded = app.add_subcommand("bounded", "boundedness classification via the hull test");
    addCommon(bounded);

    auto* cat = app.add_subcommand("catalog", "geometric parameter catalog");
    addCommon(cat);
    cat->add_option("--name", nameFilter, "substring filter on the entry name");
    cat->add_option("--n", nFilter, "Sp(1)-type index filter");

    auto* scan = app.add_subcommand("scan", "sweep F along a ray or box, CSV output");
    addCommon(scan);
    scan->add_option("--x0", x0Str, "ray base point / box lower corner")->required();
    scan->add_option("--dir", dirStr, "ray direction");
    scan->add_option("--box-hi", boxHiStr, "box upper corner (grid sweep)");
    scan->add_option("--tmax", tMax, "ray length");
    scan->add_option("--steps", steps, "grid steps (per axis for boxes)");

    auto* verify = app.add_subcommand("verify", "run the verification suites");
    addCommon(verify);
    verify->add_option("--suite", suite, "all | estimates | cross | hull");

    CLI11_PARSE(app, argc, argv);

    if (const char* envThreads = std::getenv("BCHYP_THREADS"))
        cfg.threads = std::max(1, std::atoi(envThreads));

    try {
        if (eval->parsed()) return cmdEval(cfg);
        if (cls->parsed()) return cmdClassify(cfg);
        if (cfun->parsed()) return cmdCfun(cfg);
        if (bounded->parsed()) return cmdBounded(cfg);
        if (cat->parsed()) return cmdCatalog(cfg, nameFilter, nFilter);
        if (scan->parsed()) {
            if (boxHiStr.empty() && dirStr.empty())
                throw Error(ErrKind::Domain, "scan needs --dir or --box-hi");
            return cmdScan(cfg, x0Str, dirStr, boxHiStr, tMax, steps);
        }
        if (verify->parsed()) return cmdVerify(cfg, suite);
    } catch (const Error& e) {
        nlohmann::json j;
        j["error"] = errKindName(e.kind());
        j["message"] = e.what();
        std::cerr << j.dump() << "\n";
        return e.isDomain() ? 2 : 3;
    } catch (const std::exception& e) {
        nlohmann::json j;
        j["error"] = "Invalid";
        j["message"] = e.what();
        std::cerr << j.dump() << "\n";
        return 2;
    }
    return 0;
}
