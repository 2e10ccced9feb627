#include "bchyp/analysis.hpp"

#include <algorithm>
#include <cmath>
#include <future>
#include <limits>
#include <sstream>

#include "bchyp/cfunc.hpp"
#include "bchyp/errors.hpp"
#include "bchyp/hcseries.hpp"
#include "bchyp/sampling.hpp"

namespace bch {

namespace {

struct GF {
    Cplx G{0.0, 0.0};
    Cplx F{0.0, 0.0};
};

GF orbitEval(const RootSystemBC& rs, const Multiplicity& m, const CVec& lambda,
             const Vec& x, double tol) {
    if (norm(x) == 0.0) return {Cplx(1.0, 0.0), Cplx(1.0, 0.0)};
    EvalOptions opt;
    opt.tol = tol;
    OrbitIntegrator integ(rs, m, lambda, x, opt);
    integ.advanceTo(norm(x));
    return {integ.state().values[0], integ.symmetrized()};
}

// Suite evaluations push low-margin points to the orbit engine instead of
// growing the series tables; both routes hit the same accuracy at these
// desk-scale points and the ODE is uniformly fast.
EvalOptions suiteOpts(const SuiteConfig& cfg) {
    EvalOptions opt;
    opt.tol = cfg.odeTol;
    opt.series.minWallMargin = 0.3;
    opt.series.maxHeightCap = 160;
    return opt;
}

double maxOrbitPairing(const RootSystemBC& rs, const Vec& lam, const Vec& x) {
    double best = -std::numeric_limits<double>::infinity();
    for (const auto& w : rs.weylElements()) best = std::max(best, dot(w.apply(lam), x));
    return best;
}

std::string describe(const Multiplicity& m, const CVec& lam, const Vec& x) {
    std::ostringstream os;
    os << "m=(" << m.ms << "," << m.mm << "," << m.ml << ") lambda=(";
    for (std::size_t i = 0; i < lam.size(); ++i) {
        if (i) os << ",";
        os << lam[i].real();
        if (lam[i].imag() != 0.0) os << (lam[i].imag() > 0 ? "+" : "") << lam[i].imag() << "i";
    }
    os << ") x=(";
    for (std::size_t i = 0; i < x.size(); ++i) {
        if (i) os << ",";
        os << x[i];
    }
    os << ")";
    return os.str();
}

// ---- samplers -------------------------------------------------------------

Vec sampleBox(Rng& rng, int r, double lo, double hi) {
    Vec out(r);
    for (int j = 0; j < r; ++j) out[j] = rng.uniform(lo, hi);
    return out;
}

CVec sampleComplex(Rng& rng, int r, double re, double im) {
    CVec out(r);
    for (int j = 0; j < r; ++j)
        out[j] = Cplx(rng.uniform(-re, re), rng.uniform(-im, im));
    return out;
}

// random point with |x| in [0.3, 2.2] and a regular direction
Vec sampleRegularX(const RootSystemBC& rs, Rng& rng) {
    for (;;) {
        Vec x = sampleBox(rng, rs.rank(), -1.6, 1.6);
        const double n = norm(x);
        if (n < 0.3 || n > 2.2) continue;
        if (rs.regularityMargin(scale(x, 1.0 / n)) >= 0.03) return x;
    }
}

// strictly dominant point: 0 < x_1 < ... < x_r with wall margin >= minGap
Vec sampleDominantInterior(const RootSystemBC& rs, Rng& rng, double minGap,
                           double maxGap) {
    Vec x(rs.rank());
    double acc = 0.0;
    for (int j = 0; j < rs.rank(); ++j) {
        acc += rng.uniform(minGap, maxGap);
        x[j] = acc;
    }
    return x;
}

Multiplicity sampleMplus(Rng& rng, int rank) {
    return sampleMultiplicity(MultSet::Mplus, rng, rank);
}
Multiplicity sampleM3(Rng& rng, int rank) {
    return sampleMultiplicity(MultSet::M3, rng, rank);
}
Multiplicity sampleMplusM3(Rng& rng, int rank) {
    return sampleMultiplicity(MultSet::MplusM3, rng, rank);
}
Multiplicity sampleM2M3(Rng& rng, int rank) {
    return sampleMultiplicity(MultSet::M2M3, rng, rank);
}

bool rayWallClear(const RootSystemBC& rs, const Vec& x, const Vec& xi,
                  const std::vector<double>& ts) {
    for (double t : ts) {
        Vec y = x;
        for (int j = 0; j < rs.rank(); ++j) y[j] += t * xi[j];
        const double n = norm(y);
        if (n < 1e-3) continue;   // the origin itself is fine (F=1 exactly)
        if (rs.regularityMargin(scale(y, 1.0 / n)) < 0.03) return false;
    }
    return true;
}

int rankFor(const SuiteConfig& cfg, int i) { return 1 + (i % std::max(1, cfg.maxRank)); }

// ---- the individual checks -----------------------------------------------

CheckReport checkPositivityModulus(const SuiteConfig& cfg) {
    CheckReport rep;
    rep.checkName = "i-positivity-modulus";
    rep.hypothesisSet = "m in M+ u M3; G,F real>0 for real lambda; |G_l|<=G_{Re l}";
    rep.declaredTolerance = 1e-9;
    Rng rng(cfg.seed * 1315423911ull + 1);
    for (int i = 0; i < cfg.samples; ++i) {
        const int r = rankFor(cfg, i);
        RootSystemBC rs(r);
        const Multiplicity m = sampleMplusM3(rng, r);
        const Vec x = sampleRegularX(rs, rng);
        const CVec lc = sampleComplex(rng, r, 2.5, 2.5);
        const CVec lr = toComplex(realPart(lc));

        GF real = orbitEval(rs, m, lr, x, cfg.odeTol);
        GF cplx = orbitEval(rs, m, lc, x, cfg.odeTol);
        ++rep.samplesTried;

        const std::string w = describe(m, lc, x);
        rep.record(-real.G.real() / (1.0 + std::abs(real.G)), w);
        rep.record(-real.F.real() / (1.0 + std::abs(real.F)), w);
        rep.record(std::fabs(real.G.imag()) / (1.0 + std::abs(real.G)), w);
        rep.record(std::fabs(real.F.imag()) / (1.0 + std::abs(real.F)), w);
        rep.record((std::abs(cplx.G) - real.G.real()) / (1.0 + real.G.real()), w);
        rep.record((std::abs(cplx.F) - real.F.real()) / (1.0 + real.F.real()), w);
    }
    return rep;
}

CheckReport checkExpBound(const SuiteConfig& cfg) {
    CheckReport rep;
    rep.checkName = "ii-exp-bound";
    rep.hypothesisSet = "m in M+ u M3; lambda real: G_l <= G_0 e^{max_w (w l)(x)}";
    rep.declaredTolerance = 1e-9;
    Rng rng(cfg.seed * 2654435761ull + 2);
    for (int i = 0; i < cfg.samples; ++i) {
        const int r = rankFor(cfg, i);
        RootSystemBC rs(r);
        const Multiplicity m = sampleMplusM3(rng, r);
        const Vec x = sampleRegularX(rs, rng);
        const Vec lam = sampleBox(rng, r, -2.5, 2.5);

        GF atLam = orbitEval(rs, m, toComplex(lam), x, cfg.odeTol);
        GF atZero = orbitEval(rs, m, CVec(r, Cplx(0, 0)), x, cfg.odeTol);
        const double env = std::exp(maxOrbitPairing(rs, lam, x));
        ++rep.samplesTried;
        const std::string w = describe(m, toComplex(lam), x);
        rep.record((atLam.G.real() - atZero.G.real() * env) /
                       (1.0 + atZero.G.real() * env), w);
        rep.record((atLam.F.real() - atZero.F.real() * env) /
                       (1.0 + atZero.F.real() * env), w);
    }
    return rep;
}

CheckReport checkShiftBound(const SuiteConfig& cfg) {
    CheckReport rep;
    rep.checkName = "iii-shift-bound";
    rep.hypothesisSet =
        "m in M+ u M3; lambda real, mu dominant: G_{l+mu} <= G_mu e^{max_w (w l)(x)}";
    rep.declaredTolerance = 1e-9;
    Rng rng(cfg.seed * 40503ull + 3);
    for (int i = 0; i < cfg.samples; ++i) {
        const int r = rankFor(cfg, i);
        RootSystemBC rs(r);
        const Multiplicity m = sampleMplusM3(rng, r);
        const Vec x = sampleRegularX(rs, rng);
        const Vec lam = sampleBox(rng, r, -2.0, 2.0);
        const Vec mu = rs.dominantRepresentative(sampleBox(rng, r, -2.0, 2.0)).first;

        GF shifted = orbitEval(rs, m, toComplex(add(lam, mu)), x, cfg.odeTol);
        GF base = orbitEval(rs, m, toComplex(mu), x, cfg.odeTol);
        const double env = std::exp(maxOrbitPairing(rs, lam, x));
        ++rep.samplesTried;
        const std::string w = describe(m, toComplex(lam), x);
        rep.record((shifted.G.real() - base.G.real() * env) /
                       (1.0 + base.G.real() * env), w);
        rep.record((shifted.F.real() - base.F.real() * env) /
                       (1.0 + base.F.real() * env), w);
    }
    return rep;
}

CheckReport checkSqrtWBound(const SuiteConfig& cfg) {
    CheckReport rep;
    rep.checkName = "iv-sqrtW-bound";
    rep.hypothesisSet = "m in M2 u M3: max(|G_l|,|F_l|) <= sqrt|W| e^{max_w Re(w l)(x)}";
    rep.declaredTolerance = 1e-9;
    Rng rng(cfg.seed * 69069ull + 4);
    for (int i = 0; i < cfg.samples; ++i) {
        const int r = rankFor(cfg, i);
        RootSystemBC rs(r);
        const Multiplicity m = sampleM2M3(rng, r);
        const Vec x = sampleRegularX(rs, rng);
        const CVec lam = sampleComplex(rng, r, 2.5, 2.5);

        GF gf = orbitEval(rs, m, lam, x, cfg.odeTol);
        const double env = std::sqrt(double(rs.weylOrder())) *
                           std::exp(maxOrbitPairing(rs, realPart(lam), x));
        ++rep.samplesTried;
        const std::string w = describe(m, lam, x);
        rep.record((std::abs(gf.G) - env) / (1.0 + env), w);
        rep.record((std::abs(gf.F) - env) / (1.0 + env), w);
    }
    return rep;
}

CheckReport checkSubadditivity(const SuiteConfig& cfg) {
    CheckReport rep;
    rep.checkName = "v-subadditivity";
    rep.hypothesisSet =
        "m in M3: F(x+x1) e^{min_w (rho-l)(w x1)} <= F(x) <= F(x+x1) e^{max_w ...}; "
        "special +-(rho-l)(x1) exponents when rho - lambda is dominant";
    rep.declaredTolerance = 1e-9;
    Rng rng(cfg.seed * 1103515245ull + 5);
    for (int i = 0; i < cfg.samples; ++i) {
        const int r = rankFor(cfg, i);
        RootSystemBC rs(r);
        const Multiplicity m = sampleM3(rng, r);
        const Vec x = sampleRegularX(rs, rng);
        const Vec x1 = sampleDominantInterior(rs, rng, 0.05, 0.7);
        const Vec rhoV = rho(rs, m);
        // general form: lambda real arbitrary
        const Vec lam = sampleBox(rng, r, -2.0, 2.0);
        const Vec eta = sub(rhoV, lam);
        const double hi = maxOrbitPairing(rs, eta, x1);
        const double lo = -maxOrbitPairing(rs, scale(eta, -1.0), x1);

        GF atX = orbitEval(rs, m, toComplex(lam), x, cfg.odeTol);
        GF atSum = orbitEval(rs, m, toComplex(lam), add(x, x1), cfg.odeTol);
        const double fx = atX.F.real();
        const double fsum = atSum.F.real();
        ++rep.samplesTried;
        const std::string w = describe(m, toComplex(lam), x);
        rep.record((fsum * std::exp(lo) - fx) / (1.0 + fx), w);
        rep.record((fx - fsum * std::exp(hi)) / (1.0 + fx), w);

        // special exponents on the domain where they are equivalent to the
        // general ones: rho - lambda dominant (sample lambda = t rho)
        const Vec lamT = scale(rhoV, rng.uniform(0.0, 1.0));
        const double expo = dot(sub(rhoV, lamT), x1);
        GF sAtX = orbitEval(rs, m, toComplex(lamT), x, cfg.odeTol);
        GF sAtSum = orbitEval(rs, m, toComplex(lamT), add(x, x1), cfg.odeTol);
        rep.record((sAtSum.F.real() * std::exp(-expo) - sAtX.F.real()) /
                       (1.0 + sAtX.F.real()), w);
        rep.record((sAtX.F.real() - sAtSum.F.real() * std::exp(expo)) /
                       (1.0 + sAtX.F.real()), w);
    }
    return rep;
}

CheckReport checkLocalHarnack(const SuiteConfig& cfg) {
    CheckReport rep;
    rep.checkName = "vi-local-harnack";
    rep.hypothesisSet =
        "m in M+ u M3, lambda real, x dominant-regular: grad F = -(1/|W|) sum_w "
        "w^{-1}(rho-l) G(wx)";
    rep.declaredTolerance = 1e-5;   // finite-difference gradient limited
    Rng rng(cfg.seed * 279470273ull + 6);
    for (int i = 0; i < cfg.samples; ++i) {
        const int r = rankFor(cfg, i);
        RootSystemBC rs(r);
        const Multiplicity m = sampleMplusM3(rng, r);
        const Vec x = sampleDominantInterior(rs, rng, 0.35, 0.9);
        const Vec lam = sampleBox(rng, r, -2.0, 2.0);
        const Vec rhoMinusLam = sub(rho(rs, m), lam);

        EvalOptions opt = suiteOpts(cfg);
        OrbitIntegrator integ(rs, m, toComplex(lam), x, opt);
        integ.advanceTo(norm(x));
        const CVec& orbitVals = integ.state().values;

        Vec rhs(r, 0.0);
        const auto& W = rs.weylElements();
        for (std::size_t k = 0; k < W.size(); ++k) {
            const Vec pulled = W[k].inverse().apply(rhoMinusLam);
            for (int j = 0; j < r; ++j)
                rhs[j] -= pulled[j] * orbitVals[k].real() / double(W.size());
        }

        auto f = makeFEvaluator(rs, m, toComplex(lam), opt);
        const double h = 1e-3 * (1.0 + norm(x));
        Vec grad(r, 0.0);
        for (int j = 0; j < r; ++j) {
            auto central = [&](double step) {
                Vec xp = x, xm = x;
                xp[j] += step;
                xm[j] -= step;
                return (f(xp).real() - f(xm).real()) / (2.0 * step);
            };
            grad[j] = (4.0 * central(h / 2.0) - central(h)) / 3.0;
        }
        double scaleRef = 1.0;
        for (int j = 0; j < r; ++j) scaleRef = std::max(scaleRef, std::fabs(rhs[j]));
        double worst = 0.0;
        for (int j = 0; j < r; ++j)
            worst = std::max(worst, std::fabs(grad[j] - rhs[j]) / scaleRef);
        ++rep.samplesTried;
        rep.record(worst, describe(m, toComplex(lam), x));
    }
    return rep;
}

CheckReport checkRayMonotonicity(const SuiteConfig& cfg) {
    CheckReport rep;
    rep.checkName = "vii-ray-monotonicity";
    rep.hypothesisSet =
        "m in M+ u M3, lambda real: t -> e^{K_xi t} F(x + t xi) nondecreasing, "
        "K_xi = max_w (rho - l)(w xi)";
    rep.declaredTolerance = 1e-9;
    Rng rng(cfg.seed * 6364136223846793005ull + 7);
    std::vector<double> ts;
    for (int k = 0; k <= 10; ++k) ts.push_back(0.5 * k);
    for (int i = 0; i < cfg.samples; ++i) {
        const int r = rankFor(cfg, i);
        RootSystemBC rs(r);
        const Multiplicity m = sampleMplusM3(rng, r);
        Vec x, xi;
        do {
            x = sampleBox(rng, r, -1.0, 1.0);
            xi = sampleBox(rng, r, -1.0, 1.0);
            const double n = norm(xi);
            if (n < 0.2) continue;
            xi = scale(xi, 1.0 / n);
        } while (!rayWallClear(rs, x, xi, ts));
        const Vec lam = sampleBox(rng, r, -2.0, 2.0);
        const double kXi = maxOrbitPairing(rs, sub(rho(rs, m), lam), xi);

        EvalOptions opt = suiteOpts(cfg);
        auto f = makeFEvaluator(rs, m, toComplex(lam), opt);
        std::vector<double> logf;
        logf.reserve(ts.size());
        for (double t : ts) {
            Vec y = x;
            for (int j = 0; j < r; ++j) y[j] += t * xi[j];
            logf.push_back(kXi * t + std::log(f(y).real()));
        }
        double worst = 0.0;
        for (std::size_t k = 0; k + 1 < logf.size(); ++k)
            worst = std::max(worst, logf[k] - logf[k + 1]);
        ++rep.samplesTried;
        rep.record(worst, describe(m, toComplex(lam), x));
    }
    return rep;
}

CheckReport checkDeformedGBound(const SuiteConfig& cfg) {
    CheckReport rep;
    rep.checkName = "viii-a-deformed-modulus";
    rep.hypothesisSet =
        "m in M+, elltilde >= -m_m/2, ell <= ell_max (G) / symmetric ell (F): "
        "|G_{l,lt,l}| <= sqrt|W| u^{-ell} v^{-elltilde} e^{max_w Re(w l)(x)}";
    rep.declaredTolerance = 1e-9;
    Rng rng(cfg.seed * 2862933555777941757ull + 8);
    for (int i = 0; i < cfg.samples; ++i) {
        const int r = rankFor(cfg, i);
        RootSystemBC rs(r);
        const Multiplicity m = sampleMplus(rng, r);
        auto [lmin, lmax] = ellRange(m);
        const double ell = rng.uniform(lmin - 1.5, lmax);
        const double ellT = r == 1 ? 0.0 : rng.uniform(-m.mm / 2.0, 1.2);
        const Deformation d(ell, ellT);
        const Vec x = sampleRegularX(rs, rng);
        const CVec lam = sampleComplex(rng, r, 2.0, 2.0);

        const Multiplicity md = deform(m, d, r);
        GF gf = orbitEval(rs, md, lam, x, cfg.odeTol);
        const double uv = std::exp(-ell * logU(rs, x) - ellT * logV(rs, x));
        const Cplx gDef = uv * gf.G;
        const Cplx fDef = uv * gf.F;
        const double env = std::sqrt(double(rs.weylOrder())) * uv *
                           std::exp(maxOrbitPairing(rs, realPart(lam), x));
        ++rep.samplesTried;
        const std::string w = describe(m, lam, x) + " ell=" + formatDouble(ell) +
                              " ellT=" + formatDouble(ellT);
        rep.record((std::abs(gDef) - env) / (1.0 + env), w);
        rep.record((std::abs(fDef) - env) / (1.0 + env), w);
    }
    return rep;
}

CheckReport checkDeformedPositivity(const SuiteConfig& cfg) {
    CheckReport rep;
    rep.checkName = "viii-b-deformed-positivity";
    rep.hypothesisSet =
        "m in M+, ell in [ell_min-1, ell_max], elltilde >= -m_m/2: F_{l,lt,l} real > 0 "
        "(lambda real) and |F_{l,lt,l}| <= F_{l,lt,Re l}";
    rep.declaredTolerance = 1e-9;
    Rng rng(cfg.seed * 3202034522624059733ull + 9);
    for (int i = 0; i < cfg.samples; ++i) {
        const int r = rankFor(cfg, i);
        RootSystemBC rs(r);
        const Multiplicity m = sampleMplus(rng, r);
        auto [lmin, lmax] = ellRange(m);
        const double ell = rng.uniform(lmin - 1.0, lmax);
        const double ellT = r == 1 ? 0.0 : rng.uniform(-m.mm / 2.0, 1.2);
        const Deformation d(ell, ellT);
        const Vec x = sampleRegularX(rs, rng);
        const CVec lc = sampleComplex(rng, r, 2.0, 2.0);
        const CVec lr = toComplex(realPart(lc));

        const Multiplicity md = deform(m, d, r);
        GF real = orbitEval(rs, md, lr, x, cfg.odeTol);
        GF cplx = orbitEval(rs, md, lc, x, cfg.odeTol);
        const double uv = std::exp(-ell * logU(rs, x) - ellT * logV(rs, x));
        ++rep.samplesTried;
        const std::string w = describe(m, lc, x) + " ell=" + formatDouble(ell) +
                              " ellT=" + formatDouble(ellT);
        rep.record(-(uv * real.F.real()) / (1.0 + uv * std::abs(real.F)), w);
        rep.record(uv * (std::abs(cplx.F) - real.F.real()) / (1.0 + uv * real.F.real()),
                   w);
    }
    return rep;
}

CheckReport checkDeformedSandwich(const SuiteConfig& cfg) {
    CheckReport rep;
    rep.checkName = "viii-c-deformed-sandwich";
    rep.hypothesisSet =
        "m in M+ with m_l >= 1, ell in [ell_min-1, ell_max], elltilde >= 0, lambda "
        "dominant, x1 in a+: sandwich with e^{+-(l+rho(m(2lt)))(x1)}";
    rep.declaredTolerance = 1e-9;
    Rng rng(cfg.seed * 1442695040888963407ull + 10);
    for (int i = 0; i < cfg.samples; ++i) {
        const int r = rankFor(cfg, i);
        RootSystemBC rs(r);
        Multiplicity m = sampleMplus(rng, r);
        m.ml = rng.uniform(1.0, 3.0);
        auto [lmin, lmax] = ellRange(m);
        const double ell = rng.uniform(lmin - 1.0, lmax);
        const double ellT = r == 1 ? 0.0 : rng.uniform(0.0, 1.0);
        const Deformation d(ell, ellT);
        const Vec x = sampleRegularX(rs, rng);
        const Vec x1 = sampleDominantInterior(rs, rng, 0.05, 0.6);
        const Vec lam = rs.dominantRepresentative(sampleBox(rng, r, -2.0, 2.0)).first;
        const double expo = dot(lam, x1) + dot(rhoDeformedHull(rs, m, ellT), x1);

        EvalOptions opt = suiteOpts(cfg);
        const double fx = fDeformed(rs, m, d, toComplex(lam), x, opt).value.real();
        const double fsum =
            fDeformed(rs, m, d, toComplex(lam), add(x, x1), opt).value.real();
        ++rep.samplesTried;
        const std::string w = describe(m, toComplex(lam), x) + " ell=" +
                              formatDouble(ell) + " ellT=" + formatDouble(ellT);
        rep.record((fsum * std::exp(-expo) - fx) / (1.0 + std::fabs(fx)), w);
        rep.record((fx - fsum * std::exp(expo)) / (1.0 + std::fabs(fx)), w);
    }
    return rep;
}

CheckReport checkSphericalBound(const SuiteConfig& cfg) {
    CheckReport rep;
    rep.checkName = "ix-spherical-bound";
    rep.hypothesisSet =
        "Hermitian entries (m_l = 1), lambda in C(rho(m)) + i a*: |u^{-ell} "
        "F_l(m(ell))| <= 1";
    rep.declaredTolerance = 1e-9;
    Rng rng(cfg.seed * 9007199254740881ull + 11);
    std::vector<CatalogEntry> herm;
    for (const auto& e : catalog())
        if (e.family == "hermitian" && e.rank <= cfg.maxRank) herm.push_back(e);
    for (int i = 0; i < cfg.samples; ++i) {
        const auto& entry = herm[std::size_t(i) % herm.size()];
        RootSystemBC rs(entry.rank);
        const Multiplicity m = entry.baseMult;
        auto [lmin, lmax] = ellRange(m);
        const double ell = rng.uniform(-lmax, lmax);
        const Vec rhoV = rho(rs, m);

        // strictly inside the hull: shrink a random convex combination
        Vec inside(entry.rank, 0.0);
        {
            double total = 0.0;
            std::vector<double> theta(rs.weylOrder());
            for (auto& t : theta) { t = rng.uniform01(); total += t; }
            std::size_t k = 0;
            for (const auto& w : rs.weylElements()) {
                const Vec v = w.apply(rhoV);
                for (int j = 0; j < entry.rank; ++j)
                    inside[j] += theta[k] / total * v[j];
                ++k;
            }
            const double shrink = rng.uniform(0.1, 0.9);
            inside = scale(inside, shrink);
        }
        CVec lam(entry.rank);
        for (int j = 0; j < entry.rank; ++j)
            lam[j] = Cplx(inside[j], rng.uniform(-2.0, 2.0));
        const Vec x = sampleRegularX(rs, rng);

        EvalOptions opt = suiteOpts(cfg);
        const Cplx val = fDeformed(rs, m, Deformation(ell, 0.0), lam, x, opt).value;
        ++rep.samplesTried;
        rep.record(std::abs(val) - 1.0,
                   entry.name + " " + describe(m, lam, x) + " ell=" + formatDouble(ell));
    }
    return rep;
}

} // namespace

Multiplicity sampleMultiplicity(MultSet set, Rng& rng, int rank) {
    const double mm = rank == 1 ? 0.0 : rng.uniform(0.0, 3.0);
    switch (set) {
        case MultSet::Mplus:
            return Multiplicity(rng.uniform(0.0, 4.0), mm, rng.uniform(0.0, 3.0));
        case MultSet::M3: {
            const double ml = rng.uniform(-1.5, 0.0);
            return Multiplicity(rng.uniform(-2.0 * ml, -2.0 * ml + 4.0), mm, ml);
        }
        case MultSet::M3Interior: {
            const double ml = rng.uniform(-1.5, -0.1);
            const double ms = rng.uniform(-2.0 * ml + 0.2, -2.0 * ml + 4.0);
            return Multiplicity(ms, rank == 1 ? 0.0 : rng.uniform(0.2, 3.0), ml);
        }
        case MultSet::M2M3: {
            if (rng.uniform01() < 0.5) return sampleMultiplicity(MultSet::M3, rng, rank);
            const double ml = rng.uniform(0.0, 3.0);
            return Multiplicity(rng.uniform(-ml, 4.0), mm, ml);
        }
        case MultSet::MplusM3:
            return rng.uniform01() < 0.5 ? sampleMultiplicity(MultSet::Mplus, rng, rank)
                                         : sampleMultiplicity(MultSet::M3, rng, rank);
        case MultSet::M1:
            for (;;) {
                Multiplicity m(rng.uniform(0.1, 4.0),
                               rank == 1 ? 0.0 : rng.uniform(0.1, 3.0),
                               rng.uniform(-1.5, 3.0));
                if (classify(m, rank).M1 && m.ms + 2 * m.ml > 0.2) return m;
            }
    }
    return Multiplicity();
}

CheckReport crossEngineCheck(const SuiteConfig& cfg) {
    CheckReport rep;
    rep.checkName = "cross-engine";
    rep.hypothesisSet = "m in M1, generic real lambda, interior dominant x";
    rep.declaredTolerance = 1e-6;
    Rng rng(cfg.seed * 7719472615821079694ull + 12);
    for (int r = 1; r <= std::min(2, cfg.maxRank); ++r) {
        RootSystemBC rs(r);
        int done = 0;
        while (done < cfg.samples) {
            const Multiplicity m = sampleMultiplicity(MultSet::M1, rng, r);
            CVec lam(r);
            for (int j = 0; j < r; ++j)
                lam[j] = Cplx(rng.uniform(0.3, 2.8) + 0.61 * j, 0.0);
            Vec x(r);
            double acc = 0.0;
            for (int j = 0; j < r; ++j) {
                acc += rng.uniform(0.25, 0.9);
                x[j] = acc;
            }
            SeriesValue sv;
            try {
                SeriesOptions sopt;
                sopt.tailTol = 1e-11;
                sv = fSeries(rs, m, lam, x, sopt);
            } catch (const Error&) {
                continue;   // resample non-generic draws
            }
            EvalOptions opt;
            opt.method = "ode";
            opt.tol = 1e-10;
            const Cplx ode = fEval(rs, m, lam, x, opt).value;
            const double rel = std::abs(sv.value - ode) / std::abs(ode);
            ++rep.samplesTried;
            rep.record(rel, describe(m, lam, x));
            if (r == 1) {   // the scalar oracle referees both engines
                const Rank1Result oracle = rank1F(m.ms, m.ml, lam[0], x[0]);
                rep.record(std::abs(sv.value - oracle.value) / std::abs(oracle.value),
                           describe(m, lam, x) + " [vs rank-one oracle]");
            }
            ++done;
        }
    }
    return rep;
}

std::vector<CheckReport> estimateSuite(const SuiteConfig& cfg) {
    using Runner = CheckReport (*)(const SuiteConfig&);
    const Runner runners[] = {
        checkPositivityModulus, checkExpBound,         checkShiftBound,
        checkSqrtWBound,        checkSubadditivity,    checkLocalHarnack,
        checkRayMonotonicity,   checkDeformedGBound,   checkDeformedPositivity,
        checkDeformedSandwich,  checkSphericalBound,
    };
    std::vector<CheckReport> out;
    if (cfg.threads > 1) {
        std::vector<std::future<CheckReport>> futs;
        for (Runner r : runners)
            futs.push_back(std::async(std::launch::async, r, cfg));
        for (auto& f : futs) out.push_back(f.get());
    } else {
        for (Runner r : runners) out.push_back(r(cfg));
    }
    return out;
}

HullQuery isBounded(const RootSystemBC& rs, const Multiplicity& m, const CVec& lambda,
                    const std::optional<Deformation>& d) {
    HullQuery q;
    q.m = m;
    q.deformation = d;
    q.lambda = lambda;
    if (!d) {
        q.hullVector = rho(rs, m);
        if (!classify(m, rs.rank()).M1) {
            q.hypothesisSatisfied = false;
            q.hypothesisNote = "m not in M1; verdict advisory";
        }
    } else {
        q.hullVector = rhoDeformedHull(rs, m, d->ellTilde);
        auto [lmin, lmax] = ellRange(m);
        std::string note;
        if (!classify(m, rs.rank()).Mplus) note = "base m not in M+";
        else if (m.ml < 1.0) note = "m_l < 1";
        else if (!(d->ell > lmin - 1.0 && d->ell < lmax))
            note = rs.rank() == 1 && d->ell == lmax
                       ? ""   // rank one extends to ell = ell_max
                       : "ell outside ]ell_min-1, ell_max[";
        else if (rs.rank() > 1 && m.mm == 0.0 && !(d->ellTilde > 0.0))
            note = "elltilde must be > 0 when m_m = 0";
        else if (d->ellTilde < 0.0) note = "elltilde < 0";
        if (!note.empty()) {
            q.hypothesisSatisfied = false;
            q.hypothesisNote = note + "; verdict advisory";
        }
    }
    q.bounded = inHullFast(rs, q.hullVector, realPart(lambda));
    return q;
}

SharpRatioResult sharpRatio(const RootSystemBC& rs, const Multiplicity& m,
                            const Vec& lambda0, const RaySpec& ray, double ratioBound,
                            double stabilization, double odeTol) {
    SharpRatioResult res;
    res.report.checkName = "sharp-ratio";
    res.report.hypothesisSet = "m in M3 interior; lambda0 dominant real";
    res.report.declaredTolerance = 0.0;

    const Vec rhoV = rho(rs, m);
    std::vector<const PositiveRoot*> vanishing;
    for (const auto& a : rs.positiveRoots()) {
        if (a.cls == RootClass::Long) continue;
        if (std::fabs(dot(lambda0, a.coords)) < 1e-9) vanishing.push_back(&a);
    }

    // series route when the spectral parameter is generic
    std::unique_ptr<SymmetricSeries> series;
    try {
        SeriesOptions sopt;
        sopt.maxHeight = 40;
        series = std::make_unique<SymmetricSeries>(rs, m, toComplex(lambda0), sopt);
    } catch (const Error&) {
        series.reset();
    }

    EvalOptions opt;
    opt.tol = odeTol;
    for (double t : ray.tGrid) {
        Vec x = ray.x0;
        for (int j = 0; j < rs.rank(); ++j) x[j] += t * ray.xhat[j];
        double logPoly = 0.0;
        for (const auto* a : vanishing) logPoly += std::log(1.0 + dot(a->coords, x));
        double logRatio;
        if (series) {
            SeriesValue sv = series->evaluateNormalized(x);
            const int cap = seriesRankCap(rs.rank(), 400);
            while (sv.tailEstimate > 1e-10 * (1e-30 + std::abs(sv.value)) &&
                   sv.truncationHeight < cap) {
                series->ensureHeight(std::min(2 * sv.truncationHeight, cap));
                sv = series->evaluateNormalized(x);
            }
            logRatio = std::log(std::fabs(sv.value.real())) - logPoly;
        } else {
            EvalResult fv = fEval(rs, m, toComplex(lambda0), x, opt);
            logRatio = std::log(std::fabs(fv.value.real())) -
                       (dot(lambda0, x) - dot(rhoV, x)) - logPoly;
        }
        res.ratios.push_back(std::exp(logRatio));
        ++res.report.samplesTried;
    }

    double lo = std::numeric_limits<double>::infinity(), hi = 0.0;
    for (double v : res.ratios) { lo = std::min(lo, v); hi = std::max(hi, v); }
    const std::size_t third = res.ratios.size() - res.ratios.size() / 3;
    double lo3 = std::numeric_limits<double>::infinity(), hi3 = 0.0;
    for (std::size_t k = third; k < res.ratios.size(); ++k) {
        lo3 = std::min(lo3, res.ratios[k]);
        hi3 = std::max(hi3, res.ratios[k]);
    }
    res.ratioLimit = res.ratios.empty() ? 0.0 : res.ratios.back();
    res.report.record(std::max(0.0, hi / lo - ratioBound), "ratio spread");
    res.report.record(std::max(0.0, hi3 / lo3 - 1.0 - stabilization),
                      "ratio not stabilizing");
    return res;
}

B0ProbeResult b0Probe(const RootSystemBC& rs, const Multiplicity& m, const CVec& lambda0,
                      const RaySpec& ray, double tolAtEnd, double odeTol) {
    B0ProbeResult res;
    res.report.checkName = "b0-probe";
    res.report.hypothesisSet = "generic regular lambda0, Re lambda0 dominant";
    res.report.declaredTolerance = tolAtEnd;

    if (m.ms != 0.0) {
        res.b0NonsingularFlag = b0Nonsingular(rs, m, lambda0);
    } else {
        res.b0NonsingularFlag = false;   // test undefined for m_s = 0
    }
    CFuncValue cv = cfunction(rs, m, lambda0);
    res.cVanishes = cv.zeroFlag;
    res.cValue = cv.value;

    SeriesOptions sopt;
    sopt.maxHeight = 60;
    SymmetricSeries series(rs, m, lambda0, sopt);   // throws if non-generic
    std::vector<double> normed;
    for (double t : ray.tGrid) {
        Vec x = ray.x0;
        for (int j = 0; j < rs.rank(); ++j) x[j] += t * ray.xhat[j];
        SeriesValue sv = series.evaluateNormalized(x);
        normed.push_back(std::abs(sv.value));
        ++res.report.samplesTried;
    }
    res.limitValue = normed.empty() ? 0.0 : normed.back();

    if (res.cVanishes) {
        double peak = 0.0;
        for (double v : normed) peak = std::max(peak, v);
        res.report.record(res.limitValue - 0.05 * (peak + 1e-30),
                          "normalized value fails to decay in the vanishing-c case");
    } else {
        const double target = std::abs(cv.value);
        res.report.record(std::fabs(res.limitValue - target) / (1e-30 + target) -
                              tolAtEnd,
                          "normalized value does not approach |c(m;lambda0)|");
        res.report.declaredTolerance = 0.0;
    }

    // imaginary perturbation: |F_{l0 + i eta}| <= F_{l0} pointwise
    if (!res.cVanishes && !ray.tGrid.empty()) {
        CVec pert = lambda0;
        for (auto& z : pert) z += Cplx(0.0, 0.37);
        Vec x = ray.x0;
        for (int j = 0; j < rs.rank(); ++j)
            x[j] += ray.tGrid[ray.tGrid.size() / 2] * ray.xhat[j];
        EvalOptions opt;
        opt.tol = odeTol;
        const Cplx fp = fEval(rs, m, pert, x, opt).value;
        const Cplx f0 = fEval(rs, m, lambda0, x, opt).value;
        res.report.record((std::abs(fp) - f0.real()) / (1.0 + f0.real()),
                          "imaginary perturbation bound");
    }
    return res;
}

double raySup(const RootSystemBC& rs, const Multiplicity& m,
              const std::optional<Deformation>& d, const CVec& lambda, const Vec& xhat,
              const std::vector<double>& tGrid, double odeTol) {
    const Multiplicity mEff = d ? deform(m, *d, rs.rank(), true) : m;
    EvalOptions opt;
    opt.tol = odeTol;
    OrbitIntegrator integ(rs, mEff, lambda, xhat, opt);
    double sup = 0.0;
    for (double t : tGrid) {
        integ.advanceTo(t);
        Cplx f = integ.symmetrized();
        if (d) {
            const Vec x = scale(integ.state().direction, t);
            f *= std::exp(-d->ell * logU(rs, x) - d->ellTilde * logV(rs, x));
        }
        sup = std::max(sup, std::abs(f));
    }
    return sup;
}

bool rayBlowup(const RootSystemBC& rs, const Multiplicity& m,
               const std::optional<Deformation>& d, const CVec& lambda, const Vec& xhat,
               const std::vector<double>& tGrid, double blowupFactor, double odeTol) {
    const Multiplicity mEff = d ? deform(m, *d, rs.rank(), true) : m;
    EvalOptions opt;
    opt.tol = odeTol;
    OrbitIntegrator integ(rs, mEff, lambda, xhat, opt);
    for (double t : tGrid) {
        integ.advanceTo(t);
        Cplx f = integ.symmetrized();
        if (d) {
            const Vec x = scale(integ.state().direction, t);
            f *= std::exp(-d->ell * logU(rs, x) - d->ellTilde * logV(rs, x));
        }
        if (std::abs(f) > blowupFactor) return true;
    }
    return false;
}

Vec bestDominantDirection(const RootSystemBC& rs, const Vec& d, int candidates) {
    const int r = rs.rank();
    Vec best(r, 0.0);
    double bestVal = -std::numeric_limits<double>::infinity();
    auto consider = [&](Vec cand) {
        const double n = norm(cand);
        if (n < 1e-12) return;
        cand = scale(cand, 1.0 / n);
        const double v = dot(d, cand);
        if (v > bestVal) { bestVal = v; best = cand; }
    };
    for (int j = 0; j < r; ++j) {   // chamber edge directions (0,..,0,1,..,1)
        Vec e(r, 0.0);
        for (int k = j; k < r; ++k) e[k] = 1.0;
        consider(e);
    }
    consider(rs.dominantRepresentative(d).first);
    HaltonBox box(7, Vec(r, 0.0), Vec(r, 1.0));
    for (int i = 0; i < candidates; ++i) {
        Vec u = box.sample(i);
        std::sort(u.begin(), u.end());
        consider(u);
    }
    return best;
}

} // namespace bch
