#include "bchyp/multiplicity.hpp"

#include <cmath>
#include <cstdio>

#include "bchyp/errors.hpp"
#include "json.hpp"

namespace bch {

std::vector<std::string> MultClass::labels() const {
    std::vector<std::string> v;
    if (Mplus) v.push_back("M+");
    if (M0) v.push_back("M0");
    if (M1) v.push_back("M1");
    if (M2) v.push_back("M2");
    if (M3) v.push_back("M3");
    if (MC0) v.push_back("MC0");
    return v;
}

MultClass classify(const Multiplicity& m, int rank, double eps) {
    const bool r1 = (rank == 1);
    auto geq = [eps](double v) { return v >= eps; };   // v >= 0 with margin
    auto gt = [eps](double v) { return v > eps; };
    auto leq = [eps](double v) { return v <= -eps; };

    MultClass c;
    c.Mplus = geq(m.ms) && geq(m.ml) && (r1 || geq(m.mm));
    c.M0 = geq(m.ms + m.ml) && (r1 || geq(m.mm));
    c.M1 = gt(m.ms) && gt(m.ms + 2 * m.ml) && (r1 || gt(m.mm));
    c.M2 = geq(m.ml) && geq(m.ms + m.ml) && (r1 || geq(m.mm));
    c.M3 = leq(m.ml) && geq(m.ms + 2 * m.ml) && (r1 || geq(m.mm));
    c.MC0 = geq(m.ms + m.ml) && (r1 || geq(m.mm));
    return c;
}

Vec rho(const RootSystemBC& rs, const Multiplicity& m) {
    const int r = rs.rank();
    const double h = rs.p() / 2.0;
    Vec out(r);
    for (int j = 0; j < r; ++j)
        out[j] = h * (m.ms / 2.0 + m.ml + j * m.mm);
    return out;
}

Multiplicity deform(const Multiplicity& m, const Deformation& d, int rank, bool requireM0) {
    Multiplicity out(m.ms + 2 * d.ell, m.mm + 2 * d.ellTilde, m.ml - 2 * d.ell);
    if (rank == 1) out.mm = 0;
    if (requireM0 && !classify(out, rank).M0)
        throw Error(ErrKind::Domain, "deformed multiplicity leaves M0");
    return out;
}

std::pair<double, double> ellRange(const Multiplicity& m) {
    return {-m.ms / 2.0, m.ms / 2.0 + m.ml};
}

std::optional<M1Decomposition> decomposeM1(const Multiplicity& m0, int rank) {
    MultClass c = classify(m0, rank);
    if (!(c.Mplus || c.M3)) return std::nullopt;
    M1Decomposition d;
    d.base = Multiplicity(m0.ms + m0.ml, rank == 1 ? 0.0 : m0.mm, 0.0);
    d.ell = -m0.ml / 2.0;
    d.strict = c.M1;
    return d;
}

Vec middleRootSum(const RootSystemBC& rs) {
    const int r = rs.rank();
    Vec out(r, 0.0);
    for (const auto& a : rs.positiveRoots())
        if (a.cls == RootClass::Middle)
            for (int j = 0; j < r; ++j) out[j] += 2 * a.coords[j];
    return out;
}

Vec rhoDeformedHull(const RootSystemBC& rs, const Multiplicity& m, double ellTilde) {
    return rho(rs, deform(m, Deformation(0.0, 2.0 * ellTilde), rs.rank()));
}

static Vec rhoByFormula(int rank, const Multiplicity& m) {
    Vec out(rank);
    for (int j = 0; j < rank; ++j)
        out[j] = m.ms / 2.0 + m.ml + j * m.mm;   // p = 2
    return out;
}

static CatalogEntry makeEntry(std::string name, std::string family, int rank,
                              Multiplicity base, Deformation d, std::string note) {
    CatalogEntry e;
    e.name = std::move(name);
    e.family = std::move(family);
    e.rank = rank;
    e.baseMult = base;
    e.deform = d;
    e.sigmaTauMult = deform(base, d, rank);
    e.rhoCoords = rhoByFormula(rank, deform(base, Deformation(0.0, 2.0 * d.ellTilde), rank));
    e.ellSym = -d.ell + base.ml - 1.0;
    auto [lo, hi] = ellRange(base);
    e.ellInRange = (d.ell >= lo - 1.0 && d.ell <= hi);
    e.ellSymInRange = (e.ellSym >= lo - 1.0 && e.ellSym <= hi);
    e.sourceNote = std::move(note);
    return e;
}

std::vector<CatalogEntry> catalog() {
    std::vector<CatalogEntry> out;

    // Hermitian symmetric spaces: m_l = 1, line-bundle deformations (ell, 0).
    // Stored at ell = 0 (trivial K-type); the admissible ell interval follows
    // from ellRange of the base triple.
    struct Herm { const char* name; int rank; double ms, mm; };
    const Herm herm[] = {
        {"SU(2,2)", 2, 0, 2},   {"SU(2,3)", 2, 2, 2},  {"SU(2,4)", 2, 4, 2},
        {"SU(3,4)", 3, 2, 2},   {"SO0(5,2)", 2, 0, 3}, {"SO*(8)", 4, 0, 4},
        {"SO*(10)", 5, 4, 4},   {"Sp(3,R)", 3, 0, 1},  {"e6(-14)", 2, 8, 6},
        {"e7(-25)", 3, 0, 8},
    };
    for (const auto& g : herm)
        out.push_back(makeEntry(g.name, "hermitian", g.rank,
                                Multiplicity(g.ms, g.mm, 1.0), Deformation(0, 0),
                                "Hermitian case; one-dimensional K-types tau_ell, ell free"));

    // sp(p,1): rank-one base (4(p-1), 3); the n-th Sp(1)-type corresponds to
    // ell = n + 1.
    for (int p : {2, 3})
        for (int n : {0, 1, 2}) {
            char name[32];
            std::snprintf(name, sizeof(name), "sp(%d,1) tau_%d", p, n);
            out.push_back(makeEntry(name, "sp(p,1)", 1,
                                    Multiplicity::rankOne(4.0 * (p - 1), 3.0),
                                    Deformation(n + 1.0, 0.0),
                                    "quaternionic hyperbolic space, Sp(1)-type of dimension n+1"));
        }

    // so(2r,1): rank-one base (0, 2r-1) on {+-alpha/2, +-alpha}; spin-like
    // K-types use ell = -s, outside [ell_min, ell_max] but reachable through
    // the ell-symmetry for s = 1.
    for (int rr : {2, 3})
        for (int s : {1, 2}) {
            char name[32];
            std::snprintf(name, sizeof(name), "so(%d,1) tau_%d", 2 * rr, s);
            out.push_back(makeEntry(name, "so(2r,1)", 1,
                                    Multiplicity::rankOne(0.0, 2.0 * rr - 1.0),
                                    Deformation(-double(s), 0.0),
                                    "real hyperbolic space, highest weight (s/2,...,+-s/2)"));
        }

    // so(p,q), p > q >= 3: base (0, 0, p-q) on BC_q; spin K-types need
    // ellTilde = 1/2.  Case (ii) requires p even, q odd.
    struct SOpq { int p, q; bool caseTwo; };
    const SOpq sopq[] = {{5, 3, false}, {6, 3, false}, {6, 3, true}, {7, 3, false}};
    for (const auto& g : sopq) {
        char name[40];
        std::snprintf(name, sizeof(name), "so(%d,%d) %s", g.p, g.q,
                      g.caseTwo ? "spin(p) x 1" : "1 x spin(q)");
        const double ell = g.caseTwo ? double(g.p - g.q) : 0.0;
        out.push_back(makeEntry(name, "so(p,q)", g.q,
                                Multiplicity(0.0, 0.0, double(g.p - g.q)),
                                Deformation(ell, 0.5),
                                g.caseTwo ? "spin representation of Spin(p)"
                                          : "spin representation of Spin(q)"));
    }
    return out;
}

std::string catalogEntryJson(const CatalogEntry& e) {
    nlohmann::json j;
    j["name"] = e.name;
    j["family"] = e.family;
    j["rank"] = e.rank;
    j["base_mult"] = {e.baseMult.ms, e.baseMult.mm, e.baseMult.ml};
    j["ell"] = e.deform.ell;
    j["ell_tilde"] = e.deform.ellTilde;
    j["deformed_mult"] = {e.sigmaTauMult.ms, e.sigmaTauMult.mm, e.sigmaTauMult.ml};
    j["rho"] = e.rhoCoords;
    j["ell_sym"] = e.ellSym;
    j["ell_in_range"] = e.ellInRange;
    j["ell_sym_in_range"] = e.ellSymInRange;
    auto [lo, hi] = ellRange(e.baseMult);
    j["ell_min"] = lo;
    j["ell_max"] = hi;
    j["note"] = e.sourceNote;
    return j.dump();
}

} // namespace bch
