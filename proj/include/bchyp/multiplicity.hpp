#ifndef BCHYP_MULTIPLICITY_HPP
#define BCHYP_MULTIPLICITY_HPP

#include <optional>
#include <string>
#include <vector>

#include "bchyp/rootsys.hpp"

namespace bch {

// Multiplicity triple (m_s, m_m, m_l) on the short / middle / long root
// classes.  In rank one there are no middle roots; m_m is stored as 0 and all
// classification conditions involving it are dropped.
struct Multiplicity {
    double ms = 0, mm = 0, ml = 0;

    Multiplicity() = default;
    Multiplicity(double s, double m, double l) : ms(s), mm(m), ml(l) {}
    static Multiplicity rankOne(double s, double l) { return {s, 0.0, l}; }

    double onClass(RootClass c) const {
        switch (c) {
            case RootClass::Short: return ms;
            case RootClass::Middle: return mm;
            case RootClass::Long: return ml;
        }
        return 0;
    }
    // m_{2 alpha}: only short roots have a double in Sigma
    double onDouble(RootClass c) const { return c == RootClass::Short ? ml : 0.0; }

    bool operator==(const Multiplicity& o) const {
        return ms == o.ms && mm == o.mm && ml == o.ml;
    }
};

// Membership in the classification sets.  Boundary comparisons are exact on
// the stored doubles; callers needing strict interior membership pass an
// explicit margin.
struct MultClass {
    bool Mplus = false, M0 = false, M1 = false, M2 = false, M3 = false, MC0 = false;

    std::vector<std::string> labels() const;
};

MultClass classify(const Multiplicity& m, int rank, double margin = 0.0);

// rho(m): coordinate j equals (p/2)(m_s/2 + m_l + (j-1) m_m)
Vec rho(const RootSystemBC& rs, const Multiplicity& m);

struct Deformation {
    double ell = 0, ellTilde = 0;
    Deformation() = default;
    Deformation(double l, double lt) : ell(l), ellTilde(lt) {}
    bool isTrivial() const { return ell == 0 && ellTilde == 0; }
};

// m(ell, ellTilde) = (m_s + 2 ell, m_m + 2 ellTilde, m_l - 2 ell).
// In checked mode the result must lie in M_0.
Multiplicity deform(const Multiplicity& m, const Deformation& d, int rank,
                    bool requireM0 = false);

// (ell_min, ell_max) = (-m_s/2, m_s/2 + m_l)
std::pair<double, double> ellRange(const Multiplicity& m);

struct M1Decomposition {
    Multiplicity base;   // in M_+, long-root value 0
    double ell;
    bool strict;         // ell strictly inside [ell_min, ell_max]
};

// Writes m0 in M_+ u M_3 as base(ell) with base in M_+; none outside that set.
std::optional<M1Decomposition> decomposeM1(const Multiplicity& m0, int rank);

// Sum over middle positive roots of (beta_j +- beta_i) equals
// sum_j 2(j-1) beta_j; returned in e-coordinates (exact).
Vec middleRootSum(const RootSystemBC& rs);

// rho(m(2*ellTilde)), the hull vector of the deformed boundedness test.
Vec rhoDeformedHull(const RootSystemBC& rs, const Multiplicity& m, double ellTilde);

struct CatalogEntry {
    std::string name;        // group / K-type label
    std::string family;      // parameterized family this instance came from
    int rank = 1;
    Multiplicity baseMult;   // in M_+
    Deformation deform;      // (ell, ellTilde) for the K-type
    Multiplicity sigmaTauMult; // deformed triple, for cross-checking
    Vec rhoCoords;           // rho(m(2*ellTilde)) in e-coordinates, p = 2
    double ellSym = 0;       // the symmetric parameter -ell + m_l - 1
    bool ellInRange = false; // ell in [ell_min - 1, ell_max]
    bool ellSymInRange = false;
    std::string sourceNote;
};

// Fixed table of geometric instances (Hermitian cases, quaternionic and
// orthogonal small K-types) at small concrete parameters.
std::vector<CatalogEntry> catalog();

std::string catalogEntryJson(const CatalogEntry& e);

} // namespace bch

#endif
