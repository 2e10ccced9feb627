#ifndef BCHYP_HULL_HPP
#define BCHYP_HULL_HPP

#include "bchyp/rootsys.hpp"

namespace bch {

// Fast membership test for the convex hull C(h) of the Weyl orbit of a
// dominant vector h: xi is inside iff h - xi+ has nonnegative coordinates in
// the simple-root basis (dominance order criterion).  margin, when requested,
// is the smallest such coordinate (negative outside).
bool inHullFast(const RootSystemBC& rs, const Vec& hullVector, const Vec& xi,
                double* margin = nullptr, double tol = 1e-9);

// Independent oracle: linear feasibility over the |W| orbit vertices via a
// phase-1 simplex.  infeasibility, when requested, receives the optimal
// artificial mass (0 on members).
bool inHullLP(const RootSystemBC& rs, const Vec& hullVector, const Vec& xi,
              double* infeasibility = nullptr, double tol = 1e-9);

} // namespace bch

#endif
