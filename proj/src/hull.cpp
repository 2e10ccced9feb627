#include "bchyp/hull.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

#include "bchyp/errors.hpp"

namespace bch {

bool inHullFast(const RootSystemBC& rs, const Vec& hullVector, const Vec& xi,
                double* margin, double tol) {
    const Vec xiPlus = rs.dominantRepresentative(xi).first;
    const Vec c = rs.simpleCoords(sub(hullVector, xiPlus));
    double m = std::numeric_limits<double>::infinity();
    for (double v : c) m = std::min(m, v);
    if (margin) *margin = m;
    return m >= -tol * (1.0 + norm(hullVector));
}

// Phase-1 simplex with Bland's rule over the orbit vertices:
// find theta >= 0 with sum theta_w (w h) = xi, sum theta_w = 1.
bool inHullLP(const RootSystemBC& rs, const Vec& hullVector, const Vec& xi,
              double* infeasibility, double tol) {
    const int r = rs.rank();
    const int mRows = r + 1;
    const auto& W = rs.weylElements();
    const int nVars = static_cast<int>(W.size());
    const int total = nVars + mRows;   // orbit weights + artificials

    std::vector<double> T(std::size_t(mRows) * (total + 1), 0.0);
    auto at = [&](int i, int j) -> double& { return T[std::size_t(i) * (total + 1) + j]; };

    for (int w = 0; w < nVars; ++w) {
        const Vec v = W[w].apply(hullVector);
        for (int i = 0; i < r; ++i) at(i, w) = v[i];
        at(r, w) = 1.0;
    }
    for (int i = 0; i < r; ++i) at(i, total) = xi[i];
    at(r, total) = 1.0;

    // flip rows so b >= 0, then add the artificial identity block
    for (int i = 0; i < mRows; ++i) {
        if (at(i, total) < 0.0)
            for (int j = 0; j <= total; ++j) at(i, j) = -at(i, j);
        at(i, nVars + i) = 1.0;
    }

    std::vector<int> basis(mRows);
    for (int i = 0; i < mRows; ++i) basis[i] = nVars + i;

    // phase-1 objective row: minimize sum of artificials
    std::vector<double> obj(total + 1, 0.0);
    for (int i = 0; i < mRows; ++i)
        for (int j = 0; j <= total; ++j)
            if (j < nVars || j == total) obj[j] -= at(i, j);

    const double scale = 1.0 + norm(hullVector);
    const double pivTol = 1e-11 * scale;

    for (int iter = 0; iter < 20000; ++iter) {
        int enter = -1;
        for (int j = 0; j < total; ++j)
            if (obj[j] < -pivTol) { enter = j; break; }   // Bland: first index
        if (enter < 0) break;
        int leave = -1;
        double best = std::numeric_limits<double>::infinity();
        for (int i = 0; i < mRows; ++i) {
            if (at(i, enter) > pivTol) {
                const double ratio = at(i, total) / at(i, enter);
                if (ratio < best - 1e-15 ||
                    (std::fabs(ratio - best) <= 1e-15 &&
                     (leave < 0 || basis[i] < basis[leave]))) {
                    best = ratio;
                    leave = i;
                }
            }
        }
        if (leave < 0) break;   // unbounded cannot happen here
        const double piv = at(leave, enter);
        for (int j = 0; j <= total; ++j) at(leave, j) /= piv;
        for (int i = 0; i < mRows; ++i) {
            if (i == leave) continue;
            const double f = at(i, enter);
            if (f == 0.0) continue;
            for (int j = 0; j <= total; ++j) at(i, j) -= f * at(leave, j);
        }
        const double fo = obj[enter];
        if (fo != 0.0)
            for (int j = 0; j <= total; ++j) obj[j] -= fo * at(leave, j);
        basis[leave] = enter;
    }

    double artMass = 0.0;
    for (int i = 0; i < mRows; ++i)
        if (basis[i] >= nVars) artMass += at(i, total);
    if (infeasibility) *infeasibility = artMass;
    return artMass <= tol * scale;
}

} // namespace bch
