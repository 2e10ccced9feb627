#ifndef BCHYP_GAMMA_HPP
#define BCHYP_GAMMA_HPP

#include "bchyp/common.hpp"

namespace bch {

// Distance from z to the nearest non-positive integer (the pole set of Gamma).
double poleDistance(Cplx z);

// Principal-branch-free complex log-gamma: exp(logGamma(z)) == Gamma(z) to
// ~1e-14 relative accuracy for |z| <= 50.  The imaginary part may differ from
// the principal log Gamma by multiples of 2 pi; only exp() of sums and
// differences of these values is meaningful, which is all the c-function
// machinery needs.  Throws PoleAt within poleTol of a non-positive integer.
Cplx logGamma(Cplx z, double poleTol = 1e-12);

// Non-throwing variant for code that treats poles as data.
struct LogGammaResult {
    Cplx value;
    bool pole = false;
};
LogGammaResult logGammaChecked(Cplx z, double poleTol);

} // namespace bch

#endif
