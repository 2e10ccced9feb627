#ifndef BCHYP_CFUNC_HPP
#define BCHYP_CFUNC_HPP

#include "bchyp/multiplicity.hpp"
#include "bchyp/rootsys.hpp"

namespace bch {

// Value of the c~ or c function.  logValue carries the full log-magnitude so
// products at large |lambda| never overflow; value = exp(logValue) whenever
// the latter is representable and neither flag is set.
struct CFuncValue {
    Cplx value{0.0, 0.0};
    Cplx logValue{0.0, 0.0};
    bool poleFlag = false;   // a numerator gamma hit a pole: value infinite
    bool zeroFlag = false;   // a denominator gamma hit a pole: value exactly 0

    bool finiteNonzero() const { return !poleFlag && !zeroFlag; }
};

// Gindikin-Karpelevich product over the positive indivisible roots
// (short and middle classes):
//   ctilde(m; lambda) = prod 2^{-lambda_a} Gamma(lambda_a)
//       / [ Gamma(lambda_a/2 + m_a/4 + 1/2) Gamma(lambda_a/2 + m_a/4 + m_{2a}/2) ]
CFuncValue ctilde(const RootSystemBC& rs, const Multiplicity& m, const CVec& lambda,
                  double poleTol = 1e-10);

// c(m; lambda) = ctilde(m; lambda) / ctilde(m; rho(m)).  Throws NotRegular
// when ctilde(m; rho(m)) is not finite nonzero.
CFuncValue cfunction(const RootSystemBC& rs, const Multiplicity& m, const CVec& lambda,
                     double poleTol = 1e-10);

// Leading-coefficient nonsingularity test: true iff none of the gamma factors
//   Gamma(l_a/2 + m_s/4 + 1/2), Gamma(l_a/2 + m_s/4 + m_l/2)        (a short)
//   Gamma(l_a/2 + m_m/4 + 1/2), Gamma(l_a/2 + m_m/4)                (a middle, r > 1)
// is evaluated at a pole.  Only supported for m_s != 0; Re(lambda0) must be
// dominant.
bool b0Nonsingular(const RootSystemBC& rs, const Multiplicity& m, const CVec& lambda0,
                   double poleTol = 1e-10);

// Sufficient regularity guard: m_s + m_l >= 0 and (r > 1) m_m >= 0.
bool inMC0(const Multiplicity& m, int rank);

} // namespace bch

#endif
