#ifndef BCHYP_RANK1_HPP
#define BCHYP_RANK1_HPP

#include "bchyp/common.hpp"

namespace bch {

// Independent rank-one reference values: the spectral problem reduces to the
// scalar ODE
//   F'' + (m_s coth x + 2 m_l coth 2x) F' = (lambda^2 - rho^2) F,
//   F(0) = 1, F'(0) = 0,  rho = m_s/2 + m_l,
// in the p = 2 normalization (short root e_1, long root 2 e_1).  Solved by a
// Taylor bootstrap at the regular-singular origin and two integrators with
// different stepping policies; the reported error is their disagreement.
struct Rank1Result {
    Cplx value{0.0, 0.0};
    Cplx derivative{0.0, 0.0};
    double errEstimate = 0.0;
};

Rank1Result rank1F(double ms, double ml, Cplx lambda, double x, double tol = 1e-12);

// Gauss hypergeometric route:  F = (cosh x)^{lambda - rho} *
// 2F1((m_s/2 + 1 - lambda)/2, (rho - lambda)/2; (m_s + m_l + 1)/2; tanh^2 x).
Cplx rank1F2F1(double ms, double ml, Cplx lambda, double x);

// Nonsymmetric companion recovered from the even/odd split of the rank-one
// differential-reflection equation: G(x) = F(|x|) + sign(x) F'(|x|)/(lambda - rho).
Cplx rank1G(double ms, double ml, Cplx lambda, double x, double tol = 1e-12);

} // namespace bch

#endif
