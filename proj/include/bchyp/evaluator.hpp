#ifndef BCHYP_EVALUATOR_HPP
#define BCHYP_EVALUATOR_HPP

#include <functional>
#include <string>

#include "bchyp/hcseries.hpp"
#include "bchyp/multiplicity.hpp"
#include "bchyp/rootsys.hpp"

namespace bch {

struct EvalResult {
    Cplx value{0.0, 0.0};
    std::string method;        // "exact", "series", "ode"
    double errEstimate = 0.0;
    double perturbation = 0.0; // direction perturbation applied near walls
};

struct EvalOptions {
    std::string method = "auto";   // auto | series | ode
    double tol = 1e-10;            // ODE relative tolerance / series tail target
    SeriesOptions series;
    int frobeniusOrder = 12;       // minimum bootstrap order
    double directionEps = 1e-9;    // wall perturbation of the unit direction
};

// u(x) = prod_j cosh(beta_j(x)/2),
// v(x) = prod_{i<j} cosh((beta_j - beta_i)(x)/2) cosh((beta_j + beta_i)(x)/2)
double uFactor(const RootSystemBC& rs, const Vec& x);
double vFactor(const RootSystemBC& rs, const Vec& x);
double logU(const RootSystemBC& rs, const Vec& x);
double logV(const RootSystemBC& rs, const Vec& x);

// closed forms of u^{-1} d_xi u and v^{-1} d_xi v
double uLogDeriv(const RootSystemBC& rs, const Vec& xi, const Vec& x);
double vLogDeriv(const RootSystemBC& rs, const Vec& xi, const Vec& x);

// f_Sigma(m; x) = sum_{a in Sigma+} m_a (2 - m_a - 2 m_{2a}) <a,a> / (e^a - e^-a)^2
double fSigma(const RootSystemBC& rs, const Multiplicity& m, const Vec& x);

// Numeric application of the Cherednik operator T_xi(m) to a callable f at a
// regular point: directional derivative by Richardson-extrapolated central
// differences, reflection terms evaluated exactly.
Cplx cherednikApply(const RootSystemBC& rs, const Multiplicity& m, const Vec& xi,
                    const std::function<Cplx(const Vec&)>& f, const Vec& x,
                    double h = 0.0);

// Deformed operator T_{ell,ellTilde,xi}(m) applied through the explicit form
// T_xi(m(ell,ellTilde)) + ell u^{-1} d_xi u + ellTilde v^{-1} d_xi v.
Cplx cherednikApplyDeformed(const RootSystemBC& rs, const Multiplicity& m,
                            const Deformation& d, const Vec& xi,
                            const std::function<Cplx(const Vec&)>& f, const Vec& x,
                            double h = 0.0);

// Orbit of G_lambda values along a ray: value at t * (w xhat) for each w.
struct OrbitState {
    Vec direction;              // unit regular direction xhat
    double t = 0.0;
    CVec values;                // indexed like rs.weylElements()
    int steps = 0;
    int rejectedSteps = 0;
    double errEstimate = 0.0;
};

// Coupled linear ODE for g_w(t) = G_lambda(m; t w xhat), integrated from a
// Frobenius bootstrap at the regular-singular point t = 0 by an embedded
// Dormand-Prince 5(4) scheme.  Requires m in M_0 and a regular direction.
class OrbitIntegrator {
  public:
    OrbitIntegrator(const RootSystemBC& rs, const Multiplicity& m, CVec lambda,
                    Vec direction, const EvalOptions& opt = {});

    // Integrates (continuing from the previous call when t increases) and
    // returns the orbit state at t.
    const OrbitState& advanceTo(double t);

    const OrbitState& state() const { return state_; }
    const RootSystemBC& rootSystem() const { return *rs_; }

    // mean of the orbit vector = F_lambda(m; t xhat) by W-invariance
    Cplx symmetrized() const;

  private:
    const RootSystemBC* rs_;
    Multiplicity m_;
    CVec lambda_;
    EvalOptions opt_;
    std::size_t nW_;
    OrbitState state_;
    double t0_ = 0.0;

    // per (root, w): alpha(w xhat); neighbor index r_alpha o w
    std::vector<Vec> rootPair_;       // [root][w]
    std::vector<double> mAlpha_;      // [root]
    CVec drift_;                      // (rho + lambda)(w xhat)

    std::vector<CVec> frobShells_;    // Frobenius coefficients g_k

    void bootstrap();
    CVec frobeniusEval(double t) const;
    void rhs(double t, const CVec& g, CVec& out) const;
    void integrate(double tEnd);
};

// G_lambda(m; x) via the orbit engine.
EvalResult gOde(const RootSystemBC& rs, const Multiplicity& m, const CVec& lambda,
                const Vec& x, const EvalOptions& opt = {});

// F_lambda(m; x): series when lambda is generic and x has wall margin,
// otherwise the symmetrized orbit ODE.  W-invariant in x; F(0) = 1 exactly.
EvalResult fEval(const RootSystemBC& rs, const Multiplicity& m, const CVec& lambda,
                 const Vec& x, const EvalOptions& opt = {});

struct DeformedEval {
    Multiplicity base;
    Deformation deformation;
    CVec lambda;
    Vec x;
    Cplx value{0.0, 0.0};
    std::string method;
    double errEstimate = 0.0;
};

// F_{ell,ellTilde,lambda}(m) = u^{-ell} v^{-ellTilde} F_lambda(m(ell,ellTilde));
// same for G.  Requires m(ell,ellTilde) in M_0.
DeformedEval fDeformed(const RootSystemBC& rs, const Multiplicity& m, const Deformation& d,
                       const CVec& lambda, const Vec& x, const EvalOptions& opt = {});
DeformedEval gDeformed(const RootSystemBC& rs, const Multiplicity& m, const Deformation& d,
                       const CVec& lambda, const Vec& x, const EvalOptions& opt = {});

// W-invariant point evaluator for F_lambda(m; .) that reuses one set of
// orbit series tables across calls (finite-difference stencils, ray grids).
// Falls back to the orbit ODE per point when the series does not apply.
std::function<Cplx(const Vec&)> makeFEvaluator(const RootSystemBC& rs,
                                               const Multiplicity& m, CVec lambda,
                                               const EvalOptions& opt = {});

// |L(m)F + <rho,rho>F - <lambda,lambda>F| / |F| with L(m) applied by
// Richardson-extrapolated central differences to a W-invariant evaluator.
double laplacianResidual(const RootSystemBC& rs, const Multiplicity& m,
                         const CVec& lambda, const Vec& x,
                         const std::function<Cplx(const Vec&)>& f, double h = 0.0);

// Same residual with f = F_lambda(m) from the engine.
double laplacianResidual(const RootSystemBC& rs, const Multiplicity& m,
                         const CVec& lambda, const Vec& x, const EvalOptions& opt = {},
                         double h = 0.0);

// Conjugation identity residual: for a smooth test function phi,
//   delta^{1/2} (L(m) + <rho,rho>) delta^{-1/2} phi  vs  (L_a + f_Sigma) phi
double conjugationResidual(const RootSystemBC& rs, const Multiplicity& m, const Vec& x,
                           const std::function<double(const Vec&)>& phi, double h = 0.0);

double fdStep(const Vec& x, double h);

} // namespace bch

#endif
