#ifndef BCHYP_HCSERIES_HPP
#define BCHYP_HCSERIES_HPP

#include <memory>

#include "bchyp/cfunc.hpp"
#include "bchyp/multiplicity.hpp"
#include "bchyp/rootsys.hpp"

namespace bch {

struct SeriesValue {
    Cplx value{0.0, 0.0};
    int truncationHeight = 0;
    double tailEstimate = 0.0;    // truncation tail plus the cancellation floor
    double truncationTail = 0.0;  // reducible part (shrinks with more shells)
    double wallMargin = 0.0;      // min simple-root pairing sigma_k(x)
    double absSum = 0.0;          // sum of term magnitudes (cancellation monitor)
};

struct SeriesOptions {
    int maxHeight = 60;        // shells of the cone index
    bool adaptive = true;      // double maxHeight until tail < tailTol
    double tailTol = 1e-10;
    int maxHeightCap = 400;
    double minWallMargin = 0.05;
    double genericityTol = 1e-8;
};

// Truncated table of the series coefficients Gamma_{2 nu}(m; lambda), filled
// in height order from the recursion
//   <mu, mu - 2 lambda> Gamma_mu = 2 sum_{a in Sigma+} m_a
//       sum_{n >= 1, mu - 2 n a in cone} Gamma_{mu - 2 n a} <mu + rho - 2 n a - lambda, a>
// with Gamma_0 = 1.  The cone-membership condition is taken in the series
// index cone: mu - 2 n a must again have nonnegative simple coordinates.
class GammaTable {
  public:
    GammaTable(const RootSystemBC& rs, const Multiplicity& m, CVec lambda,
               int maxHeight, double genericityTol = 1e-8);

    const RootSystemBC& rootSystem() const { return *rs_; }
    const CVec& lambda() const { return lambda_; }
    int maxHeight() const { return maxHeight_; }
    double genericityMargin() const { return genericityMargin_; }

    const std::vector<LatticePoint>& points() const { return points_; }
    const std::vector<Cplx>& entries() const { return entries_; }
    Cplx entry(std::size_t i) const { return entries_[i]; }

    // mu(x) for mu = 2 nu_i
    double muPairing(std::size_t i, const Vec& x) const;

    // Recompute entry i from the filled table (consistency checks).
    Cplx recompute(std::size_t i) const;

    // Extends the table to a larger height in place.
    void extend(int newMaxHeight);

    // Normalized partial sum  sum_mu Gamma_mu e^{-mu(x)}  with shell-decay tail
    // estimate; x must be strictly dominant-regular.
    SeriesValue seriesSum(const Vec& x) const;

  private:
    const RootSystemBC* rs_;
    Multiplicity m_;
    CVec lambda_;
    int maxHeight_ = 0;
    double gtol_;
    double genericityMargin_ = 0.0;
    Vec rhoVec_;

    std::vector<LatticePoint> points_;
    std::vector<Cplx> entries_;
    std::vector<std::vector<int>> stepDown_;   // [point][root] -> index of nu - a, or -1
    std::vector<std::size_t> shellStart_;      // first point index of each height

    void fillFrom(std::size_t firstNew);
    Cplx rhsFor(std::size_t i) const;
    Cplx lhsCoeff(std::size_t i) const;
};

// Phi_lambda(m; x) = e^{(lambda - rho)(x)} sum_{mu} Gamma_mu(m; lambda) e^{-mu(x)}
SeriesValue phi(const RootSystemBC& rs, const Multiplicity& m, const CVec& lambda,
                const Vec& x, const SeriesOptions& opt = {});

// Symmetrized series F_lambda = sum_w c(m; w lambda) Phi_{w lambda}.  Valid for
// generic lambda (free Weyl orbit, all orbit tables generic) and strictly
// dominant-regular x.  Construction is the expensive step; evaluation at a
// point is cheap, so the object is reusable along rays and grids.
class SymmetricSeries {
  public:
    SymmetricSeries(const RootSystemBC& rs, const Multiplicity& m, CVec lambda,
                    const SeriesOptions& opt = {});

    // F_lambda(m; x); x must be strictly dominant-regular with margin.
    SeriesValue evaluate(const Vec& x) const;

    // F_lambda(m; x) * e^{-(lambda - rho)(x)}, computed without forming the
    // leading exponential (stable along rays when Re(lambda) is dominant).
    SeriesValue evaluateNormalized(const Vec& x) const;

    void ensureHeight(int maxHeight);

    const CVec& lambda() const { return lambda_; }
    Cplx cFactor(std::size_t orbitIdx) const { return cvals_[orbitIdx]; }
    const RootSystemBC& rootSystem() const { return *rs_; }

  private:
    const RootSystemBC* rs_;
    Multiplicity m_;
    CVec lambda_;
    SeriesOptions opt_;
    Vec rhoVec_;
    std::vector<CVec> orbit_;                       // w lambda, one per Weyl element
    std::vector<Cplx> cvals_;                       // c(m; w lambda)
    std::vector<std::unique_ptr<GammaTable>> tables_;

    SeriesValue evalImpl(const Vec& x, bool normalized) const;
};

// One-shot evaluation (builds the orbit tables, then discards them).
SeriesValue fSeries(const RootSystemBC& rs, const Multiplicity& m, const CVec& lambda,
                    const Vec& x, const SeriesOptions& opt = {});

// True iff the Weyl orbit of lambda is free within tolerance.
bool orbitIsFree(const RootSystemBC& rs, const CVec& lambda, double tol = 1e-10);

// Effective truncation-height cap: cone sizes grow like N^rank, so adaptive
// growth is clamped harder at higher rank.
int seriesRankCap(int rank, int requested);

} // namespace bch

#endif
