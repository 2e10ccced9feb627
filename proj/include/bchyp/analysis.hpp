#ifndef BCHYP_ANALYSIS_HPP
#define BCHYP_ANALYSIS_HPP

#include <optional>
#include <string>
#include <vector>

#include "bchyp/evaluator.hpp"
#include "bchyp/hull.hpp"
#include "bchyp/multiplicity.hpp"
#include "bchyp/rank1.hpp"
#include "bchyp/sampling.hpp"

namespace bch {

// One executable check: every sampled inequality or identity carries the
// exact hypothesis set it assumed, its declared tolerance, and the worst
// normalized violation observed.  passed iff worstViolation <= tolerance.
struct CheckReport {
    std::string checkName;
    std::string hypothesisSet;
    int samplesTried = 0;
    double declaredTolerance = 0.0;
    double worstViolation = 0.0;
    std::vector<std::string> witnesses;
    bool passed = true;

    // one row per recorded comparison: parameters, normalized violation,
    // tolerance (margin = tolerance - violation in the CSV output)
    struct SampleRecord {
        std::string params;
        double violation;
    };
    std::vector<SampleRecord> rows;

    void record(double violation, const std::string& witness) {
        rows.push_back({witness, violation});
        if (violation > worstViolation) worstViolation = violation;
        if (violation > declaredTolerance && witnesses.size() < 16)
            witnesses.push_back(witness);
        passed = worstViolation <= declaredTolerance;
    }
};

struct SuiteConfig {
    std::uint64_t seed = 42;
    int samples = 200;
    int maxRank = 2;
    double odeTol = 1e-10;
    int threads = 1;
};

// Deterministic multiplicity samplers shared by the suite and the acceptance
// harness.
enum class MultSet { Mplus, M3, M3Interior, M2M3, MplusM3, M1 };
Multiplicity sampleMultiplicity(MultSet set, Rng& rng, int rank);

// Checks (i)-(ix): positivity and modulus bounds, exponential bounds,
// shift monotonicity, the sqrt|W| bound, subadditivity, the gradient
// identity, ray log-monotonicity, the deformed bounds, and the spherical
// |phi| <= 1 bound.  Reports are deterministic in (seed, config).
std::vector<CheckReport> estimateSuite(const SuiteConfig& cfg);

// Series engine against the orbit ODE at generic sampled points, and the
// rank-one scalar oracle against both.  Pass tolerance 1e-6 relative.
CheckReport crossEngineCheck(const SuiteConfig& cfg);

struct HullQuery {
    Multiplicity m;
    std::optional<Deformation> deformation;
    CVec lambda;
    bool bounded = false;
    Vec hullVector;
    bool hypothesisSatisfied = true;
    std::string hypothesisNote;
};

// Boundedness classifier: verdict from the hull test on Re(lambda), hull
// vector rho(m) undeformed or rho(m(2*ellTilde)) deformed.  When the
// theorem's hypotheses fail the verdict is advisory and flagged.
HullQuery isBounded(const RootSystemBC& rs, const Multiplicity& m, const CVec& lambda,
                    const std::optional<Deformation>& d = std::nullopt);

struct RaySpec {
    Vec x0;      // base point in the open chamber
    Vec xhat;    // direction in the closed chamber
    std::vector<double> tGrid;
};

struct SharpRatioResult {
    CheckReport report;
    std::vector<double> ratios;      // F / (prod (1 + alpha(x)) e^{(l0-rho)(x)})
    double ratioLimit = 0.0;         // last grid value
};

// Ratio probe for the sharp estimate: F_{lambda0} against
// [prod_{<alpha,lambda0>=0, alpha short or middle} (1 + alpha(x))] e^{(lambda0-rho)(x)}
// along x = x0 + t xhat.  Passes when the ratio stays within ratioBound and
// its last third varies by at most stabilization.
SharpRatioResult sharpRatio(const RootSystemBC& rs, const Multiplicity& m,
                            const Vec& lambda0, const RaySpec& ray,
                            double ratioBound = 50.0, double stabilization = 0.20,
                            double odeTol = 1e-10);

struct B0ProbeResult {
    CheckReport report;
    bool b0NonsingularFlag = false;
    bool cVanishes = false;
    Cplx cValue{0.0, 0.0};
    double limitValue = 0.0;         // F e^{-(l0-rho)(x)} at the ray end
};

// Leading-coefficient probe: F e^{-(lambda0-rho)(x)} tends to c(m; lambda0)
// along interior rays for generic dominant lambda0, and to 0 when the
// c-factor vanishes.
B0ProbeResult b0Probe(const RootSystemBC& rs, const Multiplicity& m, const CVec& lambda0,
                      const RaySpec& ray, double tolAtEnd = 1e-3, double odeTol = 1e-10);

// sup of |F| (or deformed |F_{ell,ellTilde,lambda}|) over the ray grid,
// computed by one continued orbit integration.
double raySup(const RootSystemBC& rs, const Multiplicity& m,
              const std::optional<Deformation>& d, const CVec& lambda, const Vec& xhat,
              const std::vector<double>& tGrid, double odeTol = 1e-8);

// true iff |F| exceeds blowupFactor somewhere on the grid
bool rayBlowup(const RootSystemBC& rs, const Multiplicity& m,
               const std::optional<Deformation>& d, const CVec& lambda, const Vec& xhat,
               const std::vector<double>& tGrid, double blowupFactor = 1e3,
               double odeTol = 1e-8);

// Dominant direction (unit, closed chamber) approximately maximizing d(xhat);
// used to pick blow-up rays for lambda outside the hull.
Vec bestDominantDirection(const RootSystemBC& rs, const Vec& d, int candidates = 256);

} // namespace bch

#endif
