#ifndef BCHYP_ERRORS_HPP
#define BCHYP_ERRORS_HPP

#include <stdexcept>
#include <string>

namespace bch {

// Error taxonomy shared by all modules.  Domain errors are caller mistakes
// (invalid multiplicities, off-domain requests); numerical errors are
// evaluation failures the caller may want to recover from by switching
// method.
enum class ErrKind {
    Domain,            // argument outside the supported parameter set
    NonGenericSpectral,// recursion hyperplane <mu, mu-2*lambda> = 0 hit
    DegenerateOrbit,   // |W.lambda| < |W|, series symmetrization invalid
    WallTooClose,      // series requested too close to a chamber wall
    SingularPoint,     // operator evaluated on a root hyperplane
    ResonanceAtZero,   // Frobenius shell matrix singular
    StiffnessFailure,  // step size collapsed
    NotRegular,        // c-function normalization singular at rho(m)
    PoleAt,            // gamma evaluated at a non-positive integer
    Unsupported        // feature intentionally not provided
};

class Error : public std::runtime_error {
  public:
    Error(ErrKind kind, const std::string& msg)
        : std::runtime_error(msg), kind_(kind) {}
    ErrKind kind() const { return kind_; }

    bool isDomain() const {
        return kind_ == ErrKind::Domain || kind_ == ErrKind::NotRegular ||
               kind_ == ErrKind::Unsupported;
    }

  private:
    ErrKind kind_;
};

inline const char* errKindName(ErrKind k) {
    switch (k) {
        case ErrKind::Domain: return "Domain";
        case ErrKind::NonGenericSpectral: return "NonGenericSpectral";
        case ErrKind::DegenerateOrbit: return "DegenerateOrbit";
        case ErrKind::WallTooClose: return "WallTooClose";
        case ErrKind::SingularPoint: return "SingularPoint";
        case ErrKind::ResonanceAtZero: return "ResonanceAtZero";
        case ErrKind::StiffnessFailure: return "StiffnessFailure";
        case ErrKind::NotRegular: return "NotRegular";
        case ErrKind::PoleAt: return "PoleAt";
        case ErrKind::Unsupported: return "Unsupported";
    }
    return "Unknown";
}

} // namespace bch

#endif
