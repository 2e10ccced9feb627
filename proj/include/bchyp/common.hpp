#ifndef BCHYP_COMMON_HPP
#define BCHYP_COMMON_HPP

#include <complex>
#include <cstddef>
#include <cstdint>
#include <string>
#include <vector>

namespace bch {

using Cplx = std::complex<double>;
using Vec  = std::vector<double>;   // real covector/point, e-basis coordinates
using CVec = std::vector<Cplx>;     // complex covector

inline double dot(const Vec& a, const Vec& b) {
    double s = 0;
    for (std::size_t i = 0; i < a.size(); ++i) s += a[i] * b[i];
    return s;
}

inline Cplx dot(const CVec& a, const Vec& b) {
    Cplx s = 0;
    for (std::size_t i = 0; i < a.size(); ++i) s += a[i] * b[i];
    return s;
}

inline Cplx dot(const CVec& a, const CVec& b) {
    // bilinear (not Hermitian) extension of the inner product
    Cplx s = 0;
    for (std::size_t i = 0; i < a.size(); ++i) s += a[i] * b[i];
    return s;
}

inline double norm2(const Vec& a) { return dot(a, a); }
inline double norm(const Vec& a) { return std::sqrt(norm2(a)); }

inline double normInf(const CVec& a) {
    double s = 0;
    for (const auto& z : a) s = std::max(s, std::abs(z));
    return s;
}

inline CVec toComplex(const Vec& a) {
    CVec out(a.size());
    for (std::size_t i = 0; i < a.size(); ++i) out[i] = a[i];
    return out;
}

inline Vec realPart(const CVec& a) {
    Vec out(a.size());
    for (std::size_t i = 0; i < a.size(); ++i) out[i] = a[i].real();
    return out;
}

inline Vec imagPart(const CVec& a) {
    Vec out(a.size());
    for (std::size_t i = 0; i < a.size(); ++i) out[i] = a[i].imag();
    return out;
}

inline Vec add(const Vec& a, const Vec& b) {
    Vec out(a.size());
    for (std::size_t i = 0; i < a.size(); ++i) out[i] = a[i] + b[i];
    return out;
}

inline Vec sub(const Vec& a, const Vec& b) {
    Vec out(a.size());
    for (std::size_t i = 0; i < a.size(); ++i) out[i] = a[i] - b[i];
    return out;
}

inline Vec scale(const Vec& a, double c) {
    Vec out(a.size());
    for (std::size_t i = 0; i < a.size(); ++i) out[i] = c * a[i];
    return out;
}

inline CVec add(const CVec& a, const CVec& b) {
    CVec out(a.size());
    for (std::size_t i = 0; i < a.size(); ++i) out[i] = a[i] + b[i];
    return out;
}

inline CVec sub(const CVec& a, const CVec& b) {
    CVec out(a.size());
    for (std::size_t i = 0; i < a.size(); ++i) out[i] = a[i] - b[i];
    return out;
}

// Dense LU with partial pivoting for the small real systems appearing in the
// Frobenius bootstrap and the hull oracle.  Row-major storage.
class LuFactors {
  public:
    // Returns false if a pivot falls below pivTol (matrix numerically singular).
    bool factor(std::vector<double> a, int n, double pivTol = 1e-13);

    void solve(CVec& rhs) const;
    void solve(Vec& rhs) const;

  private:
    std::vector<double> lu_;
    std::vector<int> perm_;
    int n_ = 0;
};

std::string formatDouble(double v);

} // namespace bch

#endif
