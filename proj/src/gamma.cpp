#include "bchyp/gamma.hpp"

#include <cmath>
#include <limits>

#include "bchyp/errors.hpp"

namespace bch {

namespace {

constexpr double kPi = 3.14159265358979323846264338327950288;
constexpr double kLogPi = 1.14472988584940017414342735135305871;
constexpr double kHalfLog2Pi = 0.91893853320467274178032973640561764;

// Lanczos g = 607/128, 15 coefficients (Godfrey's set).
constexpr double kG = 4.7421875;
constexpr double kCoef[15] = {
    0.99999999999999709182,
    57.156235665862923517,     -59.597960355475491248,
    14.136097974741747174,     -0.49191381609762019978,
    3.3994649984811888699e-5,  4.6523628927048575665e-5,
    -9.8374475304879564677e-5, 1.5808870322491248884e-4,
    -2.1026444172410488319e-4, 2.1743961811521264320e-4,
    -1.6431810653676389022e-4, 8.4418223983852743293e-5,
    -2.6190838401581408670e-5, 3.6899182659531622704e-6,
};

// log Gamma on Re z >= 0.5 via the Lanczos sum.
Cplx logGammaRight(Cplx z) {
    const Cplx y = z - 1.0;
    Cplx acc = kCoef[0];
    for (int k = 1; k < 15; ++k) acc += kCoef[k] / (y + double(k));
    const Cplx t = y + (kG + 0.5);
    return kHalfLog2Pi + (y + 0.5) * std::log(t) - t + std::log(acc);
}

// log(sin(pi z)) stable for large |Im z|; branch offsets of 2 pi i are
// irrelevant to callers (see header).
Cplx logSinPi(Cplx z) {
    if (std::fabs(z.imag()) < 20.0) return std::log(std::sin(kPi * z));
    const Cplx iz(0.0, 1.0);
    if (z.imag() > 0) {
        // sin(pi z) = e^{-i pi z} (e^{2 i pi z} - 1) / (2i) -- |e^{2 i pi z}| < 1
        return -iz * kPi * z + std::log((std::exp(2.0 * iz * kPi * z) - 1.0) / (2.0 * iz));
    }
    return iz * kPi * z + std::log(-(std::exp(-2.0 * iz * kPi * z) - 1.0) / (2.0 * iz));
}

} // namespace

double poleDistance(Cplx z) {
    double n = std::round(z.real());
    if (n > 0.0) n = 0.0;
    return std::abs(z - Cplx(n, 0.0));
}

LogGammaResult logGammaChecked(Cplx z, double poleTol) {
    LogGammaResult res;
    if (poleDistance(z) < poleTol) {
        res.pole = true;
        res.value = Cplx(std::numeric_limits<double>::infinity(), 0.0);
        return res;
    }
    if (z.real() >= 0.5) {
        res.value = logGammaRight(z);
        return res;
    }
    // reflection: log Gamma(z) = log pi - log sin(pi z) - log Gamma(1 - z)
    res.value = kLogPi - logSinPi(z) - logGammaRight(1.0 - z);
    return res;
}

Cplx logGamma(Cplx z, double poleTol) {
    LogGammaResult res = logGammaChecked(z, poleTol);
    if (res.pole)
        throw Error(ErrKind::PoleAt, "logGamma at a non-positive integer: z = (" +
                                         formatDouble(z.real()) + ", " +
                                         formatDouble(z.imag()) + ")");
    return res.value;
}

} // namespace bch
