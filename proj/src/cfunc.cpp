#include "bchyp/cfunc.hpp"

#include <cmath>
#include <limits>

#include "bchyp/errors.hpp"
#include "bchyp/gamma.hpp"

namespace bch {

namespace {
constexpr double kLog2 = 0.69314718055994530941723212145817657;
}

CFuncValue ctilde(const RootSystemBC& rs, const Multiplicity& m, const CVec& lambda,
                  double poleTol) {
    CFuncValue out;
    Cplx logAcc = 0.0;
    for (const auto& a : rs.positiveRoots()) {
        if (a.cls == RootClass::Long) continue;   // indivisible roots only
        const Cplx la = rs.pairingNormalized(lambda, a);
        const double ma = m.onClass(a.cls);
        const double m2a = m.onDouble(a.cls);

        LogGammaResult num = logGammaChecked(la, poleTol);
        LogGammaResult den1 = logGammaChecked(la / 2.0 + ma / 4.0 + 0.5, poleTol);
        LogGammaResult den2 = logGammaChecked(la / 2.0 + ma / 4.0 + m2a / 2.0, poleTol);

        if (num.pole) out.poleFlag = true;
        if (den1.pole || den2.pole) out.zeroFlag = true;
        if (num.pole || den1.pole || den2.pole) continue;
        logAcc += -la * kLog2 + num.value - den1.value - den2.value;
    }
    if (out.poleFlag && out.zeroFlag) {
        // simultaneous numerator and denominator poles: treat as not finite
        // nonzero; callers guard on the flags
        out.value = Cplx(0, 0);
        return out;
    }
    out.logValue = logAcc;
    if (out.poleFlag) {
        out.value = Cplx(std::numeric_limits<double>::infinity(), 0.0);
    } else if (out.zeroFlag) {
        out.value = Cplx(0.0, 0.0);
    } else {
        out.value = std::exp(logAcc);
    }
    return out;
}

CFuncValue cfunction(const RootSystemBC& rs, const Multiplicity& m, const CVec& lambda,
                     double poleTol) {
    const CFuncValue atRho = ctilde(rs, m, toComplex(rho(rs, m)), poleTol);
    if (!atRho.finiteNonzero())
        throw Error(ErrKind::NotRegular,
                    "ctilde(m; rho(m)) is singular or vanishing; c-function undefined");
    CFuncValue num = ctilde(rs, m, lambda, poleTol);
    CFuncValue out;
    out.poleFlag = num.poleFlag;
    out.zeroFlag = num.zeroFlag;
    if (num.poleFlag) {
        out.value = Cplx(std::numeric_limits<double>::infinity(), 0.0);
        return out;
    }
    if (num.zeroFlag) {
        out.value = Cplx(0.0, 0.0);
        return out;
    }
    out.logValue = num.logValue - atRho.logValue;
    out.value = std::exp(out.logValue);
    return out;
}

bool b0Nonsingular(const RootSystemBC& rs, const Multiplicity& m, const CVec& lambda0,
                   double poleTol) {
    if (m.ms == 0.0)
        throw Error(ErrKind::Unsupported,
                    "b0 nonsingularity test is only defined for m_s != 0");
    const Vec re = realPart(lambda0);
    Vec dom = rs.dominantRepresentative(re).first;
    for (int j = 0; j < rs.rank(); ++j)
        if (std::fabs(dom[j] - re[j]) > 1e-9 * (1.0 + std::fabs(re[j])))
            throw Error(ErrKind::Domain, "b0 test requires Re(lambda0) dominant");

    for (const auto& a : rs.positiveRoots()) {
        if (a.cls == RootClass::Long) continue;
        const Cplx la = rs.pairingNormalized(lambda0, a);
        if (a.cls == RootClass::Short) {
            if (poleDistance(la / 2.0 + m.ms / 4.0 + 0.5) < poleTol) return false;
            if (poleDistance(la / 2.0 + m.ms / 4.0 + m.ml / 2.0) < poleTol) return false;
        } else {
            if (poleDistance(la / 2.0 + m.mm / 4.0 + 0.5) < poleTol) return false;
            if (poleDistance(la / 2.0 + m.mm / 4.0) < poleTol) return false;
        }
    }
    return true;
}

bool inMC0(const Multiplicity& m, int rank) {
    return m.ms + m.ml >= 0.0 && (rank == 1 || m.mm >= 0.0);
}

} // namespace bch
