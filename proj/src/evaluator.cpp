#include "bchyp/evaluator.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <memory>
#include <string>
#include <utility>

#include "bchyp/errors.hpp"

namespace bch {

namespace {

double cnormInf(const CVec& v) {
    double s = 0;
    for (const auto& z : v) s = std::max(s, std::abs(z));
    return s;
}

bool isZeroVec(const Vec& x) {
    for (double v : x)
        if (v != 0.0) return false;
    return true;
}

// Taylor coefficients of h(s) = 1/(1 - e^{-s}) - 1/s around 0; nonzero at
// k = 0 and odd k (Bernoulli numbers B_{k+1} / (k+1)!).
constexpr int kHOrder = 18;
const double kH[kHOrder] = {
    0.5,
    1.0 / 12.0, 0.0,
    -1.0 / 720.0, 0.0,
    1.0 / 30240.0, 0.0,
    -1.0 / 1209600.0, 0.0,
    1.0 / 47900160.0, 0.0,
    -691.0 / 1307674368000.0, 0.0,
    1.0 / 74724249600.0, 0.0,
    -3617.0 / 10670622842880000.0, 0.0,
    0.0,
};

} // namespace

double fdStep(const Vec& x, double h) {
    return h > 0.0 ? h : 1e-3 * (1.0 + norm(x));
}

double uFactor(const RootSystemBC& rs, const Vec& x) { return std::exp(logU(rs, x)); }
double vFactor(const RootSystemBC& rs, const Vec& x) { return std::exp(logV(rs, x)); }

double logU(const RootSystemBC& rs, const Vec& x) {
    double s = 0;
    for (int j = 0; j < rs.rank(); ++j)
        s += std::log(std::cosh(rs.p() * x[j] / 2.0));
    return s;
}

double logV(const RootSystemBC& rs, const Vec& x) {
    double s = 0;
    const double p = rs.p();
    for (int j = 1; j < rs.rank(); ++j)
        for (int i = 0; i < j; ++i)
            s += std::log(std::cosh(p * (x[j] - x[i]) / 2.0)) +
                 std::log(std::cosh(p * (x[j] + x[i]) / 2.0));
    return s;
}

double uLogDeriv(const RootSystemBC& rs, const Vec& xi, const Vec& x) {
    double s = 0;
    const double p = rs.p();
    for (int j = 0; j < rs.rank(); ++j)
        s += 0.5 * p * xi[j] * std::tanh(p * x[j] / 2.0);
    return s;
}

double vLogDeriv(const RootSystemBC& rs, const Vec& xi, const Vec& x) {
    double s = 0;
    const double p = rs.p();
    for (int j = 1; j < rs.rank(); ++j)
        for (int i = 0; i < j; ++i) {
            s += 0.5 * p * (xi[j] - xi[i]) * std::tanh(p * (x[j] - x[i]) / 2.0);
            s += 0.5 * p * (xi[j] + xi[i]) * std::tanh(p * (x[j] + x[i]) / 2.0);
        }
    return s;
}

double fSigma(const RootSystemBC& rs, const Multiplicity& m, const Vec& x) {
    double s = 0;
    for (const auto& a : rs.positiveRoots()) {
        const double ma = m.onClass(a.cls);
        if (ma == 0.0) continue;
        const double ax = dot(a.coords, x);
        if (std::fabs(ax) < 1e-8)
            throw Error(ErrKind::SingularPoint, "f_Sigma evaluated on a root hyperplane");
        const double sh = 2.0 * std::sinh(ax);
        s += ma * (2.0 - ma - 2.0 * m.onDouble(a.cls)) * a.normSq / (sh * sh);
    }
    return s;
}

namespace {

template <typename F>
Cplx dirDerivative(const F& f, const Vec& x, const Vec& dir, double h) {
    auto central = [&](double step) {
        Vec xp = x, xm = x;
        for (std::size_t j = 0; j < x.size(); ++j) {
            xp[j] += step * dir[j];
            xm[j] -= step * dir[j];
        }
        return (f(xp) - f(xm)) / (2.0 * step);
    };
    const Cplx d1 = central(h);
    const Cplx d2 = central(h / 2.0);
    return (4.0 * d2 - d1) / 3.0;   // Richardson, O(h^4)
}

template <typename F>
Cplx secondDerivative(const F& f, const Vec& x, int axis, double h, Cplx f0) {
    auto central = [&](double step) {
        Vec xp = x, xm = x;
        xp[axis] += step;
        xm[axis] -= step;
        return (f(xp) - 2.0 * f0 + f(xm)) / (step * step);
    };
    const Cplx d1 = central(h);
    const Cplx d2 = central(h / 2.0);
    return (4.0 * d2 - d1) / 3.0;
}

} // namespace

Cplx cherednikApply(const RootSystemBC& rs, const Multiplicity& m, const Vec& xi,
                    const std::function<Cplx(const Vec&)>& f, const Vec& x, double h) {
    if (rs.regularityMargin(x) < 1e-6)
        throw Error(ErrKind::SingularPoint, "Cherednik operator needs a regular point");
    h = fdStep(x, h);
    const Vec rhoV = rho(rs, m);
    Cplx acc = dirDerivative(f, x, xi, h) - dot(rhoV, xi) * f(x);
    const Cplx fx = f(x);
    for (const auto& a : rs.positiveRoots()) {
        const double ma = m.onClass(a.cls);
        if (ma == 0.0) continue;
        const double ax = dot(a.coords, x);
        const double denom = -std::expm1(-2.0 * ax);   // 1 - e^{-2 alpha(x)}
        const Vec rx = a.refl.apply(x);
        acc += ma * dot(a.coords, xi) / denom * (fx - f(rx));
    }
    return acc;
}

Cplx cherednikApplyDeformed(const RootSystemBC& rs, const Multiplicity& m,
                            const Deformation& d, const Vec& xi,
                            const std::function<Cplx(const Vec&)>& f, const Vec& x,
                            double h) {
    const Multiplicity md = deform(m, d, rs.rank());
    Cplx acc = cherednikApply(rs, md, xi, f, x, h);
    acc += (d.ell * uLogDeriv(rs, xi, x) + d.ellTilde * vLogDeriv(rs, xi, x)) * f(x);
    return acc;
}

OrbitIntegrator::OrbitIntegrator(const RootSystemBC& rs, const Multiplicity& m,
                                 CVec lambda, Vec direction, const EvalOptions& opt)
    : rs_(&rs), m_(m), lambda_(std::move(lambda)), opt_(opt) {
    if (!classify(m, rs.rank()).M0)
        throw Error(ErrKind::Domain, "orbit integration requires m in M0");
    const double dn = norm(direction);
    if (dn == 0.0) throw Error(ErrKind::Domain, "zero direction");
    // Wall directions are admissible: when alpha(w xhat) = 0 the reflected
    // orbit component coincides with its partner and the coupling term
    // vanishes identically, which the RHS limit below reproduces.
    state_.direction = scale(direction, 1.0 / dn);

    nW_ = rs.weylOrder();
    const auto& W = rs.weylElements();
    const auto& roots = rs.positiveRoots();
    rootPair_.assign(roots.size(), Vec(nW_));
    mAlpha_.resize(roots.size());
    for (std::size_t a = 0; a < roots.size(); ++a) {
        mAlpha_[a] = m.onClass(roots[a].cls);
        for (std::size_t w = 0; w < nW_; ++w)
            rootPair_[a][w] = dot(roots[a].coords, W[w].apply(state_.direction));
    }
    const Vec rhoV = rho(rs, m);
    drift_.resize(nW_);
    for (std::size_t w = 0; w < nW_; ++w) {
        const Vec wx = W[w].apply(state_.direction);
        drift_[w] = dot(rhoV, wx) + dot(lambda_, wx);
    }
    bootstrap();
    state_.t = 0.0;
    state_.values.assign(nW_, Cplx(1.0, 0.0));
}

void OrbitIntegrator::bootstrap() {
    const int n = static_cast<int>(nW_);
    const auto& roots = rs_->positiveRoots();

    std::vector<double> residue(nW_ * nW_, 0.0);
    for (std::size_t a = 0; a < roots.size(); ++a) {
        if (mAlpha_[a] == 0.0) continue;
        for (std::size_t w = 0; w < nW_; ++w) {
            const std::size_t nb = rs_->reflectIndex(static_cast<int>(a), static_cast<int>(w));
            residue[w * nW_ + nb] += mAlpha_[a] / 2.0;
            residue[w * nW_ + w] -= mAlpha_[a] / 2.0;
        }
    }

    // apply A_k (k-th Taylor matrix of the regular part) to a vector
    auto applyAk = [&](int k, const CVec& g, CVec& out) {
        std::fill(out.begin(), out.end(), Cplx(0.0, 0.0));
        if (k == 0)
            for (std::size_t w = 0; w < nW_; ++w) out[w] = drift_[w] * g[w];
        if (k < kHOrder && kH[k] != 0.0) {
            for (std::size_t a = 0; a < roots.size(); ++a) {
                if (mAlpha_[a] == 0.0) continue;
                for (std::size_t w = 0; w < nW_; ++w) {
                    const double c = rootPair_[a][w];
                    double pw = 1.0;
                    for (int q = 0; q < k; ++q) pw *= 2.0 * c;
                    const double coeff = mAlpha_[a] * c * kH[k] * pw;
                    const std::size_t nb =
                        rs_->reflectIndex(static_cast<int>(a), static_cast<int>(w));
                    out[w] += coeff * (g[nb] - g[w]);
                }
            }
        }
    };

    const int maxOrder = std::max(opt_.frobeniusOrder, 12);
    frobShells_.clear();
    frobShells_.push_back(CVec(nW_, Cplx(1.0, 0.0)));
    CVec rhs(nW_), tmp(nW_);
    for (int k = 1; k <= std::min(maxOrder + 18, 30); ++k) {
        std::fill(rhs.begin(), rhs.end(), Cplx(0.0, 0.0));
        for (int j = 0; j < k; ++j) {
            applyAk(j, frobShells_[k - 1 - j], tmp);
            for (std::size_t w = 0; w < nW_; ++w) rhs[w] += tmp[w];
        }
        std::vector<double> mat(nW_ * nW_);
        for (std::size_t i = 0; i < nW_ * nW_; ++i) mat[i] = -residue[i];
        for (int i = 0; i < n; ++i) mat[i * n + i] += double(k);
        LuFactors lu;
        if (!lu.factor(std::move(mat), n, 1e-10))
            throw Error(ErrKind::ResonanceAtZero,
                        "Frobenius shell matrix k*I - A_{-1} singular at k = " +
                            std::to_string(k));
        lu.solve(rhs);
        frobShells_.push_back(rhs);
    }

    // pick t0 so the truncated series is accurate to ~1e-15 relative
    double sMax = 0.0;
    for (std::size_t a = 0; a < roots.size(); ++a)
        for (std::size_t w = 0; w < nW_; ++w)
            sMax = std::max(sMax, 2.0 * std::fabs(rootPair_[a][w]));
    double t0 = std::min(0.1 / (1.0 + cnormInf(drift_)), 0.5 / std::max(sMax, 1e-6));
    for (int tries = 0; tries < 40; ++tries) {
        const int K = static_cast<int>(frobShells_.size()) - 1;
        const double tail = (cnormInf(frobShells_[K]) * std::pow(t0, K) +
                             cnormInf(frobShells_[K - 1]) * std::pow(t0, K - 1));
        if (tail < 1e-15) break;
        t0 *= 0.7;
    }
    t0_ = t0;
}

CVec OrbitIntegrator::frobeniusEval(double t) const {
    CVec g(nW_, Cplx(0.0, 0.0));
    // Horner in t over shells
    for (int k = static_cast<int>(frobShells_.size()) - 1; k >= 0; --k)
        for (std::size_t w = 0; w < nW_; ++w)
            g[w] = g[w] * t + frobShells_[k][w];
    return g;
}

void OrbitIntegrator::rhs(double t, const CVec& g, CVec& out) const {
    const auto& roots = rs_->positiveRoots();
    for (std::size_t w = 0; w < nW_; ++w) out[w] = drift_[w] * g[w];
    for (std::size_t a = 0; a < roots.size(); ++a) {
        const double ma = mAlpha_[a];
        if (ma == 0.0) continue;
        const int aIdx = static_cast<int>(a);
        for (std::size_t w = 0; w < nW_; ++w) {
            const double c = rootPair_[a][w];
            const double s = 2.0 * t * c;
            double denom = -std::expm1(-s);   // 1 - e^{-s}, sign follows s
            double coeff;
            if (std::isfinite(denom) && denom != 0.0)
                coeff = ma * c / denom;
            else
                coeff = 0.0;                  // s << 0: coefficient decays to 0
            const std::size_t nb = rs_->reflectIndex(aIdx, static_cast<int>(w));
            out[w] += coeff * (g[nb] - g[w]);
        }
    }
}

void OrbitIntegrator::integrate(double tEnd) {
    // Dormand-Prince 5(4), FSAL
    static const double c2 = 1.0 / 5, c3 = 3.0 / 10, c4 = 4.0 / 5, c5 = 8.0 / 9;
    static const double a21 = 1.0 / 5;
    static const double a31 = 3.0 / 40, a32 = 9.0 / 40;
    static const double a41 = 44.0 / 45, a42 = -56.0 / 15, a43 = 32.0 / 9;
    static const double a51 = 19372.0 / 6561, a52 = -25360.0 / 2187,
                        a53 = 64448.0 / 6561, a54 = -212.0 / 729;
    static const double a61 = 9017.0 / 3168, a62 = -355.0 / 33, a63 = 46732.0 / 5247,
                        a64 = 49.0 / 176, a65 = -5103.0 / 18656;
    static const double b1 = 35.0 / 384, b3 = 500.0 / 1113, b4 = 125.0 / 192,
                        b5 = -2187.0 / 6784, b6 = 11.0 / 84;
    static const double e1 = 71.0 / 57600, e3 = -71.0 / 16695, e4 = 71.0 / 1920,
                        e5 = -17253.0 / 339200, e6 = 22.0 / 525, e7 = -1.0 / 40;

    const double rtol = std::max(opt_.tol, 1e-13);
    double t = state_.t;
    CVec y = state_.values;
    CVec k1(nW_), k2(nW_), k3(nW_), k4(nW_), k5(nW_), k6(nW_), k7(nW_);
    CVec ytmp(nW_), ynew(nW_);
    rhs(t, y, k1);

    double coeffScale = cnormInf(drift_) + 1.0;
    double h = std::min((tEnd - t) / 4.0, 0.5 / coeffScale);

    while (t < tEnd) {
        if (h < 1e-12 * std::max(1.0, tEnd))
            throw Error(ErrKind::StiffnessFailure, "step size collapsed in orbit ODE");
        if (t + h > tEnd) h = tEnd - t;

        auto stage = [&](CVec& out, std::initializer_list<std::pair<const CVec*, double>> terms) {
            for (std::size_t i = 0; i < nW_; ++i) {
                Cplx acc = y[i];
                for (const auto& [kv, coef] : terms) acc += h * coef * (*kv)[i];
                out[i] = acc;
            }
        };
        stage(ytmp, {{&k1, a21}});
        rhs(t + c2 * h, ytmp, k2);
        stage(ytmp, {{&k1, a31}, {&k2, a32}});
        rhs(t + c3 * h, ytmp, k3);
        stage(ytmp, {{&k1, a41}, {&k2, a42}, {&k3, a43}});
        rhs(t + c4 * h, ytmp, k4);
        stage(ytmp, {{&k1, a51}, {&k2, a52}, {&k3, a53}, {&k4, a54}});
        rhs(t + c5 * h, ytmp, k5);
        stage(ytmp, {{&k1, a61}, {&k2, a62}, {&k3, a63}, {&k4, a64}, {&k5, a65}});
        rhs(t + h, ytmp, k6);
        stage(ynew, {{&k1, b1}, {&k3, b3}, {&k4, b4}, {&k5, b5}, {&k6, b6}});
        rhs(t + h, ynew, k7);

        double vmax = 0.0;
        for (std::size_t i = 0; i < nW_; ++i)
            vmax = std::max(vmax, std::max(std::abs(y[i]), std::abs(ynew[i])));
        double errNorm = 0.0;
        for (std::size_t i = 0; i < nW_; ++i) {
            const Cplx err = h * (e1 * k1[i] + e3 * k3[i] + e4 * k4[i] + e5 * k5[i] +
                                  e6 * k6[i] + e7 * k7[i]);
            const double sc =
                rtol * (1e-3 * vmax + std::max(std::abs(y[i]), std::abs(ynew[i])));
            errNorm = std::max(errNorm, std::abs(err) / sc);
        }
        if (errNorm <= 1.0) {
            t += h;
            y.swap(ynew);
            k1.swap(k7);    // FSAL
            ++state_.steps;
            state_.errEstimate += errNorm * rtol;
        } else {
            ++state_.rejectedSteps;
        }
        const double fac = 0.9 * std::pow(std::max(errNorm, 1e-10), -0.2);
        h *= std::min(5.0, std::max(0.2, fac));
    }
    state_.t = t;
    state_.values = std::move(y);
}

const OrbitState& OrbitIntegrator::advanceTo(double t) {
    if (t < 0.0) throw Error(ErrKind::Domain, "negative ray parameter");
    if (t < state_.t) {
        state_.t = 0.0;
        state_.values.assign(nW_, Cplx(1.0, 0.0));
        state_.steps = 0;
        state_.rejectedSteps = 0;
        state_.errEstimate = 0.0;
    }
    if (t <= t0_) {
        state_.values = frobeniusEval(t);
        state_.t = t;
        return state_;
    }
    if (state_.t < t0_) {
        state_.values = frobeniusEval(t0_);
        state_.t = t0_;
    }
    integrate(t);
    return state_;
}

Cplx OrbitIntegrator::symmetrized() const {
    Cplx s = 0.0;
    for (const auto& v : state_.values) s += v;
    return s / double(nW_);
}

EvalResult gOde(const RootSystemBC& rs, const Multiplicity& m, const CVec& lambda,
                const Vec& x, const EvalOptions& opt) {
    EvalResult res;
    if (isZeroVec(x)) {
        res.value = 1.0;
        res.method = "exact";
        return res;
    }
    if (rs.regularityMargin(scale(x, 1.0 / norm(x))) < 1e-9)
        throw Error(ErrKind::SingularPoint,
                    "G evaluation needs a regular point; perturb x or use fEval");
    OrbitIntegrator integ(rs, m, lambda, x, opt);
    const double T = norm(x);
    integ.advanceTo(T);
    res.value = integ.state().values[0];   // identity component
    res.method = "ode";
    res.errEstimate = std::max(opt.tol, integ.state().errEstimate) *
                      (1.0 + std::abs(res.value));
    return res;
}

EvalResult fEval(const RootSystemBC& rs, const Multiplicity& m, const CVec& lambda,
                 const Vec& x, const EvalOptions& opt) {
    EvalResult res;
    if (isZeroVec(x)) {
        res.value = 1.0;
        res.method = "exact";
        return res;
    }
    auto [xPlus, w] = rs.dominantRepresentative(x);   // F is W-invariant in x

    const bool wantSeries = opt.method == "series";
    const bool wantOde = opt.method == "ode";

    if (!wantOde && rs.wallMargin(xPlus) >= opt.series.minWallMargin) {
        try {
            SeriesOptions sopt = opt.series;
            sopt.tailTol = std::min(sopt.tailTol, opt.tol);
            SeriesValue sv = fSeries(rs, m, lambda, xPlus, sopt);
            res.value = sv.value;
            res.method = "series";
            res.errEstimate = sv.tailEstimate;
            // in auto mode reject series values whose error floor (truncation
            // cap or near-resonant cancellation) misses the requested accuracy
            if (wantSeries ||
                sv.tailEstimate <=
                    std::max(opt.tol, 1e-13) * (1e-30 + std::abs(sv.value)))
                return res;
        } catch (const Error& e) {
            if (wantSeries) throw;
            if (e.kind() != ErrKind::NonGenericSpectral &&
                e.kind() != ErrKind::DegenerateOrbit &&
                e.kind() != ErrKind::WallTooClose &&
                e.kind() != ErrKind::NotRegular)
                throw;
            // fall through to the orbit engine
        }
    } else if (wantSeries) {
        throw Error(ErrKind::WallTooClose, "series method refused near a wall");
    }

    // Wall x needs no perturbation: the rotated direction may lie on chamber
    // walls and the orbit integrator evaluates there exactly.
    OrbitIntegrator integ(rs, m, lambda, xPlus, opt);
    integ.advanceTo(norm(xPlus));
    res.value = integ.symmetrized();
    res.method = "ode";
    res.perturbation = 0.0;
    res.errEstimate =
        std::max(opt.tol, integ.state().errEstimate) * (1.0 + std::abs(res.value));
    return res;
}

DeformedEval fDeformed(const RootSystemBC& rs, const Multiplicity& m, const Deformation& d,
                       const CVec& lambda, const Vec& x, const EvalOptions& opt) {
    const Multiplicity md = deform(m, d, rs.rank(), /*requireM0=*/true);
    EvalResult inner = fEval(rs, md, lambda, x, opt);
    DeformedEval out;
    out.base = m;
    out.deformation = d;
    out.lambda = lambda;
    out.x = x;
    const double factor = std::exp(-d.ell * logU(rs, x) - d.ellTilde * logV(rs, x));
    out.value = factor * inner.value;
    out.method = inner.method;
    out.errEstimate = factor * inner.errEstimate;
    return out;
}

DeformedEval gDeformed(const RootSystemBC& rs, const Multiplicity& m, const Deformation& d,
                       const CVec& lambda, const Vec& x, const EvalOptions& opt) {
    const Multiplicity md = deform(m, d, rs.rank(), /*requireM0=*/true);
    EvalResult inner = gOde(rs, md, lambda, x, opt);
    DeformedEval out;
    out.base = m;
    out.deformation = d;
    out.lambda = lambda;
    out.x = x;
    const double factor = std::exp(-d.ell * logU(rs, x) - d.ellTilde * logV(rs, x));
    out.value = factor * inner.value;
    out.method = inner.method;
    out.errEstimate = factor * inner.errEstimate;
    return out;
}

std::function<Cplx(const Vec&)> makeFEvaluator(const RootSystemBC& rs,
                                               const Multiplicity& m, CVec lambda,
                                               const EvalOptions& opt) {
    std::shared_ptr<SymmetricSeries> series;
    if (opt.method != "ode") {
        try {
            SeriesOptions sopt = opt.series;
            sopt.tailTol = std::min(sopt.tailTol, opt.tol);
            series = std::make_shared<SymmetricSeries>(rs, m, lambda, sopt);
        } catch (const Error&) {
            series.reset();   // per-point ODE below
        }
    }
    const SeriesOptions sopt = opt.series;
    const double tol = opt.tol;
    auto seriesDead = std::make_shared<bool>(false);
    return [&rs, m, lambda = std::move(lambda), opt, series, sopt, tol,
            seriesDead](const Vec& x) {
        if (series && !*seriesDead) {
            Vec xPlus = rs.dominantRepresentative(x).first;
            if (rs.wallMargin(xPlus) >= sopt.minWallMargin) {
                const int cap = seriesRankCap(rs.rank(), sopt.maxHeightCap);
                SeriesValue sv = series->evaluate(xPlus);
                while (sv.truncationTail > tol * (1e-30 + std::abs(sv.value)) &&
                       sv.truncationHeight < cap) {
                    series->ensureHeight(std::min(2 * sv.truncationHeight, cap));
                    sv = series->evaluate(xPlus);
                }
                if (sv.tailEstimate <=
                    std::max(tol, 1e-13) * (1e-30 + std::abs(sv.value)))
                    return sv.value;
                // the series route lost digits (near-resonant lambda); retire
                // it and use the orbit engine for every subsequent point
                *seriesDead = true;
            }
        }
        return fEval(rs, m, lambda, x, opt).value;
    };
}

double laplacianResidual(const RootSystemBC& rs, const Multiplicity& m,
                         const CVec& lambda, const Vec& x,
                         const std::function<Cplx(const Vec&)>& f, double h) {
    if (rs.regularityMargin(x) < 1e-6)
        throw Error(ErrKind::SingularPoint, "Laplacian residual needs a regular point");
    h = fdStep(x, h);
    const Cplx f0 = f(x);
    Cplx lap = 0.0;
    for (int j = 0; j < rs.rank(); ++j) lap += secondDerivative(f, x, j, h, f0);
    for (const auto& a : rs.positiveRoots()) {
        const double ma = m.onClass(a.cls);
        if (ma == 0.0) continue;
        const double ax = dot(a.coords, x);
        lap += ma / std::tanh(ax) * dirDerivative(f, x, a.coords, h);
    }
    const Vec rhoV = rho(rs, m);
    const Cplx lamSq = dot(lambda, lambda);
    const Cplx resid = lap + (norm2(rhoV) - lamSq) * f0;
    return std::abs(resid) / std::abs(f0);
}

double laplacianResidual(const RootSystemBC& rs, const Multiplicity& m,
                         const CVec& lambda, const Vec& x, const EvalOptions& opt,
                         double h) {
    auto f = makeFEvaluator(rs, m, lambda, opt);
    return laplacianResidual(rs, m, lambda, x, f, h);
}

double conjugationResidual(const RootSystemBC& rs, const Multiplicity& m, const Vec& x,
                           const std::function<double(const Vec&)>& phi, double h) {
    h = fdStep(x, h);
    auto logDeltaHalf = [&](const Vec& y) {
        double s = 0;
        for (const auto& a : rs.positiveRoots()) {
            const double ma = m.onClass(a.cls);
            if (ma == 0.0) continue;
            const double ay = dot(a.coords, y);
            s += 0.5 * ma * std::log(2.0 * std::sinh(ay));
        }
        return s;
    };
    auto psi = [&](const Vec& y) { return Cplx(std::exp(-logDeltaHalf(y)) * phi(y)); };

    // delta^{1/2} (L(m) + <rho,rho>) delta^{-1/2} phi
    const Cplx psi0 = psi(x);
    Cplx lapPsi = 0.0;
    for (int j = 0; j < rs.rank(); ++j) lapPsi += secondDerivative(psi, x, j, h, psi0);
    for (const auto& a : rs.positiveRoots()) {
        const double ma = m.onClass(a.cls);
        if (ma == 0.0) continue;
        lapPsi += ma / std::tanh(dot(a.coords, x)) * dirDerivative(psi, x, a.coords, h);
    }
    const Vec rhoV = rho(rs, m);
    const Cplx lhs = std::exp(logDeltaHalf(x)) * (lapPsi + norm2(rhoV) * psi0);

    // (L_a + f_Sigma) phi
    auto phiC = [&](const Vec& y) { return Cplx(phi(y)); };
    const Cplx phi0 = phiC(x);
    Cplx lapPhi = 0.0;
    for (int j = 0; j < rs.rank(); ++j) lapPhi += secondDerivative(phiC, x, j, h, phi0);
    const Cplx rhs = lapPhi + fSigma(rs, m, x) * phi0;

    const double scale = std::abs(lhs) + std::abs(rhs) + 1.0;
    return std::abs(lhs - rhs) / scale;
}

} // namespace bch
