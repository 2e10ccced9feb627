#include "bchyp/hcseries.hpp"

#include <cmath>
#include <limits>
#include <string>
#include <unordered_map>

#include "bchyp/errors.hpp"

namespace bch {

namespace {

// packed key for cone points; coordinates stay below 2^10 (height cap 400)
std::uint64_t packCoords(const std::vector<int>& c) {
    std::uint64_t key = 0;
    for (int v : c) key = (key << 10) | std::uint64_t(v);
    return key;
}



double cnorm(const CVec& v) {
    double s = 0;
    for (const auto& z : v) s += std::norm(z);
    return std::sqrt(s);
}

} // namespace

int seriesRankCap(int rank, int requested) {
    const int hard = rank <= 2 ? 400 : (rank == 3 ? 120 : 60);
    return std::min(requested, hard);
}

GammaTable::GammaTable(const RootSystemBC& rs, const Multiplicity& m, CVec lambda,
                       int maxHeight, double genericityTol)
    : rs_(&rs), m_(m), lambda_(std::move(lambda)), gtol_(genericityTol) {
    rhoVec_ = rho(rs, m);
    genericityMargin_ = std::numeric_limits<double>::infinity();
    extend(maxHeight);
}

void GammaTable::extend(int newMaxHeight) {
    if (newMaxHeight <= maxHeight_ && !points_.empty()) return;
    const std::size_t firstNew = points_.size();
    points_ = rs_->enumerateCone(newMaxHeight);   // previous points are a prefix
    maxHeight_ = newMaxHeight;

    shellStart_.assign(newMaxHeight + 2, 0);
    std::unordered_map<std::uint64_t, int> index;
    index.reserve(points_.size() * 2);
    for (std::size_t i = 0; i < points_.size(); ++i) {
        index[packCoords(points_[i].simpleCoords)] = static_cast<int>(i);
        shellStart_[points_[i].height + 1] = i + 1;
    }
    for (std::size_t h = 1; h < shellStart_.size(); ++h)
        shellStart_[h] = std::max(shellStart_[h], shellStart_[h - 1]);

    const auto& roots = rs_->positiveRoots();
    stepDown_.resize(points_.size(), std::vector<int>(roots.size(), -1));
    std::vector<int> tmp(rs_->rank());
    for (std::size_t i = firstNew; i < points_.size(); ++i) {
        for (std::size_t a = 0; a < roots.size(); ++a) {
            bool ok = true;
            for (int k = 0; k < rs_->rank(); ++k) {
                tmp[k] = points_[i].simpleCoords[k] - int(roots[a].simpleCoords[k]);
                if (tmp[k] < 0) { ok = false; break; }
            }
            if (!ok) continue;
            auto it = index.find(packCoords(tmp));
            stepDown_[i][a] = it == index.end() ? -1 : it->second;
        }
    }
    fillFrom(firstNew);
}

Cplx GammaTable::lhsCoeff(std::size_t i) const {
    const Vec mu = scale(rs_->embed(points_[i]), 2.0);
    // <mu, mu - 2 lambda>
    Cplx d = norm2(mu);
    d -= 2.0 * dot(lambda_, mu);
    return d;
}

Cplx GammaTable::rhsFor(std::size_t i) const {
    const Vec mu = scale(rs_->embed(points_[i]), 2.0);
    const auto& roots = rs_->positiveRoots();
    Cplx acc = 0.0;
    for (std::size_t a = 0; a < roots.size(); ++a) {
        const double ma = m_.onClass(roots[a].cls);
        if (ma == 0.0) continue;
        int idx = stepDown_[i][a];
        if (idx < 0) continue;
        // <mu + rho - 2 n alpha - lambda, alpha> = base - 2 n <alpha, alpha>
        Cplx base = dot(mu, roots[a].coords) + dot(rhoVec_, roots[a].coords) -
                    dot(lambda_, roots[a].coords);
        Cplx sum = 0.0;
        int n = 1;
        while (idx >= 0) {
            sum += entries_[idx] * (base - 2.0 * n * roots[a].normSq);
            idx = stepDown_[idx][a];
            ++n;
        }
        acc += ma * sum;
    }
    return 2.0 * acc;
}

void GammaTable::fillFrom(std::size_t firstNew) {
    entries_.resize(points_.size());
    const double lamNorm = cnorm(lambda_);
    for (std::size_t i = firstNew; i < points_.size(); ++i) {
        if (points_[i].height == 0) {
            entries_[i] = 1.0;
            continue;
        }
        const Cplx d = lhsCoeff(i);
        const double muNorm = 2.0 * norm(rs_->embed(points_[i]));
        const double floor = gtol_ * (1.0 + muNorm * muNorm + muNorm * lamNorm);
        if (std::abs(d) < floor)
            throw Error(ErrKind::NonGenericSpectral,
                        "spectral parameter on (or near) the hyperplane <mu, mu-2*lambda>=0 "
                        "at shell height " + std::to_string(points_[i].height));
        genericityMargin_ = std::min(genericityMargin_, std::abs(d));
        entries_[i] = rhsFor(i) / d;
    }
}

Cplx GammaTable::recompute(std::size_t i) const {
    if (points_[i].height == 0) return 1.0;
    return rhsFor(i) / lhsCoeff(i);
}

double GammaTable::muPairing(std::size_t i, const Vec& x) const {
    return 2.0 * dot(rs_->embed(points_[i]), x);
}

SeriesValue GammaTable::seriesSum(const Vec& x) const {
    SeriesValue out;
    out.wallMargin = rs_->wallMargin(x);
    out.truncationHeight = maxHeight_;
    Cplx total = 0.0;
    double absAcc = 0.0;
    double lastShell = 0.0, prevShell = 0.0;
    for (int h = 0; h <= maxHeight_; ++h) {
        Cplx shell = 0.0;
        for (std::size_t i = shellStart_[h]; i < shellStart_[h + 1]; ++i) {
            const Cplx term = entries_[i] * std::exp(-muPairing(i, x));
            shell += term;
            absAcc += std::abs(term);
        }
        total += shell;
        prevShell = lastShell;
        lastShell = std::abs(shell);
    }
    out.value = total;
    out.absSum = absAcc;
    const double q = std::exp(-2.0 * out.wallMargin);
    if (q < 1.0)
        out.tailEstimate = std::max(lastShell, prevShell) * q / (1.0 - q);
    else
        out.tailEstimate = std::numeric_limits<double>::infinity();
    out.truncationTail = out.tailEstimate;
    return out;
}

SeriesValue phi(const RootSystemBC& rs, const Multiplicity& m, const CVec& lambda,
                const Vec& x, const SeriesOptions& opt) {
    if (rs.wallMargin(x) < opt.minWallMargin)
        throw Error(ErrKind::WallTooClose,
                    "series evaluation requires wall margin >= " +
                        formatDouble(opt.minWallMargin));
    const int cap = seriesRankCap(rs.rank(), opt.maxHeightCap);
    GammaTable table(rs, m, lambda, std::min(opt.maxHeight, cap), opt.genericityTol);
    SeriesValue sv = table.seriesSum(x);
    while (opt.adaptive &&
           sv.truncationTail > opt.tailTol * (1.0 + std::abs(sv.value)) &&
           table.maxHeight() < cap) {
        table.extend(std::min(2 * table.maxHeight(), cap));
        sv = table.seriesSum(x);
    }
    const Cplx expo = dot(lambda, x) - dot(rho(rs, m), x);
    const Cplx factor = std::exp(expo);
    sv.value *= factor;
    sv.truncationTail *= std::abs(factor);
    sv.tailEstimate = (sv.tailEstimate + 1e-11 * sv.absSum) * std::abs(factor);
    sv.absSum *= std::abs(factor);
    return sv;
}

bool orbitIsFree(const RootSystemBC& rs, const CVec& lambda, double tol) {
    const double scale = 1.0 + cnorm(lambda);
    for (const auto& w : rs.weylElements()) {
        if (w.isIdentity()) continue;
        CVec wl = w.apply(lambda);
        double diff = 0.0;
        for (std::size_t j = 0; j < wl.size(); ++j)
            diff = std::max(diff, std::abs(wl[j] - lambda[j]));
        if (diff < tol * scale) return false;
    }
    return true;
}

SymmetricSeries::SymmetricSeries(const RootSystemBC& rs, const Multiplicity& m,
                                 CVec lambda, const SeriesOptions& opt)
    : rs_(&rs), m_(m), lambda_(std::move(lambda)), opt_(opt) {
    rhoVec_ = rho(rs, m);
    if (!orbitIsFree(rs, lambda_))
        throw Error(ErrKind::DegenerateOrbit,
                    "Weyl orbit of lambda is not free; use the ODE engine");
    const auto& W = rs.weylElements();
    orbit_.reserve(W.size());
    cvals_.reserve(W.size());
    tables_.reserve(W.size());
    for (const auto& w : W) {
        CVec wl = w.apply(lambda_);
        CFuncValue cv = cfunction(rs, m, wl);
        if (cv.poleFlag)
            throw Error(ErrKind::NonGenericSpectral,
                        "c(m; w lambda) has a pole on the orbit");
        cvals_.push_back(cv.zeroFlag ? Cplx(0.0, 0.0) : cv.value);
        tables_.push_back(std::make_unique<GammaTable>(
            rs, m, wl, seriesRankCap(rs.rank(), opt.maxHeight), opt.genericityTol));
        orbit_.push_back(std::move(wl));
    }
}

void SymmetricSeries::ensureHeight(int maxHeight) {
    maxHeight = seriesRankCap(rs_->rank(), maxHeight);
    for (auto& t : tables_)
        if (t->maxHeight() < maxHeight) t->extend(maxHeight);
}

SeriesValue SymmetricSeries::evalImpl(const Vec& x, bool normalized) const {
    if (rs_->wallMargin(x) < opt_.minWallMargin)
        throw Error(ErrKind::WallTooClose,
                    "series evaluation requires wall margin >= " +
                        formatDouble(opt_.minWallMargin));
    SeriesValue out;
    out.wallMargin = rs_->wallMargin(x);
    out.truncationHeight = tables_[0]->maxHeight();
    Cplx total = 0.0;
    double tail = 0.0;
    double absAcc = 0.0;
    for (std::size_t k = 0; k < orbit_.size(); ++k) {
        if (cvals_[k] == Cplx(0.0, 0.0)) continue;
        SeriesValue sv = tables_[k]->seriesSum(x);
        // exponent: (w lambda - rho)(x), or (w lambda - lambda)(x) normalized
        Cplx expo = dot(orbit_[k], x);
        expo -= normalized ? dot(lambda_, x) : Cplx(dot(rhoVec_, x));
        const Cplx factor = cvals_[k] * std::exp(expo);
        total += factor * sv.value;
        tail += std::abs(factor) * sv.tailEstimate;
        absAcc += std::abs(factor) * sv.absSum;
        out.truncationHeight = std::max(out.truncationHeight, sv.truncationHeight);
    }
    out.value = total;
    out.absSum = absAcc;
    // near the recursion hyperplanes the orbit terms cancel catastrophically;
    // charge each term with ~1e-11 relative error so callers can tell when the
    // series route has lost digits and the orbit ODE should take over
    out.truncationTail = tail;
    out.tailEstimate = tail + 1e-11 * absAcc;
    return out;
}

SeriesValue SymmetricSeries::evaluate(const Vec& x) const { return evalImpl(x, false); }
SeriesValue SymmetricSeries::evaluateNormalized(const Vec& x) const {
    return evalImpl(x, true);
}

SeriesValue fSeries(const RootSystemBC& rs, const Multiplicity& m, const CVec& lambda,
                    const Vec& x, const SeriesOptions& opt) {
    SymmetricSeries series(rs, m, lambda, opt);
    SeriesValue sv = series.evaluate(x);
    const int cap = seriesRankCap(rs.rank(), opt.maxHeightCap);
    while (opt.adaptive &&
           sv.truncationTail > opt.tailTol * (1e-30 + std::abs(sv.value)) &&
           sv.truncationHeight < cap) {
        series.ensureHeight(std::min(2 * sv.truncationHeight, cap));
        sv = series.evaluate(x);
    }
    return sv;
}

} // namespace bch
