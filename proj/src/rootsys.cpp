#include "bchyp/rootsys.hpp"

#include <algorithm>
#include <cmath>
#include <functional>
#include <limits>
#include <numeric>

#include "bchyp/errors.hpp"

namespace bch {

WeylElement WeylElement::identity(int r) {
    WeylElement w;
    w.src.resize(r);
    w.sign.assign(r, 1);
    std::iota(w.src.begin(), w.src.end(), 0);
    return w;
}

bool WeylElement::isIdentity() const {
    for (std::size_t i = 0; i < src.size(); ++i)
        if (src[i] != static_cast<int>(i) || sign[i] != 1) return false;
    return true;
}

Vec WeylElement::apply(const Vec& v) const {
    Vec out(v.size());
    for (std::size_t i = 0; i < v.size(); ++i) out[i] = sign[i] * v[src[i]];
    return out;
}

CVec WeylElement::apply(const CVec& v) const {
    CVec out(v.size());
    for (std::size_t i = 0; i < v.size(); ++i) out[i] = double(sign[i]) * v[src[i]];
    return out;
}

WeylElement WeylElement::compose(const WeylElement& a, const WeylElement& b) {
    const int r = static_cast<int>(a.src.size());
    WeylElement c;
    c.src.resize(r);
    c.sign.resize(r);
    for (int i = 0; i < r; ++i) {
        c.src[i] = b.src[a.src[i]];
        c.sign[i] = a.sign[i] * b.sign[a.src[i]];
    }
    return c;
}

WeylElement WeylElement::inverse() const {
    const int r = static_cast<int>(src.size());
    WeylElement w;
    w.src.resize(r);
    w.sign.resize(r);
    for (int i = 0; i < r; ++i) {
        w.src[src[i]] = i;
        w.sign[src[i]] = sign[i];
    }
    return w;
}

std::uint64_t binomial(int n, int k) {
    if (k < 0 || k > n) return 0;
    k = std::min(k, n - k);
    std::uint64_t num = 1;
    for (int i = 0; i < k; ++i) num = num * std::uint64_t(n - i) / std::uint64_t(i + 1);
    return num;
}

RootSystemBC::RootSystemBC(int rank, double longNorm) : rank_(rank), p_(longNorm) {
    if (rank < 1) throw Error(ErrKind::Domain, "rank must be >= 1");
    if (rank > 6) throw Error(ErrKind::Domain,
        "rank > 6 not supported: explicit Weyl orbit sums become impractical");
    if (!(longNorm > 0)) throw Error(ErrKind::Domain, "long-root norm must be positive");

    const int r = rank_;
    const double h = p_ / 2.0;

    simpleRoots_.resize(r, Vec(r, 0.0));
    simpleRoots_[0][0] = h;                       // beta_1 / 2
    for (int k = 1; k < r; ++k) {                 // (beta_k - beta_{k-1}) / 2
        simpleRoots_[k][k] = h;
        simpleRoots_[k][k - 1] = -h;
    }

    auto signFlip = [&](int j) {
        WeylElement w = WeylElement::identity(r);
        w.sign[j] = -1;
        return w;
    };
    auto swapPerm = [&](int i, int j, bool negate) {
        WeylElement w = WeylElement::identity(r);
        w.src[i] = j;
        w.src[j] = i;
        if (negate) { w.sign[i] = -1; w.sign[j] = -1; }
        return w;
    };

    auto pushRoot = [&](Vec coords, RootClass cls, WeylElement refl) {
        PositiveRoot root;
        root.coords = std::move(coords);
        root.cls = cls;
        root.refl = std::move(refl);
        root.normSq = norm2(root.coords);
        root.simpleCoords = simpleCoords(root.coords);
        for (double& c : root.simpleCoords) {
            double rounded = std::round(c);
            if (std::fabs(c - rounded) > 1e-9)
                throw Error(ErrKind::Domain, "positive root has non-integer simple coordinates");
            c = rounded;
        }
        posRoots_.push_back(std::move(root));
    };

    for (int j = 0; j < r; ++j) {                 // short: beta_j / 2
        Vec c(r, 0.0);
        c[j] = h;
        pushRoot(std::move(c), RootClass::Short, signFlip(j));
    }
    for (int j = 1; j < r; ++j) {                 // middle: (beta_j +- beta_i)/2, i < j
        for (int i = 0; i < j; ++i) {
            Vec cm(r, 0.0);
            cm[j] = h; cm[i] = -h;
            pushRoot(std::move(cm), RootClass::Middle, swapPerm(i, j, false));
            Vec cp(r, 0.0);
            cp[j] = h; cp[i] = h;
            pushRoot(std::move(cp), RootClass::Middle, swapPerm(i, j, true));
        }
    }
    for (int j = 0; j < r; ++j) {                 // long: beta_j
        Vec c(r, 0.0);
        c[j] = p_;
        pushRoot(std::move(c), RootClass::Long, signFlip(j));
    }
    // |Sigma^+| = r(r+1): r short + r(r-1) middle + r long
    if (posRoots_.size() != static_cast<std::size_t>(r) * (r + 1))
        throw Error(ErrKind::Domain, "positive-root count mismatch");

    // Full group of signed permutations, permutations in lexicographic order,
    // sign masks 0..2^r-1 within each permutation.  Identity sits at index 0.
    std::vector<int> perm(r);
    std::iota(perm.begin(), perm.end(), 0);
    do {
        for (int mask = 0; mask < (1 << r); ++mask) {
            WeylElement w;
            w.src = perm;
            w.sign.resize(r);
            for (int i = 0; i < r; ++i) w.sign[i] = (mask >> i) & 1 ? -1 : 1;
            weylLookup_[encode(w)] = static_cast<int>(weyl_.size());
            weyl_.push_back(std::move(w));
        }
    } while (std::next_permutation(perm.begin(), perm.end()));

    reflTimes_.assign(posRoots_.size(), std::vector<int>(weyl_.size()));
    for (std::size_t a = 0; a < posRoots_.size(); ++a)
        for (std::size_t w = 0; w < weyl_.size(); ++w)
            reflTimes_[a][w] = weylIndex(WeylElement::compose(posRoots_[a].refl, weyl_[w]));
}

std::vector<int> RootSystemBC::encode(const WeylElement& w) const {
    std::vector<int> key(rank_);
    for (int i = 0; i < rank_; ++i) key[i] = w.src[i] * 2 + (w.sign[i] < 0 ? 1 : 0);
    return key;
}

int RootSystemBC::weylIndex(const WeylElement& w) const {
    auto it = weylLookup_.find(encode(w));
    return it == weylLookup_.end() ? -1 : it->second;
}

int RootSystemBC::composeIndex(int a, int b) const {
    return weylIndex(WeylElement::compose(weyl_[a], weyl_[b]));
}

int RootSystemBC::inverseIndex(int a) const {
    return weylIndex(weyl_[a].inverse());
}

std::pair<Vec, WeylElement> RootSystemBC::dominantRepresentative(const Vec& v) const {
    const int r = rank_;
    std::vector<int> order(r);
    std::iota(order.begin(), order.end(), 0);
    std::stable_sort(order.begin(), order.end(), [&](int a, int b) {
        return std::fabs(v[a]) < std::fabs(v[b]);
    });
    WeylElement w;
    w.src.resize(r);
    w.sign.resize(r);
    Vec rep(r);
    for (int i = 0; i < r; ++i) {
        w.src[i] = order[i];
        w.sign[i] = v[order[i]] < 0 ? -1 : 1;
        rep[i] = std::fabs(v[order[i]]);
    }
    return {rep, w};
}

Vec RootSystemBC::simpleCoords(const Vec& v) const {
    const int r = rank_;
    const double h = p_ / 2.0;
    // v_j = h (c_j - c_{j+1}) for j < r, v_r = h c_r
    Vec c(r);
    c[r - 1] = v[r - 1] / h;
    for (int j = r - 2; j >= 0; --j) c[j] = v[j] / h + c[j + 1];
    return c;
}

std::vector<LatticePoint> RootSystemBC::enumerateCone(int maxHeight) const {
    if (maxHeight < 0) throw Error(ErrKind::Domain, "maxHeight must be >= 0");
    std::vector<LatticePoint> out;
    out.reserve(binomial(maxHeight + rank_, rank_));
    std::vector<int> cur(rank_, 0);
    for (int h = 0; h <= maxHeight; ++h) {
        // lexicographic enumeration of compositions of h into rank_ parts
        std::function<void(int, int)> rec = [&](int pos, int remaining) {
            if (pos == rank_ - 1) {
                cur[pos] = remaining;
                out.push_back({cur, h});
                return;
            }
            for (int k = 0; k <= remaining; ++k) {
                cur[pos] = k;
                rec(pos + 1, remaining - k);
            }
        };
        rec(0, h);
    }
    return out;
}

double RootSystemBC::wallMargin(const Vec& x) const {
    double m = std::numeric_limits<double>::infinity();
    for (const auto& s : simpleRoots_) m = std::min(m, dot(s, x));
    return m;
}

double RootSystemBC::regularityMargin(const Vec& x) const {
    double m = std::numeric_limits<double>::infinity();
    for (const auto& a : posRoots_)
        m = std::min(m, std::fabs(dot(a.coords, x)) / std::sqrt(a.normSq));
    return m;
}

Vec RootSystemBC::embed(const LatticePoint& nu) const {
    Vec out(rank_, 0.0);
    for (int k = 0; k < rank_; ++k)
        for (int j = 0; j < rank_; ++j)
            out[j] += nu.simpleCoords[k] * simpleRoots_[k][j];
    return out;
}

} // namespace bch
