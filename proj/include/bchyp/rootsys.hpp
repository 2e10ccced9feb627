#ifndef BCHYP_ROOTSYS_HPP
#define BCHYP_ROOTSYS_HPP

#include <cstdint>
#include <map>
#include <vector>

#include "bchyp/common.hpp"

namespace bch {

// Signed permutation acting on coordinate vectors: (w.v)[i] = sign[i] * v[src[i]].
struct WeylElement {
    std::vector<int> src;
    std::vector<int> sign;

    static WeylElement identity(int r);

    bool isIdentity() const;

    Vec apply(const Vec& v) const;
    CVec apply(const CVec& v) const;

    // Composition a.then(b)? No: compose(a,b) = a o b, acting as a(b(v)).
    static WeylElement compose(const WeylElement& a, const WeylElement& b);
    WeylElement inverse() const;

    bool operator==(const WeylElement& o) const { return src == o.src && sign == o.sign; }
};

enum class RootClass { Short, Middle, Long };

struct PositiveRoot {
    Vec coords;          // e-basis coordinates of the root covector
    RootClass cls;
    Vec simpleCoords;    // coordinates in the simple-root basis (nonnegative integers)
    WeylElement refl;    // reflection r_alpha as a signed permutation
    double normSq;       // <alpha, alpha>
};

// Lattice cone point nu = sum n_k sigma_k with nonnegative integer coordinates.
struct LatticePoint {
    std::vector<int> simpleCoords;
    int height;
};

// Root system of type BC_r realized in the orthonormal basis e_j = beta_j / p:
// short roots (p/2) e_j, middle roots (p/2)(e_j +- e_i) for i < j, long roots
// p e_j.  The Weyl group is the full group of signed permutations, stored
// explicitly.  C_r and (A_1)^r cases are handled through zero multiplicities,
// never by removing roots.
class RootSystemBC {
  public:
    RootSystemBC(int rank, double longNorm = 2.0);

    int rank() const { return rank_; }
    double p() const { return p_; }

    const std::vector<PositiveRoot>& positiveRoots() const { return posRoots_; }
    const std::vector<Vec>& simpleRoots() const { return simpleRoots_; }
    const std::vector<WeylElement>& weylElements() const { return weyl_; }
    std::size_t weylOrder() const { return weyl_.size(); }

    int weylIndex(const WeylElement& w) const;      // -1 if not found
    int composeIndex(int a, int b) const;           // index of w_a o w_b
    int inverseIndex(int a) const;

    // index of r_alpha o w for positive root #alphaIdx
    int reflectIndex(int alphaIdx, int w) const { return reflTimes_[alphaIdx][w]; }

    Vec weylAct(const WeylElement& w, const Vec& v) const { return w.apply(v); }
    CVec weylAct(const WeylElement& w, const CVec& v) const { return w.apply(v); }

    // Representative in the closed dominant chamber 0 <= v_1 <= ... <= v_r,
    // together with an element w such that w.v equals the representative.
    std::pair<Vec, WeylElement> dominantRepresentative(const Vec& v) const;

    // Coordinates of v in the simple-root basis (exact back-substitution).
    Vec simpleCoords(const Vec& v) const;

    // lambda_alpha = <lambda, alpha> / <alpha, alpha>
    double pairingNormalized(const Vec& lambda, const PositiveRoot& a) const {
        return dot(lambda, a.coords) / a.normSq;
    }
    Cplx pairingNormalized(const CVec& lambda, const PositiveRoot& a) const {
        return dot(lambda, a.coords) / a.normSq;
    }

    // All cone points of height <= maxHeight, sorted by height then lex.
    std::vector<LatticePoint> enumerateCone(int maxHeight) const;

    // min over simple roots of sigma_k(x); positive iff x is strictly
    // dominant-regular.
    double wallMargin(const Vec& x) const;

    // min over positive roots of |alpha(x)| / |alpha|
    double regularityMargin(const Vec& x) const;

    Vec embed(const LatticePoint& nu) const;   // nu as a covector

  private:
    int rank_;
    double p_;
    std::vector<PositiveRoot> posRoots_;
    std::vector<Vec> simpleRoots_;
    std::vector<WeylElement> weyl_;
    std::map<std::vector<int>, int> weylLookup_;
    std::vector<std::vector<int>> reflTimes_;   // [root][w] -> index of r_alpha o w

    std::vector<int> encode(const WeylElement& w) const;
};

std::uint64_t binomial(int n, int k);

} // namespace bch

#endif
