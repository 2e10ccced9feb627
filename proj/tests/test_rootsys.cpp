#include "doctest.h"

#include <cmath>
#include <set>

#include "bchyp/errors.hpp"
#include "bchyp/rootsys.hpp"
#include "bchyp/sampling.hpp"

using namespace bch;

namespace {

bool sameVec(const Vec& a, const Vec& b, double tol = 1e-12) {
    if (a.size() != b.size()) return false;
    for (std::size_t i = 0; i < a.size(); ++i)
        if (std::fabs(a[i] - b[i]) > tol) return false;
    return true;
}

} // namespace

TEST_CASE("construction and counts") {
    for (int r = 1; r <= 4; ++r) {
        RootSystemBC rs(r);
        CHECK(rs.positiveRoots().size() == std::size_t(r) * (r + 1));
        std::size_t w = 1;
        for (int k = 1; k <= r; ++k) w *= 2 * k;
        CHECK(rs.weylOrder() == w);
    }
    RootSystemBC rs3(3);
    CHECK(rs3.weylOrder() == 48);

    CHECK_THROWS_AS(RootSystemBC(0), Error);
    CHECK_THROWS_AS(RootSystemBC(2, -1.0), Error);
    CHECK_THROWS_AS(RootSystemBC(7), Error);
}

TEST_CASE("rank one with p=2 has roots e1 and 2e1") {
    RootSystemBC rs(1);
    std::multiset<double> lens;
    for (const auto& a : rs.positiveRoots()) lens.insert(a.coords[0]);
    CHECK(lens == std::multiset<double>{1.0, 2.0});
    CHECK(rs.weylOrder() == 2);
}

TEST_CASE("rank two root inventory") {
    RootSystemBC rs(2);
    // {e1, e2, 2e1, 2e2, e2 +- e1}
    int shortCount = 0, midCount = 0, longCount = 0;
    for (const auto& a : rs.positiveRoots()) {
        if (a.cls == RootClass::Short) ++shortCount;
        if (a.cls == RootClass::Middle) ++midCount;
        if (a.cls == RootClass::Long) ++longCount;
    }
    CHECK(shortCount == 2);
    CHECK(midCount == 2);
    CHECK(longCount == 2);
    CHECK(rs.positiveRoots().size() == 6);
}

TEST_CASE("long roots orthogonal with common norm p") {
    RootSystemBC rs(3, 1.7);
    std::vector<Vec> longs;
    for (const auto& a : rs.positiveRoots())
        if (a.cls == RootClass::Long) longs.push_back(a.coords);
    REQUIRE(longs.size() == 3);
    for (std::size_t i = 0; i < longs.size(); ++i) {
        CHECK(norm(longs[i]) == doctest::Approx(1.7).epsilon(1e-14));
        for (std::size_t j = i + 1; j < longs.size(); ++j)
            CHECK(std::fabs(dot(longs[i], longs[j])) < 1e-14);
    }
}

TEST_CASE("weyl action is orthogonal and permutes the root set") {
    Rng rng(7);
    for (int r = 1; r <= 3; ++r) {
        RootSystemBC rs(r);
        for (const auto& w : rs.weylElements()) {
            Vec v(r);
            for (int j = 0; j < r; ++j) v[j] = rng.uniform(-2, 2);
            CHECK(norm(w.apply(v)) == doctest::Approx(norm(v)).epsilon(1e-14));
            for (const auto& a : rs.positiveRoots()) {
                const Vec img = w.apply(a.coords);
                bool found = false;
                for (const auto& b : rs.positiveRoots())
                    if (sameVec(img, b.coords) || sameVec(img, scale(b.coords, -1.0)))
                        found = true;
                CHECK(found);
            }
        }
    }
}

TEST_CASE("group closure and composition table") {
    for (int r = 1; r <= 3; ++r) {
        RootSystemBC rs(r);
        const int n = static_cast<int>(rs.weylOrder());
        for (int a = 0; a < n; ++a) {
            CHECK(rs.inverseIndex(a) >= 0);
            for (int b = 0; b < n; ++b) CHECK(rs.composeIndex(a, b) >= 0);
        }
        // spot-check associativity on a few triples
        Rng rng(3);
        for (int t = 0; t < 40; ++t) {
            const int a = rng.uniformInt(0, n - 1), b = rng.uniformInt(0, n - 1),
                      c = rng.uniformInt(0, n - 1);
            CHECK(rs.composeIndex(rs.composeIndex(a, b), c) ==
                  rs.composeIndex(a, rs.composeIndex(b, c)));
        }
    }
}

TEST_CASE("dominant representative") {
    RootSystemBC rs(2);
    const Vec v0{-3.0, 1.0};
    auto [rep, w] = rs.dominantRepresentative(v0);
    CHECK(sameVec(rep, {1.0, 3.0}));
    CHECK(sameVec(w.apply(v0), rep));

    auto [zero, wz] = rs.dominantRepresentative({0.0, 0.0});
    CHECK(sameVec(zero, {0.0, 0.0}));
    CHECK(wz.isIdentity());

    auto [same, ws] = rs.dominantRepresentative({2.0, 2.0});
    CHECK(sameVec(same, {2.0, 2.0}));
    CHECK(ws.isIdentity());

    // idempotent and W-invariant
    Rng rng(11);
    for (int t = 0; t < 200; ++t) {
        Vec v{rng.uniform(-2, 2), rng.uniform(-2, 2)};
        const Vec rep1 = rs.dominantRepresentative(v).first;
        CHECK(sameVec(rs.dominantRepresentative(rep1).first, rep1));
        for (const auto& u : rs.weylElements())
            CHECK(sameVec(rs.dominantRepresentative(u.apply(v)).first, rep1));
    }
}

TEST_CASE("simple coordinates") {
    for (int r = 1; r <= 4; ++r) {
        RootSystemBC rs(r);
        // sigma_1 -> (1,0,...)
        Vec e1(r, 0.0);
        e1[0] = 1.0;
        CHECK(sameVec(rs.simpleCoords(rs.simpleRoots()[0]), e1));
        // beta_j = 2(sigma_1 + ... + sigma_j)
        for (int j = 0; j < r; ++j) {
            Vec beta(r, 0.0);
            beta[j] = rs.p();
            Vec c = rs.simpleCoords(beta);
            for (int k = 0; k < r; ++k) CHECK(c[k] == doctest::Approx(k <= j ? 2.0 : 0.0));
        }
        // every positive root has nonnegative integer simple coordinates
        for (const auto& a : rs.positiveRoots()) {
            const Vec c = rs.simpleCoords(a.coords);
            for (double v : c) {
                CHECK(v >= -1e-12);
                CHECK(std::fabs(v - std::round(v)) < 1e-12);
            }
        }
    }
    // (beta_j + beta_i)/2: coordinates 2 up to i, then 1 up to j
    RootSystemBC rs(3);
    Vec root{1.0, 0.0, 1.0};   // (beta_3 + beta_1)/2 with p = 2
    Vec c = rs.simpleCoords(root);
    CHECK(c[0] == doctest::Approx(2.0));
    CHECK(c[1] == doctest::Approx(1.0));
    CHECK(c[2] == doctest::Approx(1.0));
}

TEST_CASE("cone enumeration") {
    RootSystemBC rs(2);
    auto pts0 = rs.enumerateCone(0);
    REQUIRE(pts0.size() == 1);
    CHECK(pts0[0].simpleCoords == std::vector<int>{0, 0});

    auto pts1 = rs.enumerateCone(1);
    REQUIRE(pts1.size() == 3);
    CHECK(pts1[1].simpleCoords == std::vector<int>{0, 1});
    CHECK(pts1[2].simpleCoords == std::vector<int>{1, 0});

    CHECK(rs.enumerateCone(10).size() == 66);   // C(12, 2)
    for (int r = 1; r <= 3; ++r) {
        RootSystemBC rsr(r);
        for (int h : {0, 3, 7})
            CHECK(rsr.enumerateCone(h).size() == binomial(h + r, r));
    }
}

TEST_CASE("wall margin and regularity margin") {
    RootSystemBC rs(2);
    CHECK(rs.wallMargin({0.5, 1.0}) == doctest::Approx(0.5));
    CHECK(rs.wallMargin({1.0, 1.0}) == doctest::Approx(0.0));
    CHECK(rs.regularityMargin({1.0, 1.0}) == doctest::Approx(0.0));
    CHECK(rs.regularityMargin({0.3, 0.9}) > 0.0);
}
