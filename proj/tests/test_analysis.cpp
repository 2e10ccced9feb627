#include "doctest.h"

#include <cmath>

#include "bchyp/analysis.hpp"
#include "bchyp/errors.hpp"
#include "bchyp/report.hpp"

using namespace bch;

TEST_CASE("hull membership: fast test basics") {
    RootSystemBC rs(2);
    const Vec rhoV{2.0, 4.0};
    CHECK(inHullFast(rs, rhoV, rhoV));                 // vertex
    CHECK(inHullFast(rs, rhoV, Vec{0.0, 0.0}));        // center
    CHECK(inHullFast(rs, rhoV, Vec{-2.0, 4.0}));       // another vertex
    CHECK(inHullFast(rs, rhoV, Vec{1.0, 1.0}));
    CHECK(!inHullFast(rs, rhoV, Vec{5.0, 0.0}));
    CHECK(!inHullFast(rs, rhoV, Vec{0.0, 4.5}));
}

TEST_CASE("hull fast test agrees with the LP oracle") {
    Rng rng(99);
    for (int r = 1; r <= 3; ++r) {
        RootSystemBC rs(r);
        Multiplicity m(2.0, r == 1 ? 0.0 : 1.5, 0.5);
        const Vec rhoV = rho(rs, m);
        int compared = 0;
        for (int i = 0; i < 1000; ++i) {
            Vec xi(r);
            for (int j = 0; j < r; ++j)
                xi[j] = rng.uniform(-1.4, 1.4) * (1.0 + norm(rhoV));
            double margin = 0.0;
            const bool fast = inHullFast(rs, rhoV, xi, &margin);
            if (std::fabs(margin) <= 1e-9 * (1.0 + norm(rhoV))) continue;   // band
            ++compared;
            CHECK(fast == inHullLP(rs, rhoV, xi));
        }
        CHECK(compared > 900);
    }
}

TEST_CASE("boundedness classifier hypotheses and verdicts") {
    RootSystemBC rs(2);
    Multiplicity m(2, 2, 1);
    const Vec rhoV = rho(rs, m);

    HullQuery atRho = isBounded(rs, m, toComplex(rhoV));
    CHECK(atRho.bounded);
    CHECK(atRho.hypothesisSatisfied);

    CVec outside{Cplx(1.2 * rhoV[0], 0.0), Cplx(1.2 * rhoV[1], 0.0)};
    CHECK(!isBounded(rs, m, outside).bounded);

    // imaginary parts are irrelevant
    CVec tube{Cplx(0.5, 11.0), Cplx(1.0, -7.0)};
    CHECK(isBounded(rs, m, tube).bounded);

    // hypothesis flags
    HullQuery bad = isBounded(rs, Multiplicity(0, 1, 0.5), toComplex(rhoV));
    CHECK(!bad.hypothesisSatisfied);

    // deformed classifier uses rho(m(2*elltilde))
    Multiplicity base(0, 0, 2);
    RootSystemBC rs3(3);
    HullQuery def = isBounded(rs3, base, toComplex(rhoDeformedHull(rs3, base, 0.5)),
                              Deformation(0.0, 0.5));
    CHECK(def.bounded);
    CHECK(def.hypothesisSatisfied);
    for (int j = 0; j < 3; ++j)
        CHECK(def.hullVector[j] == doctest::Approx(2.0 + 2.0 * j));

    HullQuery outOfEll = isBounded(rs3, base, toComplex(rhoDeformedHull(rs3, base, 0.5)),
                                   Deformation(5.0, 0.5));
    CHECK(!outOfEll.hypothesisSatisfied);

    // ell = ell_max: conclusive in rank one, advisory in higher rank
    RootSystemBC rs1(1);
    Multiplicity m1 = Multiplicity::rankOne(2, 2);
    auto [lo1, hi1] = ellRange(m1);
    CHECK(isBounded(rs1, m1, CVec{Cplx(0.2, 0.0)}, Deformation(hi1, 0.0))
              .hypothesisSatisfied);
    Multiplicity m2full(2, 1, 2);
    auto [lo2, hi2] = ellRange(m2full);
    CHECK(!isBounded(rs, m2full, CVec{Cplx(0.2, 0.0), Cplx(0.4, 0.0)},
                     Deformation(hi2, 0.5))
               .hypothesisSatisfied);
}

TEST_CASE("sharp ratio on a rank-one interior M3 sample") {
    RootSystemBC rs(1);
    Multiplicity m = Multiplicity::rankOne(4.0, -1.0);   // interior of M3
    RaySpec ray;
    ray.x0 = {0.6};
    ray.xhat = {1.0};
    for (double t = 0.0; t <= 20.0; t += 2.0) ray.tGrid.push_back(t);

    // strictly dominant lambda0: ratio converges to c(m; lambda0)
    const Vec lam0{1.37};
    SharpRatioResult res = sharpRatio(rs, m, lam0, ray);
    CHECK(res.report.passed);
    const Cplx cval = cfunction(rs, m, toComplex(lam0)).value;
    CHECK(std::fabs(res.ratioLimit - cval.real()) < 2e-3 * std::fabs(cval.real()));

    // lambda0 = 0: polynomial factor (1 + alpha(x)) active, ratio stays bounded
    SharpRatioResult atZero = sharpRatio(rs, m, Vec{0.0}, ray);
    CHECK(atZero.report.passed);
}

TEST_CASE("free-case sharp ratio approaches the orbit-count constant") {
    // m = 0 dressed: F = |W|^{-1} sum_w e^{(w l)(x)}; for strictly dominant l
    // the ratio F e^{-l(x)} tends to 1/|W|
    RootSystemBC rs(2);
    Multiplicity m(0, 0, 0);
    RaySpec ray;
    ray.x0 = {0.5, 1.1};
    ray.xhat = {1.0, 2.1};
    for (double t = 0.0; t <= 12.0; t += 1.5) ray.tGrid.push_back(t);
    SharpRatioResult res = sharpRatio(rs, m, Vec{1.1, 2.3}, ray);
    CHECK(res.ratioLimit == doctest::Approx(1.0 / 8.0).epsilon(1e-3));
}

TEST_CASE("b0 probe: generic dominant limit equals c, vanishing c decays") {
    RootSystemBC rs(1);
    RaySpec ray;
    ray.x0 = {0.7};
    ray.xhat = {1.0};
    for (double t = 0.0; t <= 24.3; t += 2.7) ray.tGrid.push_back(t);

    Multiplicity m1 = Multiplicity::rankOne(3.0, 0.5);
    B0ProbeResult pr = b0Probe(rs, m1, CVec{Cplx(1.83, 0.0)}, ray);
    CHECK(pr.b0NonsingularFlag);
    CHECK(!pr.cVanishes);
    CHECK(pr.report.passed);

    // M0 \ M1 with a vanishing c-factor at a dominant generic lambda0:
    // m = (6, -3.5) has m_s + 2 m_l = -1 (not M1) but m_s + m_l = 2.5 (M0);
    // the denominator argument l/2 + m_s/4 + m_l/2 = l/2 - 1/4 hits the pole
    // at l = 1/2 exactly
    Multiplicity m0 = Multiplicity::rankOne(6.0, -3.5);
    CHECK(classify(m0, 1).M0);
    CHECK(!classify(m0, 1).M1);
    CFuncValue cv = cfunction(rs, m0, CVec{Cplx(0.5, 0.0)});
    CHECK(cv.zeroFlag);
    CHECK(!b0Nonsingular(rs, m0, CVec{Cplx(0.5, 0.0)}));
    B0ProbeResult vz = b0Probe(rs, m0, CVec{Cplx(0.5, 0.0)}, ray);
    CHECK(vz.cVanishes);
    CHECK(vz.report.passed);   // normalized value decays along the ray

    // a genuinely vanishing dominant case: rank one m = (2, -1) has rho = 0;
    // ctilde(rho) is singular there, so the classifier refuses (NotRegular)
    CHECK_THROWS_AS(b0Probe(rs, Multiplicity::rankOne(2.0, -1.0),
                            CVec{Cplx(0.8, 0.0)}, ray),
                    Error);
}

TEST_CASE("ray probes: bounded inside the hull, blow-up outside") {
    RootSystemBC rs(2);
    Multiplicity m(2, 2, 1);
    const Vec rhoV = rho(rs, m);
    std::vector<double> grid;
    for (double t = 0.5; t <= 20.0; t += 1.3) grid.push_back(t);
    const Vec xhat = bestDominantDirection(rs, rhoV);

    // inside: lambda = 0.6 rho + imaginary shift
    CVec inside{Cplx(0.6 * rhoV[0], 1.1), Cplx(0.6 * rhoV[1], -0.7)};
    CHECK(raySup(rs, m, std::nullopt, inside, xhat, grid) <=
          std::sqrt(double(rs.weylOrder())) + 1e-6);

    // outside: lambda = 1.35 rho along its own best direction
    const Vec lamOut = scale(rhoV, 1.35);
    const Vec dir = bestDominantDirection(rs, sub(lamOut, rhoV));
    std::vector<double> grid40;
    for (double t = 2.0; t <= 40.0; t += 2.0) grid40.push_back(t);
    CHECK(rayBlowup(rs, m, std::nullopt, toComplex(lamOut), dir, grid40));
}

TEST_CASE("estimate suite smoke run") {
    SuiteConfig cfg;
    cfg.samples = 6;
    cfg.seed = 7;
    cfg.maxRank = 2;
    const auto reports = estimateSuite(cfg);
    CHECK(reports.size() == 11);
    for (const auto& r : reports) {
        CAPTURE(r.checkName);
        CAPTURE(r.worstViolation);
        CHECK(r.passed);
        CHECK(r.samplesTried >= cfg.samples);
    }
    // determinism of the report serialization, also across the thread pool
    const auto again = estimateSuite(cfg);
    CHECK(checksToCsv(reports) == checksToCsv(again));
    CHECK(samplesToCsv(reports) == samplesToCsv(again));
    SuiteConfig threaded = cfg;
    threaded.threads = 3;
    CHECK(samplesToCsv(estimateSuite(threaded)) == samplesToCsv(reports));
}

TEST_CASE("classification with an explicit margin") {
    // margin demands strict interior membership
    Multiplicity onBoundary(2, 1, 0);   // m_l = 0 sits on the M2/M3 boundary
    CHECK(classify(onBoundary, 2).M2);
    CHECK(classify(onBoundary, 2).M3);
    CHECK(!classify(onBoundary, 2, 0.1).M2);
    CHECK(!classify(onBoundary, 2, 0.1).M3);
    Multiplicity interior(2, 1, 1);
    CHECK(classify(interior, 2, 0.5).M2);
    CHECK(!classify(interior, 2, 1.5).M2);
}

TEST_CASE("report serialization shapes") {
    CheckReport r;
    r.checkName = "demo";
    r.hypothesisSet = "none";
    r.samplesTried = 3;
    r.declaredTolerance = 1e-9;
    r.record(2e-9, "witness, with comma");
    const std::string csv = checksToCsv({r});
    CHECK(csv.find("bchyp-report-v1") != std::string::npos);
    CHECK(csv.find("\"witness, with comma\"") != std::string::npos);
    CHECK(csv.find("demo") != std::string::npos);
    const std::string json = checksToJson({r}, 42);
    CHECK(json.find("\"all_passed\": false") != std::string::npos);

    ScanRow row;
    row.m = Multiplicity(1, 2, 3);
    row.lambda = {Cplx(1.5, -0.5)};
    row.x = {0.25};
    row.value = Cplx(0.125, 0.0);
    row.method = "series";
    const std::string scan = scanToCsv({row}, 1);
    CHECK(scan.find("lambda_re_1") != std::string::npos);
    CHECK(scan.find("0.125") != std::string::npos);
}
