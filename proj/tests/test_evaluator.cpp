#include "doctest.h"

#include <cmath>

#include "bchyp/errors.hpp"
#include "bchyp/evaluator.hpp"
#include "bchyp/rank1.hpp"
#include "bchyp/sampling.hpp"

using namespace bch;

TEST_CASE("u and v basics") {
    RootSystemBC rs1(1);
    CHECK(uFactor(rs1, {0.0}) == 1.0);
    CHECK(vFactor(rs1, {0.0}) == 1.0);
    CHECK(uFactor(rs1, {0.8}) == doctest::Approx(std::cosh(0.8)));
    CHECK(vFactor(rs1, {0.8}) == 1.0);   // empty product in rank one

    RootSystemBC rs2(2);
    const Vec x{0.4, 1.1};
    CHECK(uFactor(rs2, x) == doctest::Approx(std::cosh(0.4) * std::cosh(1.1)));
    CHECK(vFactor(rs2, x) == doctest::Approx(std::cosh(0.7) * std::cosh(1.5)));
    CHECK(uFactor(rs2, x) >= 1.0);
    CHECK(vFactor(rs2, x) >= 1.0);
    // W-invariance
    for (const auto& w : rs2.weylElements()) {
        CHECK(uFactor(rs2, w.apply(x)) == doctest::Approx(uFactor(rs2, x)));
        CHECK(vFactor(rs2, w.apply(x)) == doctest::Approx(vFactor(rs2, x)));
    }
}

TEST_CASE("log u approaches the half-sum exponent") {
    RootSystemBC rs(3);
    // log u(x) - (1/2) sum beta_j(x) -> -r log 2 in the chamber
    const Vec x{3.0, 6.0, 9.0};
    double betaSum = 0.0;
    for (int j = 0; j < 3; ++j) betaSum += rs.p() * x[j];
    for (double t : {3.0, 5.0}) {
        const double gap = logU(rs, scale(x, t)) - 0.5 * t * betaSum;
        CHECK(gap == doctest::Approx(-3.0 * std::log(2.0)).epsilon(1e-6));
    }
}

TEST_CASE("closed-form log derivatives of u and v") {
    RootSystemBC rs(2);
    Rng rng(3);
    for (int t = 0; t < 30; ++t) {
        const Vec x{rng.uniform(-1.5, 1.5), rng.uniform(-1.5, 1.5)};
        const Vec xi{rng.uniform(-1, 1), rng.uniform(-1, 1)};
        const double h = 1e-5;
        auto num = [&](double (*f)(const RootSystemBC&, const Vec&)) {
            Vec xp = add(x, scale(xi, h)), xm = sub(x, scale(xi, h));
            return (f(rs, xp) - f(rs, xm)) / (2 * h);
        };
        CHECK(uLogDeriv(rs, xi, x) == doctest::Approx(num(logU)).epsilon(1e-8));
        CHECK(vLogDeriv(rs, xi, x) == doctest::Approx(num(logV)).epsilon(1e-8));
    }
}

TEST_CASE("cherednik operator on constants gives -rho(xi)") {
    RootSystemBC rs(2);
    Multiplicity m(2, 1, 0.5);
    const Vec xi{0.7, -0.3};
    auto one = [](const Vec&) { return Cplx(1.0, 0.0); };
    const Cplx out = cherednikApply(rs, m, xi, one, Vec{0.4, 1.1});
    CHECK(out.real() == doctest::Approx(-dot(rho(rs, m), xi)).epsilon(1e-9));
    CHECK(std::fabs(out.imag()) < 1e-12);
}

TEST_CASE("free case: T_xi = d_xi and G = e^lambda") {
    RootSystemBC rs(2);
    Multiplicity m(0, 0, 0);
    const CVec lam{Cplx(0.8, 0.0), Cplx(1.3, 0.0)};
    const Vec x{0.5, 1.2};
    auto f = [&](const Vec& y) { return std::exp(dot(lam, y)); };
    const Cplx out = cherednikApply(rs, m, Vec{1.0, 0.0}, f, x);
    CHECK(out.real() == doctest::Approx((lam[0] * f(x)).real()).epsilon(1e-9));

    const EvalResult g = gOde(rs, m, lam, x);
    CHECK(g.value.real() == doctest::Approx(std::exp(dot(lam, x)).real()).epsilon(1e-9));
}

TEST_CASE("G from the orbit engine matches the rank-one split oracle") {
    RootSystemBC rs(1);
    Rng rng(23);
    for (int t = 0; t < 8; ++t) {
        const double ms = rng.uniform(0.5, 4.0);
        const double ml = rng.uniform(-ms / 2 + 0.2, 3.0);
        const Cplx lam(rng.uniform(0.3, 2.5), rng.uniform(-0.8, 0.8));
        Multiplicity m = Multiplicity::rankOne(ms, ml);
        EvalOptions opt;
        opt.tol = 1e-11;
        for (double x : {0.35, 1.0, 2.4, -1.3}) {
            const EvalResult g = gOde(rs, m, CVec{lam}, Vec{x}, opt);
            const Cplx oracle = rank1G(ms, ml, lam, x);
            CHECK(std::abs(g.value - oracle) / std::abs(oracle) < 1e-7);
        }
    }
    // the classic quaternionic rank-one base on [0.2, 3]
    Multiplicity m = Multiplicity::rankOne(4, 3);
    for (double x = 0.2; x <= 3.0; x += 0.35) {
        const EvalResult g = gOde(rs, m, CVec{Cplx(1.7, 0)}, Vec{x}, {});
        const Cplx oracle = rank1G(4, 3, Cplx(1.7, 0), x);
        CHECK(std::abs(g.value - oracle) / std::abs(oracle) < 1e-7);
    }
}

TEST_CASE("eigen-equation residual for the Cherednik system") {
    RootSystemBC rs(2);
    Multiplicity m(2, 1, -0.5);
    const CVec lam{Cplx(1.1, 0.0), Cplx(1.9, 0.0)};
    EvalOptions opt;
    opt.tol = 1e-12;
    auto G = [&](const Vec& y) { return gOde(rs, m, lam, y, opt).value; };
    const Vec x{0.45, 1.15};
    for (int j = 0; j < 2; ++j) {
        Vec xi(2, 0.0);
        xi[j] = 1.0;
        const Cplx lhs = cherednikApply(rs, m, xi, G, x);
        const Cplx rhs = lam[j] * G(x);
        CHECK(std::abs(lhs - rhs) <=
              1e-5 * (1.0 + std::abs(lam[j])) * (1.0 + std::abs(G(x))));
    }
}

TEST_CASE("F normalization, rho point, and W-invariance") {
    RootSystemBC rs(2);
    Multiplicity m(2, 2, 1);
    CHECK(fEval(rs, m, CVec{Cplx(1, 0), Cplx(2, 0)}, Vec{0.0, 0.0}).value ==
          Cplx(1.0, 0.0));

    const CVec lamRho = toComplex(rho(rs, m));
    for (double a : {0.4, 1.0}) {
        for (double b : {0.9, 1.8}) {
            const EvalResult f = fEval(rs, m, lamRho, Vec{a, b});
            CHECK(std::abs(f.value - Cplx(1.0, 0.0)) < 1e-8);
        }
    }

    const CVec lam{Cplx(1.32, 0.4), Cplx(2.71, -0.3)};
    const Vec x{0.8, 1.7};
    const Cplx base = fEval(rs, m, lam, x).value;
    for (const auto& w : rs.weylElements()) {
        CHECK(std::abs(fEval(rs, m, w.apply(lam), x).value - base) <=
              1e-8 * std::abs(base));
        CHECK(std::abs(fEval(rs, m, lam, w.apply(x)).value - base) <=
              1e-8 * std::abs(base));
    }
}

TEST_CASE("positivity of G and F on M3 samples") {
    Rng rng(37);
    for (int t = 0; t < 10; ++t) {
        const int r = 1 + t % 2;
        RootSystemBC rs(r);
        const double ml = rng.uniform(-1.2, -0.1);
        Multiplicity m(rng.uniform(-2 * ml + 0.2, -2 * ml + 3.0),
                       r == 1 ? 0.0 : rng.uniform(0.2, 2.5), ml);
        Vec lam(r), x(r);
        for (int j = 0; j < r; ++j) {
            lam[j] = rng.uniform(-2, 2);
            x[j] = rng.uniform(-1.5, 1.5);
        }
        if (norm(x) < 0.2 || rs.regularityMargin(scale(x, 1.0 / norm(x))) < 0.05)
            continue;
        EvalOptions opt;
        OrbitIntegrator integ(rs, m, toComplex(lam), x, opt);
        integ.advanceTo(norm(x));
        for (const auto& v : integ.state().values) {
            CHECK(v.real() > 0.0);
            CHECK(std::fabs(v.imag()) <= 1e-10 * (1.0 + std::fabs(v.real())));
        }
    }
}

TEST_CASE("wall handling: F evaluates exactly on singular x") {
    RootSystemBC rs(2);
    Multiplicity m(2, 2, 1);
    const CVec lam{Cplx(1.32, 0.0), Cplx(2.71, 0.0)};
    const EvalResult onWall = fEval(rs, m, lam, Vec{1.1, 1.1});
    CHECK(onWall.method == "ode");
    CHECK(onWall.perturbation == 0.0);
    // consistent with nearby interior values
    const Cplx left = fEval(rs, m, lam, Vec{1.09, 1.11}).value;
    CHECK(std::abs(onWall.value - left) < 1e-3 * std::abs(left));
    // and continuous across the wall: symmetric probes agree to higher order
    const Cplx right = fEval(rs, m, lam, Vec{1.11, 1.09}).value;
    CHECK(std::abs(left - right) < 1e-10 * std::abs(left));   // same orbit

    // G itself refuses singular points
    CHECK_THROWS_AS(gOde(rs, m, lam, Vec{1.1, 1.1}), Error);
}

TEST_CASE("deformed evaluation factorizes through u and v") {
    RootSystemBC rs(2);
    Multiplicity m(2, 2, 1);
    const CVec lam{Cplx(1.32, 0.0), Cplx(2.71, 0.0)};
    const Vec x{0.8, 1.7};

    const DeformedEval same = fDeformed(rs, m, Deformation(0, 0), lam, x);
    const EvalResult plain = fEval(rs, m, lam, x);
    CHECK(std::abs(same.value - plain.value) < 1e-10 * std::abs(plain.value));

    const Deformation d(0.75, 0.4);
    const DeformedEval def = fDeformed(rs, m, d, lam, x);
    const Multiplicity md = deform(m, d, 2);
    const Cplx expect = std::exp(-d.ell * logU(rs, x) - d.ellTilde * logV(rs, x)) *
                        fEval(rs, md, lam, x).value;
    CHECK(std::abs(def.value - expect) < 1e-9 * std::abs(expect));

    // F = |W|^{-1} sum_w G for the deformed functions as well
    Cplx acc = 0.0;
    for (const auto& w : rs.weylElements())
        acc += gDeformed(rs, m, d, lam, w.inverse().apply(x)).value;
    acc /= double(rs.weylOrder());
    CHECK(std::abs(acc - def.value) < 1e-7 * std::abs(def.value));

    CHECK_THROWS_AS(fDeformed(rs, Multiplicity(0, 1, 0), Deformation(0, -2), lam, x),
                    Error);
}

TEST_CASE("ell symmetry of the deformed functions") {
    Rng rng(51);
    for (int t = 0; t < 6; ++t) {
        const int r = 1 + t % 2;
        RootSystemBC rs(r);
        Multiplicity m(rng.uniform(0.5, 3.0), r == 1 ? 0.0 : rng.uniform(0.5, 2.5),
                       rng.uniform(1.0, 2.5));
        const double ell = rng.uniform(-m.ms / 2, m.ms / 2 + m.ml);
        const double ellT = r == 1 ? 0.0 : rng.uniform(0.0, 0.8);
        const double ellSym = -ell + m.ml - 1.0;
        CVec lam(r);
        for (int j = 0; j < r; ++j) lam[j] = Cplx(rng.uniform(0.4, 2.2) + 0.37 * j, 0.0);
        const Vec x = r == 1 ? Vec{1.1} : Vec{0.6, 1.4};

        const Cplx a = fDeformed(rs, m, Deformation(ell, ellT), lam, x).value;
        const Cplx b = fDeformed(rs, m, Deformation(ellSym, ellT), lam, x).value;
        CHECK(std::abs(a - b) <= 1e-8 * std::abs(a));
    }
    // Hermitian case m_l = 1: ell and -ell give the same function
    RootSystemBC rs(2);
    Multiplicity m(2, 2, 1);
    const CVec lam{Cplx(1.21, 0.0), Cplx(2.43, 0.0)};
    const Vec x{0.7, 1.5};
    const Cplx a = fDeformed(rs, m, Deformation(1.4, 0), lam, x).value;
    const Cplx b = fDeformed(rs, m, Deformation(-1.4, 0), lam, x).value;
    CHECK(std::abs(a - b) <= 1e-8 * std::abs(a));
}

TEST_CASE("deformed operator: conjugated and explicit forms agree") {
    RootSystemBC rs(2);
    Multiplicity m(2, 1, 1.5);
    const Deformation d(0.6, 0.35);
    const Vec x{0.5, 1.3};
    const Vec xi{0.8, -0.4};
    auto test = [](const Vec& y) {
        return Cplx(std::exp(0.3 * y[0] - 0.2 * y[1]) + 0.1 * y[0] * y[1]);
    };
    // route 1: T_xi(m(l,lt)) + l u^{-1} du + lt v^{-1} dv
    const Cplx viaExplicit = cherednikApplyDeformed(rs, m, d, xi, test, x);
    // route 2: u^{-l} v^{-lt} T_xi(m(l,lt)) [u^l v^lt f]
    const Multiplicity md = deform(m, d, 2);
    auto conjugated = [&](const Vec& y) {
        return std::exp(d.ell * logU(rs, y) + d.ellTilde * logV(rs, y)) * test(y);
    };
    const Cplx viaConj =
        std::exp(-d.ell * logU(rs, x) - d.ellTilde * logV(rs, x)) *
        cherednikApply(rs, md, xi, conjugated, x);
    CHECK(std::abs(viaExplicit - viaConj) <= 1e-8 * (1.0 + std::abs(viaExplicit)));
}

TEST_CASE("f_sigma values and the deformation identity") {
    RootSystemBC rs(2);
    CHECK(fSigma(rs, Multiplicity(0, 0, 0), Vec{0.4, 1.0}) == 0.0);
    CHECK_THROWS_AS(fSigma(rs, Multiplicity(1, 1, 1), Vec{0.5, 0.5}), Error);

    // f_Sigma(m(l,lt)) - f_Sigma(m(0,lt)) = (p^2/4) l (l + 1 - m_l) sum_j sech^2(beta_j/2)
    Rng rng(61);
    for (int t = 0; t < 50; ++t) {
        const int r = 1 + t % 2;
        RootSystemBC rsr(r);
        Multiplicity m(rng.uniform(0, 3), r == 1 ? 0.0 : rng.uniform(0, 3),
                       rng.uniform(0, 3));
        const double ell = rng.uniform(-2, 2);
        const double ellT = r == 1 ? 0.0 : rng.uniform(-m.mm / 2, 1.5);
        Vec x(r);
        for (int j = 0; j < r; ++j) x[j] = rng.uniform(0.3, 1.8) + 1.7 * j;
        const double lhs = fSigma(rsr, deform(m, Deformation(ell, ellT), r), x) -
                           fSigma(rsr, deform(m, Deformation(0, ellT), r), x);
        double sech = 0.0;
        for (int j = 0; j < r; ++j)
            sech += 1.0 / std::pow(std::cosh(rsr.p() * x[j] / 2.0), 2);
        const double rhs =
            rsr.p() * rsr.p() / 4.0 * ell * (ell + 1.0 - m.ml) * sech;
        CHECK(std::fabs(lhs - rhs) <= 1e-10 * (1.0 + std::fabs(rhs)));
    }
}

TEST_CASE("conjugation identity against a smooth bump") {
    RootSystemBC rs(2);
    Multiplicity m(1.5, 1.0, 0.75);
    auto bump = [](const Vec& y) {
        return std::exp(-0.4 * ((y[0] - 0.8) * (y[0] - 0.8) +
                                (y[1] - 1.6) * (y[1] - 1.6)));
    };
    CHECK(conjugationResidual(rs, m, Vec{0.7, 1.5}, bump) < 1e-4);
}

TEST_CASE("laplacian residuals") {
    RootSystemBC rs(2);
    // free case: F = |W|^{-1} sum_w e^{(w lambda)(x)}
    {
        Multiplicity m(0, 0, 0);
        const Vec lam{0.9, 1.7};
        auto f = [&](const Vec& y) {
            Cplx acc = 0.0;
            for (const auto& w : rs.weylElements()) acc += std::exp(Cplx(dot(w.apply(lam), y)));
            return acc / double(rs.weylOrder());
        };
        CHECK(laplacianResidual(rs, m, toComplex(lam), Vec{0.6, 1.3}, f) < 1e-7);
    }
    // lambda = rho, F identically 1: residual vanishes up to roundoff
    {
        Multiplicity m(2, 2, 1);
        auto f = [](const Vec&) { return Cplx(1.0, 0.0); };
        CHECK(laplacianResidual(rs, m, toComplex(rho(rs, m)), Vec{0.6, 1.3}, f) < 1e-12);
    }
    // engine value at a generic interior point
    {
        Multiplicity m(2, 2, 1);
        EvalOptions opt;
        opt.tol = 1e-12;
        CHECK(laplacianResidual(rs, m, CVec{Cplx(1.32, 0), Cplx(2.71, 0)},
                                Vec{0.8, 1.7}, opt) < 1e-5);
    }
}

TEST_CASE("duplication bounds for u and v powers") {
    RootSystemBC rs(2);
    Rng rng(71);
    for (int t = 0; t < 200; ++t) {
        const double ell = rng.uniform(0, 2.5), ellT = rng.uniform(0, 2.5);
        Vec x(2), x1(2);
        x[0] = rng.uniform(0, 1.2);
        x[1] = x[0] + rng.uniform(0, 1.2);
        x1[0] = rng.uniform(0, 1.2);
        x1[1] = x1[0] + rng.uniform(0, 1.2);
        const Vec sum = add(x, x1);
        double betaSum = 0.0;
        for (int j = 0; j < 2; ++j) betaSum += rs.p() * x1[j];
        const double uu = ell * (logU(rs, x) + logU(rs, x1));
        const double us = ell * logU(rs, sum);
        CHECK(uu <= us + 1e-12 * (1 + std::fabs(us)));
        CHECK(us <= ell * logU(rs, x) + ell / 2.0 * betaSum + 1e-12);

        const Vec mid = middleRootSum(rs);
        const double vv = ellT * (logV(rs, x) + logV(rs, x1));
        const double vs = ellT * logV(rs, sum);
        CHECK(vv <= vs + 1e-12 * (1 + std::fabs(vs)));
        CHECK(vs <= ellT * logV(rs, x) + ellT / 2.0 * dot(mid, x1) + 1e-12);
    }
}

TEST_CASE("resonance-free bootstrap across M0 and explicit failure outside") {
    RootSystemBC rs(2);
    // m in M0 keeps the shell matrices k I - A_{-1} invertible
    Multiplicity ok(3, 1, -1);
    CHECK_NOTHROW(gOde(rs, ok, CVec{Cplx(1.2, 0), Cplx(2.1, 0)}, Vec{0.5, 1.1}));
    // outside M0 the domain guard fires first
    CHECK_THROWS_AS(gOde(rs, Multiplicity(1, 0.5, -2), CVec{Cplx(1, 0), Cplx(2, 0)},
                         Vec{0.5, 1.1}),
                    Error);
}
