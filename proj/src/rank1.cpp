#include "bchyp/rank1.hpp"

#include <cmath>
#include <vector>

#include "bchyp/errors.hpp"

namespace bch {

namespace {

// coth z - 1/z = sum_k c_k z^{2k-1}
const double kCoth[10] = {
    1.0 / 3.0,       -1.0 / 45.0,        2.0 / 945.0,     -1.0 / 4725.0,
    2.0 / 93555.0,   -1382.0 / 638512875.0, 4.0 / 18243225.0,
    -3617.0 / 162820783125.0, 87734.0 / 38979295480125.0,
    -174611.0 / 764959859550625.0,
};

struct Rank1Ode {
    double ms, ml, rho;
    Cplx eig;   // lambda^2 - rho^2

    Rank1Ode(double ms_, double ml_, Cplx lambda) : ms(ms_), ml(ml_) {
        rho = ms / 2.0 + ml;
        eig = lambda * lambda - rho * rho;
    }

    double coeff(double x) const {   // m_s coth x + 2 m_l coth 2x
        return ms / std::tanh(x) + 2.0 * ml / std::tanh(2.0 * x);
    }

    void rhs(double x, const Cplx y[2], Cplx dy[2]) const {
        dy[0] = y[1];
        dy[1] = eig * y[0] - coeff(x) * y[1];
    }

    // Even Taylor solution around the regular-singular origin:
    //   n (n - 1 + A) a_n = eig a_{n-2} - sum_k b_{2k-1} (n - 2k) a_{n-2k},
    // with A = m_s + m_l and b_{2k-1} = c_k (m_s + m_l 4^k).
    std::vector<Cplx> taylor(int order) const {
        const double A = ms + ml;
        std::vector<double> b(order / 2 + 1, 0.0);
        double pow4 = 4.0;
        for (std::size_t k = 1; k < b.size() && k <= 10; ++k) {
            b[k] = kCoth[k - 1] * (ms + ml * pow4);
            pow4 *= 4.0;
        }
        std::vector<Cplx> a(order + 1, Cplx(0.0, 0.0));
        a[0] = 1.0;
        for (int n = 2; n <= order; n += 2) {
            Cplx acc = eig * a[n - 2];
            for (int k = 1; 2 * k <= n && k < int(b.size()); ++k)
                acc -= b[k] * double(n - 2 * k) * a[n - 2 * k];
            a[n] = acc / (double(n) * (double(n) - 1.0 + A));
        }
        return a;
    }

    void taylorEval(const std::vector<Cplx>& a, double x, Cplx y[2]) const {
        Cplx f = 0.0, fp = 0.0;
        for (int n = static_cast<int>(a.size()) - 1; n >= 1; --n) {
            f = f * x + a[n];
            fp = fp * x + double(n) * a[n];
        }
        y[0] = f * x + a[0];
        y[1] = fp;
    }
};

// adaptive Dormand-Prince 5(4) on the 2-dim system
void integrateAdaptive(const Rank1Ode& ode, double x0, double x1, Cplx y[2], double tol) {
    static const double c2 = .2, c3 = .3, c4 = .8, c5 = 8.0 / 9;
    static const double a21 = .2;
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

    double x = x0;
    double h = std::min(0.05, (x1 - x0) / 4.0);
    Cplx k1[2], k2[2], k3[2], k4[2], k5[2], k6[2], k7[2], yt[2], yn[2];
    ode.rhs(x, y, k1);
    while (x < x1) {
        if (h < 1e-13 * std::max(1.0, x1))
            throw Error(ErrKind::StiffnessFailure, "rank-one step collapse");
        if (x + h > x1) h = x1 - x;
        for (int i = 0; i < 2; ++i) yt[i] = y[i] + h * a21 * k1[i];
        ode.rhs(x + c2 * h, yt, k2);
        for (int i = 0; i < 2; ++i) yt[i] = y[i] + h * (a31 * k1[i] + a32 * k2[i]);
        ode.rhs(x + c3 * h, yt, k3);
        for (int i = 0; i < 2; ++i)
            yt[i] = y[i] + h * (a41 * k1[i] + a42 * k2[i] + a43 * k3[i]);
        ode.rhs(x + c4 * h, yt, k4);
        for (int i = 0; i < 2; ++i)
            yt[i] = y[i] + h * (a51 * k1[i] + a52 * k2[i] + a53 * k3[i] + a54 * k4[i]);
        ode.rhs(x + c5 * h, yt, k5);
        for (int i = 0; i < 2; ++i)
            yt[i] = y[i] + h * (a61 * k1[i] + a62 * k2[i] + a63 * k3[i] + a64 * k4[i] +
                                a65 * k5[i]);
        ode.rhs(x + h, yt, k6);
        for (int i = 0; i < 2; ++i)
            yn[i] = y[i] + h * (b1 * k1[i] + b3 * k3[i] + b4 * k4[i] + b5 * k5[i] +
                                b6 * k6[i]);
        ode.rhs(x + h, yn, k7);

        double err = 0.0;
        for (int i = 0; i < 2; ++i) {
            const Cplx e = h * (e1 * k1[i] + e3 * k3[i] + e4 * k4[i] + e5 * k5[i] +
                                e6 * k6[i] + e7 * k7[i]);
            const double sc = tol * (1.0 + std::max(std::abs(y[i]), std::abs(yn[i])));
            err = std::max(err, std::abs(e) / sc);
        }
        if (err <= 1.0) {
            x += h;
            y[0] = yn[0];
            y[1] = yn[1];
            k1[0] = k7[0];
            k1[1] = k7[1];
        }
        h *= std::min(5.0, std::max(0.2, 0.9 * std::pow(std::max(err, 1e-10), -0.2)));
    }
}

// fixed-step classical RK4 with one Richardson level (h and h/2 grids)
void rk4Fixed(const Rank1Ode& ode, double x0, double x1, const Cplx yStart[2],
              int steps, Cplx y[2]) {
    const double h = (x1 - x0) / steps;
    y[0] = yStart[0];
    y[1] = yStart[1];
    Cplx k1[2], k2[2], k3[2], k4[2], yt[2];
    double x = x0;
    for (int s = 0; s < steps; ++s) {
        ode.rhs(x, y, k1);
        for (int i = 0; i < 2; ++i) yt[i] = y[i] + 0.5 * h * k1[i];
        ode.rhs(x + 0.5 * h, yt, k2);
        for (int i = 0; i < 2; ++i) yt[i] = y[i] + 0.5 * h * k2[i];
        ode.rhs(x + 0.5 * h, yt, k3);
        for (int i = 0; i < 2; ++i) yt[i] = y[i] + h * k3[i];
        ode.rhs(x + h, yt, k4);
        for (int i = 0; i < 2; ++i)
            y[i] += h / 6.0 * (k1[i] + 2.0 * k2[i] + 2.0 * k3[i] + k4[i]);
        x += h;
    }
}

} // namespace

Rank1Result rank1F(double ms, double ml, Cplx lambda, double x, double tol) {
    if (ms + ml < 0.0)
        throw Error(ErrKind::Domain, "rank-one oracle requires m_s + m_l >= 0");
    Rank1Result out;
    x = std::fabs(x);   // F is even
    const Rank1Ode ode(ms, ml, lambda);
    const auto a = ode.taylor(60);
    const double xsw = std::min(0.5, x);
    Cplx y[2];
    ode.taylorEval(a, xsw, y);
    if (x <= xsw || x == 0.0) {
        if (x == 0.0) { y[0] = 1.0; y[1] = 0.0; }
        out.value = y[0];
        out.derivative = y[1];
        // Taylor truncation at order 60, |x| <= 1/2
        out.errEstimate = std::abs(a.back()) * std::pow(xsw, 60);
        return out;
    }
    Cplx yA[2] = {y[0], y[1]};
    integrateAdaptive(ode, xsw, x, yA, tol);

    const double stiff = 1.0 + std::sqrt(std::abs(ode.eig)) + ms + std::fabs(ml);
    const int nBase = std::max(400, int(100.0 * stiff * (x - xsw)));
    Cplx yH[2], yH2[2];
    rk4Fixed(ode, xsw, x, y, nBase, yH);
    rk4Fixed(ode, xsw, x, y, 2 * nBase, yH2);
    Cplx yB[2];
    for (int i = 0; i < 2; ++i) yB[i] = (16.0 * yH2[i] - yH[i]) / 15.0;

    out.value = yA[0];
    out.derivative = yA[1];
    out.errEstimate = std::abs(yA[0] - yB[0]) / (1.0 + std::abs(yA[0]));
    return out;
}

Cplx rank1F2F1(double ms, double ml, Cplx lambda, double x) {
    x = std::fabs(x);
    const double rho = ms / 2.0 + ml;
    const Cplx aPar = (ms / 2.0 + 1.0 - lambda) / 2.0;
    const Cplx bPar = (rho - lambda) / 2.0;
    const double cPar = (ms + ml + 1.0) / 2.0;
    const double w = std::tanh(x) * std::tanh(x);
    Cplx term = 1.0, sum = 1.0;
    int stable = 0;
    for (int n = 0; n < 2000000; ++n) {
        term *= (aPar + double(n)) * (bPar + double(n)) /
                ((cPar + double(n)) * double(n + 1)) * w;
        sum += term;
        if (std::abs(term) < 1e-17 * (1.0 + std::abs(sum))) {
            if (++stable >= 3) break;
        } else {
            stable = 0;
        }
    }
    return std::pow(Cplx(std::cosh(x), 0.0), lambda - rho) * sum;
}

Cplx rank1G(double ms, double ml, Cplx lambda, double x, double tol) {
    const double rho = ms / 2.0 + ml;
    if (std::abs(lambda - rho) < 1e-8)
        throw Error(ErrKind::Domain, "rank-one G split needs lambda != rho");
    Rank1Result f = rank1F(ms, ml, lambda, std::fabs(x), tol);
    const double sign = x < 0.0 ? -1.0 : 1.0;
    return f.value + sign * f.derivative / (lambda - rho);
}

} // namespace bch
