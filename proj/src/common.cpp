#include "bchyp/common.hpp"

#include <cmath>
#include <cstdio>

namespace bch {

bool LuFactors::factor(std::vector<double> a, int n, double pivTol) {
    lu_ = std::move(a);
    n_ = n;
    perm_.resize(n);
    for (int i = 0; i < n; ++i) perm_[i] = i;
    for (int col = 0; col < n; ++col) {
        int piv = col;
        double best = std::fabs(lu_[col * n + col]);
        for (int row = col + 1; row < n; ++row) {
            double v = std::fabs(lu_[row * n + col]);
            if (v > best) { best = v; piv = row; }
        }
        if (best < pivTol) return false;
        if (piv != col) {
            for (int j = 0; j < n; ++j) std::swap(lu_[piv * n + j], lu_[col * n + j]);
            std::swap(perm_[piv], perm_[col]);
        }
        const double d = lu_[col * n + col];
        for (int row = col + 1; row < n; ++row) {
            double f = lu_[row * n + col] / d;
            lu_[row * n + col] = f;
            for (int j = col + 1; j < n; ++j) lu_[row * n + j] -= f * lu_[col * n + j];
        }
    }
    return true;
}

template <typename T>
static void luSolveImpl(const std::vector<double>& lu, const std::vector<int>& perm,
                        int n, std::vector<T>& rhs) {
    std::vector<T> b(n);
    for (int i = 0; i < n; ++i) b[i] = rhs[perm[i]];
    for (int i = 0; i < n; ++i)
        for (int j = 0; j < i; ++j) b[i] -= lu[i * n + j] * b[j];
    for (int i = n - 1; i >= 0; --i) {
        for (int j = i + 1; j < n; ++j) b[i] -= lu[i * n + j] * b[j];
        b[i] /= lu[i * n + i];
    }
    rhs = std::move(b);
}

void LuFactors::solve(CVec& rhs) const { luSolveImpl(lu_, perm_, n_, rhs); }
void LuFactors::solve(Vec& rhs) const { luSolveImpl(lu_, perm_, n_, rhs); }

std::string formatDouble(double v) {
    char buf[40];
    std::snprintf(buf, sizeof(buf), "%.17g", v);
    return buf;
}

} // namespace bch
