#include <gapfield/linalg.hpp>

#include <algorithm>
#include <cmath>
#include <limits>

namespace gapfield {

LuFactors lu_factor(DenseMatrix a) {
    const int n = a.n;
    std::vector<int> piv(n);
    constexpr int B = 48;     // panel width
    constexpr int TI = 64;    // update tile rows
    constexpr int TJ = 256;   // update tile cols

    for (int k0 = 0; k0 < n; k0 += B) {
        const int kb = std::min(B, n - k0);
        for (int k = k0; k < k0 + kb; ++k) {
            int ip = k;
            double amax = std::fabs(a.at(k, k));
            for (int i = k + 1; i < n; ++i) {
                const double v = std::fabs(a.at(i, k));
                if (v > amax) { amax = v; ip = i; }
            }
            piv[k] = ip;
            if (amax == 0.0) throw PivotBreakdown(k);
            if (ip != k) {
                double* rk = a.row(k);
                double* rp = a.row(ip);
                for (int j = 0; j < n; ++j) std::swap(rk[j], rp[j]);
            }
            const double inv = 1.0 / a.at(k, k);
            const double* uk = a.row(k);
            for (int i = k + 1; i < n; ++i) {
                double* ui = a.row(i);
                const double lik = ui[k] * inv;
                ui[k] = lik;
                for (int j = k + 1; j < k0 + kb; ++j) ui[j] -= lik * uk[j];
            }
        }
        const int k1 = k0 + kb;
        if (k1 >= n) break;
        // propagate the panel's eliminations into the trailing columns
        for (int k = k0; k < k1; ++k) {
            const double* uk = a.row(k);
            for (int i = k + 1; i < k1; ++i) {
                double* ui = a.row(i);
                const double lik = ui[k];
                for (int j = k1; j < n; ++j) ui[j] -= lik * uk[j];
            }
        }
        // trailing update A22 -= L21 * U12, tiled
        for (int i0 = k1; i0 < n; i0 += TI) {
            const int i1 = std::min(i0 + TI, n);
            for (int j0 = k1; j0 < n; j0 += TJ) {
                const int j1 = std::min(j0 + TJ, n);
                for (int i = i0; i < i1; ++i) {
                    double* ai = a.row(i);
                    for (int k = k0; k < k1; ++k) {
                        const double lik = ai[k];
                        const double* uk = a.row(k);
                        for (int j = j0; j < j1; ++j) ai[j] -= lik * uk[j];
                    }
                }
            }
        }
    }
    return LuFactors{std::move(a), std::move(piv)};
}

std::vector<double> lu_solve(const LuFactors& f, std::vector<double> b) {
    const int n = f.lu.n;
    for (int k = 0; k < n; ++k)
        if (f.piv[k] != k) std::swap(b[k], b[f.piv[k]]);
    for (int i = 1; i < n; ++i) {
        const double* ri = f.lu.row(i);
        double s = b[i];
        for (int j = 0; j < i; ++j) s -= ri[j] * b[j];
        b[i] = s;
    }
    for (int i = n - 1; i >= 0; --i) {
        const double* ri = f.lu.row(i);
        double s = b[i];
        for (int j = i + 1; j < n; ++j) s -= ri[j] * b[j];
        b[i] = s / ri[i];
    }
    return b;
}

double norm1(const DenseMatrix& a) {
    double best = 0.0;
    for (int j = 0; j < a.n; ++j) {
        double col = 0.0;
        for (int i = 0; i < a.n; ++i) col += std::fabs(a.at(i, j));
        best = std::max(best, col);
    }
    return best;
}

namespace {

std::vector<double> lu_solve_transposed(const LuFactors& f, std::vector<double> b) {
    const int n = f.lu.n;
    // solve U^T y = b
    for (int i = 0; i < n; ++i) {
        double s = b[i];
        for (int j = 0; j < i; ++j) s -= f.lu.at(j, i) * b[j];
        b[i] = s / f.lu.at(i, i);
    }
    // solve L^T z = y
    for (int i = n - 1; i >= 0; --i) {
        double s = b[i];
        for (int j = i + 1; j < n; ++j) s -= f.lu.at(j, i) * b[j];
        b[i] = s;
    }
    for (int k = n - 1; k >= 0; --k)
        if (f.piv[k] != k) std::swap(b[k], b[f.piv[k]]);
    return b;
}

} // namespace

double condition_estimate(const LuFactors& f, double a_norm1) {
    const int n = f.lu.n;
    std::vector<double> x(n, 1.0 / n);
    double est = 0.0;
    for (int iter = 0; iter < 5; ++iter) {
        std::vector<double> y = lu_solve(f, x);
        double ynorm = 0.0;
        for (double v : y) ynorm += std::fabs(v);
        est = std::max(est, ynorm);
        std::vector<double> xi(n);
        for (int i = 0; i < n; ++i) xi[i] = y[i] >= 0.0 ? 1.0 : -1.0;
        std::vector<double> z = lu_solve_transposed(f, std::move(xi));
        int jmax = 0;
        double zmax = 0.0, ztx = 0.0;
        for (int i = 0; i < n; ++i) {
            ztx += z[i] * x[i];
            if (std::fabs(z[i]) > zmax) { zmax = std::fabs(z[i]); jmax = i; }
        }
        if (zmax <= ztx) break;
        std::fill(x.begin(), x.end(), 0.0);
        x[jmax] = 1.0;
    }
    return est * a_norm1;
}

DenseSolveResult dense_solve(DenseMatrix a, const std::vector<double>& b) {
    const int n = a.n;
    const bool verify = n <= 4096;
    DenseMatrix copy;
    if (verify) copy = a;
    const double an1 = norm1(a);
    LuFactors f = lu_factor(std::move(a));
    DenseSolveResult res;
    res.x = lu_solve(f, b);
    res.cond_estimate = condition_estimate(f, an1);
    res.residual = std::numeric_limits<double>::quiet_NaN();
    if (verify) {
        double rinf = 0.0, binf = 0.0;
        for (int i = 0; i < n; ++i) {
            const double* ri = copy.row(i);
            double s = -b[i];
            for (int j = 0; j < n; ++j) s += ri[j] * res.x[j];
            rinf = std::max(rinf, std::fabs(s));
            binf = std::max(binf, std::fabs(b[i]));
        }
        res.residual = binf > 0.0 ? rinf / binf : rinf;
    }
    return res;
}

} // namespace gapfield
