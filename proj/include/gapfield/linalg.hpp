#pragma once

#include <stdexcept>
#include <vector>

namespace gapfield {

/// Dense square matrix, row-major.
struct DenseMatrix {
    int n{0};
    std::vector<double> a;

    DenseMatrix() = default;
    explicit DenseMatrix(int n_) : n(n_), a(static_cast<size_t>(n_) * n_, 0.0) {}

    double& at(int i, int j) { return a[static_cast<size_t>(i) * n + j]; }
    double at(int i, int j) const { return a[static_cast<size_t>(i) * n + j]; }
    double* row(int i) { return &a[static_cast<size_t>(i) * n]; }
    const double* row(int i) const { return &a[static_cast<size_t>(i) * n]; }
};

struct PivotBreakdown : std::runtime_error {
    int row;
    explicit PivotBreakdown(int r)
        : std::runtime_error("lu_factor: zero pivot at row " + std::to_string(r)), row(r) {}
};

/// LU factorization with partial pivoting (in place, blocked).
struct LuFactors {
    DenseMatrix lu;
    std::vector<int> piv;
};

LuFactors lu_factor(DenseMatrix a);
std::vector<double> lu_solve(const LuFactors& f, std::vector<double> b);

/// Hager-style 1-norm estimate of cond(A) from the factorization.
double condition_estimate(const LuFactors& f, double a_norm1);
double norm1(const DenseMatrix& a);

struct DenseSolveResult {
    std::vector<double> x;
    double residual;      // ||Ax-b||_inf / ||b||_inf (NaN when not verified)
    double cond_estimate; // 1-norm condition estimate
};

/// One-shot solve with residual verification (for systems up to n = 4096 the
/// residual is checked against 1e-10 and reported).
DenseSolveResult dense_solve(DenseMatrix a, const std::vector<double>& b);

} // namespace gapfield
