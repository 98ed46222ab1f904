#pragma once

#include <gapfield/geometry.hpp>
#include <gapfield/potential.hpp>

#include <vector>

namespace gapfield {

/// Bipolar-mode solution of the transformed remainder problem: r2 harmonic
/// outside the two disks, r2 = 0 on both circles, grad r2 -> g_inf =
/// (eps*/2pi) a at infinity. Realized as r2 = g_inf . z + w with w a bounded
/// harmonic series in the strip |tau| <= tau0,
///   w = A0 + B0 tau + sum_n [Acc ch + Acs sh] cos(n sig) + [Asc ch + Ass sh] sin(n sig),
/// where the hyperbolics are stored normalized by their boundary values
/// (cosh(n tau)/cosh(n tau0), sinh(n tau)/sinh(n tau0)), so the stored
/// coefficients are boundary-data sized and decay like exp(-n tau0).
struct SeriesSolution {
    TwoDiskConfig cfg;
    Dipole dip;
    TransformChain chain;
    Vec2 g_inf;
    int n_modes{0};
    double coef_const{0.0}, coef_tau{0.0};
    std::vector<double> cos_cosh, cos_sinh, sin_cosh, sin_sinh;
    double boundary_residual{0.0};
};

struct SeriesOptions {
    double target_residual = 1e-10;
    int mode_cap = 0; // 0: 4*ceil(25/tau0)
};

SeriesSolution solve_r2(const TwoDiskConfig& cfg, const Dipole& dip, SeriesOptions opts = {});

/// Map a physical point to the z-plane of r2: z = (Phi(x) - p*)/eps*.
Vec2 chain_to_z(const TransformChain& chain, const Dipole& dip, const Vec2& x);

double eval_r2(const SeriesSolution& sol, const Vec2& z);
Vec2 eval_grad_r2(const SeriesSolution& sol, const Vec2& z);

/// r and grad r in physical coordinates through the chain r(x) = r2(z(x)).
double eval_r(const SeriesSolution& sol, const Vec2& x);
Vec2 eval_grad_r(const SeriesSolution& sol, const Vec2& x);

/// r at infinity = r2((0, p)); equals the far-field constant v0 of the
/// auxiliary problem.
double r_at_infinity(const SeriesSolution& sol);

/// The assembled semi-analytic field u = Q + r with Q = c q.
struct SeriesField {
    TwoDiskConfig cfg;
    Dipole dip;
    QFunction qf;
    ClosedFormQ coef;
    SeriesSolution r2;
};

struct GradParts {
    Vec2 grad_Q;
    Vec2 grad_r;
    Vec2 grad_u;
};

SeriesField make_series_field(const TwoDiskConfig& cfg, const Dipole& dip,
                              SeriesOptions opts = {});
GradParts assemble_grad_u(const SeriesField& sf, const Vec2& x);
/// Potential value normalized by the decay condition: u = c q + r - r(inf).
double assemble_u_value(const SeriesField& sf, const Vec2& x);

} // namespace gapfield
