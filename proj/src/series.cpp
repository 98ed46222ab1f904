#include <gapfield/series.hpp>

#include <cmath>
#include <stdexcept>
#include <string>

namespace gapfield {

namespace {

// Boundary samples of the data -g.z on tau = +-tau0, projected onto
// cos(n sig), sin(n sig) by the trapezoid rule. The normalized per-mode
// 2x2 systems [1 1; 1 -1] (even/odd split of the two boundary values)
// determine the hyperbolic coefficients.
struct Projection {
    std::vector<double> cp, sp; // tau = +tau0
    std::vector<double> cm, sm; // tau = -tau0
};

Projection project_boundary_data(const TwoDiskConfig& cfg, const Vec2& g, int n_modes) {
    const int m = std::max(1024, 4 * (n_modes + 1));
    Projection pr;
    pr.cp.assign(n_modes + 1, 0.0);
    pr.sp.assign(n_modes + 1, 0.0);
    pr.cm.assign(n_modes + 1, 0.0);
    pr.sm.assign(n_modes + 1, 0.0);
    std::vector<double> fp(m), fm(m), sig(m);
    for (int i = 0; i < m; ++i) {
        sig[i] = 2.0 * M_PI * i / m;
        const Vec2 zp = bipolar_to_point({cfg.tau0, sig[i]}, cfg);
        const Vec2 zm = bipolar_to_point({-cfg.tau0, sig[i]}, cfg);
        fp[i] = -g.dot(zp);
        fm[i] = -g.dot(zm);
    }
    for (int n = 0; n <= n_modes; ++n) {
        double cps = 0.0, sps = 0.0, cms = 0.0, sms = 0.0;
        for (int i = 0; i < m; ++i) {
            const double cn = std::cos(n * sig[i]);
            const double sn = std::sin(n * sig[i]);
            cps += fp[i] * cn;
            sps += fp[i] * sn;
            cms += fm[i] * cn;
            sms += fm[i] * sn;
        }
        const double scale = (n == 0 ? 1.0 : 2.0) / m;
        pr.cp[n] = cps * scale;
        pr.sp[n] = sps * scale;
        pr.cm[n] = cms * scale;
        pr.sm[n] = sms * scale;
    }
    return pr;
}

void fit_modes(SeriesSolution& sol, const Projection& pr, int n_modes) {
    sol.n_modes = n_modes;
    // n = 0: A + B tau matches the two boundary means
    sol.coef_const = 0.5 * (pr.cp[0] + pr.cm[0]);
    sol.coef_tau = 0.5 * (pr.cp[0] - pr.cm[0]) / sol.cfg.tau0;
    sol.cos_cosh.assign(n_modes, 0.0);
    sol.cos_sinh.assign(n_modes, 0.0);
    sol.sin_cosh.assign(n_modes, 0.0);
    sol.sin_sinh.assign(n_modes, 0.0);
    for (int n = 1; n <= n_modes; ++n) {
        sol.cos_cosh[n - 1] = 0.5 * (pr.cp[n] + pr.cm[n]);
        sol.cos_sinh[n - 1] = 0.5 * (pr.cp[n] - pr.cm[n]);
        sol.sin_cosh[n - 1] = 0.5 * (pr.sp[n] + pr.sm[n]);
        sol.sin_sinh[n - 1] = 0.5 * (pr.sp[n] - pr.sm[n]);
    }
}

double boundary_residual(const SeriesSolution& sol) {
    double worst = 0.0;
    for (int side = 0; side < 2; ++side) {
        const double tau = side == 0 ? sol.cfg.tau0 : -sol.cfg.tau0;
        for (int i = 0; i < 128; ++i) {
            const double sig = 2.0 * M_PI * (i + 0.37) / 128.0;
            const Vec2 z = bipolar_to_point({tau, sig}, sol.cfg);
            worst = std::max(worst, std::abs(eval_r2(sol, z)));
        }
    }
    return worst;
}

} // namespace

SeriesSolution solve_r2(const TwoDiskConfig& cfg, const Dipole& dip, SeriesOptions opts) {
    SeriesSolution sol;
    sol.cfg = cfg;
    sol.dip = dip;
    sol.chain = transform_chain(cfg, dip);
    sol.g_inf = dip.a * (sol.chain.eps_star / (2.0 * M_PI));

    const int cap = opts.mode_cap > 0
                        ? opts.mode_cap
                        : 4 * static_cast<int>(std::ceil(25.0 / cfg.tau0));
    int n_modes = std::min(cap, static_cast<int>(std::ceil(27.0 / cfg.tau0)));
    for (;;) {
        const Projection pr = project_boundary_data(cfg, sol.g_inf, n_modes);
        fit_modes(sol, pr, n_modes);
        sol.boundary_residual = boundary_residual(sol);
        if (sol.boundary_residual <= opts.target_residual) break;
        if (n_modes >= cap)
            throw std::runtime_error("solve_r2: residual " +
                                     std::to_string(sol.boundary_residual) +
                                     " above target at the mode cap " + std::to_string(cap));
        n_modes = std::min(cap, n_modes * 2);
    }
    return sol;
}

Vec2 chain_to_z(const TransformChain& chain, const Dipole& dip, const Vec2& x) {
    const Vec2 y = phi_transform(x, dip.p);
    return (y - chain.p_star) / chain.eps_star;
}

namespace {

struct StripEval {
    double w, dtau, dsig;
};

StripEval eval_strip(const SeriesSolution& sol, double tau, double sigma) {
    const double tau0 = sol.cfg.tau0;
    StripEval e{sol.coef_const + sol.coef_tau * tau, sol.coef_tau, 0.0};
    for (int n = 1; n <= sol.n_modes; ++n) {
        // normalized hyperbolics, stable for large n*tau0
        const double en = std::exp(n * (std::abs(tau) - tau0));
        const double e2t = std::exp(-2.0 * n * std::abs(tau));
        const double e2t0 = std::exp(-2.0 * n * tau0);
        const double ch = en * (1.0 + e2t) / (1.0 + e2t0);
        const double sh_abs = en * (1.0 - e2t) / (1.0 - e2t0);
        const double sh = tau >= 0.0 ? sh_abs : -sh_abs;
        // derivatives in tau of the normalized forms
        const double dch = n * en * (1.0 - e2t) / (1.0 + e2t0) * (tau >= 0.0 ? 1.0 : -1.0);
        const double dsh_abs = n * en * (1.0 + e2t) / (1.0 - e2t0);
        const double dsh = dsh_abs; // even in tau
        const double cs = std::cos(n * sigma), sn = std::sin(n * sigma);
        const double ac = sol.cos_cosh[n - 1], bc = sol.cos_sinh[n - 1];
        const double as = sol.sin_cosh[n - 1], bs = sol.sin_sinh[n - 1];
        e.w += (ac * ch + bc * sh) * cs + (as * ch + bs * sh) * sn;
        e.dtau += (ac * dch + bc * dsh) * cs + (as * dch + bs * dsh) * sn;
        e.dsig += n * (-(ac * ch + bc * sh) * sn + (as * ch + bs * sh) * cs);
    }
    return e;
}

} // namespace

double eval_r2(const SeriesSolution& sol, const Vec2& z) {
    const BipolarPoint b = bipolar_coords(z, sol.cfg);
    return sol.g_inf.dot(z) + eval_strip(sol, b.tau, b.sigma).w;
}

Vec2 eval_grad_r2(const SeriesSolution& sol, const Vec2& z) {
    const BipolarPoint b = bipolar_coords(z, sol.cfg);
    const StripEval e = eval_strip(sol, b.tau, b.sigma);
    // W(Z) = log((Z+alpha)/(Z-alpha)) is holomorphic with tau = Re W,
    // sigma = -Im W; the gradients follow from W' = 1/(Z+alpha) - 1/(Z-alpha).
    const Vec2 d1 = z - sol.cfg.e1, d2 = z - sol.cfg.e2;
    const double r1 = d1.norm2(), r2 = d2.norm2();
    // W' as a complex number (wr, wi)
    const double wr = d1.x / r1 - d2.x / r2;
    const double wi = -d1.y / r1 + d2.y / r2;
    const Vec2 grad_tau{wr, -wi};
    const Vec2 grad_sig{-wi, -wr};
    return sol.g_inf + grad_tau * e.dtau + grad_sig * e.dsig;
}

double eval_r(const SeriesSolution& sol, const Vec2& x) {
    return eval_r2(sol, chain_to_z(sol.chain, sol.dip, x));
}

Vec2 eval_grad_r(const SeriesSolution& sol, const Vec2& x) {
    const Vec2 z = chain_to_z(sol.chain, sol.dip, x);
    const Vec2 g2 = eval_grad_r2(sol, z);
    const Vec2 s = x - sol.dip.p;
    const double r2 = s.norm2();
    if (r2 == 0.0)
        throw std::domain_error("eval_grad_r: x = p");
    const Mat2 jac = phi_jacobian(x, sol.dip.p); // (I - 2 s s^T)/|s|^2, symmetric
    return jac.apply(g2) / sol.chain.eps_star;
}

double r_at_infinity(const SeriesSolution& sol) {
    return eval_r2(sol, Vec2{0.0, sol.dip.p.y});
}

SeriesField make_series_field(const TwoDiskConfig& cfg, const Dipole& dip,
                              SeriesOptions opts) {
    return SeriesField{cfg, dip, make_q(cfg), coefficient_c(cfg, dip),
                       solve_r2(cfg, dip, opts)};
}

GradParts assemble_grad_u(const SeriesField& sf, const Vec2& x) {
    GradParts parts;
    parts.grad_Q = q_gradient(x, sf.qf) * sf.coef.c;
    parts.grad_r = eval_grad_r(sf.r2, x);
    parts.grad_u = parts.grad_Q + parts.grad_r;
    return parts;
}

double assemble_u_value(const SeriesField& sf, const Vec2& x) {
    return sf.coef.c * q_value(x, sf.qf) + eval_r(sf.r2, x) - r_at_infinity(sf.r2);
}

} // namespace gapfield
