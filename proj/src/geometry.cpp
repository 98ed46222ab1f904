#include <gapfield/geometry.hpp>

#include <cmath>
#include <stdexcept>
#include <string>

namespace gapfield {

TwoDiskConfig make_config(double epsilon) {
    if (!(epsilon > 0.0) || epsilon > 0.5)
        throw std::domain_error("make_config: epsilon must lie in (0, 0.5], got " +
                                std::to_string(epsilon));
    TwoDiskConfig cfg;
    cfg.epsilon = epsilon;
    cfg.alpha = std::sqrt(epsilon + epsilon * epsilon / 4.0);
    cfg.tau0 = std::log((cfg.alpha + epsilon / 2.0) / (cfg.alpha - epsilon / 2.0));
    cfg.center1 = {-(1.0 + epsilon / 2.0), 0.0};
    cfg.center2 = {1.0 + epsilon / 2.0, 0.0};
    cfg.e1 = {-cfg.alpha, 0.0};
    cfg.e2 = {cfg.alpha, 0.0};
    return cfg;
}

Dipole make_dipole(double p2, Vec2 a) {
    if (std::abs(a.norm() - 1.0) > 1e-14)
        throw std::domain_error("make_dipole: |a| must be 1 to 1e-14");
    if (!(std::abs(p2) < 0.5))
        throw std::domain_error("make_dipole: |p2| must be < 1/2");
    return Dipole{{0.0, p2}, a};
}

Vec2 invert_in_circle(const Vec2& x, const Vec2& center, double radius) {
    const Vec2 s = x - center;
    const double r2 = s.norm2();
    if (r2 == 0.0)
        throw std::domain_error("invert_in_circle: x at the center maps to infinity");
    return center + s * (radius * radius / r2);
}

Mat2 inversion_jacobian(const Vec2& x, const Vec2& center, double radius) {
    const Vec2 s = x - center;
    const double r2 = s.norm2();
    if (r2 == 0.0)
        throw std::domain_error("inversion_jacobian: x at the center");
    const double f = radius * radius / r2;
    const double sx = s.x * s.x / r2, sy = s.y * s.y / r2, sxy = s.x * s.y / r2;
    return Mat2{f * (1.0 - 2.0 * sx), f * (-2.0 * sxy),
                f * (-2.0 * sxy), f * (1.0 - 2.0 * sy)};
}

Vec2 fixed_point_iterate(const TwoDiskConfig& cfg, Vec2 start, double tol,
                         int disk, int max_iter) {
    if (disk != 1 && disk != 2)
        throw std::domain_error("fixed_point_iterate: disk must be 1 or 2");
    const Vec2 first = disk == 2 ? cfg.center1 : cfg.center2;
    const Vec2 second = disk == 2 ? cfg.center2 : cfg.center1;
    Vec2 x = start;
    for (int it = 0; it < max_iter; ++it) {
        Vec2 next = invert_in_circle(invert_in_circle(x, first, 1.0), second, 1.0);
        if (dist(next, x) < tol) return next;
        x = next;
    }
    throw std::runtime_error("fixed_point_iterate: no convergence within " +
                             std::to_string(max_iter) + " iterations");
}

Vec2 phi_transform(const Vec2& y, const Vec2& p) {
    const Vec2 s = y - p;
    const double r2 = s.norm2();
    if (r2 == 0.0)
        throw std::domain_error("phi_transform: y = p maps to infinity");
    return s / r2 + p;
}

Mat2 phi_jacobian(const Vec2& x, const Vec2& p) {
    return inversion_jacobian(x, p, 1.0);
}

TransformChain transform_chain(const TwoDiskConfig& cfg, const Dipole& dip) {
    const double eps = cfg.epsilon;
    const double p2 = dip.p.y;
    TransformChain ch;
    ch.eps_star = 1.0 / (eps + p2 * p2 + eps * eps / 4.0);
    ch.p_star = {0.0, p2 * (1.0 - ch.eps_star)};
    ch.omega_center1 = cfg.center1 * ch.eps_star + ch.p_star;
    ch.omega_center2 = cfg.center2 * ch.eps_star + ch.p_star;
    ch.omega_radius = ch.eps_star;

    // Omega_j = Phi(D_j): verified on boundary samples at construction.
    for (int j = 1; j <= 2; ++j) {
        const Vec2 c = cfg.center(j);
        const Vec2 oc = j == 1 ? ch.omega_center1 : ch.omega_center2;
        for (int k = 0; k < 64; ++k) {
            const double t = 2.0 * M_PI * k / 64.0;
            const Vec2 y = c + Vec2{std::cos(t), std::sin(t)};
            const double off = std::abs(dist(phi_transform(y, dip.p), oc) - ch.omega_radius);
            if (off > 1e-11 * ch.omega_radius)
                throw std::runtime_error("transform_chain: Phi(dD_j) is off dOmega_j");
        }
    }
    return ch;
}

BipolarPoint bipolar_coords(const Vec2& x, const TwoDiskConfig& cfg) {
    const Vec2 d1 = x - cfg.e1, d2 = x - cfg.e2;
    const double r1 = d1.norm2(), r2 = d2.norm2();
    if (r1 == 0.0 || r2 == 0.0)
        throw std::domain_error("bipolar_coords: x at a focus");
    BipolarPoint b;
    b.tau = 0.5 * std::log(r1 / r2);
    // sigma = -Im log((Z+alpha)/(Z-alpha)); branch (-pi, pi] with sigma = pi
    // on the segment between the foci.
    b.sigma = std::atan2(d2.y, d2.x) - std::atan2(d1.y, d1.x);
    if (b.sigma <= -M_PI) b.sigma += 2.0 * M_PI;
    else if (b.sigma > M_PI) b.sigma -= 2.0 * M_PI;
    if (b.sigma == -M_PI) b.sigma = M_PI;
    return b;
}

Vec2 bipolar_to_point(const BipolarPoint& b, const TwoDiskConfig& cfg) {
    const double den = std::cosh(b.tau) - std::cos(b.sigma);
    if (den == 0.0)
        throw std::domain_error("bipolar_to_point: (0,0) is the point at infinity");
    return {cfg.alpha * std::sinh(b.tau) / den, cfg.alpha * std::sin(b.sigma) / den};
}

double gap_distance(const TwoDiskConfig& cfg, const Vec2& x) {
    const double d1 = dist(x, cfg.center1) - 1.0;
    const double d2 = dist(x, cfg.center2) - 1.0;
    return std::min(d1, d2);
}

} // namespace gapfield
