#include <gapfield/potential.hpp>

#include <cmath>
#include <stdexcept>

namespace gapfield {

double fundamental_solution(const Vec2& x, const Vec2& p) {
    const double r2 = (x - p).norm2();
    if (r2 == 0.0)
        throw std::domain_error("fundamental_solution: x = p");
    return std::log(r2) / (4.0 * M_PI);
}

double dipole_potential(const Vec2& x, const Dipole& dip) {
    const Vec2 s = x - dip.p;
    const double r2 = s.norm2();
    if (r2 == 0.0)
        throw std::domain_error("dipole_potential: x = p");
    return dip.a.dot(s) / (2.0 * M_PI * r2);
}

Vec2 dipole_gradient(const Vec2& x, const Dipole& dip) {
    const Vec2 s = x - dip.p;
    const double r2 = s.norm2();
    if (r2 == 0.0)
        throw std::domain_error("dipole_gradient: x = p");
    return (dip.a - s * (2.0 * dip.a.dot(s) / r2)) / (2.0 * M_PI * r2);
}

QFunction make_q(const TwoDiskConfig& cfg) {
    const double num = cfg.alpha + cfg.epsilon / 2.0;
    const double den = cfg.alpha - cfg.epsilon / 2.0;
    return QFunction{cfg, std::log(num / den) / (2.0 * M_PI)};
}

double q_value(const Vec2& x, const QFunction& qf) {
    return fundamental_solution(x, qf.cfg.e1) - fundamental_solution(x, qf.cfg.e2);
}

Vec2 q_gradient(const Vec2& x, const QFunction& qf) {
    const Vec2 d1 = x - qf.cfg.e1, d2 = x - qf.cfg.e2;
    const double r1 = d1.norm2(), r2 = d2.norm2();
    if (r1 == 0.0 || r2 == 0.0)
        throw std::domain_error("q_gradient: x at a focus");
    return (d1 / r1 - d2 / r2) / (2.0 * M_PI);
}

double q_flux(const QFunction& qf, int j, int n_quad) {
    const Vec2 c = qf.cfg.center(j);
    double acc = 0.0;
    for (int k = 0; k < n_quad; ++k) {
        const double t = 2.0 * M_PI * k / n_quad;
        const Vec2 rim{std::cos(t), std::sin(t)};
        const Vec2 x = c + rim;
        acc += q_gradient(x, qf).dot(-rim); // nu points inward
    }
    return acc * (2.0 * M_PI / n_quad);
}

GreenIdentity green_identity_check(const QFunction& qf,
                                   const std::function<double(Vec2)>& v,
                                   int j, int n_quad) {
    const Vec2 c = qf.cfg.center(j);
    double acc = 0.0;
    for (int k = 0; k < n_quad; ++k) {
        const double t = 2.0 * M_PI * k / n_quad;
        const Vec2 rim{std::cos(t), std::sin(t)};
        const Vec2 x = c + rim;
        acc += v(x) * q_gradient(x, qf).dot(-rim);
    }
    const double sign = (j == 1) ? -1.0 : 1.0;
    return GreenIdentity{acc * (2.0 * M_PI / n_quad), sign * v(qf.cfg.focus(j))};
}

double potential_gap(const TwoDiskConfig& cfg, const Dipole& dip) {
    const Vec2 s2 = cfg.e2 - dip.p, s1 = cfg.e1 - dip.p;
    const double r2 = s2.norm2(), r1 = s1.norm2();
    if (r1 == 0.0 || r2 == 0.0)
        throw std::domain_error("potential_gap: p at a focus");
    return (dip.a.dot(s2) / r2 - dip.a.dot(s1) / r1) / (2.0 * M_PI);
}

ClosedFormQ coefficient_c(const TwoDiskConfig& cfg, const Dipole& dip) {
    const QFunction qf = make_q(cfg);
    return ClosedFormQ{potential_gap(cfg, dip) / (2.0 * qf.qd2)};
}

std::vector<ImageDipole> mirror_images(const TwoDiskConfig& cfg, const Dipole& dip,
                                       double tol, int max_per_chain) {
    std::vector<ImageDipole> imgs;
    // Two alternating chains: reflect first in circle 2, then 1, 2, ... and
    // first in circle 1, then 2, 1, ...
    for (int first = 2; first >= 1; --first) {
        Vec2 pos = dip.p;
        Vec2 mom = dip.a;
        int which = first;
        for (int k = 0; k < max_per_chain; ++k) {
            const Vec2 c = cfg.center(which);
            const Mat2 jac = inversion_jacobian(pos, c, 1.0);
            pos = invert_in_circle(pos, c, 1.0);
            mom = -jac.apply(mom);
            imgs.push_back({pos, mom});
            if (mom.norm() < tol) break;
            which = 3 - which;
        }
    }
    return imgs;
}

double images_potential(const std::vector<ImageDipole>& imgs, const Vec2& x) {
    double u = 0.0;
    for (const auto& im : imgs) {
        const Vec2 s = x - im.pos;
        u += im.moment.dot(s) / (2.0 * M_PI * s.norm2());
    }
    return u;
}

Vec2 images_gradient(const std::vector<ImageDipole>& imgs, const Vec2& x) {
    Vec2 g{0.0, 0.0};
    for (const auto& im : imgs) {
        const Vec2 s = x - im.pos;
        const double r2 = s.norm2();
        g += (im.moment - s * (2.0 * im.moment.dot(s) / r2)) / (2.0 * M_PI * r2);
    }
    return g;
}

} // namespace gapfield
