#pragma once

#include <gapfield/geometry.hpp>

#include <functional>
#include <vector>

namespace gapfield {

/// (1/2pi) log|x - p|, the 2-D fundamental solution of the Laplacian.
double fundamental_solution(const Vec2& x, const Vec2& p);

/// Free-space dipole field a . grad N_p and its gradient. The gradient
/// magnitude is exactly 1/(2 pi |x-p|^2).
double dipole_potential(const Vec2& x, const Dipole& dip);
Vec2 dipole_gradient(const Vec2& x, const Dipole& dip);

/// The singular function q = N_{e1} - N_{e2}. Constant on each disk boundary
/// (the circles are Apollonius circles of the foci), with
/// q|dD2 = -q|dD1 = (1/2pi) log((alpha + eps/2)/(alpha - eps/2)).
struct QFunction {
    TwoDiskConfig cfg;
    double qd2;
};

QFunction make_q(const TwoDiskConfig& cfg);
double q_value(const Vec2& x, const QFunction& qf);
Vec2 q_gradient(const Vec2& x, const QFunction& qf);

/// Trapezoid quadrature of the inward-normal flux of q over dD_j; equals
/// (-1)^j up to quadrature error.
double q_flux(const QFunction& qf, int j, int n_quad);

struct GreenIdentity {
    double lhs; // quadrature of v d_nu q over dD_j
    double rhs; // (-1)^j v(e_j)
};

/// Green identity for a function v harmonic inside the disks.
GreenIdentity green_identity_check(const QFunction& qf,
                                   const std::function<double(Vec2)>& v,
                                   int j, int n_quad);

/// Closed-form boundary-constant gap u|dD2 - u|dD1 evaluated from the dipole
/// field at the foci.
double potential_gap(const TwoDiskConfig& cfg, const Dipole& dip);

/// Coefficient of q in the closed-form component Q = c q - v0. The additive
/// constant v0 is only fixed by a field solve; gradients never need it.
struct ClosedFormQ {
    double c;
    double v0_convention = 0.0;
};

ClosedFormQ coefficient_c(const TwoDiskConfig& cfg, const Dipole& dip);

/// One reflected dipole of the mirror-image chain.
struct ImageDipole {
    Vec2 pos;
    Vec2 moment;
};

/// Alternating Kelvin images of the emitter in the two circles. Each image
/// cancels its parent's steep boundary trace on the circle it reflects in;
/// the chain is extended until the moment magnitude drops below tol. The
/// images are pure dipoles, so they carry no net flux and decay like 1/|x|.
std::vector<ImageDipole> mirror_images(const TwoDiskConfig& cfg, const Dipole& dip,
                                       double tol = 1e-11, int max_per_chain = 20000);

double images_potential(const std::vector<ImageDipole>& imgs, const Vec2& x);
Vec2 images_gradient(const std::vector<ImageDipole>& imgs, const Vec2& x);

} // namespace gapfield
