#pragma once

#include <gapfield/vec2.hpp>

namespace gapfield {

/// Two unit disks D_j = B_1((-1)^j (1+eps/2), 0) separated by a gap of width
/// eps, together with the derived quantities of the coaxal system: the foci
/// e_j = ((-1)^j alpha, 0) with alpha^2 = eps + eps^2/4, and the bipolar
/// boundary coordinate tau0 with cosh(tau0) = 1 + eps/2.
struct TwoDiskConfig {
    double epsilon;
    double alpha;
    double tau0;
    Vec2 center1, center2;
    Vec2 e1, e2;
    static constexpr double radius = 1.0;

    Vec2 center(int j) const { return j == 1 ? center1 : center2; }
    Vec2 focus(int j) const { return j == 1 ? e1 : e2; }
};

/// Dipole emitter at p = (0, p2) with unit direction a.
struct Dipole {
    Vec2 p;
    Vec2 a;
};

/// Emitter-centered inversion data: eps* = 1/(eps + p^2 + eps^2/4),
/// p* = (0, p(1-eps*)); Omega_j = Phi(D_j) = eps* D_j + p*.
struct TransformChain {
    double eps_star;
    Vec2 p_star;
    Vec2 omega_center1, omega_center2;
    double omega_radius;
};

struct BipolarPoint {
    double tau;
    double sigma; // in (-pi, pi], positive for x2 > 0
};

TwoDiskConfig make_config(double epsilon);
Dipole make_dipole(double p2, Vec2 a);

Vec2 invert_in_circle(const Vec2& x, const Vec2& center, double radius);
Mat2 inversion_jacobian(const Vec2& x, const Vec2& center, double radius);

/// Brute-force oracle for the foci: iterates the composed inversions until the
/// step size drops below tol. disk = 2 iterates R2.R1 (fixed point e2 in D2),
/// disk = 1 iterates R1.R2.
Vec2 fixed_point_iterate(const TwoDiskConfig& cfg, Vec2 start, double tol,
                         int disk = 2, int max_iter = 200);

Vec2 phi_transform(const Vec2& y, const Vec2& p);
Mat2 phi_jacobian(const Vec2& x, const Vec2& p);

TransformChain transform_chain(const TwoDiskConfig& cfg, const Dipole& dip);

BipolarPoint bipolar_coords(const Vec2& x, const TwoDiskConfig& cfg);
Vec2 bipolar_to_point(const BipolarPoint& b, const TwoDiskConfig& cfg);

/// Signed distance of x to the closer disk boundary (negative inside a disk).
double gap_distance(const TwoDiskConfig& cfg, const Vec2& x);

} // namespace gapfield
