#pragma once

#include <gapfield/geometry.hpp>
#include <gapfield/linalg.hpp>
#include <gapfield/potential.hpp>

#include <memory>
#include <string>
#include <vector>

namespace gapfield {

/// Equispaced nodes on both circles; normals point inward to the disks.
struct BoundaryMesh {
    int n_per_circle{0};
    double angle_offset{0.0};
    std::vector<Vec2> nodes;   // circle 1 first, then circle 2
    std::vector<Vec2> normals; // unit, inward
    double weight{0.0};        // arclength weight 2pi/N (unit radius)
};

BoundaryMesh make_mesh(const TwoDiskConfig& cfg, int n_per_circle, double angle_offset = 0.0);

/// Per-circle node count schedule: the gap region needs angular resolution
/// of order sqrt(eps).
int node_schedule(double epsilon);

enum class BemProblem { Full, VProblem };

struct NearBoundaryError : std::runtime_error {
    int required_nodes;
    NearBoundaryError(double d, int req)
        : std::runtime_error("evaluation point at distance " + std::to_string(d) +
                             " is inside the guard band; upsample to at least " +
                             std::to_string(req) + " nodes per circle"),
          required_nodes(req) {}
};

/// Discretized solution of the floating-potential problem (Full) or of the
/// auxiliary exterior Dirichlet problem for v (VProblem).
///
/// Representation (Full):     u = a.grad N_p + sum(images) + S[phi],
///   with per-circle mean-zero densities and the floating constants c1, c2
///   entering the collocation rows as unknowns.
/// Representation (VProblem): v = sum(images) + S[psi] + beta + gamma q,
///   with per-circle mean-zero psi; then v0 = beta and the flux coefficient
///   c = -gamma (q carries flux (-1)^j through dD_j).
/// The mirror-image chain keeps the densities smooth at the gap scale; the
/// images are pure dipoles so fluxes and the far-field decay are untouched.
struct BemSolution {
    TwoDiskConfig cfg;
    Dipole dip;
    BemProblem problem{BemProblem::Full};
    BoundaryMesh mesh;
    std::vector<double> density; // 2N values, circle 1 then circle 2
    std::vector<ImageDipole> images;
    double c1{0.0}, c2{0.0};   // Full
    double v0{0.0};            // VProblem: beta
    double gamma{0.0};         // VProblem: coefficient of q
    double cond_estimate{0.0};
    std::string warning;       // set when N under-resolves the gap

    double c_coefficient() const { return -gamma; }
    /// Guard distance below which plain quadrature evaluation is refused.
    double h_min() const { return 5.0 * (2.0 * M_PI / mesh.n_per_circle); }
    /// Trigonometric interpolation of the densities onto m nodes per circle;
    /// shrinks the guard band to 5*(2pi/m).
    BemSolution upsampled(int m) const;
};

struct BemOptions {
    double angle_offset = 0.0;
    double image_tol = 1e-11;
};

/// Factors the collocation matrices once per (cfg, N); dipole configurations
/// then solve by back-substitution.
class BemWorkspace {
  public:
    BemWorkspace(const TwoDiskConfig& cfg, int n_per_circle, BemOptions opts = {});

    BemSolution solve_full(const Dipole& dip) const;
    BemSolution solve_v(const Dipole& dip) const;

    const TwoDiskConfig& config() const { return cfg_; }
    const BoundaryMesh& mesh() const { return mesh_; }

  private:
    TwoDiskConfig cfg_;
    BemOptions opts_;
    BoundaryMesh mesh_;
    QFunction qf_;
    mutable std::unique_ptr<LuFactors> full_, v_;
    mutable double cond_full_{0.0}, cond_v_{0.0};
    void ensure_full() const;
    void ensure_v() const;
};

BemSolution solve_full(const TwoDiskConfig& cfg, const Dipole& dip, int n_per_circle,
                       BemOptions opts = {});
BemSolution solve_v(const TwoDiskConfig& cfg, const Dipole& dip, int n_per_circle,
                    BemOptions opts = {});

/// Potential / gradient of the discretized representation. Throws
/// NearBoundaryError inside the guard band. For VProblem solutions these
/// evaluate v itself.
double eval_u(const BemSolution& sol, const Vec2& x);
Vec2 eval_grad_u(const BemSolution& sol, const Vec2& x);

/// u assembled from a VProblem solution: u = a.grad N_p + v + c q - v0.
double eval_assembled_u(const BemSolution& vsol, const Vec2& x);
Vec2 eval_assembled_grad(const BemSolution& vsol, const Vec2& x);

/// Inward flux of the solution through dD_j, from the exterior limit of the
/// normal derivative (jump relation on the nodes). n_quad <= 0 uses the mesh
/// resolution; larger values evaluate on an upsampled copy.
double flux(const BemSolution& sol, int j, int n_quad = 0);

/// Kress quadrature weights for the log kernel: R_d approximates the integral
/// of ln(4 sin^2((t - s)/2)) against a trig polynomial sampled at distance
/// index d = (i - k) mod N.
std::vector<double> kress_weights(int n);

} // namespace gapfield
