#pragma once

#include "hho/physical_data.hpp"

#include <string>

namespace hho {

/// A manufactured problem: domain, coefficients and a closed-form exact
/// solution (per subdomain where two-valued) with its derivatives. The
/// forcing and boundary data are derived from the strong form
/// div(-nu grad u + beta u) + mu u = f with div(beta) = 0.
struct TestProblem {
  std::string name;
  Domain domain;
  std::vector<double> nu;
  SidedScalarField exact;
  std::function<Vec2(const Vec2&, int)> exact_gradient;
  SidedScalarField exact_laplacian;
  VectorField velocity;
  MatrixField velocity_jacobian;
  std::function<double(const Vec2&)> reaction;
  double mu0 = 0.0;

  /// f = -nu lap(u) + beta . grad(u) + mu u, per subdomain.
  SidedScalarField forcing() const;
  /// g = trace of the exact solution (from the subdomain the face sees).
  SidedScalarField boundary_datum() const { return exact; }

  PhysicalData physical() const;
};

/// Unit square, u = sin(pi x) sin(pi y), rotational velocity
/// (1/2 - y, x - 1/2), unit reaction; nu in {0, 1e-3, 1} in the study.
TestProblem uniform_diffusion_problem(double nu);

/// Square ring (-1,1)^2 minus [-1/2,1/2]^2, diffusion pi above the x-axis
/// and 0 below, azimuthal velocity e_theta / r, reaction 1e-6. The exact
/// solution is (theta-pi)^2 on the diffusive side and 3 pi (theta-pi) on
/// the nondiffusive side; it jumps across the interface ray theta = 0.
TestProblem locally_degenerate_problem();

/// Affine-power solution (a + b.x)^degree with constant coefficients;
/// reproduced exactly by the scheme whenever degree <= k.
TestProblem polynomial_problem(int degree, double nu = 1.0, double mu = 1.0,
                               Vec2 beta = Vec2(0.8, -0.3));

TestProblem make_problem(const std::string& name, double nu_value, int degree);

}  // namespace hho
