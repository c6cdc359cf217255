#pragma once

#include "hho/geometry.hpp"
#include "hho/mesh.hpp"

#include <functional>

namespace hho {

using VectorField = std::function<Vec2(const Vec2&)>;
using MatrixField = std::function<Eigen::Matrix2d(const Vec2&)>;
/// Scalar field that may be two-valued across the diffusive/nondiffusive
/// interface; the int selects the subdomain branch (1-based tag).
using SidedScalarField = std::function<double(const Vec2&, int)>;

/// Coefficients and data of the advection-diffusion-reaction problem:
/// piecewise-constant diffusion per subdomain, Lipschitz velocity with
/// vanishing divergence, reaction bounded below by mu0, source and
/// Dirichlet datum (possibly subdomain-sided).
struct PhysicalData {
  std::vector<double> nu;  ///< diffusion per subdomain tag (index tag-1)
  VectorField velocity;
  MatrixField velocity_jacobian;  ///< optional; enables exact Lipschitz bounds
  std::function<double(const Vec2&)> reaction;
  double mu0 = 0.0;  ///< essential lower bound of the reaction
  SidedScalarField source;
  SidedScalarField dirichlet;

  double nu_of(const Mesh& mesh, int cell) const {
    return nu.at(static_cast<std::size_t>(mesh.cells[cell].subdomain - 1));
  }

  /// min over the cells sharing the face (the value entering the Peclet number).
  double nu_of_face(const Mesh& mesh, int face) const {
    const Face& F = mesh.faces[face];
    double v = nu_of(mesh, F.owner);
    if (F.neighbor >= 0) v = std::min(v, nu_of(mesh, F.neighbor));
    return v;
  }
};

}  // namespace hho
