#pragma once

#include "hho/basis.hpp"
#include "hho/flux.hpp"
#include "hho/physical_data.hpp"

#include <Eigen/Dense>

namespace hho {

/// How the local Peclet number is evaluated on a face: as a function of the
/// quadrature point (the default), or replaced by its face average (the
/// variant under which the k=0 scheme coincides with a hybrid mixed mimetic
/// method).
enum class PecletMode { pointwise, face_averaged };

struct DiscretizationOptions {
  int quad_degree = -1;  ///< default: 2(k+1)+2
  bool orthonormalize_bases = false;
  PecletMode peclet_mode = PecletMode::pointwise;
  double divergence_tol = 1e-8;  ///< relative tolerance of the per-cell div(beta) check

  int effective_quad_degree(int k) const { return quad_degree >= 0 ? quad_degree : 2 * (k + 1) + 2; }
};

/// Cell-basis factory honoring the orthonormalization option; every module
/// that needs coefficients "in the cell basis" must construct it here so
/// that degrees of freedom mean the same thing everywhere.
CellBasis make_cell_basis(const Mesh& mesh, int cell, int degree, const DiscretizationOptions& opts);

/// Ordering of the local unknowns of one cell: the cell polynomial block
/// first, then one block of k+1 coefficients per face, in cell face order.
struct LocalDofLayout {
  int k = 0;
  int cell_dim = 0;
  int face_dim = 0;
  int n_faces = 0;

  static LocalDofLayout make(int k, int n_faces) {
    return {k, CellBasis::dimension(k), k + 1, n_faces};
  }
  int size() const { return cell_dim + n_faces * face_dim; }
  int cell_offset() const { return 0; }
  int face_offset(int local_face) const { return cell_dim + local_face * face_dim; }
};

/// Cached face-coupling weights at the face quadrature points:
/// (nu_F/h_F) A^{+/-}(Pe_TF) and (nu_F/h_F)|A|(Pe_TF), falling back to the
/// degenerate limits (beta.n)^{+/-} and |beta.n| when nu_F = 0.
struct FaceCouplingWeights {
  Eigen::VectorXd plus, minus, absval;
  double nu_face = 0.0;
  double averaged_peclet = 0.0;  ///< only meaningful in face_averaged mode with nu_F > 0
};

FaceCouplingWeights face_coupling_weights(const Mesh& mesh, const PhysicalData& data,
                                          const FluxFunction& flux, int cell, int local_face,
                                          PecletMode mode, const QuadratureRule& face_quad);

/// All dense per-cell operators of the scheme over the LocalDofLayout.
struct CellOperators {
  int cell = -1;
  LocalDofLayout layout;
  double nu = 0.0;

  CellBasis basis_k;    ///< P^k(T), the cell DOF basis
  CellBasis basis_k1;   ///< P^{k+1}(T), hosting the potential reconstruction
  std::vector<FaceBasis> face_bases;
  QuadratureRule cell_quad;
  std::vector<QuadratureRule> face_quads;

  Eigen::MatrixXd mass_k;                 ///< cell mass matrix of P^k
  Eigen::MatrixXd reconstruction;         ///< DOFs -> P^{k+1} coefficients
  Eigen::MatrixXd correction;             ///< DOFs -> P^{k+1} coefficients of v_T + (p v - pi_T p v)
  Eigen::MatrixXd diffusion;              ///< Galerkin + stabilization
  Eigen::MatrixXd diffusion_stab;
  Eigen::MatrixXd advective_derivative;   ///< DOFs -> P^k coefficients
  Eigen::MatrixXd advection_reaction;
  Eigen::MatrixXd adv_stab_plus, adv_stab_minus;
  std::vector<FaceCouplingWeights> coupling;  ///< per local face

  /// Evaluate the reconstructed potential of a local DOF vector at a point.
  double reconstructed_value(const Eigen::VectorXd& local_dofs, const Vec2& x) const {
    return basis_k1.values(x).dot(reconstruction * local_dofs);
  }
};

/// Builds every local operator of one cell. Pure and safe to run
/// concurrently over cells. Throws if the boundary flux of the velocity
/// over the cell does not vanish (the scheme assumes div beta = 0), or if
/// the centered flux is combined with a diffusion-free face.
CellOperators build_cell_operators(const Mesh& mesh, const PhysicalData& data,
                                   const FluxFunction& flux, int cell, int k,
                                   const DiscretizationOptions& opts = {});

}  // namespace hho
