#pragma once

#include "hho/quadrature.hpp"

#include <Eigen/Dense>

#include <functional>

namespace hho {

using ScalarField = std::function<double(const Vec2&)>;

/// Scaled monomial basis of P^l(T): ((x - x_T)/h_T)^alpha for |alpha| <= l,
/// ordered by total degree so that the degree-l basis is a prefix of the
/// degree-(l+1) one. An optional triangular change-of-basis supports
/// Gram-Schmidt orthonormalization behind the same interface.
class CellBasis {
 public:
  CellBasis() = default;
  CellBasis(const Mesh& mesh, int cell, int degree);

  static int dimension(int degree) { return (degree + 1) * (degree + 2) / 2; }

  int dim() const { return dimension(degree_); }
  int degree() const { return degree_; }
  int cell() const { return cell_; }
  const Vec2& center() const { return center_; }
  double length_scale() const { return h_; }

  /// All basis values at one point.
  Eigen::VectorXd values(const Vec2& x) const;
  /// All basis gradients at one point (rows = basis functions).
  Eigen::Matrix<double, Eigen::Dynamic, 2> gradients(const Vec2& x) const;

  /// Value matrix at quadrature points (rows = points, cols = basis functions).
  Eigen::MatrixXd values_at(const QuadratureRule& quad) const;
  /// Gradient component matrices at quadrature points.
  std::array<Eigen::MatrixXd, 2> gradients_at(const QuadratureRule& quad) const;

  /// Replace the basis by its Gram-Schmidt orthonormalization with respect
  /// to the L2(T) inner product computed with `quad` (exactness >= 2 degree).
  void orthonormalize(const QuadratureRule& quad);

  bool is_orthonormalized() const { return orthonormalized_; }

 private:
  Eigen::VectorXd monomials(const Vec2& x) const;

  int cell_ = -1;
  int degree_ = 0;
  Vec2 center_ = Vec2::Zero();
  double h_ = 1.0;
  std::vector<std::array<int, 2>> exponents_;
  Eigen::MatrixXd coeff_;  // change of basis; empty means identity
  bool orthonormalized_ = false;
};

/// 1D scaled monomials on a face, in the arclength coordinate centered at
/// the face midpoint and scaled by h_F.
class FaceBasis {
 public:
  FaceBasis() = default;
  FaceBasis(const Mesh& mesh, int face, int degree);

  int dim() const { return degree_ + 1; }
  int degree() const { return degree_; }
  int face() const { return face_; }

  Eigen::VectorXd values(const Vec2& x) const;
  Eigen::MatrixXd values_at(const QuadratureRule& quad) const;

 private:
  int face_ = -1;
  int degree_ = 0;
  Vec2 midpoint_ = Vec2::Zero();
  Vec2 tangent_ = Vec2::UnitX();
  double h_ = 1.0;
};

/// phi^T diag(w) psi for value matrices returned by values_at.
Eigen::MatrixXd gram_matrix(const Eigen::MatrixXd& phi, const Eigen::MatrixXd& psi,
                            const std::vector<double>& weights);

Eigen::MatrixXd mass_matrix(const CellBasis& basis, const QuadratureRule& quad);
Eigen::MatrixXd mass_matrix(const FaceBasis& basis, const QuadratureRule& quad);

/// int_T grad phi_i . grad phi_j
Eigen::MatrixXd stiffness_matrix(const CellBasis& basis, const QuadratureRule& quad);

/// L2-orthogonal projection of a scalar field onto P^degree(T); returns the
/// coefficient vector in the scaled monomial cell basis. Throws if the mass
/// matrix is numerically singular.
Eigen::VectorXd l2_project_cell(const ScalarField& f, const Mesh& mesh, int cell, int degree,
                                int quad_degree = -1);

/// Same on a face, in the face basis.
Eigen::VectorXd l2_project_face(const ScalarField& f, const Mesh& mesh, int face, int degree,
                                int quad_degree = -1);

}  // namespace hho
