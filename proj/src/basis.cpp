#include "hho/basis.hpp"

#include <stdexcept>

namespace hho {

CellBasis::CellBasis(const Mesh& mesh, int cell, int degree)
    : cell_(cell), degree_(degree), center_(mesh.cells[cell].centroid),
      h_(mesh.cells[cell].diameter) {
  exponents_.reserve(dimension(degree));
  for (int d = 0; d <= degree; ++d)
    for (int i = d; i >= 0; --i) exponents_.push_back({i, d - i});
}

Eigen::VectorXd CellBasis::monomials(const Vec2& x) const {
  const double X = (x.x() - center_.x()) / h_;
  const double Y = (x.y() - center_.y()) / h_;
  Eigen::VectorXd v(dim());
  for (int n = 0; n < dim(); ++n)
    v(n) = std::pow(X, exponents_[n][0]) * std::pow(Y, exponents_[n][1]);
  return v;
}

Eigen::VectorXd CellBasis::values(const Vec2& x) const {
  Eigen::VectorXd v = monomials(x);
  if (coeff_.size() > 0) return coeff_ * v;
  return v;
}

Eigen::Matrix<double, Eigen::Dynamic, 2> CellBasis::gradients(const Vec2& x) const {
  const double X = (x.x() - center_.x()) / h_;
  const double Y = (x.y() - center_.y()) / h_;
  Eigen::Matrix<double, Eigen::Dynamic, 2> g(dim(), 2);
  for (int n = 0; n < dim(); ++n) {
    const int i = exponents_[n][0];
    const int j = exponents_[n][1];
    g(n, 0) = i == 0 ? 0.0 : i * std::pow(X, i - 1) * std::pow(Y, j) / h_;
    g(n, 1) = j == 0 ? 0.0 : j * std::pow(X, i) * std::pow(Y, j - 1) / h_;
  }
  if (coeff_.size() > 0) return coeff_ * g;
  return g;
}

Eigen::MatrixXd CellBasis::values_at(const QuadratureRule& quad) const {
  Eigen::MatrixXd phi(quad.size(), dim());
  for (int q = 0; q < quad.size(); ++q) phi.row(q) = values(quad.points[q]).transpose();
  return phi;
}

std::array<Eigen::MatrixXd, 2> CellBasis::gradients_at(const QuadratureRule& quad) const {
  std::array<Eigen::MatrixXd, 2> out{Eigen::MatrixXd(quad.size(), dim()),
                                     Eigen::MatrixXd(quad.size(), dim())};
  for (int q = 0; q < quad.size(); ++q) {
    const auto g = gradients(quad.points[q]);
    out[0].row(q) = g.col(0).transpose();
    out[1].row(q) = g.col(1).transpose();
  }
  return out;
}

void CellBasis::orthonormalize(const QuadratureRule& quad) {
  const Eigen::MatrixXd M = mass_matrix(*this, quad);
  Eigen::LLT<Eigen::MatrixXd> llt(M);
  if (llt.info() != Eigen::Success)
    throw std::runtime_error("CellBasis::orthonormalize: mass matrix not positive definite");
  const Eigen::MatrixXd L = llt.matrixL();
  Eigen::MatrixXd Linv =
      L.triangularView<Eigen::Lower>().solve(Eigen::MatrixXd::Identity(dim(), dim()));
  coeff_ = coeff_.size() > 0 ? Eigen::MatrixXd(Linv * coeff_) : std::move(Linv);
  orthonormalized_ = true;
}

FaceBasis::FaceBasis(const Mesh& mesh, int face, int degree)
    : face_(face), degree_(degree), midpoint_(mesh.faces[face].midpoint),
      h_(mesh.faces[face].diameter) {
  const auto [a, b] = mesh.face_points(face);
  tangent_ = (b - a).normalized();
}

Eigen::VectorXd FaceBasis::values(const Vec2& x) const {
  const double s = (x - midpoint_).dot(tangent_) / h_;
  Eigen::VectorXd v(dim());
  double p = 1.0;
  for (int n = 0; n < dim(); ++n) {
    v(n) = p;
    p *= s;
  }
  return v;
}

Eigen::MatrixXd FaceBasis::values_at(const QuadratureRule& quad) const {
  Eigen::MatrixXd phi(quad.size(), dim());
  for (int q = 0; q < quad.size(); ++q) phi.row(q) = values(quad.points[q]).transpose();
  return phi;
}

Eigen::MatrixXd gram_matrix(const Eigen::MatrixXd& phi, const Eigen::MatrixXd& psi,
                            const std::vector<double>& weights) {
  Eigen::VectorXd w = Eigen::Map<const Eigen::VectorXd>(weights.data(), weights.size());
  return phi.transpose() * w.asDiagonal() * psi;
}

Eigen::MatrixXd mass_matrix(const CellBasis& basis, const QuadratureRule& quad) {
  const Eigen::MatrixXd phi = basis.values_at(quad);
  return gram_matrix(phi, phi, quad.weights);
}

Eigen::MatrixXd mass_matrix(const FaceBasis& basis, const QuadratureRule& quad) {
  const Eigen::MatrixXd phi = basis.values_at(quad);
  return gram_matrix(phi, phi, quad.weights);
}

Eigen::MatrixXd stiffness_matrix(const CellBasis& basis, const QuadratureRule& quad) {
  const auto grads = basis.gradients_at(quad);
  return gram_matrix(grads[0], grads[0], quad.weights) +
         gram_matrix(grads[1], grads[1], quad.weights);
}

namespace {

Eigen::VectorXd project(const ScalarField& f, const Eigen::MatrixXd& phi,
                        const QuadratureRule& quad) {
  const Eigen::MatrixXd M = gram_matrix(phi, phi, quad.weights);
  Eigen::VectorXd b = Eigen::VectorXd::Zero(phi.cols());
  for (int q = 0; q < quad.size(); ++q)
    b += quad.weights[q] * f(quad.points[q]) * phi.row(q).transpose();
  Eigen::LDLT<Eigen::MatrixXd> ldlt(M);
  if (ldlt.info() != Eigen::Success || !ldlt.isPositive())
    throw std::runtime_error("l2 projection: singular mass matrix");
  return ldlt.solve(b);
}

}  // namespace

Eigen::VectorXd l2_project_cell(const ScalarField& f, const Mesh& mesh, int cell, int degree,
                                int quad_degree) {
  if (quad_degree < 0) quad_degree = 2 * degree + 2;
  const CellBasis basis(mesh, cell, degree);
  const QuadratureRule quad = cell_quadrature(mesh, cell, quad_degree);
  return project(f, basis.values_at(quad), quad);
}

Eigen::VectorXd l2_project_face(const ScalarField& f, const Mesh& mesh, int face, int degree,
                                int quad_degree) {
  if (quad_degree < 0) quad_degree = 2 * degree + 2;
  const FaceBasis basis(mesh, face, degree);
  const QuadratureRule quad = face_quadrature(mesh, face, quad_degree);
  return project(f, basis.values_at(quad), quad);
}

}  // namespace hho
