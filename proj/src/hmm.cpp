#include "hho/hmm.hpp"

#include "hho/quadrature.hpp"

#include <stdexcept>

namespace hho {

namespace {

struct CellGeometry {
  std::vector<double> face_measure;
  std::vector<double> face_diameter;
  std::vector<Vec2> normal;     // n_TF
  std::vector<Vec2> offset;     // face midpoint - cell centroid
  std::vector<double> beta_n_mean;  // face average of beta . n_TF
  std::vector<double> nu_face;
  double nu = 0.0;
  double measure = 0.0;
};

CellGeometry cell_geometry(const Mesh& mesh, const PhysicalData& data, int cell, int qd) {
  const Cell& T = mesh.cells[cell];
  CellGeometry g;
  g.nu = data.nu_of(mesh, cell);
  g.measure = T.measure;
  const std::size_t nf = T.faces.size();
  g.face_measure.resize(nf);
  g.face_diameter.resize(nf);
  g.normal.resize(nf);
  g.offset.resize(nf);
  g.beta_n_mean.resize(nf);
  g.nu_face.resize(nf);
  for (std::size_t i = 0; i < nf; ++i) {
    const Face& F = mesh.faces[T.faces[i]];
    g.face_measure[i] = F.measure;
    g.face_diameter[i] = F.diameter;
    g.normal[i] = mesh.outward_normal(cell, static_cast<int>(i));
    g.offset[i] = F.midpoint - T.centroid;
    g.nu_face[i] = data.nu_of_face(mesh, T.faces[i]);
    const QuadratureRule fq = face_quadrature(mesh, T.faces[i], qd);
    double mean = 0.0;
    for (int q = 0; q < fq.size(); ++q)
      mean += fq.weights[q] * data.velocity(fq.points[q]).dot(g.normal[i]);
    g.beta_n_mean[i] = mean / F.measure;
  }
  return g;
}

/// Row vectors of the linearized fluxes of one cell: flux[i] gives the
/// coefficients of (F_d + F_a)_{T,F_i} in the unknowns (u_T, u_{F_0}, ...).
std::vector<Eigen::RowVectorXd> linearized_fluxes(const CellGeometry& g,
                                                  const FluxFunction& flux) {
  const int nf = static_cast<int>(g.face_measure.size());
  const int n = 1 + nf;

  // Discrete gradient: coefficients of grad_T u in each unknown.
  Eigen::Matrix<double, 2, Eigen::Dynamic> grad(2, n);
  grad.setZero();
  for (int i = 0; i < nf; ++i) {
    const Vec2 w = (g.face_measure[i] / g.measure) * g.normal[i];
    grad.col(1 + i) += w;
    grad.col(0) -= w;
  }

  // Stabilization residuals delta_i = u_F - u_T - grad_T u . (x_F - x_T).
  std::vector<Eigen::RowVectorXd> delta(nf, Eigen::RowVectorXd::Zero(n));
  for (int i = 0; i < nf; ++i) {
    delta[i](0) = -1.0;
    delta[i](1 + i) += 1.0;
    delta[i] -= g.offset[i].transpose() * grad;
  }

  std::vector<Eigen::RowVectorXd> fluxes(nf, Eigen::RowVectorXd::Zero(n));
  // Weighted sum of the residuals entering the flux correction.
  Eigen::Matrix<double, 2, Eigen::Dynamic> correction(2, n);
  correction.setZero();
  for (int i = 0; i < nf; ++i)
    correction += (g.nu / g.face_diameter[i]) * g.face_measure[i] * g.offset[i] * delta[i];
  correction /= g.measure;

  for (int i = 0; i < nf; ++i) {
    // Diffusive flux.
    fluxes[i] = -(g.nu * g.normal[i].transpose() * grad) -
                (g.nu / g.face_diameter[i]) * delta[i] +
                g.normal[i].transpose() * correction;
    // Advective flux at the face-averaged Peclet number.
    const double pe = g.face_diameter[i] * g.beta_n_mean[i] / g.nu_face[i];
    const double scale = g.nu_face[i] / g.face_diameter[i];
    fluxes[i](0) += scale * flux.plus(pe);
    fluxes[i](1 + i) -= scale * flux.minus(pe);
  }
  return fluxes;
}

}  // namespace

AssembledSystem hmm_flux_system(const Mesh& mesh, const PhysicalData& data,
                                const FluxFunction& flux, int quad_degree) {
  if (quad_degree < 0) quad_degree = 4;
  for (double nu : data.nu)
    if (!(nu > 0.0))
      throw std::invalid_argument("hmm_flux_system: requires positive diffusion everywhere");
  if (data.reaction)
    for (int c = 0; c < mesh.n_cells(); ++c)
      if (std::abs(data.reaction(mesh.cells[c].centroid)) > 0.0)
        throw std::invalid_argument("hmm_flux_system: requires a vanishing reaction");

  AssembledSystem sys;
  sys.boundary_mode = BoundaryMode::strong;
  sys.map.face_dim = 1;
  sys.map.cell_dim = 1;
  sys.map.n_cells = mesh.n_cells();
  sys.map.face_offset.assign(mesh.n_faces(), -1);
  int offset = 0;
  for (int f = 0; f < mesh.n_faces(); ++f)
    if (!mesh.faces[f].is_boundary()) sys.map.face_offset[f] = offset++;
  sys.map.n_face_system = offset;

  sys.local_matrix.resize(mesh.n_cells());
  sys.local_rhs.resize(mesh.n_cells());
  sys.scatter.resize(mesh.n_cells());

  std::vector<Eigen::Triplet<double>> triplets;
  Eigen::VectorXd rhs = Eigen::VectorXd::Zero(sys.map.n_total());

  for (int c = 0; c < mesh.n_cells(); ++c) {
    const Cell& T = mesh.cells[c];
    const int nf = static_cast<int>(T.faces.size());
    const CellGeometry g = cell_geometry(mesh, data, c, quad_degree);
    const auto fluxes = linearized_fluxes(g, flux);

    // Local layout mirrors the k = 0 scheme: cell unknown first.
    Eigen::MatrixXd A = Eigen::MatrixXd::Zero(1 + nf, 1 + nf);
    Eigen::VectorXd b = Eigen::VectorXd::Zero(1 + nf);
    for (int i = 0; i < nf; ++i) {
      A.row(0) += g.face_measure[i] * fluxes[i];              // flux balance
      A.row(1 + i) -= g.face_measure[i] * fluxes[i];          // flux continuity
    }
    const QuadratureRule cq = cell_quadrature(mesh, c, quad_degree);
    for (int q = 0; q < cq.size(); ++q)
      b(0) += cq.weights[q] * data.source(cq.points[q], T.subdomain);

    sys.local_matrix[c] = A;
    sys.local_rhs[c] = b;
    std::vector<int>& idx = sys.scatter[c];
    idx.assign(1 + nf, -1);
    idx[0] = sys.map.cell_offset(c);
    for (int i = 0; i < nf; ++i) idx[1 + i] = sys.map.face_offset[T.faces[i]];

    for (int i = 0; i < 1 + nf; ++i) {
      if (idx[i] < 0) continue;
      rhs(idx[i]) += b(i);
      for (int j = 0; j < 1 + nf; ++j)
        if (idx[j] >= 0 && A(i, j) != 0.0) triplets.emplace_back(idx[i], idx[j], A(i, j));
    }
  }

  sys.matrix.resize(sys.map.n_total(), sys.map.n_total());
  sys.matrix.setFromTriplets(triplets.begin(), triplets.end());
  sys.rhs = std::move(rhs);
  return sys;
}

std::vector<std::vector<double>> hmm_fluxes(const Mesh& mesh, const PhysicalData& data,
                                            const FluxFunction& flux,
                                            const Eigen::VectorXd& cell_values,
                                            const Eigen::VectorXd& face_values,
                                            int quad_degree) {
  if (quad_degree < 0) quad_degree = 4;
  std::vector<std::vector<double>> out(mesh.n_cells());
  for (int c = 0; c < mesh.n_cells(); ++c) {
    const Cell& T = mesh.cells[c];
    const int nf = static_cast<int>(T.faces.size());
    const CellGeometry g = cell_geometry(mesh, data, c, quad_degree);
    const auto fluxes = linearized_fluxes(g, flux);
    Eigen::VectorXd u(1 + nf);
    u(0) = cell_values(c);
    for (int i = 0; i < nf; ++i) u(1 + i) = face_values(T.faces[i]);
    out[c].resize(nf);
    for (int i = 0; i < nf; ++i) out[c][i] = fluxes[i].dot(u);
  }
  return out;
}

}  // namespace hho
