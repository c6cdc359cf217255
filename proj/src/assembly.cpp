#include "hho/assembly.hpp"

#include <Eigen/SparseLU>

#include <cstdio>
#include <fstream>
#include <stdexcept>

namespace hho {

namespace {

GlobalDofMap make_dof_map(const Discretization& disc, BoundaryMode mode) {
  const Mesh& mesh = disc.mesh();
  GlobalDofMap map;
  map.face_dim = disc.face_dim();
  map.cell_dim = disc.cell_dim();
  map.n_cells = mesh.n_cells();
  map.face_offset.assign(mesh.n_faces(), -1);
  int offset = 0;
  for (int f = 0; f < mesh.n_faces(); ++f) {
    if (mode == BoundaryMode::strong && mesh.faces[f].is_boundary()) continue;
    map.face_offset[f] = offset;
    offset += map.face_dim;
  }
  map.n_face_system = offset;
  return map;
}

std::vector<int> scatter_indices(const Discretization& disc, const GlobalDofMap& map, int cell) {
  const Cell& T = disc.mesh().cells[cell];
  const LocalDofLayout& layout = disc.local(cell).layout;
  std::vector<int> idx(layout.size(), -1);
  for (int i = 0; i < layout.cell_dim; ++i) idx[i] = map.cell_offset(cell) + i;
  for (std::size_t f = 0; f < T.faces.size(); ++f) {
    const int off = map.face_offset[T.faces[f]];
    if (off < 0) continue;
    for (int i = 0; i < layout.face_dim; ++i)
      idx[layout.face_offset(static_cast<int>(f)) + i] = off + i;
  }
  return idx;
}

}  // namespace

AssembledSystem assemble(const Discretization& disc, double sigma, BoundaryMode mode) {
  const Mesh& mesh = disc.mesh();
  const PhysicalData& data = disc.data();
  if (sigma <= 0.0) throw std::invalid_argument("assemble: boundary penalty must be positive");

  if (data.mu0 <= 0.0) {
    for (int c = 0; c < mesh.n_cells(); ++c)
      if (data.nu_of(mesh, c) <= 0.0)
        throw std::invalid_argument(
            "assemble: the reaction must be bounded away from zero unless diffusion is "
            "positive everywhere");
  }

  AssembledSystem sys;
  sys.map = make_dof_map(disc, mode);
  sys.sigma = sigma;
  sys.boundary_mode = mode;
  sys.local_matrix.resize(mesh.n_cells());
  sys.local_rhs.resize(mesh.n_cells());
  sys.scatter.resize(mesh.n_cells());

  std::vector<Eigen::Triplet<double>> triplets;
  Eigen::VectorXd rhs = Eigen::VectorXd::Zero(sys.map.n_total());

  for (int c = 0; c < mesh.n_cells(); ++c) {
    const CellOperators& ops = disc.local(c);
    const Cell& T = mesh.cells[c];
    const LocalDofLayout& layout = ops.layout;
    const int tag = T.subdomain;

    Eigen::MatrixXd A = ops.diffusion + ops.advection_reaction;
    Eigen::VectorXd b = Eigen::VectorXd::Zero(layout.size());

    // Load: (f, v_T)_T.
    for (int q = 0; q < ops.cell_quad.size(); ++q)
      b.head(layout.cell_dim) += ops.cell_quad.weights[q] *
                                 data.source(ops.cell_quad.points[q], tag) *
                                 ops.basis_k.values(ops.cell_quad.points[q]);

    // Weakly enforced boundary terms.
    for (std::size_t i = 0; i < T.faces.size(); ++i) {
      const int f = T.faces[i];
      const Face& F = mesh.faces[f];
      if (!F.is_boundary()) continue;
      const QuadratureRule& fq = ops.face_quads[i];
      const int off = layout.face_offset(static_cast<int>(i));
      const double nu_f = data.nu_of_face(mesh, f);

      if (mode == BoundaryMode::strong) {
        double gmax = 0.0;
        for (const Vec2& p : fq.points) gmax = std::max(gmax, std::abs(data.dirichlet(p, tag)));
        if (gmax > 1e-12)
          throw std::invalid_argument(
              "assemble: strong boundary mode requires homogeneous boundary data");
        continue;
      }

      const Eigen::MatrixXd face_phi = ops.face_bases[i].values_at(fq);

      if (nu_f > 0.0) {
        // -(nu_F grad(p w).n_TF, v_F)_F: trial columns over all local dofs.
        Eigen::MatrixXd grad_n(fq.size(), ops.basis_k1.dim());
        const Vec2 n = mesh.outward_normal(c, static_cast<int>(i));
        for (int q = 0; q < fq.size(); ++q)
          grad_n.row(q) = (ops.basis_k1.gradients(fq.points[q]) * n).transpose();
        const Eigen::MatrixXd grad_rec = grad_n * ops.reconstruction;  // nq x N
        A.block(off, 0, layout.face_dim, layout.size()) -=
            nu_f * gram_matrix(face_phi, grad_rec, fq.weights);

        // Penalty (sigma nu_F / h_F)(w_F, v_F)_F.
        A.block(off, off, layout.face_dim, layout.face_dim) +=
            (sigma * nu_f / F.diameter) * gram_matrix(face_phi, face_phi, fq.weights);
      }

      // Advective boundary term ((nu_F/h_F) A^+(Pe_F) w_F, v_F)_F.
      const FaceCouplingWeights& cw = ops.coupling[i];
      Eigen::VectorXd wp(fq.size());
      for (int q = 0; q < fq.size(); ++q) wp(q) = fq.weights[q] * cw.plus(q);
      A.block(off, off, layout.face_dim, layout.face_dim) +=
          face_phi.transpose() * wp.asDiagonal() * face_phi;

      // Boundary data: ((nu_F/h_F) A^-(Pe_F) g + sigma nu_F/h_F g, v_F)_F.
      for (int q = 0; q < fq.size(); ++q) {
        const double g = data.dirichlet(fq.points[q], tag);
        const double weight = fq.weights[q] * (cw.minus(q) + sigma * nu_f / F.diameter);
        b.segment(off, layout.face_dim) += weight * g * face_phi.row(q).transpose();
      }
    }

    sys.local_matrix[c] = std::move(A);
    sys.local_rhs[c] = std::move(b);
    sys.scatter[c] = scatter_indices(disc, sys.map, c);

    const std::vector<int>& idx = sys.scatter[c];
    const Eigen::MatrixXd& Aloc = sys.local_matrix[c];
    for (int i = 0; i < layout.size(); ++i) {
      if (idx[i] < 0) continue;
      rhs(idx[i]) += sys.local_rhs[c](i);
      for (int j = 0; j < layout.size(); ++j)
        if (idx[j] >= 0 && Aloc(i, j) != 0.0) triplets.emplace_back(idx[i], idx[j], Aloc(i, j));
    }
  }

  sys.matrix.resize(sys.map.n_total(), sys.map.n_total());
  sys.matrix.setFromTriplets(triplets.begin(), triplets.end());
  sys.rhs = std::move(rhs);
  return sys;
}

CondensedSystem condense(const AssembledSystem& system) {
  CondensedSystem out;
  out.map = system.map;
  const int n_cells = system.map.n_cells;
  const int cell_dim = system.map.cell_dim;
  out.cell_factor.resize(n_cells);
  out.cell_face_coupling.resize(n_cells);
  out.cell_load.resize(n_cells);
  out.face_scatter.resize(n_cells);

  std::vector<Eigen::Triplet<double>> triplets;
  Eigen::VectorXd rhs = Eigen::VectorXd::Zero(system.map.n_face_system);

  for (int c = 0; c < n_cells; ++c) {
    const Eigen::MatrixXd& A = system.local_matrix[c];
    const int n_local = static_cast<int>(A.rows());
    const int n_local_faces = n_local - cell_dim;

    out.cell_factor[c].compute(A.topLeftCorner(cell_dim, cell_dim));
    if (out.cell_factor[c].rcond() < 1e-14)
      throw std::runtime_error("condense: singular cell block on cell " + std::to_string(c));
    out.cell_face_coupling[c] = A.topRightCorner(cell_dim, n_local_faces);
    out.cell_load[c] = system.local_rhs[c].head(cell_dim);
    out.face_scatter[c].assign(system.scatter[c].begin() + cell_dim, system.scatter[c].end());

    const Eigen::MatrixXd A_fc = A.bottomLeftCorner(n_local_faces, cell_dim);
    const Eigen::MatrixXd inv_cc_cf = out.cell_factor[c].solve(out.cell_face_coupling[c]);
    const Eigen::VectorXd inv_cc_b = out.cell_factor[c].solve(out.cell_load[c]);
    const Eigen::MatrixXd schur =
        A.bottomRightCorner(n_local_faces, n_local_faces) - A_fc * inv_cc_cf;
    const Eigen::VectorXd schur_rhs = system.local_rhs[c].tail(n_local_faces) - A_fc * inv_cc_b;

    const std::vector<int>& idx = out.face_scatter[c];
    for (int i = 0; i < n_local_faces; ++i) {
      if (idx[i] < 0) continue;
      rhs(idx[i]) += schur_rhs(i);
      for (int j = 0; j < n_local_faces; ++j)
        if (idx[j] >= 0) triplets.emplace_back(idx[i], idx[j], schur(i, j));
    }
  }

  out.matrix.resize(system.map.n_face_system, system.map.n_face_system);
  out.matrix.setFromTriplets(triplets.begin(), triplets.end());
  out.rhs = std::move(rhs);
  return out;
}

namespace {

/// Expand a face-system vector to the full [faces][cells] DOF layout with
/// recovered cell unknowns.
DiscreteSolution recover(const Discretization& disc, const CondensedSystem& system,
                         const Eigen::VectorXd& face_solution, double residual) {
  DiscreteSolution sol;
  sol.residual = residual;
  sol.dofs = Eigen::VectorXd::Zero(disc.n_dofs());

  for (int f = 0; f < disc.mesh().n_faces(); ++f) {
    const int off = system.map.face_offset[f];
    if (off < 0) continue;
    sol.dofs.segment(disc.face_offset(f), disc.face_dim()) =
        face_solution.segment(off, system.map.face_dim);
  }

  for (int c = 0; c < disc.mesh().n_cells(); ++c) {
    const std::vector<int>& idx = system.face_scatter[c];
    Eigen::VectorXd uf = Eigen::VectorXd::Zero(idx.size());
    for (std::size_t i = 0; i < idx.size(); ++i)
      if (idx[i] >= 0) uf(static_cast<int>(i)) = face_solution(idx[i]);
    const Eigen::VectorXd uc =
        system.cell_factor[c].solve(system.cell_load[c] - system.cell_face_coupling[c] * uf);
    sol.dofs.segment(disc.cell_offset(c), disc.cell_dim()) = uc;
  }
  return sol;
}

}  // namespace

DiscreteSolution solve(const Discretization& disc, const CondensedSystem& system) {
  Eigen::SparseMatrix<double> A = system.matrix;
  A.makeCompressed();
  Eigen::SparseLU<Eigen::SparseMatrix<double>> lu;
  lu.compute(A);
  if (lu.info() != Eigen::Success)
    throw std::runtime_error("solve: sparse factorization of the condensed system failed");
  const Eigen::VectorXd x = lu.solve(system.rhs);
  const double denom = std::max(system.rhs.norm(), 1e-300);
  const double residual = (A * x - system.rhs).norm() / denom;
  return recover(disc, system, x, residual);
}

DiscreteSolution solve_uncondensed(const Discretization& disc, const AssembledSystem& system) {
  Eigen::SparseMatrix<double> A = system.matrix;
  A.makeCompressed();
  Eigen::SparseLU<Eigen::SparseMatrix<double>> lu;
  lu.compute(A);
  if (lu.info() != Eigen::Success)
    throw std::runtime_error("solve_uncondensed: sparse factorization failed");
  const Eigen::VectorXd x = lu.solve(system.rhs);
  const double denom = std::max(system.rhs.norm(), 1e-300);

  DiscreteSolution sol;
  sol.residual = (A * x - system.rhs).norm() / denom;
  sol.dofs = Eigen::VectorXd::Zero(disc.n_dofs());
  for (int f = 0; f < disc.mesh().n_faces(); ++f) {
    const int off = system.map.face_offset[f];
    if (off < 0) continue;
    sol.dofs.segment(disc.face_offset(f), disc.face_dim()) = x.segment(off, system.map.face_dim);
  }
  for (int c = 0; c < disc.mesh().n_cells(); ++c)
    sol.dofs.segment(disc.cell_offset(c), disc.cell_dim()) =
        x.segment(system.map.cell_offset(c), system.map.cell_dim);
  return sol;
}

void dump_coordinate_format(const Eigen::SparseMatrix<double>& matrix, const std::string& path) {
  std::ofstream out(path);
  if (!out) throw std::runtime_error("dump_coordinate_format: cannot open " + path);
  char buf[96];
  for (int k = 0; k < matrix.outerSize(); ++k)
    for (Eigen::SparseMatrix<double>::InnerIterator it(matrix, k); it; ++it) {
      std::snprintf(buf, sizeof buf, "%ld %ld %.17g\n", static_cast<long>(it.row()),
                    static_cast<long>(it.col()), it.value());
      out << buf;
    }
}

}  // namespace hho
