#pragma once

#include "hho/discretization.hpp"

#include <Eigen/Sparse>

#include <string>
#include <vector>

namespace hho {

/// Weak enforcement (penalty + one-sided flux terms on the Dirichlet
/// boundary) is the scheme's default. The strong variant eliminates
/// boundary face unknowns and exists for cross-validation against the
/// mimetic flux form and for penalty-limit studies; it requires
/// homogeneous boundary data.
enum class BoundaryMode { weak, strong };

struct GlobalDofMap {
  int face_dim = 1;
  int cell_dim = 1;
  std::vector<int> face_offset;  ///< offset in the face system, -1 if eliminated
  int n_face_system = 0;         ///< number of active face unknowns
  int n_cells = 0;

  int cell_offset(int cell) const { return n_face_system + cell * cell_dim; }
  int n_total() const { return n_face_system + n_cells * cell_dim; }
};

/// The uncondensed linear system (face unknowns first, then cell unknowns)
/// together with the per-cell dense blocks it was scattered from.
struct AssembledSystem {
  GlobalDofMap map;
  Eigen::SparseMatrix<double> matrix;
  Eigen::VectorXd rhs;
  std::vector<Eigen::MatrixXd> local_matrix;  ///< per cell, local layout, boundary terms included
  std::vector<Eigen::VectorXd> local_rhs;
  std::vector<std::vector<int>> scatter;  ///< per cell: local dof -> system dof (-1 if eliminated)
  double sigma = 1.0;
  BoundaryMode boundary_mode = BoundaryMode::weak;
};

/// Face-only system after static condensation, with everything needed to
/// recover the cell unknowns.
struct CondensedSystem {
  GlobalDofMap map;
  Eigen::SparseMatrix<double> matrix;  ///< face system only
  Eigen::VectorXd rhs;
  std::vector<Eigen::PartialPivLU<Eigen::MatrixXd>> cell_factor;  ///< LU of the cell blocks
  std::vector<Eigen::MatrixXd> cell_face_coupling;  ///< A_cf per cell
  std::vector<Eigen::VectorXd> cell_load;
  std::vector<std::vector<int>> face_scatter;  ///< per cell: local face dof -> face system dof
};

/// Discrete solution in the global DOF layout of the Discretization
/// (every face, then every cell), eliminated face unknowns set to zero.
struct DiscreteSolution {
  Eigen::VectorXd dofs;
  double residual = 0.0;

  Eigen::VectorXd cell_coeffs(const Discretization& disc, int cell) const {
    return dofs.segment(disc.cell_offset(cell), disc.cell_dim());
  }
  Eigen::VectorXd face_coeffs(const Discretization& disc, int face) const {
    return dofs.segment(disc.face_offset(face), disc.face_dim());
  }
};

/// Assembles the discrete problem. Requires mu0 > 0 unless every cell
/// carries positive diffusion (otherwise cell blocks may be singular).
AssembledSystem assemble(const Discretization& disc, double sigma,
                         BoundaryMode mode = BoundaryMode::weak);

CondensedSystem condense(const AssembledSystem& system);

/// Sparse direct solve of the condensed system plus cell recovery.
DiscreteSolution solve(const Discretization& disc, const CondensedSystem& system);

/// Direct solve of the uncondensed system (oracle path for the condensation).
DiscreteSolution solve_uncondensed(const Discretization& disc, const AssembledSystem& system);

/// Writes "row col value" lines (0-based) for external verification.
void dump_coordinate_format(const Eigen::SparseMatrix<double>& matrix, const std::string& path);

}  // namespace hho
