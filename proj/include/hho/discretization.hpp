#pragma once

#include "hho/classification.hpp"
#include "hho/local_ops.hpp"

#include <vector>

namespace hho {

/// Per-cell operators for a whole mesh, plus the global DOF layout used by
/// every module downstream: all face blocks first (k+1 coefficients per
/// face, in face order), then all cell blocks. Face unknowns exist on every
/// face; boundary conditions are enforced weakly by default.
class Discretization {
 public:
  Discretization(const Mesh& mesh, const PhysicalData& data, int k, FluxFunction flux,
                 DiscretizationOptions opts = {});

  const Mesh& mesh() const { return *mesh_; }
  const PhysicalData& data() const { return *data_; }
  const BoundaryClassification& classification() const { return classification_; }
  int k() const { return k_; }
  const FluxFunction& flux() const { return flux_; }
  const DiscretizationOptions& options() const { return opts_; }

  const CellOperators& local(int cell) const { return local_[cell]; }

  int face_dim() const { return k_ + 1; }
  int cell_dim() const { return CellBasis::dimension(k_); }
  int n_face_dofs() const { return mesh_->n_faces() * face_dim(); }
  int n_cell_dofs() const { return mesh_->n_cells() * cell_dim(); }
  int n_dofs() const { return n_face_dofs() + n_cell_dofs(); }
  int face_offset(int face) const { return face * face_dim(); }
  int cell_offset(int cell) const { return n_face_dofs() + cell * cell_dim(); }

  /// Local DOF vector (cell block + face blocks) of one cell, gathered from
  /// a global vector.
  Eigen::VectorXd gather_local(const Eigen::VectorXd& global, int cell) const;

 private:
  const Mesh* mesh_;
  const PhysicalData* data_;
  int k_;
  FluxFunction flux_;
  DiscretizationOptions opts_;
  BoundaryClassification classification_;
  std::vector<CellOperators> local_;
};

}  // namespace hho
