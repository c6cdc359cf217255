#pragma once

#include "hho/physical_data.hpp"

#include <vector>

namespace hho {

/// Boundary and interface classification of a mesh with respect to the
/// physical data: which boundary faces carry the Dirichlet condition, which
/// interior faces lie on the diffusive/nondiffusive interface and on which
/// side of it, and the maximal-diffusion cell attached to every face.
struct BoundaryClassification {
  /// Per face: true for boundary faces where nu > 0 on the owner cell or
  /// the velocity flows in somewhere on the face. False for interior faces.
  std::vector<char> dirichlet_boundary;
  /// Faces on the diffusive/nondiffusive interface.
  std::vector<int> interface_faces;
  /// Aligned with interface_faces: +1 if the face lies in the outflow part
  /// of the interface (velocity exits the diffusive region), -1 otherwise.
  std::vector<int> interface_side;
  /// Per face: the incident cell with maximal diffusion (ties broken by id).
  std::vector<int> diffusive_cell;

  bool on_interface(int face) const {
    for (int f : interface_faces)
      if (f == face) return true;
    return false;
  }
  int side_of(int face) const {
    for (std::size_t i = 0; i < interface_faces.size(); ++i)
      if (interface_faces[i] == face) return interface_side[i];
    return 0;
  }
};

/// Classifies faces and verifies the mesh/data compatibility assumptions:
/// every interface face must see a single sign of the normal velocity, and
/// no face may be both diffusion-free on all sides and orthogonal to the
/// velocity. Throws std::runtime_error naming the offending face otherwise.
BoundaryClassification classify(const Mesh& mesh, const PhysicalData& data, int quad_degree = 10);

}  // namespace hho
