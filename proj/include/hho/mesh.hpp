#pragma once

#include "hho/geometry.hpp"

#include <array>
#include <optional>
#include <string>
#include <vector>

namespace hho {

/// Axis-aligned rectangular computational domain, optionally with an
/// axis-aligned rectangular hole (used by the degenerate-diffusion test case).
struct Domain {
  Vec2 lo{0.0, 0.0};
  Vec2 hi{1.0, 1.0};
  bool has_hole = false;
  Vec2 hole_lo{0.0, 0.0};
  Vec2 hole_hi{0.0, 0.0};

  double area() const {
    double a = (hi.x() - lo.x()) * (hi.y() - lo.y());
    if (has_hole) a -= (hole_hi.x() - hole_lo.x()) * (hole_hi.y() - hole_lo.y());
    return a;
  }

  static Domain unit_square() { return Domain{}; }

  /// (-1,1)^2 with the closed square [-1/2,1/2]^2 removed.
  static Domain square_ring() {
    Domain d;
    d.lo = Vec2(-1.0, -1.0);
    d.hi = Vec2(1.0, 1.0);
    d.has_hole = true;
    d.hole_lo = Vec2(-0.5, -0.5);
    d.hole_hi = Vec2(0.5, 0.5);
    return d;
  }
};

struct Face {
  std::array<int, 2> vertex{-1, -1};
  int owner = -1;      ///< first incident cell; the face normal points out of it
  int neighbor = -1;   ///< second incident cell, or -1 for a boundary face
  Vec2 normal;         ///< unit normal, oriented out of the owner cell
  Vec2 midpoint;
  double diameter = 0.0;  ///< h_F (equals the measure for a straight segment)
  double measure = 0.0;

  bool is_boundary() const { return neighbor < 0; }
};

struct Cell {
  std::vector<int> vertices;  ///< counterclockwise loop
  std::vector<int> faces;     ///< face ids, aligned with the edges of the loop
  std::vector<double> face_orientation;  ///< +1 if the cell owns the face, -1 otherwise
  Vec2 centroid;
  double diameter = 0.0;  ///< h_T
  double measure = 0.0;   ///< |T|
  int subdomain = 1;      ///< 1-based tag into the physical-data subdomain list
};

/// Immutable polygonal mesh with deduplicated faces. Construction happens
/// through build_mesh / the generators / load_mesh; afterwards the structure
/// is safe for shared concurrent reads.
struct Mesh {
  std::vector<Vec2> vertices;
  std::vector<Cell> cells;
  std::vector<Face> faces;
  std::vector<int> boundary_faces;

  int n_cells() const { return static_cast<int>(cells.size()); }
  int n_faces() const { return static_cast<int>(faces.size()); }
  int n_vertices() const { return static_cast<int>(vertices.size()); }

  /// max_T h_T
  double meshsize() const;

  /// Outward normal n_TF of face `cell.faces[local_face]` seen from `cell`.
  Vec2 outward_normal(int cell, int local_face) const {
    const Cell& T = cells[cell];
    return T.face_orientation[local_face] * faces[T.faces[local_face]].normal;
  }

  /// Endpoints of a face, as positions.
  std::array<Vec2, 2> face_points(int face) const {
    const Face& F = faces[face];
    return {vertices[F.vertex[0]], vertices[F.vertex[1]]};
  }

  /// Local index of `face` within `cell`, or -1.
  int local_face_index(int cell, int face) const;
};

/// Assemble a mesh from raw vertex coordinates and per-cell vertex loops.
/// Faces are deduplicated by their (sorted) vertex pair. Throws on dangling
/// vertex indices, non-manifold faces and nonpositive cell measures.
Mesh build_mesh(std::vector<Vec2> vertices, const std::vector<std::vector<int>>& cell_loops,
                const std::vector<int>& subdomain_tags = {});

enum class MeshFamily { cartesian, triangular, hexagonal, kershaw };

MeshFamily mesh_family_from_string(const std::string& name);
std::string to_string(MeshFamily family);

/// Built-in mesh generators. `n` counts subdivisions across the domain
/// (cartesian(n) on the unit square has n^2 cells, triangular(n) 2n^2).
/// For a domain with a hole, the hole boundary must fall on grid lines;
/// only the cartesian and triangular families support holes.
Mesh generate_mesh(MeshFamily family, int n, const Domain& domain = Domain::unit_square());

/// Plain-text mesh reader; format documented in save_mesh.
Mesh load_mesh(const std::string& path);

/// Writes `nv nc`, then nv lines `x y`, then nc lines `m v1 ... vm tag`.
/// The decimal representation round-trips bit-exactly through load_mesh.
void save_mesh(const Mesh& mesh, const std::string& path);

struct ValidationReport {
  double worst_face_ratio = 1.0;   ///< min over faces of h_F / h_T
  double regularity_estimate = 1.0;  ///< sqrt of the worst ratio
  int max_faces_per_cell = 0;
  double min_cell_measure = 0.0;
  double total_measure = 0.0;
  bool all_star_shaped = true;
  std::vector<int> non_star_cells;
};

ValidationReport validate(const Mesh& mesh);

}  // namespace hho
