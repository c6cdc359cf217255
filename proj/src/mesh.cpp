#include "hho/mesh.hpp"

#include <algorithm>
#include <map>
#include <stdexcept>

namespace hho {

double Mesh::meshsize() const {
  double h = 0.0;
  for (const Cell& T : cells) h = std::max(h, T.diameter);
  return h;
}

int Mesh::local_face_index(int cell, int face) const {
  const Cell& T = cells[cell];
  for (std::size_t i = 0; i < T.faces.size(); ++i)
    if (T.faces[i] == face) return static_cast<int>(i);
  return -1;
}

Mesh build_mesh(std::vector<Vec2> vertices, const std::vector<std::vector<int>>& cell_loops,
                const std::vector<int>& subdomain_tags) {
  Mesh mesh;
  mesh.vertices = std::move(vertices);
  const int nv = mesh.n_vertices();

  if (!subdomain_tags.empty() && subdomain_tags.size() != cell_loops.size())
    throw std::invalid_argument("build_mesh: subdomain tag list does not match cell count");

  std::map<std::pair<int, int>, int> face_of_edge;
  mesh.cells.reserve(cell_loops.size());

  for (std::size_t c = 0; c < cell_loops.size(); ++c) {
    const std::vector<int>& loop = cell_loops[c];
    if (loop.size() < 3)
      throw std::invalid_argument("build_mesh: cell " + std::to_string(c) + " has fewer than 3 vertices");

    std::vector<Vec2> pts(loop.size());
    for (std::size_t i = 0; i < loop.size(); ++i) {
      if (loop[i] < 0 || loop[i] >= nv)
        throw std::invalid_argument("build_mesh: dangling vertex index in cell " + std::to_string(c));
      pts[i] = mesh.vertices[loop[i]];
    }

    Cell T;
    T.vertices = loop;
    T.measure = polygon_signed_area(pts);
    if (!(T.measure > 0.0))
      throw std::invalid_argument("build_mesh: cell " + std::to_string(c) +
                                  " has nonpositive measure (vertices must be counterclockwise)");
    T.centroid = polygon_centroid(pts);
    T.diameter = polygon_diameter(pts);
    T.subdomain = subdomain_tags.empty() ? 1 : subdomain_tags[c];

    const int cell_id = static_cast<int>(mesh.cells.size());
    for (std::size_t i = 0; i < loop.size(); ++i) {
      const int a = loop[i];
      const int b = loop[(i + 1) % loop.size()];
      const auto key = std::minmax(a, b);
      auto it = face_of_edge.find(key);
      if (it == face_of_edge.end()) {
        Face F;
        F.vertex = {a, b};
        F.owner = cell_id;
        F.normal = edge_outward_normal(mesh.vertices[a], mesh.vertices[b]);
        F.midpoint = 0.5 * (mesh.vertices[a] + mesh.vertices[b]);
        F.measure = (mesh.vertices[b] - mesh.vertices[a]).norm();
        F.diameter = F.measure;
        const int fid = mesh.n_faces();
        mesh.faces.push_back(F);
        face_of_edge.emplace(key, fid);
        T.faces.push_back(fid);
        T.face_orientation.push_back(1.0);
      } else {
        Face& F = mesh.faces[it->second];
        if (F.neighbor >= 0)
          throw std::invalid_argument("build_mesh: non-manifold face shared by more than two cells");
        F.neighbor = cell_id;
        T.faces.push_back(it->second);
        T.face_orientation.push_back(-1.0);
      }
    }
    mesh.cells.push_back(std::move(T));
  }

  for (int f = 0; f < mesh.n_faces(); ++f)
    if (mesh.faces[f].is_boundary()) mesh.boundary_faces.push_back(f);

  return mesh;
}

ValidationReport validate(const Mesh& mesh) {
  ValidationReport report;
  report.min_cell_measure = std::numeric_limits<double>::infinity();
  for (int c = 0; c < mesh.n_cells(); ++c) {
    const Cell& T = mesh.cells[c];
    report.max_faces_per_cell = std::max(report.max_faces_per_cell, static_cast<int>(T.faces.size()));
    report.min_cell_measure = std::min(report.min_cell_measure, T.measure);
    report.total_measure += T.measure;
    for (int f : T.faces)
      report.worst_face_ratio = std::min(report.worst_face_ratio, mesh.faces[f].diameter / T.diameter);

    std::vector<Vec2> pts(T.vertices.size());
    for (std::size_t i = 0; i < pts.size(); ++i) pts[i] = mesh.vertices[T.vertices[i]];
    if (!star_shaped_from(pts, T.centroid)) {
      report.all_star_shaped = false;
      report.non_star_cells.push_back(c);
    }
  }
  report.regularity_estimate = std::sqrt(std::max(report.worst_face_ratio, 0.0));
  return report;
}

}  // namespace hho
