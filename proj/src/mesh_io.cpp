#include "hho/mesh.hpp"

#include <cstdio>
#include <fstream>
#include <sstream>
#include <stdexcept>

namespace hho {

Mesh load_mesh(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw std::runtime_error("load_mesh: cannot open " + path);

  int nv = 0, nc = 0;
  if (!(in >> nv >> nc) || nv < 3 || nc < 1)
    throw std::runtime_error("load_mesh: malformed header in " + path);

  std::vector<Vec2> vertices(nv);
  for (int i = 0; i < nv; ++i)
    if (!(in >> vertices[i].x() >> vertices[i].y()))
      throw std::runtime_error("load_mesh: truncated vertex list in " + path);

  std::vector<std::vector<int>> loops(nc);
  std::vector<int> tags(nc);
  for (int c = 0; c < nc; ++c) {
    int m = 0;
    if (!(in >> m) || m < 3) throw std::runtime_error("load_mesh: invalid vertex count for cell");
    loops[c].resize(m);
    for (int i = 0; i < m; ++i)
      if (!(in >> loops[c][i])) throw std::runtime_error("load_mesh: truncated cell list");
    if (!(in >> tags[c])) throw std::runtime_error("load_mesh: missing subdomain tag");
  }
  return build_mesh(std::move(vertices), loops, tags);
}

void save_mesh(const Mesh& mesh, const std::string& path) {
  std::ofstream out(path);
  if (!out) throw std::runtime_error("save_mesh: cannot open " + path);

  out << mesh.n_vertices() << ' ' << mesh.n_cells() << '\n';
  char buf[64];
  for (const Vec2& v : mesh.vertices) {
    std::snprintf(buf, sizeof buf, "%.17g %.17g\n", v.x(), v.y());
    out << buf;
  }
  for (const Cell& T : mesh.cells) {
    out << T.vertices.size();
    for (int v : T.vertices) out << ' ' << v;
    out << ' ' << T.subdomain << '\n';
  }
  if (!out) throw std::runtime_error("save_mesh: write failed for " + path);
}

}  // namespace hho
