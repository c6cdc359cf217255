#include "hho/mesh.hpp"

#include <cmath>
#include <numbers>
#include <stdexcept>
#include <unordered_map>

namespace hho {

namespace {

bool on_grid(double x, double lo, double step, double tol) {
  const double t = (x - lo) / step;
  return std::abs(t - std::round(t)) < tol;
}

/// Merges nearly coincident vertices (needed by the hexagonal generator,
/// where clip intersections are computed independently per cell).
class VertexPool {
 public:
  explicit VertexPool(double merge_radius) : radius_(merge_radius) {}

  int insert(const Vec2& p) {
    const long long bx = bucket(p.x());
    const long long by = bucket(p.y());
    for (long long i = bx - 1; i <= bx + 1; ++i)
      for (long long j = by - 1; j <= by + 1; ++j) {
        auto range = buckets_.equal_range(key(i, j));
        for (auto it = range.first; it != range.second; ++it)
          if ((points_[it->second] - p).norm() <= radius_) return it->second;
      }
    const int id = static_cast<int>(points_.size());
    points_.push_back(p);
    buckets_.emplace(key(bx, by), id);
    return id;
  }

  std::vector<Vec2> take() { return std::move(points_); }

 private:
  long long bucket(double x) const { return static_cast<long long>(std::floor(x / (2.0 * radius_))); }
  static std::uint64_t key(long long i, long long j) {
    return (static_cast<std::uint64_t>(static_cast<std::uint32_t>(i)) << 32) |
           static_cast<std::uint64_t>(static_cast<std::uint32_t>(j));
  }

  double radius_;
  std::vector<Vec2> points_;
  std::unordered_multimap<std::uint64_t, int> buckets_;
};

struct GridSpec {
  int nx, ny;
  double dx, dy;
  Vec2 lo;
  // Hole extent in grid indices; empty if no hole.
  bool has_hole = false;
  int hx0 = 0, hx1 = 0, hy0 = 0, hy1 = 0;
  int split_row = -1;  ///< grid row of the subdomain split line (hole domains)

  Vec2 node(int i, int j) const { return lo + Vec2(i * dx, j * dy); }
  bool cell_in_hole(int i, int j) const {
    return has_hole && i >= hx0 && i < hx1 && j >= hy0 && j < hy1;
  }
  int tag(int j) const {
    if (split_row < 0) return 1;
    return j >= split_row ? 1 : 2;
  }
};

GridSpec make_grid(int n, const Domain& domain) {
  if (n < 1) throw std::invalid_argument("generate_mesh: resolution must be at least 1");
  GridSpec g;
  g.nx = g.ny = n;
  g.lo = domain.lo;
  g.dx = (domain.hi.x() - domain.lo.x()) / n;
  g.dy = (domain.hi.y() - domain.lo.y()) / n;
  if (!(g.dx > 0.0 && g.dy > 0.0)) throw std::invalid_argument("generate_mesh: degenerate domain");

  if (domain.has_hole) {
    const double tol = 1e-9;
    if (!on_grid(domain.hole_lo.x(), domain.lo.x(), g.dx, tol) ||
        !on_grid(domain.hole_hi.x(), domain.lo.x(), g.dx, tol) ||
        !on_grid(domain.hole_lo.y(), domain.lo.y(), g.dy, tol) ||
        !on_grid(domain.hole_hi.y(), domain.lo.y(), g.dy, tol))
      throw std::invalid_argument("generate_mesh: hole not aligned to cell boundaries at this resolution");
    g.has_hole = true;
    g.hx0 = static_cast<int>(std::round((domain.hole_lo.x() - domain.lo.x()) / g.dx));
    g.hx1 = static_cast<int>(std::round((domain.hole_hi.x() - domain.lo.x()) / g.dx));
    g.hy0 = static_cast<int>(std::round((domain.hole_lo.y() - domain.lo.y()) / g.dy));
    g.hy1 = static_cast<int>(std::round((domain.hole_hi.y() - domain.lo.y()) / g.dy));
    // Subdomains split along the horizontal line through the hole center.
    const double split = 0.5 * (domain.hole_lo.y() + domain.hole_hi.y());
    if (!on_grid(split, domain.lo.y(), g.dy, tol))
      throw std::invalid_argument("generate_mesh: subdomain split line not aligned to cell boundaries");
    g.split_row = static_cast<int>(std::round((split - domain.lo.y()) / g.dy));
  }
  return g;
}

Mesh generate_cartesian(int n, const Domain& domain) {
  const GridSpec g = make_grid(n, domain);
  std::vector<Vec2> vertices;
  vertices.reserve(static_cast<std::size_t>(g.nx + 1) * (g.ny + 1));
  auto vid = [&](int i, int j) { return j * (g.nx + 1) + i; };
  for (int j = 0; j <= g.ny; ++j)
    for (int i = 0; i <= g.nx; ++i) vertices.push_back(g.node(i, j));

  std::vector<std::vector<int>> loops;
  std::vector<int> tags;
  for (int j = 0; j < g.ny; ++j)
    for (int i = 0; i < g.nx; ++i) {
      if (g.cell_in_hole(i, j)) continue;
      loops.push_back({vid(i, j), vid(i + 1, j), vid(i + 1, j + 1), vid(i, j + 1)});
      tags.push_back(g.tag(j));
    }
  return build_mesh(std::move(vertices), loops, tags);
}

Mesh generate_triangular(int n, const Domain& domain) {
  const GridSpec g = make_grid(n, domain);
  std::vector<Vec2> vertices;
  auto vid = [&](int i, int j) { return j * (g.nx + 1) + i; };
  for (int j = 0; j <= g.ny; ++j)
    for (int i = 0; i <= g.nx; ++i) vertices.push_back(g.node(i, j));

  std::vector<std::vector<int>> loops;
  std::vector<int> tags;
  for (int j = 0; j < g.ny; ++j)
    for (int i = 0; i < g.nx; ++i) {
      if (g.cell_in_hole(i, j)) continue;
      loops.push_back({vid(i, j), vid(i + 1, j), vid(i + 1, j + 1)});
      loops.push_back({vid(i, j), vid(i + 1, j + 1), vid(i, j + 1)});
      tags.push_back(g.tag(j));
      tags.push_back(g.tag(j));
    }
  return build_mesh(std::move(vertices), loops, tags);
}

Mesh generate_kershaw(int n, const Domain& domain) {
  if (domain.has_hole)
    throw std::invalid_argument("generate_mesh: the kershaw family does not support domains with holes");
  const GridSpec g = make_grid(n, domain);
  constexpr double amplitude = 0.15;
  std::vector<Vec2> vertices;
  auto vid = [&](int i, int j) { return j * (g.nx + 1) + i; };
  const double W = domain.hi.x() - domain.lo.x();
  const double H = domain.hi.y() - domain.lo.y();
  for (int j = 0; j <= g.ny; ++j)
    for (int i = 0; i <= g.nx; ++i) {
      const double xi = static_cast<double>(i) / g.nx;
      const double eta = static_cast<double>(j) / g.ny;
      const double sheared =
          eta + amplitude * std::sin(2.0 * std::numbers::pi * xi) * std::sin(std::numbers::pi * eta);
      vertices.push_back(domain.lo + Vec2(W * xi, H * sheared));
    }

  std::vector<std::vector<int>> loops;
  for (int j = 0; j < g.ny; ++j)
    for (int i = 0; i < g.nx; ++i)
      loops.push_back({vid(i, j), vid(i + 1, j), vid(i + 1, j + 1), vid(i, j + 1)});
  return build_mesh(std::move(vertices), loops);
}

/// Sutherland-Hodgman clip of a convex polygon against the half-plane
/// keep = { p : inside(p) >= 0 }.
template <typename Inside, typename Intersect>
std::vector<Vec2> clip_halfplane(const std::vector<Vec2>& poly, Inside inside, Intersect intersect) {
  std::vector<Vec2> out;
  const std::size_t n = poly.size();
  for (std::size_t i = 0; i < n; ++i) {
    const Vec2& a = poly[i];
    const Vec2& b = poly[(i + 1) % n];
    const double da = inside(a);
    const double db = inside(b);
    if (da >= 0.0) out.push_back(a);
    if ((da > 0.0 && db < 0.0) || (da < 0.0 && db > 0.0)) out.push_back(intersect(a, b));
  }
  return out;
}

std::vector<Vec2> clip_to_rectangle(std::vector<Vec2> poly, const Vec2& lo, const Vec2& hi) {
  auto clip_axis = [&](int axis, double bound, double sign) {
    poly = clip_halfplane(
        poly, [&](const Vec2& p) { return sign * (p[axis] - bound); },
        [&](const Vec2& a, const Vec2& b) {
          const double t = (bound - a[axis]) / (b[axis] - a[axis]);
          Vec2 p = a + t * (b - a);
          p[axis] = bound;  // pin to the clip line
          return p;
        });
  };
  clip_axis(0, lo.x(), +1.0);
  clip_axis(0, hi.x(), -1.0);
  clip_axis(1, lo.y(), +1.0);
  clip_axis(1, hi.y(), -1.0);
  return poly;
}

Mesh generate_hexagonal(int n, const Domain& domain) {
  if (domain.has_hole)
    throw std::invalid_argument("generate_mesh: the hexagonal family does not support domains with holes");
  if (n < 2) throw std::invalid_argument("generate_mesh: hexagonal tiling needs resolution >= 2");

  const double W = domain.hi.x() - domain.lo.x();
  const double H = domain.hi.y() - domain.lo.y();
  if (!(W > 0.0 && H > 0.0)) throw std::invalid_argument("generate_mesh: degenerate domain");

  // Pointy-top hexagons, n across the width.
  const double R = W / (std::sqrt(3.0) * n);
  const double pitch_x = std::sqrt(3.0) * R;
  const double pitch_y = 1.5 * R;

  VertexPool pool(1e-9 * std::max(W, H));
  std::vector<std::vector<int>> loops;

  const int jmax = static_cast<int>(std::ceil(H / pitch_y)) + 1;
  for (int j = -1; j <= jmax; ++j) {
    const double cy = domain.lo.y() + j * pitch_y;
    const double offset = (j % 2 == 0) ? 0.0 : 0.5 * pitch_x;
    for (int i = -1; i <= n + 1; ++i) {
      const Vec2 center(domain.lo.x() + offset + i * pitch_x, cy);
      std::vector<Vec2> hex(6);
      for (int v = 0; v < 6; ++v) {
        const double ang = std::numbers::pi / 6.0 + v * std::numbers::pi / 3.0;
        hex[v] = center + R * Vec2(std::cos(ang), std::sin(ang));
      }
      std::vector<Vec2> clipped = clip_to_rectangle(hex, domain.lo, domain.hi);
      if (clipped.size() < 3) continue;
      if (std::abs(polygon_signed_area(clipped)) < 1e-10 * R * R) continue;
      std::vector<int> loop;
      for (const Vec2& p : clipped) {
        const int id = pool.insert(p);
        if (loop.empty() || (loop.back() != id && loop.front() != id)) loop.push_back(id);
      }
      if (loop.size() >= 3) loops.push_back(std::move(loop));
    }
  }
  return build_mesh(pool.take(), loops);
}

}  // namespace

MeshFamily mesh_family_from_string(const std::string& name) {
  if (name == "cartesian") return MeshFamily::cartesian;
  if (name == "triangular") return MeshFamily::triangular;
  if (name == "hexagonal") return MeshFamily::hexagonal;
  if (name == "kershaw") return MeshFamily::kershaw;
  throw std::invalid_argument("unknown mesh family: " + name);
}

std::string to_string(MeshFamily family) {
  switch (family) {
    case MeshFamily::cartesian: return "cartesian";
    case MeshFamily::triangular: return "triangular";
    case MeshFamily::hexagonal: return "hexagonal";
    case MeshFamily::kershaw: return "kershaw";
  }
  return "?";
}

Mesh generate_mesh(MeshFamily family, int n, const Domain& domain) {
  switch (family) {
    case MeshFamily::cartesian: return generate_cartesian(n, domain);
    case MeshFamily::triangular: return generate_triangular(n, domain);
    case MeshFamily::hexagonal: return generate_hexagonal(n, domain);
    case MeshFamily::kershaw: return generate_kershaw(n, domain);
  }
  throw std::invalid_argument("generate_mesh: unknown family");
}

}  // namespace hho
