#pragma once

#include <Eigen/Dense>

#include <span>
#include <vector>

namespace hho {

using Vec2 = Eigen::Vector2d;

/// Signed area of a polygon given as a vertex loop (positive if counterclockwise).
double polygon_signed_area(std::span<const Vec2> loop);

/// Area-weighted centroid of a simple polygon.
Vec2 polygon_centroid(std::span<const Vec2> loop);

/// Largest pairwise vertex distance.
double polygon_diameter(std::span<const Vec2> loop);

/// 2D cross product (z-component of the 3D cross product).
inline double cross2(const Vec2& a, const Vec2& b) { return a.x() * b.y() - a.y() * b.x(); }

/// Outward normal of the directed edge a->b of a counterclockwise polygon.
inline Vec2 edge_outward_normal(const Vec2& a, const Vec2& b) {
  Vec2 t = b - a;
  return Vec2(t.y(), -t.x()).normalized();
}

/// True if every fan triangle (center, v_i, v_{i+1}) is positively oriented,
/// i.e. the polygon is star-shaped with respect to `center`.
bool star_shaped_from(std::span<const Vec2> loop, const Vec2& center, double rel_tol = 1e-12);

}  // namespace hho
