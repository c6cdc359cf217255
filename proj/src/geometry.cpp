#include "hho/geometry.hpp"

namespace hho {

double polygon_signed_area(std::span<const Vec2> loop) {
  double twice = 0.0;
  const std::size_t n = loop.size();
  for (std::size_t i = 0; i < n; ++i) {
    const Vec2& a = loop[i];
    const Vec2& b = loop[(i + 1) % n];
    twice += cross2(a, b);
  }
  return 0.5 * twice;
}

Vec2 polygon_centroid(std::span<const Vec2> loop) {
  double twice = 0.0;
  Vec2 acc = Vec2::Zero();
  const std::size_t n = loop.size();
  for (std::size_t i = 0; i < n; ++i) {
    const Vec2& a = loop[i];
    const Vec2& b = loop[(i + 1) % n];
    const double w = cross2(a, b);
    twice += w;
    acc += w * (a + b);
  }
  return acc / (3.0 * twice);
}

double polygon_diameter(std::span<const Vec2> loop) {
  double d2 = 0.0;
  for (std::size_t i = 0; i < loop.size(); ++i)
    for (std::size_t j = i + 1; j < loop.size(); ++j)
      d2 = std::max(d2, (loop[i] - loop[j]).squaredNorm());
  return std::sqrt(d2);
}

bool star_shaped_from(std::span<const Vec2> loop, const Vec2& center, double rel_tol) {
  const double scale = polygon_diameter(loop);
  const std::size_t n = loop.size();
  for (std::size_t i = 0; i < n; ++i) {
    const Vec2& a = loop[i];
    const Vec2& b = loop[(i + 1) % n];
    if (cross2(a - center, b - center) <= rel_tol * scale * scale) return false;
  }
  return true;
}

}  // namespace hho
