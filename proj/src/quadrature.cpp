#include "hho/quadrature.hpp"

#include <cmath>
#include <mutex>
#include <numbers>
#include <stdexcept>
#include <unordered_map>

namespace hho {

namespace {

struct Rule1d {
  std::vector<double> nodes, weights;
};

// Newton iteration on the Legendre polynomial; standard Golub-Welsch-free
// construction, accurate to machine precision for the orders used here.
Rule1d compute_gauss_legendre(int n) {
  Rule1d rule;
  rule.nodes.resize(n);
  rule.weights.resize(n);
  for (int i = 0; i < n; ++i) {
    double x = std::cos(std::numbers::pi * (i + 0.75) / (n + 0.5));
    double dp = 0.0;
    for (int iter = 0; iter < 100; ++iter) {
      double p0 = 1.0, p1 = x;
      for (int k = 2; k <= n; ++k) {
        const double p2 = ((2.0 * k - 1.0) * x * p1 - (k - 1.0) * p0) / k;
        p0 = p1;
        p1 = p2;
      }
      dp = n * (x * p1 - p0) / (x * x - 1.0);
      const double dx = p1 / dp;
      x -= dx;
      if (std::abs(dx) < 1e-15) break;
    }
    rule.nodes[i] = x;
    rule.weights[i] = 2.0 / ((1.0 - x * x) * dp * dp);
  }
  return rule;
}

const Rule1d& cached_gauss_legendre(int n) {
  static std::mutex mutex;
  static std::unordered_map<int, Rule1d> cache;
  std::lock_guard<std::mutex> lock(mutex);
  auto it = cache.find(n);
  if (it == cache.end()) it = cache.emplace(n, compute_gauss_legendre(n)).first;
  return it->second;
}

}  // namespace

void gauss_legendre(int n, std::vector<double>& nodes, std::vector<double>& weights) {
  if (n < 1) throw std::invalid_argument("gauss_legendre: need at least one point");
  const Rule1d& rule = cached_gauss_legendre(n);
  nodes = rule.nodes;
  weights = rule.weights;
}

QuadratureRule segment_quadrature(const Vec2& a, const Vec2& b, int degree) {
  const int n = degree / 2 + 1;  // 2n-1 >= degree
  const Rule1d& rule = cached_gauss_legendre(n);
  QuadratureRule out;
  out.exactness = 2 * n - 1;
  out.points.resize(n);
  out.weights.resize(n);
  const double half_len = 0.5 * (b - a).norm();
  for (int q = 0; q < n; ++q) {
    const double t = 0.5 * (1.0 + rule.nodes[q]);
    out.points[q] = a + t * (b - a);
    out.weights[q] = rule.weights[q] * half_len;
  }
  return out;
}

QuadratureRule face_quadrature(const Mesh& mesh, int face, int degree) {
  const auto [a, b] = mesh.face_points(face);
  return segment_quadrature(a, b, degree);
}

QuadratureRule triangle_quadrature(const Vec2& a, const Vec2& b, const Vec2& c, int degree) {
  const double area = 0.5 * cross2(b - a, c - a);
  if (!(area > 0.0)) throw std::invalid_argument("triangle_quadrature: degenerate sub-triangle");

  // Collapsed tensor rule: map the unit square onto the triangle through
  // (s,t) -> (s, t(1-s)); the Jacobian factor (1-s) raises the s-degree by
  // one, hence the extra point in that direction.
  const int ns = (degree + 3) / 2;
  const int nt = (degree + 2) / 2;
  const Rule1d& rs = cached_gauss_legendre(ns);
  const Rule1d& rt = cached_gauss_legendre(std::max(nt, 1));

  QuadratureRule out;
  out.exactness = degree;
  out.points.reserve(static_cast<std::size_t>(ns) * std::max(nt, 1));
  out.weights.reserve(out.points.capacity());
  for (int i = 0; i < ns; ++i) {
    const double s = 0.5 * (1.0 + rs.nodes[i]);
    const double ws = 0.5 * rs.weights[i];
    for (int j = 0; j < std::max(nt, 1); ++j) {
      const double t = 0.5 * (1.0 + rt.nodes[j]);
      const double wt = 0.5 * rt.weights[j];
      const double u = s;
      const double v = t * (1.0 - s);
      out.points.push_back(a + u * (b - a) + v * (c - a));
      out.weights.push_back(2.0 * area * ws * wt * (1.0 - s));
    }
  }
  return out;
}

QuadratureRule cell_quadrature(const Mesh& mesh, int cell, int degree) {
  const Cell& T = mesh.cells[cell];
  QuadratureRule out;
  out.exactness = degree;
  const std::size_t n = T.vertices.size();
  for (std::size_t i = 0; i < n; ++i) {
    const Vec2& a = mesh.vertices[T.vertices[i]];
    const Vec2& b = mesh.vertices[T.vertices[(i + 1) % n]];
    QuadratureRule tri = triangle_quadrature(T.centroid, a, b, degree);
    out.points.insert(out.points.end(), tri.points.begin(), tri.points.end());
    out.weights.insert(out.weights.end(), tri.weights.begin(), tri.weights.end());
  }
  return out;
}

}  // namespace hho
