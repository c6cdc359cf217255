#pragma once

#include "hho/mesh.hpp"

#include <vector>

namespace hho {

/// Points and weights integrating over a cell (area weights) or a face
/// (length weights). Weights are positive and the rule is exact for all
/// polynomials up to `exactness`.
struct QuadratureRule {
  std::vector<Vec2> points;
  std::vector<double> weights;
  int exactness = 0;

  int size() const { return static_cast<int>(points.size()); }

  template <typename F>
  double integrate(F&& f) const {
    double s = 0.0;
    for (int q = 0; q < size(); ++q) s += weights[q] * f(points[q]);
    return s;
  }
};

/// Gauss-Legendre nodes and weights on [-1, 1]; exact for degree 2n-1.
void gauss_legendre(int n, std::vector<double>& nodes, std::vector<double>& weights);

/// Quadrature over a polygonal cell, built by fan-triangulating the cell
/// from its centroid (the cell must be star-shaped with respect to it) and
/// placing a collapsed tensor Gauss rule on each sub-triangle.
QuadratureRule cell_quadrature(const Mesh& mesh, int cell, int degree);

/// Same construction on an explicit triangle; used both by cell_quadrature
/// and as a building block for reference integrals in tests.
QuadratureRule triangle_quadrature(const Vec2& a, const Vec2& b, const Vec2& c, int degree);

/// Gauss-Legendre rule on a mesh face.
QuadratureRule face_quadrature(const Mesh& mesh, int face, int degree);

/// Gauss-Legendre rule on the segment [a, b].
QuadratureRule segment_quadrature(const Vec2& a, const Vec2& b, int degree);

}  // namespace hho
