#include "hho/quadrature.hpp"

#include <doctest.h>

#include <cmath>
#include <numbers>

using namespace hho;

namespace {

double factorial(int n) { return n <= 1 ? 1.0 : n * factorial(n - 1); }

/// Exact integral of x^a y^b over the triangle (p0, p1, p2), via the
/// Vandermonde-free monomial formula on the reference triangle pulled back
/// through the affine map; used as an independent oracle.
double triangle_monomial_integral(const Vec2& p0, const Vec2& p1, const Vec2& p2, int a, int b) {
  // Map (u,v) on the unit triangle; x = p0 + u d1 + v d2. Expand the powers
  // by brute force binomials and use int u^m v^n = m! n! / (m+n+2)!.
  const Vec2 d1 = p1 - p0, d2 = p2 - p0;
  const double jac = std::abs(d1.x() * d2.y() - d1.y() * d2.x());
  double total = 0.0;
  auto binom = [](int n, int k) { return factorial(n) / (factorial(k) * factorial(n - k)); };
  for (int i = 0; i <= a; ++i)
    for (int j = 0; i + j <= a; ++j) {
      const int k = a - i - j;
      for (int l = 0; l <= b; ++l)
        for (int m = 0; l + m <= b; ++m) {
          const int n = b - l - m;
          const double coeff = binom(a, i) * binom(a - i, j) * binom(b, l) * binom(b - l, m) *
                               std::pow(p0.x(), k) * std::pow(d1.x(), i) * std::pow(d2.x(), j) *
                               std::pow(p0.y(), n) * std::pow(d1.y(), l) * std::pow(d2.y(), m);
          const int mu = i + l, nv = j + m;
          total += coeff * factorial(mu) * factorial(nv) / factorial(mu + nv + 2);
        }
    }
  return total * jac;
}

}  // namespace

TEST_CASE("cell quadrature integrates monomials exactly") {
  const Mesh mesh = generate_mesh(MeshFamily::cartesian, 1);
  SUBCASE("constant") {
    const QuadratureRule quad = cell_quadrature(mesh, 0, 0);
    CHECK(quad.integrate([](const Vec2&) { return 1.0; }) == doctest::Approx(1.0).epsilon(1e-14));
  }
  SUBCASE("x^2 y^2 on the unit square") {
    const QuadratureRule quad = cell_quadrature(mesh, 0, 4);
    const double v = quad.integrate([](const Vec2& p) { return p.x() * p.x() * p.y() * p.y(); });
    CHECK(v == doctest::Approx(1.0 / 9.0).epsilon(1e-14));
  }
  SUBCASE("all monomials to declared exactness") {
    for (int degree = 0; degree <= 12; ++degree) {
      const QuadratureRule quad = cell_quadrature(mesh, 0, degree);
      for (double w : quad.weights) CHECK(w > 0.0);
      for (int a = 0; a + 0 <= degree; ++a)
        for (int b = 0; a + b <= degree; ++b) {
          const double exact = 1.0 / ((a + 1.0) * (b + 1.0));
          const double got =
              quad.integrate([&](const Vec2& p) { return std::pow(p.x(), a) * std::pow(p.y(), b); });
          CHECK(got == doctest::Approx(exact).epsilon(1e-13));
        }
    }
  }
}

TEST_CASE("hexagon quadrature matches the exact fan decomposition") {
  // Regular hexagon centered at (0.2, -0.1).
  std::vector<Vec2> pts;
  const Vec2 center(0.2, -0.1);
  for (int i = 0; i < 6; ++i) {
    const double ang = std::numbers::pi / 3.0 * i;
    pts.push_back(center + 0.7 * Vec2(std::cos(ang), std::sin(ang)));
  }
  std::vector<std::vector<int>> loops{{0, 1, 2, 3, 4, 5}};
  const Mesh mesh = build_mesh(pts, loops);

  const QuadratureRule quad = cell_quadrature(mesh, 0, 2);
  double exact = 0.0;
  const Vec2 c = mesh.cells[0].centroid;
  for (int i = 0; i < 6; ++i)
    exact += triangle_monomial_integral(c, pts[i], pts[(i + 1) % 6], 2, 0);
  const double got = quad.integrate([](const Vec2& p) { return p.x() * p.x(); });
  CHECK(got == doctest::Approx(exact).epsilon(1e-14));
}

TEST_CASE("face quadrature") {
  SUBCASE("length and cubic moments") {
    const QuadratureRule q1 = segment_quadrature(Vec2(0.3, -0.2), Vec2(1.1, 0.4), 0);
    CHECK(q1.integrate([](const Vec2&) { return 1.0; }) == doctest::Approx(1.0).epsilon(1e-14));
    const QuadratureRule q2 = segment_quadrature(Vec2(0, 0), Vec2(1, 0), 3);
    CHECK(q2.integrate([](const Vec2& p) { return p.x() * p.x() * p.x(); }) ==
          doctest::Approx(0.25).epsilon(1e-14));
  }
  SUBCASE("nonpolynomial integrand converges under degree refinement") {
    // The azimuthal field of the degenerate test case, integrated across a
    // segment away from the origin.
    const Vec2 a(0.5, 0.25), b(1.0, 0.25);
    auto integrand = [](const Vec2& p) {
      const double r2 = p.squaredNorm();
      return Vec2(-p.y() / r2, p.x() / r2).dot(Vec2(0, 1));
    };
    double prev = segment_quadrature(a, b, 2).integrate(integrand);
    double diff_at_default = 1.0;
    for (int degree = 4; degree <= 16; degree += 2) {
      const double next = segment_quadrature(a, b, degree).integrate(integrand);
      if (degree == 6) diff_at_default = std::abs(next - prev);
      prev = next;
    }
    const double final_diff =
        std::abs(segment_quadrature(a, b, 18).integrate(integrand) - prev);
    CHECK(final_diff < 1e-10);
    CHECK(diff_at_default < 1e-4);  // already small at the default-degree range
  }
}

TEST_CASE("face quadrature on mesh faces uses the face geometry") {
  const Mesh mesh = generate_mesh(MeshFamily::triangular, 2);
  for (int f = 0; f < mesh.n_faces(); ++f) {
    const QuadratureRule quad = face_quadrature(mesh, f, 1);
    CHECK(quad.integrate([](const Vec2&) { return 1.0; }) ==
          doctest::Approx(mesh.faces[f].measure).epsilon(1e-14));
  }
}

TEST_CASE("degenerate sub-triangle is rejected") {
  CHECK_THROWS(triangle_quadrature(Vec2(0, 0), Vec2(1, 0), Vec2(2, 0), 2));
}
