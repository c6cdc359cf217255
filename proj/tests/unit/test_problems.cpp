#include "hho/problems.hpp"

#include <doctest.h>

#include <cmath>
#include <numbers>
#include <random>

using namespace hho;

namespace {

/// Residual of the strong equation div(-nu grad u + beta u) + mu u - f at a
/// point, with the second derivatives taken by central differences of the
/// provided gradient (so the check is independent of the closed-form
/// Laplacian).
double strong_residual(const TestProblem& p, const Vec2& x, int tag, double h) {
  const double nu = p.nu[static_cast<std::size_t>(tag - 1)];
  const auto gx1 = p.exact_gradient(x + Vec2(h, 0), tag);
  const auto gx0 = p.exact_gradient(x - Vec2(h, 0), tag);
  const auto gy1 = p.exact_gradient(x + Vec2(0, h), tag);
  const auto gy0 = p.exact_gradient(x - Vec2(0, h), tag);
  const double lap = (gx1.x() - gx0.x()) / (2 * h) + (gy1.y() - gy0.y()) / (2 * h);
  double r = -nu * lap + p.reaction(x) * p.exact(x, tag);
  if (p.velocity) r += p.velocity(x).dot(p.exact_gradient(x, tag));
  return r - p.forcing()(x, tag);
}

}  // namespace

TEST_CASE("uniform diffusion forcing matches the strong equation") {
  using std::numbers::pi;
  const TestProblem p = uniform_diffusion_problem(1.0);
  // f = 2 pi^2 sin sin + beta.grad u + u; spot-check the closed form.
  const Vec2 x(0.3, 0.7);
  const double u = std::sin(pi * 0.3) * std::sin(pi * 0.7);
  const Vec2 grad(pi * std::cos(pi * 0.3) * std::sin(pi * 0.7),
                  pi * std::sin(pi * 0.3) * std::cos(pi * 0.7));
  const double expected = 2 * pi * pi * u + Vec2(0.5 - 0.7, 0.3 - 0.5).dot(grad) + u;
  CHECK(p.forcing()(x, 1) == doctest::Approx(expected).epsilon(1e-13));

  std::mt19937 rng(4);
  std::uniform_real_distribution<double> unif(0.05, 0.95);
  for (int i = 0; i < 32; ++i) {
    const Vec2 pt(unif(rng), unif(rng));
    CHECK(std::abs(strong_residual(p, pt, 1, 1e-5)) < 1e-8);
  }
}

TEST_CASE("degenerate-problem forcing satisfies the strong equation per subdomain") {
  const TestProblem p = locally_degenerate_problem();
  std::mt19937 rng(8);
  std::uniform_real_distribution<double> radius(0.55, 0.95);
  std::uniform_real_distribution<double> angle(0.1, std::numbers::pi - 0.1);
  for (int i = 0; i < 32; ++i) {
    const double r = radius(rng);
    const double th_up = angle(rng);
    const Vec2 up(r * std::cos(th_up), r * std::sin(th_up));
    CHECK(std::abs(strong_residual(p, up, 1, 1e-6)) < 1e-8);
    const double th_dn = th_up + std::numbers::pi;
    const Vec2 dn(r * std::cos(th_dn), r * std::sin(th_dn));
    CHECK(std::abs(strong_residual(p, dn, 2, 1e-6)) < 1e-8);
  }
}

TEST_CASE("degenerate problem: interface traces and jump") {
  using std::numbers::pi;
  const TestProblem p = locally_degenerate_problem();
  // Continuity across the inflow ray theta = pi.
  const Vec2 left(-0.75, 0.0);
  CHECK(p.exact(left, 1) == doctest::Approx(0.0).epsilon(1e-12));
  CHECK(p.exact(left, 2) == doctest::Approx(0.0).epsilon(1e-12));
  // Jump of 2 pi^2 across the outflow ray theta = 0 / 2 pi.
  const Vec2 right(0.75, 0.0);
  CHECK(p.exact(right, 1) == doctest::Approx(pi * pi).epsilon(1e-12));
  CHECK(p.exact(right, 2) == doctest::Approx(3 * pi * pi).epsilon(1e-12));

  // Total flux (-nu grad u + beta u).n is continuous across both rays.
  for (const Vec2& x : {left, right}) {
    const Vec2 n(0, -1);  // out of the diffusive (upper) region
    const double upper =
        (-p.nu[0] * p.exact_gradient(x, 1) + p.velocity(x) * p.exact(x, 1)).dot(n);
    const double lower =
        (-p.nu[1] * p.exact_gradient(x, 2) + p.velocity(x) * p.exact(x, 2)).dot(n);
    CHECK(upper == doctest::Approx(lower).epsilon(1e-12));
  }
}

TEST_CASE("zero solution gives zero data") {
  const TestProblem p = polynomial_problem(0, 1.0, 1.0);
  // Degree-0 solution is the constant 1; subtract it to build a zero field.
  TestProblem zero = p;
  zero.exact = [](const Vec2&, int) { return 0.0; };
  zero.exact_gradient = [](const Vec2&, int) { return Vec2(0, 0); };
  zero.exact_laplacian = [](const Vec2&, int) { return 0.0; };
  CHECK(zero.forcing()(Vec2(0.4, 0.2), 1) == 0.0);
  CHECK(zero.boundary_datum()(Vec2(1.0, 0.5), 1) == 0.0);
}

TEST_CASE("problem factory") {
  CHECK(make_problem("uniform_diffusion", 1e-3, 0).nu[0] == 1e-3);
  CHECK(make_problem("locally_degenerate", 0, 0).nu.size() == 2);
  CHECK(make_problem("polynomial", 1.0, 2).name == "polynomial");
  CHECK_THROWS(make_problem("unknown", 1.0, 0));
}
