#include "hho/problems.hpp"

#include <cmath>
#include <numbers>
#include <stdexcept>

namespace hho {

SidedScalarField TestProblem::forcing() const {
  return [this](const Vec2& x, int tag) {
    const double nu_tag = nu.at(static_cast<std::size_t>(tag - 1));
    double f = -nu_tag * exact_laplacian(x, tag) + reaction(x) * exact(x, tag);
    if (velocity) f += velocity(x).dot(exact_gradient(x, tag));
    return f;
  };
}

PhysicalData TestProblem::physical() const {
  PhysicalData data;
  data.nu = nu;
  data.velocity = velocity;
  data.velocity_jacobian = velocity_jacobian;
  data.reaction = reaction;
  data.mu0 = mu0;
  data.source = forcing();
  data.dirichlet = boundary_datum();
  return data;
}

TestProblem uniform_diffusion_problem(double nu) {
  using std::numbers::pi;
  TestProblem p;
  p.name = "uniform_diffusion";
  p.domain = Domain::unit_square();
  p.nu = {nu};
  p.exact = [](const Vec2& x, int) { return std::sin(pi * x.x()) * std::sin(pi * x.y()); };
  p.exact_gradient = [](const Vec2& x, int) {
    return Vec2(pi * std::cos(pi * x.x()) * std::sin(pi * x.y()),
                pi * std::sin(pi * x.x()) * std::cos(pi * x.y()));
  };
  p.exact_laplacian = [](const Vec2& x, int) {
    return -2.0 * pi * pi * std::sin(pi * x.x()) * std::sin(pi * x.y());
  };
  p.velocity = [](const Vec2& x) { return Vec2(0.5 - x.y(), x.x() - 0.5); };
  p.velocity_jacobian = [](const Vec2&) {
    Eigen::Matrix2d J;
    J << 0.0, -1.0, 1.0, 0.0;
    return J;
  };
  p.reaction = [](const Vec2&) { return 1.0; };
  p.mu0 = 1.0;
  return p;
}

namespace {

using std::numbers::pi;

/// Azimuth in [0, pi] for the diffusive (upper) branch and [pi, 2 pi] for
/// the nondiffusive (lower) branch, robust against roundoff straddling of
/// the interface rays.
double azimuth(const Vec2& x, int tag) {
  const double a = std::atan2(x.y(), x.x());
  if (tag == 1) {
    if (a >= 0.0) return a;
    return x.x() > 0.0 ? 0.0 : pi;
  }
  if (a < 0.0) return a + 2.0 * pi;
  if (a == pi) return pi;
  return x.x() > 0.0 ? 2.0 * pi : pi;
}

}  // namespace

TestProblem locally_degenerate_problem() {
  TestProblem p;
  p.name = "locally_degenerate";
  p.domain = Domain::square_ring();
  p.nu = {pi, 0.0};

  p.exact = [](const Vec2& x, int tag) {
    const double th = azimuth(x, tag);
    return tag == 1 ? (th - pi) * (th - pi) : 3.0 * pi * (th - pi);
  };
  // grad theta = (-y, x)/r^2; the solution depends on theta only.
  p.exact_gradient = [](const Vec2& x, int tag) {
    const double r2 = x.squaredNorm();
    const double th = azimuth(x, tag);
    const double dth = tag == 1 ? 2.0 * (th - pi) : 3.0 * pi;
    return Vec2(-dth * x.y() / r2, dth * x.x() / r2);
  };
  // lap u = u_theta_theta / r^2 for a purely azimuthal field.
  p.exact_laplacian = [](const Vec2& x, int tag) {
    const double r2 = x.squaredNorm();
    return tag == 1 ? 2.0 / r2 : 0.0;
  };
  p.velocity = [](const Vec2& x) {
    const double r2 = x.squaredNorm();
    return Vec2(-x.y() / r2, x.x() / r2);
  };
  p.velocity_jacobian = [](const Vec2& x) {
    const double r2 = x.squaredNorm();
    const double r4 = r2 * r2;
    Eigen::Matrix2d J;
    J << 2.0 * x.x() * x.y() / r4, (x.y() * x.y() - x.x() * x.x()) / r4,
        (x.y() * x.y() - x.x() * x.x()) / r4, -2.0 * x.x() * x.y() / r4;
    return J;
  };
  p.reaction = [](const Vec2&) { return 1e-6; };
  p.mu0 = 1e-6;
  return p;
}

TestProblem polynomial_problem(int degree, double nu, double mu, Vec2 beta) {
  if (degree < 0) throw std::invalid_argument("polynomial_problem: degree must be nonnegative");
  TestProblem p;
  p.name = "polynomial";
  p.domain = Domain::unit_square();
  p.nu = {nu};
  const double a = 0.3, bx = 1.0, by = -0.7;
  auto base = [=](const Vec2& x) { return a + bx * x.x() + by * x.y(); };
  p.exact = [=](const Vec2& x, int) { return std::pow(base(x), degree); };
  p.exact_gradient = [=](const Vec2& x, int) {
    if (degree == 0) return Vec2(0.0, 0.0);
    const double d = degree * std::pow(base(x), degree - 1);
    return Vec2(d * bx, d * by);
  };
  p.exact_laplacian = [=](const Vec2& x, int) {
    if (degree < 2) return 0.0;
    return degree * (degree - 1) * std::pow(base(x), degree - 2) * (bx * bx + by * by);
  };
  p.velocity = [=](const Vec2&) { return beta; };
  p.velocity_jacobian = [](const Vec2&) { return Eigen::Matrix2d::Zero().eval(); };
  p.reaction = [=](const Vec2&) { return mu; };
  p.mu0 = mu;
  return p;
}

TestProblem make_problem(const std::string& name, double nu_value, int degree) {
  if (name == "uniform_diffusion") return uniform_diffusion_problem(nu_value);
  if (name == "locally_degenerate") return locally_degenerate_problem();
  if (name == "polynomial") return polynomial_problem(degree, nu_value);
  throw std::invalid_argument("unknown problem: " + name);
}

}  // namespace hho
