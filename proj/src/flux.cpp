#include "hho/flux.hpp"

#include <cmath>
#include <stdexcept>

namespace hho {

FluxScheme flux_scheme_from_string(const std::string& name) {
  if (name == "centered") return FluxScheme::centered;
  if (name == "upwind") return FluxScheme::upwind;
  if (name == "theta_upwind") return FluxScheme::theta_upwind;
  if (name == "scharfetter_gummel") return FluxScheme::scharfetter_gummel;
  throw std::invalid_argument("unknown flux scheme: " + name);
}

std::string to_string(FluxScheme scheme) {
  switch (scheme) {
    case FluxScheme::centered: return "centered";
    case FluxScheme::upwind: return "upwind";
    case FluxScheme::theta_upwind: return "theta_upwind";
    case FluxScheme::scharfetter_gummel: return "scharfetter_gummel";
  }
  return "?";
}

namespace {

// C^1 bump: 1 on [-1/2,1/2], 0 outside (-1,1), smoothstep blend between.
double theta_profile(double s) {
  const double a = std::abs(s);
  if (a <= 0.5) return 1.0;
  if (a >= 1.0) return 0.0;
  const double t = 2.0 * (a - 0.5);
  return 1.0 - t * t * (3.0 - 2.0 * t);
}

// |A|(s) = s coth(s/2) - 2 = s + 2 s / (e^s - 1) - 2, with a Taylor branch
// near the removable singularity at s = 0.
double scharfetter_gummel_abs(double s) {
  const double a = std::abs(s);
  if (a < 1e-4) {
    const double s2 = s * s;
    return s2 / 6.0 - s2 * s2 / 360.0 + s2 * s2 * s2 / 15120.0;
  }
  if (a > 700.0) return a - 2.0;  // e^s overflows; coth saturates
  return s + 2.0 * s / std::expm1(s) - 2.0;
}

}  // namespace

double FluxFunction::abs(double s) const {
  switch (scheme_) {
    case FluxScheme::centered: return 0.0;
    case FluxScheme::upwind: return std::abs(s);
    case FluxScheme::theta_upwind: return (1.0 - theta_profile(s)) * std::abs(s);
    case FluxScheme::scharfetter_gummel: return scharfetter_gummel_abs(s);
  }
  return 0.0;
}

}  // namespace hho
