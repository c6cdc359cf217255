#pragma once

#include <string>

namespace hho {

/// Face-flux stabilization profiles. All variants satisfy |A|(0) = 0,
/// |A|(-s) = |A|(s) and |A| >= 0; the centered profile introduces no
/// upwinding at all and is admissible only when diffusion is nowhere
/// degenerate.
enum class FluxScheme { centered, upwind, theta_upwind, scharfetter_gummel };

FluxScheme flux_scheme_from_string(const std::string& name);
std::string to_string(FluxScheme scheme);

class FluxFunction {
 public:
  explicit FluxFunction(FluxScheme scheme) : scheme_(scheme) {}

  FluxScheme scheme() const { return scheme_; }

  /// |A|(s)
  double abs(double s) const;
  /// A+(s) = (|A|(s) + s) / 2
  double plus(double s) const { return 0.5 * (abs(s) + s); }
  /// A-(s) = (|A|(s) - s) / 2
  double minus(double s) const { return 0.5 * (abs(s) - s); }

  /// Whether the profile keeps control of the cell-face difference as the
  /// Peclet number blows up (required whenever some face carries zero
  /// diffusion); false for the centered scheme.
  bool robust_at_infinite_peclet() const { return scheme_ != FluxScheme::centered; }

 private:
  FluxScheme scheme_;
};

}  // namespace hho
