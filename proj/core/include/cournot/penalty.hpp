#pragma once

#include <limits>
#include <string>

namespace cournot {

enum class PenaltyKind { linear, convex_power };

std::string to_string(PenaltyKind kind);

/// Shortfall penalty q * f(z) applied to z = commitment - realised capacity.
///
/// linear:        f(z) = z^+.
/// convex_power:  f(z) = z^m on (0, cap], continued past the cap along its
///                tangent, so f is convex, increasing and has derivative
///                bounded by m * cap^(m-1). f(z) = 0 for z <= 0.
struct PenaltySpec {
  PenaltyKind kind = PenaltyKind::linear;
  double q = 1.0;
  double exponent = 1.0;
  double cap = std::numeric_limits<double>::infinity();

  static PenaltySpec linear(double q = 1.0);
  static PenaltySpec convex_power(double q, double exponent, double cap);

  /// Throws model error unless q > 0, exponent >= 1 and cap > 0.
  void validate() const;

  /// True when f reduces to q * z^+ (linear kind, or exponent 1).
  bool is_linear() const noexcept { return kind == PenaltyKind::linear || exponent == 1.0; }

  double value(double z) const noexcept;
  double derivative(double z) const noexcept;
};

}  // namespace cournot
