#pragma once

#include <cstddef>
#include <optional>
#include <span>
#include <string>
#include <vector>

namespace cournot {

inline constexpr double kDefaultRootTol = 1e-10;

enum class PriceKind { linear, quadratic, tabulated };

std::string to_string(PriceKind kind);

/// Inverse-demand curve p(y). Linear p = a + b*y, quadratic
/// p = c0 + c1*y + c2*y^2, or a table of (y, p) knots starting at y = 0
/// interpolated by a monotone (Fritsch-Carlson) cubic Hermite spline and
/// continued linearly past the last knot.
///
/// Construction only checks structure. Whether the curve meets the demand
/// assumptions (decreasing, concave, positive at zero, crosses zero) is the
/// job of validate_assumptions(); evaluating an invalid curve is allowed.
class PriceCurve {
 public:
  static PriceCurve linear(double intercept, double slope);
  static PriceCurve quadratic(double c0, double c1, double c2);
  static PriceCurve tabulated(std::vector<double> y, std::vector<double> p);

  PriceKind kind() const noexcept { return kind_; }
  std::span<const double> coefficients() const noexcept { return coeffs_; }
  std::span<const double> knots() const noexcept { return knots_y_; }
  std::span<const double> knot_values() const noexcept { return knots_p_; }

  /// Upper end of the evaluation range used for bracketing and validation.
  double domain_hint() const noexcept { return domain_hint_; }
  PriceCurve with_domain_hint(double hint) const;

  double price(double y) const;
  /// p'(y). Tabulated curves use a central difference with step
  /// h = 1e-6 * max(1, y), forward difference when y < h.
  double slope(double y) const;
  /// U(y) = integral of p over [0, y]. Tabulated curves integrate each
  /// knot interval with Simpson's rule, which is exact for the cubic pieces.
  double surplus(double y) const;
  /// Unique zero of p. Closed form for linear curves, bisection otherwise.
  double y_max(double tol = kDefaultRootTol) const;

 private:
  PriceCurve() = default;

  double hermite(double y) const;
  double tabulated_integral(double y) const;

  PriceKind kind_ = PriceKind::linear;
  std::vector<double> coeffs_;
  std::vector<double> knots_y_;
  std::vector<double> knots_p_;
  std::vector<double> tangents_;
  double domain_hint_ = 1.0;
};

struct AssumptionCheck {
  std::string name;
  bool passed = true;
  std::optional<double> first_violation;  // sample point y where it failed
  std::string detail;
};

struct ValidationReport {
  std::vector<AssumptionCheck> checks;

  bool ok() const;
  const AssumptionCheck* find(const std::string& name) const;
};

/// Spot-checks the demand assumptions on `grid_size` evenly spaced points of
/// [0, domain_hint]: p(0) > 0, strictly decreasing, concave, finite negative
/// p'(0+), and a zero crossing (inside the table for tabulated curves).
ValidationReport validate_assumptions(const PriceCurve& curve, std::size_t grid_size = 257);

}  // namespace cournot
