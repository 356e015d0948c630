#include "cournot/penalty.hpp"

#include <cmath>

#include "cournot/errors.hpp"

namespace cournot {

std::string to_string(PenaltyKind kind) { return kind == PenaltyKind::linear ? "linear" : "convex_power"; }

PenaltySpec PenaltySpec::linear(double q) {
  PenaltySpec p;
  p.q = q;
  p.validate();
  return p;
}

PenaltySpec PenaltySpec::convex_power(double q, double exponent, double cap) {
  PenaltySpec p;
  p.kind = PenaltyKind::convex_power;
  p.q = q;
  p.exponent = exponent;
  p.cap = cap;
  p.validate();
  return p;
}

void PenaltySpec::validate() const {
  if (!(q > 0.0) || !std::isfinite(q)) raise(ErrorKind::model, "penalty: rate q must be positive and finite");
  if (kind == PenaltyKind::convex_power) {
    if (!(exponent >= 1.0) || !std::isfinite(exponent)) raise(ErrorKind::model, "penalty: exponent must be >= 1");
    if (!(cap > 0.0)) raise(ErrorKind::model, "penalty: cap must be positive");
  }
}

double PenaltySpec::value(double z) const noexcept {
  if (z <= 0.0) return 0.0;
  if (is_linear()) return q * z;
  if (z <= cap) return q * std::pow(z, exponent);
  return q * (std::pow(cap, exponent) + exponent * std::pow(cap, exponent - 1.0) * (z - cap));
}

double PenaltySpec::derivative(double z) const noexcept {
  if (z <= 0.0) return 0.0;
  if (is_linear()) return q;
  return q * exponent * std::pow(std::min(z, cap), exponent - 1.0);
}

}  // namespace cournot
