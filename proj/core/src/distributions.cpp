#include "cournot/distributions.hpp"

#include <cmath>
#include <numbers>

#include "cournot/errors.hpp"

namespace cournot {

double standard_normal_cdf(double z) noexcept { return 0.5 * std::erfc(-z / std::numbers::sqrt2); }

double standard_normal_pdf(double z) noexcept {
  return std::exp(-0.5 * z * z) / std::sqrt(2.0 * std::numbers::pi);
}

std::string to_string(DistKind kind) { return kind == DistKind::normal ? "normal" : "uniform"; }

BaseDistribution BaseDistribution::normal(double mean, double sd) {
  if (!std::isfinite(mean) || !std::isfinite(sd) || sd < 0.0) {
    raise(ErrorKind::model, "normal distribution: need finite mean and sd >= 0");
  }
  return {DistKind::normal, mean, sd};
}

BaseDistribution BaseDistribution::uniform(double lo, double hi) {
  if (!std::isfinite(lo) || !std::isfinite(hi) || !(lo < hi)) {
    raise(ErrorKind::model, "uniform distribution: need finite lo < hi");
  }
  return {DistKind::uniform, lo, hi};
}

double BaseDistribution::mean() const noexcept { return kind_ == DistKind::normal ? a_ : 0.5 * (a_ + b_); }

double BaseDistribution::variance() const noexcept {
  if (kind_ == DistKind::normal) return b_ * b_;
  const double w = b_ - a_;
  return w * w / 12.0;
}

double BaseDistribution::sd() const noexcept { return std::sqrt(variance()); }

double BaseDistribution::cdf(double x) const noexcept {
  if (kind_ == DistKind::normal) {
    if (b_ == 0.0) return x >= a_ ? 1.0 : 0.0;
    return standard_normal_cdf((x - a_) / b_);
  }
  if (x <= a_) return 0.0;
  if (x >= b_) return 1.0;
  return (x - a_) / (b_ - a_);
}

BaseDistribution BaseDistribution::scaled(double factor) const {
  if (!(factor > 0.0)) raise(ErrorKind::model, "scaled: factor must be positive");
  return {kind_, a_ * factor, b_ * factor};
}

double BaseDistribution::sample(std::mt19937_64& rng) const {
  if (kind_ == DistKind::normal) {
    if (b_ == 0.0) return a_;
    std::normal_distribution<double> d(a_, b_);
    return d(rng);
  }
  std::uniform_real_distribution<double> d(a_, b_);
  return d(rng);
}

}  // namespace cournot
