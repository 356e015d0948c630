#pragma once

#include <random>
#include <string>

namespace cournot {

double standard_normal_cdf(double z) noexcept;
double standard_normal_pdf(double z) noexcept;

enum class DistKind { normal, uniform };

std::string to_string(DistKind kind);

/// Unscaled capacity distribution X. Normal parameters are (mean, standard
/// deviation), uniform parameters are (lo, hi). A normal with sd = 0 is a
/// point mass, which is how a vanishing common shock is expressed.
class BaseDistribution {
 public:
  static BaseDistribution normal(double mean, double sd);
  static BaseDistribution uniform(double lo, double hi);

  DistKind kind() const noexcept { return kind_; }
  /// normal: mean; uniform: lo
  double first() const noexcept { return a_; }
  /// normal: sd; uniform: hi
  double second() const noexcept { return b_; }

  double mean() const noexcept;
  double variance() const noexcept;
  double sd() const noexcept;
  double cdf(double x) const noexcept;

  /// Distribution of X * factor (factor > 0).
  BaseDistribution scaled(double factor) const;

  double sample(std::mt19937_64& rng) const;

 private:
  BaseDistribution(DistKind kind, double a, double b) : kind_(kind), a_(a), b_(b) {}

  DistKind kind_;
  double a_;
  double b_;
};

}  // namespace cournot
