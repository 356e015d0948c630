#pragma once

#include <cstddef>
#include <cstdint>
#include <memory>
#include <span>
#include <string>
#include <variant>
#include <vector>

#include "cournot/distributions.hpp"
#include "cournot/penalty.hpp"

namespace cournot {

enum class Representation { closed_form_normal, irwin_hall_uniform, empirical_monte_carlo };

std::string to_string(Representation r);

/// Distribution of a coalition's total capacity. Immutable once built.
///
/// The Monte Carlo representation stores the sorted sample and uses the
/// empirical CDF linearly interpolated between order statistics
/// (F(s_i) = i / (M - 1)). That CDF is continuous and nondecreasing, so
/// first-order conditions built on it keep a single root, and
/// expected_shortfall is its exact integral.
class AggregateDistribution {
 public:
  static AggregateDistribution normal(double mean, double sd, std::size_t group_size = 1);
  /// offset + scale * (U_1 + ... + U_n) with U_i ~ Unif[0, 1].
  static AggregateDistribution irwin_hall(std::size_t n, double offset, double scale,
                                          std::size_t group_size = 1);
  static AggregateDistribution empirical(std::vector<double> samples, std::size_t group_size = 1,
                                         std::uint64_t seed = 0);
  static AggregateDistribution from_base(const BaseDistribution& base);

  Representation representation() const noexcept;
  std::size_t group_size() const noexcept { return group_size_; }
  std::size_t mc_samples() const noexcept;
  std::uint64_t seed() const noexcept { return seed_; }

  double mean() const noexcept;
  double variance() const noexcept;

  double cdf(double x) const noexcept;
  /// Pr(X <= x); the derivative of expected_shortfall in x.
  double shortfall_probability(double x) const noexcept { return cdf(x); }
  /// E[(x - X)^+].
  double expected_shortfall(double x) const noexcept;
  /// E[f(x - X)] for the given penalty (includes the rate q).
  double expected_penalty(double x, const PenaltySpec& pen) const;
  /// E[f'(x - X)] (includes q); the penalty term of every first-order condition.
  double expected_penalty_slope(double x, const PenaltySpec& pen) const;

  /// Sorted sample store; empty for closed forms.
  std::span<const double> samples() const noexcept;

 private:
  struct Normal {
    double mean;
    double sd;
  };
  struct IrwinHall {
    std::size_t n;
    double offset;
    double scale;
  };
  struct Empirical {
    std::vector<double> sorted;
    std::vector<double> cum;  // integral of the interpolated CDF from sorted[0] to sorted[i]
    double mean;
    double variance;
  };

  using Rep = std::variant<Normal, IrwinHall, Empirical>;

  AggregateDistribution(std::shared_ptr<const Rep> rep, std::size_t group_size, std::uint64_t seed)
      : rep_(std::move(rep)), group_size_(group_size), seed_(seed) {}

  // Integrates g(x - s) against the closed-form density by composite Simpson.
  template <class G>
  double integrate_closed_form(double x, const G& g, double kink) const;

  std::shared_ptr<const Rep> rep_;
  std::size_t group_size_ = 1;
  std::uint64_t seed_ = 0;
};

/// Irwin-Hall CDF, integrated CDF and density for the sum of n Unif[0,1],
/// evaluated through the reflection t -> n - t to limit cancellation.
namespace irwin_hall {
double cdf(std::size_t n, double t);
double integrated_cdf(std::size_t n, double t);  // E[(t - T)^+]
double density(std::size_t n, double t);
}  // namespace irwin_hall

}  // namespace cournot
