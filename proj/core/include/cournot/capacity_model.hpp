#pragma once

#include <cstddef>
#include <cstdint>
#include <optional>
#include <vector>

#include "cournot/aggregate.hpp"
#include "cournot/distributions.hpp"

namespace cournot {

/// Serial (nearest-neighbour) correlation in the weak-correlation model.
/// Per-firm capacities form a stationary Gaussian AR(1) chain with
/// Cov(X_i, X_j) = amplitude * rho^|i-j|. When amplitude is unset it is
/// Var(X) / N^2, so each X_i has the variance of X / N.
struct SerialCorrelation {
  double rho = 0.0;
  std::optional<double> amplitude;
};

enum class CapacityMode { iid, shock, serial };

std::string to_string(CapacityMode mode);

/// Firm-level capacity randomness.
///   iid:    X_i ~ X / N independently.
///   shock:  X_i = Xhat_i + Z / N with Xhat_i ~ X / N and a common zero-mean Z.
///   serial: Gaussian chain with the marginal mean and variance of X / N.
struct CapacityModel {
  BaseDistribution base = BaseDistribution::normal(1.0, 1.0);
  std::optional<BaseDistribution> shock;
  std::optional<SerialCorrelation> serial;
  std::size_t n_firms = 1;

  CapacityMode mode() const noexcept;
  /// Covariance amplitude A of the serial model.
  double serial_amplitude() const;
  /// Throws model error on n_firms == 0, a shock with nonzero mean, rho
  /// outside [0, 1), or shock and serial correlation together.
  void validate() const;
};

struct AggregateSettings {
  std::size_t mc_samples = 200'000;
  std::size_t irwin_hall_max = 30;
};

/// Distribution of the total capacity of one of K equal groups of N / K firms.
/// Closed-form normal for normal bases (with or without a normal shock),
/// Irwin-Hall for shock-free uniform groups of at most irwin_hall_max firms,
/// otherwise a Monte Carlo sample of mc_samples draws.
AggregateDistribution group_aggregate(const CapacityModel& model, std::size_t k_groups, std::uint64_t seed,
                                      const AggregateSettings& settings = {});

/// Distribution of (Z + mu) / K: the group capacity when only the common
/// shock is random. Requires shock mode.
AggregateDistribution shock_only_aggregate(const CapacityModel& model, std::size_t k_groups);

/// `reps` independent draws of the population total sum_i X_i, simulated
/// firm by firm. Deterministic given seed.
std::vector<double> sample_total_capacity(const CapacityModel& model, std::uint64_t seed, std::size_t reps);

struct WeakCorrelationReport {
  double row_sum = 0.0;           // max_i sum_j |Cov(X_i, X_j)|
  double c_estimate = 0.0;        // N * row_sum
  double geometric_bound = 0.0;   // amplitude * (1 + rho) / (1 - rho)
  double c_limit = 0.0;           // constant c the row sum is tested against
  bool satisfied = false;         // row_sum <= c_limit / N
};

/// Checks the weak-correlation row-sum condition for the serial model. When
/// c_declared is unset the N-independent constant Var(X) (1 + rho) / (1 - rho)
/// is used. Throws mode error outside serial mode.
WeakCorrelationReport weak_correlation_bound(const CapacityModel& model,
                                             std::optional<double> c_declared = std::nullopt);

}  // namespace cournot
