#pragma once

#include <span>
#include <string>

#include "cournot/aggregate.hpp"
#include "cournot/distributions.hpp"
#include "cournot/equilibrium.hpp"
#include "cournot/price_curve.hpp"

namespace cournot {

/// Which planner output the efficiency ratio divides by. y_max ignores the
/// planner's own capacity risk; y_prime uses the planner optimum (for a
/// common-shock model, the large-N limit with only Z + mu random).
enum class DenominatorMode { y_max, y_prime };

std::string to_string(DenominatorMode mode);
DenominatorMode parse_denominator_mode(const std::string& text);

/// Root of p(y) - Pr(total <= y): the planner's optimal aggregate output.
double planner_y_prime(const PriceCurve& price, const AggregateDistribution& total,
                       double tol = kDefaultRootTol);
/// Same, with Pr taken from a sample of the population total.
double planner_y_prime(const PriceCurve& price, std::span<const double> total_samples,
                       double tol = kDefaultRootTol);
/// Root of p(y) - Pr(Z + mu <= y).
double planner_y_prime_correlated(const PriceCurve& price, const BaseDistribution& shock, double mu,
                                  double tol = kDefaultRootTol);

struct PlannerBenchmarks {
  double y_max = 0.0;
  double y_prime = 0.0;
  CapacityMode mode = CapacityMode::iid;
};

/// y_max and y'_max for an instance. Common-shock models use the correlated
/// limit; other modes use the finite-N population total.
PlannerBenchmarks planner_benchmarks(const MarketInstance& inst);

struct EfficiencyReport {
  EquilibriumMode mode = EquilibriumMode::stochastic;
  DenominatorMode denominator_mode = DenominatorMode::y_max;
  std::size_t n_firms = 0;
  std::size_t k_groups = 0;
  double x_group = 0.0;
  double total_nash = 0.0;
  double x_bar = 0.0;        // reference per-group output for the decomposition
  double y_max = 0.0;
  double y_star = 0.0;       // denominator actually used
  double r = 0.0;
  double r_bar = 0.0;        // deterministic game against y_max
  double delta = 0.0;        // market-power gap: y_star - K x_bar
  double k_delta = 0.0;      // uncertainty gap: K (x_bar - x_group)
  double bound_kdelta = 0.0;
  double bound_delta = 0.0;
  double residual = 0.0;
};

/// Solves the matching equilibrium and planner benchmark and fills every
/// report field.
///
/// Without a common shock x_bar is the deterministic equilibrium, and the
/// bounds are KDelta <= q Pr(X_K <= y_max / K) / (-p'(0)) (for convex
/// penalties E[f'(x_K - X_K)] / (-p'(0))) and
/// delta <= (-p'(y_max) y_max^2 / p(0)) / K.
///
/// With a common shock x_bar is the shock-only equilibrium. The bounds become
/// KDelta <= q (Pr(X_K <= x_bar) - Pr((Z + mu) / K <= x_bar)) / (-p'(0)) and
/// delta <= -p'(y') y'^2 / (K (p(0) - p(y'))), taken at y' = y_star.
EfficiencyReport efficiency_ratio(const MarketInstance& inst, DenominatorMode denominator);

/// K * xbar_K / y_max.
double deterministic_efficiency_ratio(const MarketInstance& inst);

struct DecompositionCheck {
  double k_delta = 0.0;
  double delta = 0.0;
  double bound_kdelta = 0.0;
  double bound_delta = 0.0;
  bool k_delta_nonnegative = false;
  bool delta_nonnegative = false;
  bool k_delta_within_bound = false;
  bool delta_within_bound = false;

  bool passed() const noexcept {
    return k_delta_nonnegative && delta_nonnegative && k_delta_within_bound && delta_within_bound;
  }
};

/// Market-power / uncertainty split of y_max - total output with analytic
/// bounds, checked at tolerance `tol`. Requires a model without common shock.
DecompositionCheck decomposition_check(const MarketInstance& inst, double tol = 1e-9);

}  // namespace cournot
