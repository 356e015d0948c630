#pragma once

#include <cstddef>
#include <cstdint>
#include <memory>
#include <span>
#include <string>
#include <vector>

#include "cournot/aggregate.hpp"
#include "cournot/capacity_model.hpp"
#include "cournot/penalty.hpp"
#include "cournot/price_curve.hpp"

namespace cournot {

struct SolverSettings {
  double tol_root = kDefaultRootTol;
  std::size_t max_iter = 400;
  std::size_t mc_samples = 200'000;
  std::uint64_t seed = 42;
  double br_tol = 1e-10;
  std::size_t br_max_rounds = 100'000;
  std::size_t irwin_hall_max = 30;

  void validate() const;
};

/// One solvable coalition game: N firms split into K equal groups. The group
/// capacity distribution is built once at construction (groups are
/// exchangeable, so one distribution serves every group) and shared by copies.
class MarketInstance {
 public:
  MarketInstance(PriceCurve price, CapacityModel capacity, std::size_t n_groups,
                 PenaltySpec penalty = PenaltySpec::linear(), SolverSettings solver = {});

  const PriceCurve& price() const noexcept { return price_; }
  const CapacityModel& capacity() const noexcept { return capacity_; }
  const PenaltySpec& penalty() const noexcept { return penalty_; }
  const SolverSettings& solver() const noexcept { return solver_; }

  std::size_t n_firms() const noexcept { return capacity_.n_firms; }
  std::size_t n_groups() const noexcept { return n_groups_; }
  std::size_t group_size() const noexcept { return capacity_.n_firms / n_groups_; }
  double y_max() const noexcept { return y_max_; }

  const AggregateDistribution& group_aggregate() const noexcept { return *aggregate_; }

 private:
  PriceCurve price_;
  CapacityModel capacity_;
  std::size_t n_groups_;
  PenaltySpec penalty_;
  SolverSettings solver_;
  double y_max_;
  std::shared_ptr<const AggregateDistribution> aggregate_;
};

enum class EquilibriumMode { deterministic, stochastic, correlated };

std::string to_string(EquilibriumMode mode);

struct EquilibriumResult {
  double x_group = 0.0;   // symmetric per-group commitment
  double total = 0.0;     // K * x_group
  double residual = 0.0;  // first-order condition at x_group
  EquilibriumMode mode = EquilibriumMode::deterministic;
  std::size_t iterations = 0;
};

/// Root of p(Kx) + p'(Kx) x on (0, y_max / K].
EquilibriumResult deterministic_symmetric_eq(const MarketInstance& inst);
/// Root of p(Kx) + p'(Kx) x - q Pr(X_K <= x) on (0, xbar_K]. Linear penalty,
/// iid or serial capacity.
EquilibriumResult stochastic_symmetric_eq(const MarketInstance& inst);
/// Root of p(Kx) + p'(Kx) x - E[f'(x - X_K)] for a convex-power penalty.
EquilibriumResult convex_penalty_symmetric_eq(const MarketInstance& inst);
/// Stochastic equilibrium under a common shock; X_K includes Z / K.
EquilibriumResult correlated_symmetric_eq(const MarketInstance& inst);
/// Intermediate game in which only the common shock is random: root of
/// p(Kx) + p'(Kx) x - q Pr((Z + mu) / K <= x).
EquilibriumResult shock_only_symmetric_eq(const MarketInstance& inst);
/// Dispatches to the solver matching the instance's penalty and capacity mode.
EquilibriumResult solve_symmetric(const MarketInstance& inst);

/// pi_k = p(sum x) x_k - E[f(x_k - X_K)].
double group_payoff(const MarketInstance& inst, std::size_t k, std::span<const double> x_all);

/// Maximiser over [0, y_max] of group k's payoff given the other K - 1
/// commitments (`x_others`, in group order with k removed).
double best_response(const MarketInstance& inst, std::size_t k, std::span<const double> x_others);

struct DynamicsResult {
  std::vector<double> x;
  std::size_t rounds = 0;
  bool converged = false;
};

/// Round-robin (Gauss-Seidel) best responses until the largest change in a
/// round drops below br_tol or br_max_rounds is reached.
DynamicsResult best_response_dynamics(const MarketInstance& inst, std::span<const double> init);

struct UniquenessReport {
  std::size_t starts = 0;
  bool all_converged = true;
  double spread = 0.0;               // largest coordinate range across starts
  double deviation_from_symmetric = 0.0;
  bool agree = true;                 // spread <= 10 * br_tol
};

/// Multi-start best-response dynamics from uniform random points of
/// [0, y_max / K]^K, compared against solve_symmetric(). Agreement means
/// every start converged and all end points lie within 10 * br_tol.
UniquenessReport multistart_check(const MarketInstance& inst, std::size_t starts, std::uint64_t seed);

}  // namespace cournot
