#include "cournot/equilibrium.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>
#include <random>
#include <sstream>

#include "cournot/errors.hpp"
#include "cournot/root_find.hpp"

namespace cournot {

namespace {

template <class PenaltySlope>
EquilibriumResult solve_foc(const MarketInstance& inst, const PenaltySlope& penalty_slope, double hi,
                            EquilibriumMode mode) {
  const PriceCurve& p = inst.price();
  const double k = static_cast<double>(inst.n_groups());
  auto foc = [&](double x) { return p.price(k * x) + p.slope(k * x) * x - penalty_slope(x); };
  if (!(foc(0.0) > 0.0)) {
    std::ostringstream os;
    os << "equilibrium: first-order condition is not positive at zero (value " << foc(0.0)
       << "); no interior symmetric equilibrium";
    raise(ErrorKind::assumption, os.str());
  }
  if (foc(hi) > 0.0) {
    raise(ErrorKind::assumption, "equilibrium: first-order condition does not change sign on the bracket");
  }
  const RootResult root = bisect_decreasing(foc, 0.0, hi, inst.solver().tol_root, inst.solver().max_iter);
  return {root.x, k * root.x, root.value, mode, root.iterations};
}

double deterministic_upper(const MarketInstance& inst) {
  const double hi = deterministic_symmetric_eq(inst).x_group;
  // Penalised roots lie in (0, xbar_K]; the bracket is widened by tol_root to
  // cover the tolerance of xbar_K itself.
  return std::min(inst.y_max() / static_cast<double>(inst.n_groups()), hi + inst.solver().tol_root);
}

double sum_of(std::span<const double> v) { return std::accumulate(v.begin(), v.end(), 0.0); }

}  // namespace

void SolverSettings::validate() const {
  if (!(tol_root > 0.0) || max_iter == 0 || mc_samples == 0 || !(br_tol > 0.0) || br_max_rounds == 0 ||
      irwin_hall_max == 0) {
    raise(ErrorKind::model, "solver: tol_root, max_iter, mc_samples, br_tol, br_max_rounds must be positive");
  }
}

MarketInstance::MarketInstance(PriceCurve price, CapacityModel capacity, std::size_t n_groups, PenaltySpec penalty,
                               SolverSettings solver)
    : price_(std::move(price)),
      capacity_(std::move(capacity)),
      n_groups_(n_groups),
      penalty_(penalty),
      solver_(solver) {
  capacity_.validate();
  penalty_.validate();
  solver_.validate();
  if (n_groups_ == 0 || n_groups_ > capacity_.n_firms || capacity_.n_firms % n_groups_ != 0) {
    std::ostringstream os;
    os << "partition: n_firms " << capacity_.n_firms << " is not divisible by k_groups " << n_groups_;
    raise(ErrorKind::partition, os.str());
  }
  y_max_ = price_.y_max(solver_.tol_root);
  aggregate_ = std::make_shared<const AggregateDistribution>(
      cournot::group_aggregate(capacity_, n_groups_, solver_.seed, {solver_.mc_samples, solver_.irwin_hall_max}));
}

std::string to_string(EquilibriumMode mode) {
  switch (mode) {
    case EquilibriumMode::deterministic: return "deterministic";
    case EquilibriumMode::stochastic: return "stochastic";
    case EquilibriumMode::correlated: return "correlated";
  }
  return "unknown";
}

EquilibriumResult deterministic_symmetric_eq(const MarketInstance& inst) {
  return solve_foc(inst, [](double) { return 0.0; }, inst.y_max() / static_cast<double>(inst.n_groups()),
                   EquilibriumMode::deterministic);
}

EquilibriumResult stochastic_symmetric_eq(const MarketInstance& inst) {
  if (inst.capacity().mode() == CapacityMode::shock) {
    raise(ErrorKind::mode, "stochastic_symmetric_eq: common-shock capacity needs correlated_symmetric_eq");
  }
  if (inst.penalty().kind != PenaltyKind::linear) {
    raise(ErrorKind::mode, "stochastic_symmetric_eq: convex penalties need convex_penalty_symmetric_eq");
  }
  const auto& agg = inst.group_aggregate();
  const double q = inst.penalty().q;
  return solve_foc(inst, [&](double x) { return q * agg.cdf(x); }, deterministic_upper(inst),
                   EquilibriumMode::stochastic);
}

EquilibriumResult convex_penalty_symmetric_eq(const MarketInstance& inst) {
  if (inst.penalty().kind != PenaltyKind::convex_power) {
    raise(ErrorKind::mode, "convex_penalty_symmetric_eq: penalty must be convex_power");
  }
  const auto& agg = inst.group_aggregate();
  const auto& pen = inst.penalty();
  const auto mode =
      inst.capacity().mode() == CapacityMode::shock ? EquilibriumMode::correlated : EquilibriumMode::stochastic;
  return solve_foc(inst, [&](double x) { return agg.expected_penalty_slope(x, pen); }, deterministic_upper(inst),
                   mode);
}

EquilibriumResult correlated_symmetric_eq(const MarketInstance& inst) {
  if (inst.capacity().mode() != CapacityMode::shock) {
    raise(ErrorKind::mode, "correlated_symmetric_eq: requires a common-shock capacity model");
  }
  const auto& agg = inst.group_aggregate();
  const auto& pen = inst.penalty();
  return solve_foc(inst, [&](double x) { return agg.expected_penalty_slope(x, pen); }, deterministic_upper(inst),
                   EquilibriumMode::correlated);
}

EquilibriumResult shock_only_symmetric_eq(const MarketInstance& inst) {
  const AggregateDistribution agg = shock_only_aggregate(inst.capacity(), inst.n_groups());
  const auto& pen = inst.penalty();
  return solve_foc(inst, [&](double x) { return agg.expected_penalty_slope(x, pen); }, deterministic_upper(inst),
                   EquilibriumMode::correlated);
}

EquilibriumResult solve_symmetric(const MarketInstance& inst) {
  if (inst.capacity().mode() == CapacityMode::shock) return correlated_symmetric_eq(inst);
  if (inst.penalty().kind == PenaltyKind::convex_power) return convex_penalty_symmetric_eq(inst);
  return stochastic_symmetric_eq(inst);
}

double group_payoff(const MarketInstance& inst, std::size_t k, std::span<const double> x_all) {
  if (x_all.size() != inst.n_groups()) {
    std::ostringstream os;
    os << "group_payoff: expected " << inst.n_groups() << " commitments, got " << x_all.size();
    raise(ErrorKind::dimension, os.str());
  }
  if (k >= x_all.size()) raise(ErrorKind::dimension, "group_payoff: group index out of range");
  for (double v : x_all) {
    if (!(v >= 0.0)) raise(ErrorKind::domain, "group_payoff: commitments must be nonnegative");
  }
  const double xk = x_all[k];
  return inst.price().price(sum_of(x_all)) * xk - inst.group_aggregate().expected_penalty(xk, inst.penalty());
}

double best_response(const MarketInstance& inst, std::size_t k, std::span<const double> x_others) {
  if (k >= inst.n_groups() || x_others.size() + 1 != inst.n_groups()) {
    raise(ErrorKind::dimension, "best_response: need K - 1 other commitments and a valid group index");
  }
  for (double v : x_others) {
    if (!(v >= 0.0)) raise(ErrorKind::domain, "best_response: commitments must be nonnegative");
  }
  const PriceCurve& p = inst.price();
  const auto& agg = inst.group_aggregate();
  const auto& pen = inst.penalty();
  const double others = sum_of(x_others);
  auto marginal = [&](double x) {
    return p.price(others + x) + p.slope(others + x) * x - agg.expected_penalty_slope(x, pen);
  };
  return bisect_decreasing(marginal, 0.0, inst.y_max(), inst.solver().tol_root, inst.solver().max_iter).x;
}

DynamicsResult best_response_dynamics(const MarketInstance& inst, std::span<const double> init) {
  const std::size_t k_groups = inst.n_groups();
  if (init.size() != k_groups) raise(ErrorKind::dimension, "best_response_dynamics: init must have K entries");
  DynamicsResult out;
  out.x.assign(init.begin(), init.end());
  std::vector<double> others(k_groups - 1);
  const auto& s = inst.solver();
  while (out.rounds < s.br_max_rounds) {
    double change = 0.0;
    for (std::size_t k = 0; k < k_groups; ++k) {
      std::size_t j = 0;
      for (std::size_t i = 0; i < k_groups; ++i) {
        if (i != k) others[j++] = out.x[i];
      }
      const double next = best_response(inst, k, others);
      change = std::max(change, std::abs(next - out.x[k]));
      out.x[k] = next;
    }
    ++out.rounds;
    if (change < s.br_tol || k_groups == 1) {
      out.converged = true;
      break;
    }
  }
  return out;
}

UniquenessReport multistart_check(const MarketInstance& inst, std::size_t starts, std::uint64_t seed) {
  const std::size_t k_groups = inst.n_groups();
  const double x_sym = solve_symmetric(inst).x_group;
  std::mt19937_64 rng(seed);
  std::uniform_real_distribution<double> u(0.0, inst.y_max() / static_cast<double>(k_groups));

  UniquenessReport rep;
  rep.starts = starts;
  std::vector<double> lo(k_groups, std::numeric_limits<double>::infinity());
  std::vector<double> hi(k_groups, -std::numeric_limits<double>::infinity());
  std::vector<double> init(k_groups);
  for (std::size_t s = 0; s < starts; ++s) {
    for (auto& v : init) v = u(rng);
    const DynamicsResult r = best_response_dynamics(inst, init);
    rep.all_converged = rep.all_converged && r.converged;
    for (std::size_t k = 0; k < k_groups; ++k) {
      lo[k] = std::min(lo[k], r.x[k]);
      hi[k] = std::max(hi[k], r.x[k]);
      rep.deviation_from_symmetric = std::max(rep.deviation_from_symmetric, std::abs(r.x[k] - x_sym));
    }
  }
  for (std::size_t k = 0; k < k_groups && starts > 0; ++k) rep.spread = std::max(rep.spread, hi[k] - lo[k]);
  rep.agree = rep.all_converged && rep.spread <= 10.0 * inst.solver().br_tol;
  return rep;
}

}  // namespace cournot
