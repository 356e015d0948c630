#include "cournot/planner.hpp"

#include <cmath>

#include "cournot/errors.hpp"
#include "cournot/root_find.hpp"

namespace cournot {

namespace {

template <class Cdf>
double planner_root(const PriceCurve& price, const Cdf& cdf, double tol) {
  const double y_max = price.y_max(tol);
  auto foc = [&](double y) { return price.price(y) - cdf(y); };
  if (!(foc(0.0) > 0.0)) raise(ErrorKind::model, "planner: p(0) - Pr(total <= 0) must be positive");
  return bisect_decreasing(foc, 0.0, y_max, tol).x;
}

}  // namespace

std::string to_string(DenominatorMode mode) { return mode == DenominatorMode::y_max ? "ymax" : "yprime"; }

DenominatorMode parse_denominator_mode(const std::string& text) {
  if (text == "ymax" || text == "y_max") return DenominatorMode::y_max;
  if (text == "yprime" || text == "y_prime") return DenominatorMode::y_prime;
  raise(ErrorKind::input, "denominator mode must be 'ymax' or 'yprime', got '" + text + "'");
}

double planner_y_prime(const PriceCurve& price, const AggregateDistribution& total, double tol) {
  return planner_root(price, [&](double y) { return total.cdf(y); }, tol);
}

double planner_y_prime(const PriceCurve& price, std::span<const double> total_samples, double tol) {
  const auto agg = AggregateDistribution::empirical({total_samples.begin(), total_samples.end()});
  return planner_y_prime(price, agg, tol);
}

double planner_y_prime_correlated(const PriceCurve& price, const BaseDistribution& shock, double mu, double tol) {
  if (std::abs(shock.mean()) > 1e-12 * std::max(1.0, shock.sd())) {
    raise(ErrorKind::model, "planner_y_prime_correlated: shock must have zero mean");
  }
  return planner_root(price, [&](double y) { return shock.cdf(y - mu); }, tol);
}

PlannerBenchmarks planner_benchmarks(const MarketInstance& inst) {
  PlannerBenchmarks b;
  b.y_max = inst.y_max();
  b.mode = inst.capacity().mode();
  const double tol = inst.solver().tol_root;
  if (b.mode == CapacityMode::shock) {
    b.y_prime = planner_y_prime_correlated(inst.price(), *inst.capacity().shock, inst.capacity().base.mean(), tol);
  } else {
    const auto& s = inst.solver();
    const AggregateDistribution total =
        group_aggregate(inst.capacity(), 1, s.seed ^ 0x9e3779b97f4a7c15ULL, {s.mc_samples, s.irwin_hall_max});
    b.y_prime = planner_y_prime(inst.price(), total, tol);
  }
  return b;
}

double deterministic_efficiency_ratio(const MarketInstance& inst) {
  return deterministic_symmetric_eq(inst).total / inst.y_max();
}

EfficiencyReport efficiency_ratio(const MarketInstance& inst, DenominatorMode denominator) {
  const PriceCurve& p = inst.price();
  const double k = static_cast<double>(inst.n_groups());
  const bool shock = inst.capacity().mode() == CapacityMode::shock;

  const EquilibriumResult eq = solve_symmetric(inst);
  const EquilibriumResult det = deterministic_symmetric_eq(inst);

  EfficiencyReport rep;
  rep.mode = eq.mode;
  rep.denominator_mode = denominator;
  rep.n_firms = inst.n_firms();
  rep.k_groups = inst.n_groups();
  rep.x_group = eq.x_group;
  rep.total_nash = eq.total;
  rep.residual = eq.residual;
  rep.y_max = inst.y_max();
  rep.y_star = denominator == DenominatorMode::y_max ? rep.y_max : planner_benchmarks(inst).y_prime;
  rep.r = rep.total_nash / rep.y_star;
  rep.r_bar = det.total / rep.y_max;

  const double neg_slope0 = -p.slope(0.0);
  if (shock) {
    const double x_bar = shock_only_symmetric_eq(inst).x_group;
    const AggregateDistribution z_only = shock_only_aggregate(inst.capacity(), inst.n_groups());
    rep.x_bar = x_bar;
    rep.bound_kdelta =
        inst.penalty().q * (inst.group_aggregate().cdf(x_bar) - z_only.cdf(x_bar)) / neg_slope0;
    const double y = rep.y_star;
    rep.bound_delta = -p.slope(y) * y * y / (k * (p.price(0.0) - p.price(y)));
  } else {
    rep.x_bar = det.x_group;
    const auto& pen = inst.penalty();
    const double penalty_slope = pen.kind == PenaltyKind::linear
                                     ? pen.q * inst.group_aggregate().cdf(rep.y_max / k)
                                     : inst.group_aggregate().expected_penalty_slope(eq.x_group, pen);
    rep.bound_kdelta = penalty_slope / neg_slope0;
    rep.bound_delta = -p.slope(rep.y_max) * rep.y_max * rep.y_max / (k * p.price(0.0));
  }
  rep.delta = rep.y_star - k * rep.x_bar;
  rep.k_delta = k * (rep.x_bar - rep.x_group);
  return rep;
}

DecompositionCheck decomposition_check(const MarketInstance& inst, double tol) {
  if (inst.capacity().mode() == CapacityMode::shock) {
    raise(ErrorKind::mode, "decomposition_check: requires a model without common shock");
  }
  const EfficiencyReport rep = efficiency_ratio(inst, DenominatorMode::y_max);
  DecompositionCheck c;
  c.k_delta = rep.k_delta;
  c.delta = rep.delta;
  c.bound_kdelta = rep.bound_kdelta;
  c.bound_delta = rep.bound_delta;
  c.k_delta_nonnegative = c.k_delta >= -tol;
  c.delta_nonnegative = c.delta >= -tol;
  c.k_delta_within_bound = c.k_delta <= c.bound_kdelta + tol;
  c.delta_within_bound = c.delta <= c.bound_delta + tol;
  return c;
}

}  // namespace cournot
