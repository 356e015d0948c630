#include "cournot/capacity_model.hpp"

#include <cmath>
#include <random>
#include <sstream>

#include "cournot/errors.hpp"

namespace cournot {

namespace {

struct GroupSampler {
  const CapacityModel& model;
  std::size_t members;  // firms in the group
  std::size_t k_groups;

  double independent_sum(std::mt19937_64& rng) const {
    const double n = static_cast<double>(model.n_firms);
    if (model.base.kind() == DistKind::uniform) {
      const double lo = model.base.first() / n;
      const double width = (model.base.second() - model.base.first()) / n;
      double u = 0.0;
      for (std::size_t i = 0; i < members; ++i) u += static_cast<double>(rng() >> 11) * 0x1.0p-53;
      return static_cast<double>(members) * lo + width * u;
    }
    const BaseDistribution firm = model.base.scaled(1.0 / n);
    double total = 0.0;
    for (std::size_t i = 0; i < members; ++i) total += firm.sample(rng);
    return total;
  }

  double operator()(std::mt19937_64& rng) const {
    const double n = static_cast<double>(model.n_firms);
    switch (model.mode()) {
      case CapacityMode::iid: return independent_sum(rng);
      case CapacityMode::shock: {
        const double total = independent_sum(rng);
        return total + model.shock->sample(rng) / static_cast<double>(k_groups);
      }
      case CapacityMode::serial: {
        const double rho = model.serial->rho;
        const double innov = std::sqrt(1.0 - rho * rho);
        const double amp = std::sqrt(model.serial_amplitude());
        std::normal_distribution<double> eps(0.0, 1.0);
        double chain = eps(rng);
        double total = chain;
        for (std::size_t i = 1; i < members; ++i) {
          chain = rho * chain + innov * eps(rng);
          total += chain;
        }
        return static_cast<double>(members) * model.base.mean() / n + amp * total;
      }
    }
    return 0.0;
  }
};

}  // namespace

std::string to_string(CapacityMode mode) {
  switch (mode) {
    case CapacityMode::iid: return "iid";
    case CapacityMode::shock: return "shock";
    case CapacityMode::serial: return "serial";
  }
  return "unknown";
}

CapacityMode CapacityModel::mode() const noexcept {
  if (shock) return CapacityMode::shock;
  if (serial) return CapacityMode::serial;
  return CapacityMode::iid;
}

double CapacityModel::serial_amplitude() const {
  if (!serial) raise(ErrorKind::mode, "serial_amplitude: capacity model has no serial correlation");
  if (serial->amplitude) return *serial->amplitude;
  const double n = static_cast<double>(n_firms);
  return base.variance() / (n * n);
}

void CapacityModel::validate() const {
  if (n_firms == 0) raise(ErrorKind::model, "capacity: n_firms must be at least 1");
  if (shock && serial) raise(ErrorKind::model, "capacity: a common shock and serial correlation cannot be combined");
  if (shock) {
    const double m = shock->mean();
    if (std::abs(m) > 1e-12 * std::max(1.0, shock->sd())) {
      std::ostringstream os;
      os << "capacity: common shock must have zero mean, got " << m;
      raise(ErrorKind::model, os.str());
    }
  }
  if (serial) {
    if (!(serial->rho >= 0.0 && serial->rho < 1.0)) raise(ErrorKind::model, "capacity: rho must lie in [0, 1)");
    if (serial->amplitude && !(*serial->amplitude > 0.0)) {
      raise(ErrorKind::model, "capacity: serial amplitude must be positive");
    }
  }
}

AggregateDistribution group_aggregate(const CapacityModel& model, std::size_t k_groups, std::uint64_t seed,
                                      const AggregateSettings& settings) {
  model.validate();
  if (k_groups == 0 || model.n_firms % k_groups != 0) {
    std::ostringstream os;
    os << "partition: n_firms " << model.n_firms << " is not divisible by k_groups " << k_groups;
    raise(ErrorKind::partition, os.str());
  }
  const std::size_t members = model.n_firms / k_groups;
  const double n = static_cast<double>(model.n_firms);
  const double k = static_cast<double>(k_groups);
  const double m = static_cast<double>(members);
  const CapacityMode mode = model.mode();

  if (mode != CapacityMode::serial && model.base.kind() == DistKind::normal &&
      (!model.shock || model.shock->kind() == DistKind::normal)) {
    double var = m * model.base.variance() / (n * n);
    if (model.shock) var += model.shock->variance() / (k * k);
    return AggregateDistribution::normal(m * model.base.mean() / n, std::sqrt(var), members);
  }
  if (mode == CapacityMode::iid && model.base.kind() == DistKind::uniform && members <= settings.irwin_hall_max) {
    const double lo = model.base.first() / n;
    const double width = (model.base.second() - model.base.first()) / n;
    return AggregateDistribution::irwin_hall(members, m * lo, width, members);
  }

  if (settings.mc_samples == 0) raise(ErrorKind::model, "group_aggregate: mc_samples must be positive");
  std::mt19937_64 rng(seed);
  const GroupSampler sampler{model, members, k_groups};
  std::vector<double> draws(settings.mc_samples);
  for (auto& d : draws) d = sampler(rng);
  return AggregateDistribution::empirical(std::move(draws), members, seed);
}

AggregateDistribution shock_only_aggregate(const CapacityModel& model, std::size_t k_groups) {
  if (!model.shock) raise(ErrorKind::mode, "shock_only_aggregate: capacity model has no common shock");
  if (k_groups == 0) raise(ErrorKind::partition, "shock_only_aggregate: k_groups must be positive");
  const double k = static_cast<double>(k_groups);
  const double mu = model.base.mean();
  const BaseDistribution& z = *model.shock;
  if (z.kind() == DistKind::normal) return AggregateDistribution::normal((z.mean() + mu) / k, z.sd() / k);
  return AggregateDistribution::irwin_hall(1, (z.first() + mu) / k, (z.second() - z.first()) / k);
}

std::vector<double> sample_total_capacity(const CapacityModel& model, std::uint64_t seed, std::size_t reps) {
  model.validate();
  if (reps == 0) raise(ErrorKind::domain, "sample_total_capacity: reps must be at least 1");
  std::mt19937_64 rng(seed);
  const GroupSampler sampler{model, model.n_firms, 1};
  std::vector<double> out(reps);
  for (auto& v : out) v = sampler(rng);
  return out;
}

WeakCorrelationReport weak_correlation_bound(const CapacityModel& model, std::optional<double> c_declared) {
  if (model.mode() != CapacityMode::serial) {
    raise(ErrorKind::mode, "weak_correlation_bound: requires the serial correlation model");
  }
  model.validate();
  const double rho = model.serial->rho;
  const double amp = model.serial_amplitude();
  const std::size_t n = model.n_firms;
  const std::size_t mid = (n - 1) / 2;  // the middle row has the largest sum

  WeakCorrelationReport r;
  double row = 0.0;
  for (std::size_t j = 0; j < n; ++j) {
    const std::size_t lag = j > mid ? j - mid : mid - j;
    row += amp * std::pow(rho, static_cast<double>(lag));
  }
  r.row_sum = row;
  r.c_estimate = static_cast<double>(n) * row;
  r.geometric_bound = amp * (1.0 + rho) / (1.0 - rho);
  r.c_limit = c_declared.value_or(model.base.variance() * (1.0 + rho) / (1.0 - rho));
  r.satisfied = row <= r.c_limit / static_cast<double>(n) * (1.0 + 1e-12);
  return r;
}

}  // namespace cournot
