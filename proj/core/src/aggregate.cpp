#include "cournot/aggregate.hpp"

#include <algorithm>
#include <cmath>
#include <functional>
#include <numeric>

#include "cournot/errors.hpp"

namespace cournot {

namespace {

template <class... Ts>
struct overloaded : Ts... {
  using Ts::operator()...;
};
template <class... Ts>
overloaded(Ts...) -> overloaded<Ts...>;

constexpr int kSimpsonPanels = 2048;  // even

template <class F>
double simpson(const F& f, double a, double b) {
  if (!(b > a)) return 0.0;
  const double h = (b - a) / kSimpsonPanels;
  double acc = f(a) + f(b);
  for (int i = 1; i < kSimpsonPanels; ++i) acc += f(a + i * h) * ((i % 2) ? 4.0 : 2.0);
  return acc * h / 3.0;
}

// Raw alternating sums; callers reflect so that t <= n / 2.
long double ih_sum(std::size_t n, long double t, int power) {
  long double acc = 0.0L;
  long double binom = 1.0L;
  const auto kmax = static_cast<std::size_t>(std::floor(t));
  for (std::size_t k = 0; k <= kmax && k <= n; ++k) {
    const long double term = binom * std::pow(t - static_cast<long double>(k), power);
    acc += (k % 2 == 0) ? term : -term;
    binom = binom * static_cast<long double>(n - k) / static_cast<long double>(k + 1);
  }
  return acc;
}

long double factorial(std::size_t n) {
  long double f = 1.0L;
  for (std::size_t i = 2; i <= n; ++i) f *= static_cast<long double>(i);
  return f;
}

}  // namespace

namespace irwin_hall {

double cdf(std::size_t n, double t) {
  const double dn = static_cast<double>(n);
  if (t <= 0.0) return 0.0;
  if (t >= dn) return 1.0;
  if (t > 0.5 * dn) return 1.0 - cdf(n, dn - t);
  const long double v = ih_sum(n, t, static_cast<int>(n)) / factorial(n);
  return std::clamp(static_cast<double>(v), 0.0, 1.0);
}

double integrated_cdf(std::size_t n, double t) {
  const double dn = static_cast<double>(n);
  if (t <= 0.0) return 0.0;
  if (t >= dn) return t - 0.5 * dn;
  if (t > 0.5 * dn) return t - 0.5 * dn + integrated_cdf(n, dn - t);
  const long double v = ih_sum(n, t, static_cast<int>(n) + 1) / factorial(n + 1);
  return std::max(0.0, static_cast<double>(v));
}

double density(std::size_t n, double t) {
  const double dn = static_cast<double>(n);
  if (t < 0.0 || t > dn) return 0.0;
  if (n == 1) return 1.0;
  if (t > 0.5 * dn) t = dn - t;
  const long double v = ih_sum(n, t, static_cast<int>(n) - 1) / factorial(n - 1);
  return std::max(0.0, static_cast<double>(v));
}

}  // namespace irwin_hall

std::string to_string(Representation r) {
  switch (r) {
    case Representation::closed_form_normal: return "closed-form-normal";
    case Representation::irwin_hall_uniform: return "irwin-hall-uniform";
    case Representation::empirical_monte_carlo: return "empirical-monte-carlo";
  }
  return "unknown";
}

AggregateDistribution AggregateDistribution::normal(double mean, double sd, std::size_t group_size) {
  if (!std::isfinite(mean) || !std::isfinite(sd) || sd < 0.0) {
    raise(ErrorKind::model, "normal aggregate: need finite mean and sd >= 0");
  }
  return {std::make_shared<const Rep>(Normal{mean, sd}), group_size, 0};
}

AggregateDistribution AggregateDistribution::irwin_hall(std::size_t n, double offset, double scale,
                                                        std::size_t group_size) {
  if (n == 0 || !(scale > 0.0) || !std::isfinite(offset)) {
    raise(ErrorKind::model, "irwin-hall aggregate: need n >= 1 and scale > 0");
  }
  return {std::make_shared<const Rep>(IrwinHall{n, offset, scale}), group_size, 0};
}

AggregateDistribution AggregateDistribution::empirical(std::vector<double> samples, std::size_t group_size,
                                                       std::uint64_t seed) {
  if (samples.empty()) raise(ErrorKind::model, "empirical aggregate: no samples");
  std::sort(samples.begin(), samples.end());
  const std::size_t m = samples.size();
  Empirical e;
  e.cum.assign(m, 0.0);
  if (m == 1) {
    e.mean = samples[0];
    e.variance = 0.0;
  } else {
    const double denom = static_cast<double>(m - 1);
    double mean = 0.0;
    double second = 0.0;
    for (std::size_t i = 0; i + 1 < m; ++i) {
      const double a = samples[i];
      const double b = samples[i + 1];
      e.cum[i + 1] = e.cum[i] + (b - a) * (static_cast<double>(i) + 0.5) / denom;
      // Each segment carries mass 1/(m-1), uniformly spread over [a, b].
      mean += 0.5 * (a + b);
      second += (a * a + a * b + b * b) / 3.0;
    }
    e.mean = mean / denom;
    e.variance = std::max(0.0, second / denom - e.mean * e.mean);
  }
  e.sorted = std::move(samples);
  return {std::make_shared<const Rep>(std::move(e)), group_size, seed};
}

AggregateDistribution AggregateDistribution::from_base(const BaseDistribution& base) {
  if (base.kind() == DistKind::normal) return normal(base.first(), base.second(), 1);
  return irwin_hall(1, base.first(), base.second() - base.first(), 1);
}

Representation AggregateDistribution::representation() const noexcept {
  return std::visit(overloaded{
                        [](const Normal&) { return Representation::closed_form_normal; },
                        [](const IrwinHall&) { return Representation::irwin_hall_uniform; },
                        [](const Empirical&) { return Representation::empirical_monte_carlo; },
                    },
                    *rep_);
}

std::size_t AggregateDistribution::mc_samples() const noexcept {
  if (const auto* e = std::get_if<Empirical>(rep_.get())) return e->sorted.size();
  return 0;
}

std::span<const double> AggregateDistribution::samples() const noexcept {
  if (const auto* e = std::get_if<Empirical>(rep_.get())) return e->sorted;
  return {};
}

double AggregateDistribution::mean() const noexcept {
  return std::visit(overloaded{
                        [](const Normal& d) { return d.mean; },
                        [](const IrwinHall& d) { return d.offset + d.scale * 0.5 * static_cast<double>(d.n); },
                        [](const Empirical& d) { return d.mean; },
                    },
                    *rep_);
}

double AggregateDistribution::variance() const noexcept {
  return std::visit(overloaded{
                        [](const Normal& d) { return d.sd * d.sd; },
                        [](const IrwinHall& d) { return d.scale * d.scale * static_cast<double>(d.n) / 12.0; },
                        [](const Empirical& d) { return d.variance; },
                    },
                    *rep_);
}

double AggregateDistribution::cdf(double x) const noexcept {
  return std::visit(overloaded{
                        [x](const Normal& d) {
                          if (d.sd == 0.0) return x >= d.mean ? 1.0 : 0.0;
                          return standard_normal_cdf((x - d.mean) / d.sd);
                        },
                        [x](const IrwinHall& d) { return irwin_hall::cdf(d.n, (x - d.offset) / d.scale); },
                        [x](const Empirical& d) {
                          const auto& s = d.sorted;
                          if (x < s.front()) return 0.0;
                          if (x >= s.back()) return 1.0;
                          const auto it = std::upper_bound(s.begin(), s.end(), x);
                          const std::size_t i = static_cast<std::size_t>(it - s.begin()) - 1;
                          const double denom = static_cast<double>(s.size() - 1);
                          const double w = s[i + 1] - s[i];
                          const double frac = w > 0.0 ? (x - s[i]) / w : 0.0;
                          return (static_cast<double>(i) + frac) / denom;
                        },
                    },
                    *rep_);
}

double AggregateDistribution::expected_shortfall(double x) const noexcept {
  return std::visit(overloaded{
                        [x](const Normal& d) {
                          if (d.sd == 0.0) return std::max(0.0, x - d.mean);
                          const double z = (x - d.mean) / d.sd;
                          return (x - d.mean) * standard_normal_cdf(z) + d.sd * standard_normal_pdf(z);
                        },
                        [x](const IrwinHall& d) {
                          return d.scale * irwin_hall::integrated_cdf(d.n, (x - d.offset) / d.scale);
                        },
                        [x](const Empirical& d) {
                          const auto& s = d.sorted;
                          if (x <= s.front()) return 0.0;
                          if (s.size() == 1 || x >= s.back()) return d.cum.back() + (x - s.back());
                          const auto it = std::upper_bound(s.begin(), s.end(), x);
                          const std::size_t i = static_cast<std::size_t>(it - s.begin()) - 1;
                          const double denom = static_cast<double>(s.size() - 1);
                          const double f_lo = static_cast<double>(i) / denom;
                          const double w = s[i + 1] - s[i];
                          const double frac = w > 0.0 ? (x - s[i]) / w : 0.0;
                          const double f_x = (static_cast<double>(i) + frac) / denom;
                          return d.cum[i] + (x - s[i]) * 0.5 * (f_lo + f_x);
                        },
                    },
                    *rep_);
}

template <class G>
double AggregateDistribution::integrate_closed_form(double x, const G& g, double kink) const {
  double lo = 0.0;
  double hi = x;
  std::function<double(double)> dens;
  if (const auto* n = std::get_if<Normal>(rep_.get())) {
    if (n->sd == 0.0) return g(x - n->mean);
    lo = n->mean - 12.0 * n->sd;
    hi = std::min(x, n->mean + 12.0 * n->sd);
    const Normal d = *n;
    dens = [d](double s) { return standard_normal_pdf((s - d.mean) / d.sd) / d.sd; };
  } else {
    const auto& ih = std::get<IrwinHall>(*rep_);
    lo = ih.offset;
    hi = std::min(x, ih.offset + ih.scale * static_cast<double>(ih.n));
    dens = [ih](double s) { return irwin_hall::density(ih.n, (s - ih.offset) / ih.scale) / ih.scale; };
  }
  if (!(hi > lo)) return 0.0;
  auto integrand = [&](double s) { return g(x - s) * dens(s); };
  const double split = x - kink;
  double total = 0.0;
  if (split > lo && split < hi) {
    total += simpson(integrand, lo, split);
    total += simpson(integrand, split, hi);
  } else {
    total += simpson(integrand, lo, hi);
  }
  // Normal tails beyond 12 sd are dropped.
  return total;
}

double AggregateDistribution::expected_penalty(double x, const PenaltySpec& pen) const {
  if (pen.is_linear()) return pen.q * expected_shortfall(x);
  if (const auto* e = std::get_if<Empirical>(rep_.get())) {
    double acc = 0.0;
    for (double s : e->sorted) {
      if (s >= x) break;
      acc += pen.value(x - s);
    }
    return acc / static_cast<double>(e->sorted.size());
  }
  return integrate_closed_form(x, [&pen](double z) { return pen.value(z); }, pen.cap);
}

double AggregateDistribution::expected_penalty_slope(double x, const PenaltySpec& pen) const {
  if (pen.is_linear()) return pen.q * cdf(x);
  if (const auto* e = std::get_if<Empirical>(rep_.get())) {
    double acc = 0.0;
    for (double s : e->sorted) {
      if (s >= x) break;
      acc += pen.derivative(x - s);
    }
    return acc / static_cast<double>(e->sorted.size());
  }
  return integrate_closed_form(x, [&pen](double z) { return pen.derivative(z); }, pen.cap);
}

}  // namespace cournot
