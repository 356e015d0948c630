#include "cournot/experiments.hpp"

#include <algorithm>
#include <atomic>
#include <chrono>
#include <cmath>
#include <fstream>
#include <map>
#include <thread>

#include "cournot/errors.hpp"
#include "cournot/record.hpp"
#include "cournot/svg_plot.hpp"

namespace cournot {

namespace {

std::uint64_t splitmix64(std::uint64_t x) {
  x += 0x9e3779b97f4a7c15ULL;
  x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ULL;
  x = (x ^ (x >> 27)) * 0x94d049bb133111ebULL;
  return x ^ (x >> 31);
}

std::map<std::size_t, double> mean_ratio_by_n(const std::vector<SweepRow>& rows) {
  std::map<std::size_t, std::pair<double, std::size_t>> acc;
  for (const auto& r : rows) {
    auto& [sum, count] = acc[r.n_firms];
    if (!r.error) {
      sum += r.r;
      ++count;
    }
  }
  std::map<std::size_t, double> out;
  for (const auto& [n, sc] : acc) out[n] = sc.second ? sc.first / static_cast<double>(sc.second) : std::nan("");
  return out;
}

}  // namespace

std::size_t nearest_divisor(std::size_t n, double target) {
  std::size_t best = 1;
  double best_gap = std::abs(1.0 - target);
  for (std::size_t d = 1; d * d <= n; ++d) {
    if (n % d != 0) continue;
    for (std::size_t c : {d, n / d}) {
      const double gap = std::abs(static_cast<double>(c) - target);
      if (gap < best_gap || (gap == best_gap && c < best)) {
        best = c;
        best_gap = gap;
      }
    }
  }
  return best;
}

KRule KRule::parse(const std::string& text) {
  if (text == "sqrt") return {KRuleKind::sqrt, 1};
  if (text == "two_thirds") return {KRuleKind::two_thirds, 1};
  if (text == "grand") return {KRuleKind::grand, 1};
  if (text == "singleton") return {KRuleKind::singleton, 1};
  constexpr std::string_view prefix = "fixed:";
  if (text.rfind(prefix, 0) == 0) {
    try {
      const auto k = std::stoull(text.substr(prefix.size()));
      if (k == 0) throw std::invalid_argument("zero");
      return {KRuleKind::fixed, static_cast<std::size_t>(k)};
    } catch (const std::exception&) {
      raise(ErrorKind::input, "k_rule: bad fixed group count in '" + text + "'");
    }
  }
  raise(ErrorKind::input, "k_rule must be sqrt, two_thirds, grand, singleton or fixed:<K>, got '" + text + "'");
}

std::string KRule::name() const {
  switch (kind) {
    case KRuleKind::sqrt: return "sqrt";
    case KRuleKind::two_thirds: return "two_thirds";
    case KRuleKind::fixed: return "fixed:" + std::to_string(fixed_k);
    case KRuleKind::grand: return "grand";
    case KRuleKind::singleton: return "singleton";
  }
  return "unknown";
}

std::size_t KRule::groups_for(std::size_t n_firms) const {
  const double n = static_cast<double>(n_firms);
  switch (kind) {
    case KRuleKind::sqrt: return nearest_divisor(n_firms, std::sqrt(n));
    case KRuleKind::two_thirds: return nearest_divisor(n_firms, std::pow(n, 2.0 / 3.0));
    case KRuleKind::fixed:
      if (n_firms % fixed_k != 0) {
        raise(ErrorKind::partition, "fixed K = " + std::to_string(fixed_k) + " does not divide N = " + std::to_string(n_firms));
      }
      return fixed_k;
    case KRuleKind::grand: return 1;
    case KRuleKind::singleton: return n_firms;
  }
  return 1;
}

MarketInstance MarketTemplate::instantiate(std::size_t n_firms, std::size_t k_groups, std::uint64_t seed) const {
  CapacityModel cap;
  cap.base = base;
  cap.shock = shock;
  cap.serial = serial;
  cap.n_firms = n_firms;
  SolverSettings s = solver;
  s.seed = seed;
  return MarketInstance(price, std::move(cap), k_groups, penalty, s);
}

void SweepPlan::validate() const {
  if (n_grid.empty()) raise(ErrorKind::input, "sweep: n_grid is empty");
  if (replicates == 0) raise(ErrorKind::input, "sweep: replicates must be at least 1");
  for (std::size_t n : n_grid) {
    if (n == 0) raise(ErrorKind::input, "sweep: n_grid entries must be positive");
  }
}

std::uint64_t derive_seed(std::uint64_t base, std::size_t n_firms, std::size_t k_groups, std::size_t replicate) {
  std::uint64_t h = splitmix64(base);
  h = splitmix64(h ^ static_cast<std::uint64_t>(n_firms));
  h = splitmix64(h ^ static_cast<std::uint64_t>(k_groups));
  return splitmix64(h ^ static_cast<std::uint64_t>(replicate));
}

std::vector<SweepRow> run_sweep(const SweepPlan& plan) {
  plan.validate();
  std::vector<std::size_t> grid = plan.n_grid;
  std::sort(grid.begin(), grid.end());
  grid.erase(std::unique(grid.begin(), grid.end()), grid.end());

  std::vector<SweepRow> rows(grid.size() * plan.replicates);
  for (std::size_t gi = 0; gi < grid.size(); ++gi) {
    for (std::size_t rep = 0; rep < plan.replicates; ++rep) {
      SweepRow& row = rows[gi * plan.replicates + rep];
      row.n_firms = grid[gi];
      row.replicate = rep;
    }
  }

  auto run_one = [&plan](SweepRow& row) {
    const auto start = std::chrono::steady_clock::now();
    try {
      row.k_groups = plan.rule.groups_for(row.n_firms);
      row.group_size = row.k_groups ? row.n_firms / row.k_groups : 0;
      row.seed = derive_seed(plan.base_seed, row.n_firms, row.k_groups, row.replicate);
      const MarketInstance inst = plan.model.instantiate(row.n_firms, row.k_groups, row.seed);
      const EfficiencyReport rep = efficiency_ratio(inst, plan.denominator);
      row.x_group = rep.x_group;
      row.total = rep.total_nash;
      row.y_star = rep.y_star;
      row.r = rep.r;
      row.k_delta = rep.k_delta;
      row.delta = rep.delta;
      row.residual = rep.residual;
    } catch (const std::exception& e) {
      row.error = e.what();
    }
    row.wall_time = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
  };

  std::size_t threads = plan.threads ? plan.threads : std::max(1u, std::thread::hardware_concurrency());
  threads = std::min(threads, rows.size());
  std::atomic<std::size_t> next{0};
  auto worker = [&] {
    for (std::size_t i = next++; i < rows.size(); i = next++) run_one(rows[i]);
  };
  if (threads <= 1) {
    worker();
  } else {
    std::vector<std::jthread> pool;
    pool.reserve(threads);
    for (std::size_t t = 0; t < threads; ++t) pool.emplace_back(worker);
  }
  return rows;
}

std::string csv_header() {
  return "n_firms,k_groups,group_size,x_group,total_output,y_star,efficiency_ratio,k_delta,delta,residual,seed";
}

void write_csv(std::ostream& os, const std::vector<SweepRow>& rows) {
  os << csv_header() << '\n';
  for (const auto& r : rows) {
    auto f = [&r](double v) { return r.error ? std::string("nan") : format_double(v); };
    os << r.n_firms << ',' << r.k_groups << ',' << r.group_size << ',' << f(r.x_group) << ',' << f(r.total) << ','
       << f(r.y_star) << ',' << f(r.r) << ',' << f(r.k_delta) << ',' << f(r.delta) << ',' << f(r.residual) << ','
       << r.seed << '\n';
  }
}

ScalingFit scaling_fit(const std::vector<SweepRow>& rows, std::size_t min_n) {
  std::vector<std::pair<double, double>> pts;
  std::vector<std::size_t> distinct;
  for (const auto& r : rows) {
    if (r.error || !(r.r < 1.0) || r.n_firms < min_n || !std::isfinite(r.r)) continue;
    pts.emplace_back(std::log(static_cast<double>(r.n_firms)), std::log(1.0 - r.r));
    distinct.push_back(r.n_firms);
  }
  std::sort(distinct.begin(), distinct.end());
  distinct.erase(std::unique(distinct.begin(), distinct.end()), distinct.end());
  if (distinct.size() < 4) {
    raise(ErrorKind::fit, "scaling_fit: need at least 4 distinct N with r < 1, have " +
                              std::to_string(distinct.size()));
  }
  const double m = static_cast<double>(pts.size());
  double sx = 0, sy = 0;
  for (auto [x, y] : pts) {
    sx += x;
    sy += y;
  }
  const double mx = sx / m, my = sy / m;
  double sxx = 0, sxy = 0, syy = 0;
  for (auto [x, y] : pts) {
    sxx += (x - mx) * (x - mx);
    sxy += (x - mx) * (y - my);
    syy += (y - my) * (y - my);
  }
  ScalingFit fit;
  fit.points = pts.size();
  fit.slope = sxy / sxx;
  fit.intercept = my - fit.slope * mx;
  double ss_res = 0;
  for (auto [x, y] : pts) {
    const double e = y - (fit.intercept + fit.slope * x);
    ss_res += e * e;
  }
  constexpr double kFlat = 1e-24;
  fit.r_squared = syy > kFlat ? 1.0 - ss_res / syy : (ss_res <= kFlat ? 1.0 : 0.0);
  return fit;
}

std::optional<std::size_t> crossover_detect(const std::vector<SweepRow>& rows_a, const std::vector<SweepRow>& rows_b) {
  const auto a = mean_ratio_by_n(rows_a);
  const auto b = mean_ratio_by_n(rows_b);
  if (a.size() != b.size() || !std::equal(a.begin(), a.end(), b.begin(),
                                          [](const auto& x, const auto& y) { return x.first == y.first; })) {
    raise(ErrorKind::input, "crossover_detect: the two tables use different N grids");
  }
  std::vector<std::pair<std::size_t, int>> signs;
  for (auto ia = a.begin(), ib = b.begin(); ia != a.end(); ++ia, ++ib) {
    const double d = ia->second - ib->second;
    signs.emplace_back(ia->first, d > 0.0 ? 1 : (d < 0.0 ? -1 : 0));
  }
  if (signs.empty() || signs.back().second == 0) return std::nullopt;
  const int final_sign = signs.back().second;
  std::size_t j = signs.size() - 1;
  while (j > 0 && signs[j - 1].second == final_sign) --j;
  for (std::size_t i = 0; i < j; ++i) {
    if (signs[i].second == -final_sign) return signs[j].first;
  }
  return std::nullopt;
}

std::string to_string(FigureId id) {
  switch (id) {
    case FigureId::ex1: return "ex1";
    case FigureId::ex1_log: return "ex1_log";
    case FigureId::ex2: return "ex2";
    case FigureId::ex2_log: return "ex2_log";
    case FigureId::corr: return "corr";
  }
  return "unknown";
}

FigureId parse_figure_id(const std::string& text) {
  for (FigureId id : {FigureId::ex1, FigureId::ex1_log, FigureId::ex2, FigureId::ex2_log, FigureId::corr}) {
    if (to_string(id) == text) return id;
  }
  raise(ErrorKind::input, "figure id must be ex1, ex1_log, ex2, ex2_log or corr, got '" + text + "'");
}

FigurePreset figure_preset(FigureId id, std::uint64_t base_seed) {
  FigurePreset fig{id, "", false, {}};
  SweepPlan plan;
  plan.base_seed = base_seed;
  plan.model.price = PriceCurve::linear(1.0, -1.0);

  switch (id) {
    case FigureId::ex1:
    case FigureId::ex1_log:
    case FigureId::ex2:
    case FigureId::ex2_log: {
      const bool uniform = id == FigureId::ex2 || id == FigureId::ex2_log;
      plan.model.base = uniform ? BaseDistribution::uniform(0.0, 2.2) : BaseDistribution::normal(1.1, 1.0);
      fig.log_x = id == FigureId::ex1_log || id == FigureId::ex2_log;
      fig.title = uniform ? "Efficiency ratio, X ~ Unif[0, 2.2]" : "Efficiency ratio, X ~ N(1.1, 1)";
      plan.rule = {KRuleKind::sqrt, 1};
      fig.series.push_back({"sqrt", plan});
      plan.rule = {KRuleKind::two_thirds, 1};
      fig.series.push_back({"two_thirds", plan});
      break;
    }
    case FigureId::corr: {
      fig.log_x = true;
      fig.title = "Efficiency ratio, correlated vs i.i.d. firms (K = sqrt N)";
      SweepPlan corr = plan;
      corr.rule = {KRuleKind::sqrt, 1};
      corr.model.base = BaseDistribution::normal(1.1, 0.7);
      corr.model.shock = BaseDistribution::normal(0.0, 0.71);
      corr.denominator = DenominatorMode::y_prime;
      fig.series.push_back({"correlated", corr});
      SweepPlan iid = plan;
      iid.rule = {KRuleKind::sqrt, 1};
      iid.model.base = BaseDistribution::normal(1.1, 1.0);
      iid.denominator = DenominatorMode::y_max;
      fig.series.push_back({"iid", iid});
      break;
    }
  }
  return fig;
}

ReproduceResult reproduce(FigureId id, const std::filesystem::path& out_dir, const ReproduceOptions& options) {
  FigurePreset fig = figure_preset(id, options.base_seed);
  std::filesystem::create_directories(out_dir);

  ReproduceResult result{id, {}, out_dir / (to_string(id) + ".svg"), std::nullopt};
  svg::LineChart chart;
  chart.title = fig.title;
  chart.x_label = fig.log_x ? "number of firms N (log scale)" : "number of firms N";
  chart.y_label = "efficiency ratio r";
  chart.log_x = fig.log_x;

  for (auto& s : fig.series) {
    if (options.n_grid) s.plan.n_grid = *options.n_grid;
    s.plan.threads = options.threads;
    SeriesTable table{s.name, run_sweep(s.plan), out_dir / (to_string(id) + "_" + s.name + ".csv")};
    std::ofstream csv(table.csv_path);
    if (!csv) raise(ErrorKind::input, "reproduce: cannot write " + table.csv_path.string());
    write_csv(csv, table.rows);

    svg::LineSeries line{s.name, {}};
    for (const auto& [n, r] : mean_ratio_by_n(table.rows)) line.points.emplace_back(static_cast<double>(n), r);
    chart.series.push_back(std::move(line));
    result.series.push_back(std::move(table));
  }
  result.crossover = crossover_detect(result.series[0].rows, result.series[1].rows);

  std::ofstream plot(result.plot_path);
  if (!plot) raise(ErrorKind::input, "reproduce: cannot write " + result.plot_path.string());
  plot << svg::render(chart);
  return result;
}

}  // namespace cournot
