#include "cournot/app/cli.hpp"

#include <CLI11.hpp>

#include <filesystem>
#include <fstream>
#include <optional>
#include <sstream>
#include <string>

#include "cournot/app/config.hpp"
#include "cournot/errors.hpp"
#include "cournot/record.hpp"
#include "cournot/svg_plot.hpp"

namespace cournot::app {

namespace {

namespace fs = std::filesystem;

struct Options {
  std::string config_path;
  std::optional<std::uint64_t> seed;
  std::string out_dir = ".";
  std::optional<std::string> denominator;
  std::string figure;
  std::size_t multistart = 0;
  std::size_t threads = 0;
};

RunConfig load_with_overrides(const Options& opt) {
  if (opt.config_path.empty()) raise(ErrorKind::config, "config: --config PATH is required for this command");
  RunConfig cfg = load_config(opt.config_path);
  if (opt.seed) cfg.model.solver.seed = *opt.seed;
  if (opt.denominator) cfg.output.denominator_mode = parse_denominator_mode(*opt.denominator);
  if (opt.threads) cfg.threads = opt.threads;
  return cfg;
}

void emit(std::ostream& out, const Record& rec) { out << format_record(rec) << '\n'; }

void add_market_fields(Record& rec, const MarketInstance& inst) {
  rec.emplace_back("n_firms", std::to_string(inst.n_firms()));
  rec.emplace_back("k_groups", std::to_string(inst.n_groups()));
}

int cmd_solve(const Options& opt, std::ostream& out) {
  const RunConfig cfg = load_with_overrides(opt);
  const MarketInstance inst = cfg.market_instance();
  Record rec = to_record(solve_symmetric(inst));
  add_market_fields(rec, inst);
  emit(out, rec);
  return 0;
}

int cmd_planner(const Options& opt, std::ostream& out) {
  const RunConfig cfg = load_with_overrides(opt);
  const MarketInstance inst = cfg.market_instance();
  Record rec = to_record(planner_benchmarks(inst));
  add_market_fields(rec, inst);
  emit(out, rec);
  return 0;
}

int cmd_efficiency(const Options& opt, std::ostream& out, std::ostream& err) {
  const RunConfig cfg = load_with_overrides(opt);
  const MarketInstance inst = cfg.market_instance();
  emit(out, to_record(efficiency_ratio(inst, cfg.denominator())));
  if (opt.multistart > 0) {
    const UniquenessReport u = multistart_check(inst, opt.multistart, cfg.model.solver.seed);
    emit(out, Record{{"record", "uniqueness"},
               {"starts", std::to_string(u.starts)},
               {"all_converged", u.all_converged ? "true" : "false"},
               {"spread", format_double(u.spread)},
               {"deviation_from_symmetric", format_double(u.deviation_from_symmetric)},
               {"agree", u.agree ? "true" : "false"}});
    if (!u.agree) err << format_record(Record{{"warning", "multistart"}, {"message", "best-response starts disagree"}}) << '\n';
  }
  return 0;
}

svg::LineChart ratio_chart(const std::string& title, const std::string& name, const std::vector<SweepRow>& rows) {
  svg::LineChart chart;
  chart.title = title;
  chart.x_label = "N";
  chart.y_label = "efficiency ratio";
  chart.log_x = true;
  svg::LineSeries s{name, {}};
  for (const auto& row : rows) {
    if (!row.error) s.points.emplace_back(static_cast<double>(row.n_firms), row.r);
  }
  chart.series.push_back(std::move(s));
  return chart;
}

void write_text(const fs::path& path, const std::string& text) {
  if (path.has_parent_path()) fs::create_directories(path.parent_path());
  std::ofstream os(path, std::ios::binary);
  if (!os) raise(ErrorKind::input, "cannot write " + path.string());
  os << text;
}

int cmd_sweep(const Options& opt, std::ostream& out) {
  const RunConfig cfg = load_with_overrides(opt);
  const SweepPlan plan = cfg.sweep_plan();
  const auto rows = run_sweep(plan);
  const fs::path csv = cfg.output.csv_path.value_or(fs::path(opt.out_dir) / "sweep.csv");
  const fs::path plot = cfg.output.plot_path.value_or(fs::path(opt.out_dir) / "sweep.svg");
  std::ostringstream table;
  write_csv(table, rows);
  write_text(csv, table.str());
  write_text(plot, svg::render(ratio_chart("sweep", plan.rule.name(), rows)));
  std::size_t failed = 0;
  for (const auto& row : rows) failed += row.error ? 1 : 0;
  emit(out, Record{{"record", "sweep"},
             {"rows", std::to_string(rows.size())},
             {"failed", std::to_string(failed)},
             {"k_rule", plan.rule.name()},
             {"denominator_mode", to_string(plan.denominator)},
             {"csv", csv.string()},
             {"plot", plot.string()}});
  return failed == 0 ? 0 : 1;
}

int cmd_reproduce(const Options& opt, std::ostream& out) {
  ReproduceOptions ro;
  if (!opt.config_path.empty()) {
    const RunConfig cfg = load_with_overrides(opt);
    ro.base_seed = cfg.model.solver.seed;
    ro.threads = cfg.threads;
  }
  if (opt.seed) ro.base_seed = *opt.seed;
  if (opt.threads) ro.threads = opt.threads;
  const ReproduceResult res = reproduce(parse_figure_id(opt.figure), opt.out_dir, ro);
  Record rec{{"record", "reproduce"}, {"figure", to_string(res.id)}};
  for (const auto& s : res.series) rec.emplace_back("csv_" + s.name, s.csv_path.string());
  rec.emplace_back("plot", res.plot_path.string());
  rec.emplace_back("crossover", res.crossover ? std::to_string(*res.crossover) : "none");
  emit(out, rec);
  return 0;
}

int cmd_validate(const Options& opt, std::ostream& out, std::ostream& err) {
  const RunConfig cfg = load_with_overrides(opt);
  const ValidationReport price = validate_assumptions(cfg.model.price);
  emit(out, to_record(price));

  const std::size_t n = cfg.market.n_firms.value_or(1);
  CapacityModel cap{cfg.model.base, cfg.model.shock, cfg.model.serial, n};
  cap.validate();
  Record crec{{"record", "capacity"}, {"mode", to_string(cap.mode())}, {"n_firms", std::to_string(n)}};
  bool cap_ok = true;
  if (cap.mode() == CapacityMode::serial && cfg.market.n_firms) {
    const WeakCorrelationReport w = weak_correlation_bound(cap);
    crec.emplace_back("row_sum", format_double(w.row_sum));
    crec.emplace_back("c_estimate", format_double(w.c_estimate));
    crec.emplace_back("c_limit", format_double(w.c_limit));
    crec.emplace_back("weak_correlation", w.satisfied ? "true" : "false");
    cap_ok = w.satisfied;
  }
  if (cfg.market.n_firms && (cfg.market.k_groups || cfg.market.k_rule)) {
    const std::size_t k = cfg.n_groups();
    crec.emplace_back("k_groups", std::to_string(k));
    crec.emplace_back("partition", n % k == 0 ? "ok" : "invalid");
    cap_ok = cap_ok && n % k == 0;
  }
  crec.emplace_back("ok", cap_ok ? "true" : "false");
  emit(out, crec);

  if (price.ok() && cap_ok) return 0;
  std::string failed;
  for (const auto& c : price.checks) {
    if (!c.passed) failed += (failed.empty() ? "" : ",") + c.name;
  }
  if (!cap_ok) failed += (failed.empty() ? "" : ",") + std::string("capacity");
  err << format_record(Record{{"error", "validate"}, {"kind", std::string(to_string(ErrorKind::assumption))}, {"failed", failed}})
      << '\n';
  return 1;
}

}  // namespace

int run_cli(int argc, const char* const* argv, std::ostream& out, std::ostream& err) {
  CLI::App app{"cournot: equilibria and efficiency of Cournot markets with uncertain capacity", "cournot"};
  app.require_subcommand(1);
  Options opt;

  auto add_common = [&](CLI::App* sub) {
    sub->add_option("--config,-c", opt.config_path, "Configuration file (YAML)");
    sub->add_option("--seed", opt.seed, "Override solver.seed");
    sub->add_option("--out,-o", opt.out_dir, "Output directory for CSV/SVG");
    sub->add_option("--denominator", opt.denominator, "Override output.denominator_mode")
        ->check(CLI::IsMember({"ymax", "yprime"}));
    sub->add_option("--threads", opt.threads, "Worker threads for sweeps (0: all cores)");
  };

  auto* solve = app.add_subcommand("solve", "Symmetric Nash equilibrium");
  auto* planner = app.add_subcommand("planner", "Planner benchmarks y_max and y'_max");
  auto* efficiency = app.add_subcommand("efficiency", "Efficiency report");
  auto* sweep = app.add_subcommand("sweep", "Sweep N under a K rule; write CSV and SVG");
  auto* repro = app.add_subcommand("reproduce", "Run a figure preset (ex1, ex1_log, ex2, ex2_log, corr)");
  auto* validate = app.add_subcommand("validate", "Check price-curve and capacity assumptions");
  for (auto* sub : {solve, planner, efficiency, sweep, repro, validate}) add_common(sub);
  efficiency->add_option("--multistart", opt.multistart, "Best-response starts for a uniqueness check");
  repro->add_option("figure_id", opt.figure, "Figure preset")->required();

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp&) {
    out << app.help();
    return 0;
  } catch (const CLI::CallForAllHelp&) {
    out << app.help("", CLI::AppFormatMode::All);
    return 0;
  } catch (const CLI::ParseError& e) {
    err << format_record(Record{{"error", "usage"}, {"kind", "usage"}, {"message", e.what()}}) << '\n';
    return 2;
  }

  try {
    if (*solve) return cmd_solve(opt, out);
    if (*planner) return cmd_planner(opt, out);
    if (*efficiency) return cmd_efficiency(opt, out, err);
    if (*sweep) return cmd_sweep(opt, out);
    if (*repro) return cmd_reproduce(opt, out);
    if (*validate) return cmd_validate(opt, out, err);
  } catch (const Error& e) {
    err << format_record(Record{{"error", app.get_subcommands().front()->get_name()},
                          {"kind", std::string(to_string(e.kind()))},
                          {"message", e.what()}})
        << '\n';
    return 1;
  } catch (const std::exception& e) {
    err << format_record(Record{{"error", app.get_subcommands().front()->get_name()}, {"kind", "internal"}, {"message", e.what()}})
        << '\n';
    return 1;
  }
  return 2;
}

}  // namespace cournot::app
