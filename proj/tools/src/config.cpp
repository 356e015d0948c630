#include "cournot/app/config.hpp"

#include <yaml-cpp/yaml.h>

#include <fstream>
#include <set>
#include <sstream>

#include "cournot/errors.hpp"

namespace cournot::app {

namespace {

[[noreturn]] void config_error(const std::string& where, const std::string& what, const YAML::Node* node = nullptr) {
  std::ostringstream os;
  os << "config: " << where << ": " << what;
  if (node && node->Mark().line >= 0) os << " (line " << node->Mark().line + 1 << ")";
  raise(ErrorKind::config, os.str());
}

void reject_unknown(const YAML::Node& node, const std::string& where, const std::set<std::string>& allowed) {
  if (!node.IsMap()) config_error(where, "expected a mapping", &node);
  for (const auto& kv : node) {
    const auto key = kv.first.as<std::string>();
    if (!allowed.count(key)) config_error(where + "." + key, "unknown key", &kv.first);
  }
}

template <class T>
T get(const YAML::Node& parent, const std::string& where, const std::string& key) {
  const YAML::Node n = parent[key];
  if (!n) config_error(where + "." + key, "missing required key", &parent);
  try {
    return n.as<T>();
  } catch (const YAML::Exception&) {
    config_error(where + "." + key, "wrong value type", &n);
  }
}

template <class T>
std::optional<T> get_opt(const YAML::Node& parent, const std::string& where, const std::string& key) {
  const YAML::Node n = parent[key];
  if (!n) return std::nullopt;
  try {
    return n.as<T>();
  } catch (const YAML::Exception&) {
    config_error(where + "." + key, "wrong value type", &n);
  }
}

std::size_t get_count(const YAML::Node& parent, const std::string& where, const std::string& key) {
  const auto v = get<long long>(parent, where, key);
  if (v <= 0) config_error(where + "." + key, "must be a positive integer", &parent);
  return static_cast<std::size_t>(v);
}

std::optional<std::size_t> get_count_opt(const YAML::Node& parent, const std::string& where, const std::string& key) {
  if (!parent[key]) return std::nullopt;
  return get_count(parent, where, key);
}

// Library errors raised while building a section are re-labelled with the
// section they came from.
template <class F>
auto in_section(const std::string& where, const YAML::Node& node, F&& f) {
  try {
    return f();
  } catch (const Error& e) {
    if (e.kind() == ErrorKind::config) throw;
    config_error(where, e.what(), &node);
  }
}

PriceCurve parse_price(const YAML::Node& n) {
  const std::string where = "price";
  const auto type = get<std::string>(n, where, "type");
  PriceCurve curve = PriceCurve::linear(1.0, -1.0);
  if (type == "linear") {
    reject_unknown(n, where, {"type", "intercept", "slope", "domain_hint"});
    curve = in_section(where, n, [&] {
      return PriceCurve::linear(get<double>(n, where, "intercept"), get<double>(n, where, "slope"));
    });
  } else if (type == "quadratic") {
    reject_unknown(n, where, {"type", "c0", "c1", "c2", "domain_hint"});
    curve = in_section(where, n, [&] {
      return PriceCurve::quadratic(get<double>(n, where, "c0"), get<double>(n, where, "c1"),
                                   get<double>(n, where, "c2"));
    });
  } else if (type == "tabulated") {
    reject_unknown(n, where, {"type", "y", "p", "domain_hint"});
    curve = in_section(where, n, [&] {
      return PriceCurve::tabulated(get<std::vector<double>>(n, where, "y"), get<std::vector<double>>(n, where, "p"));
    });
  } else {
    config_error(where + ".type", "must be linear, quadratic or tabulated, got '" + type + "'", &n);
  }
  if (const auto hint = get_opt<double>(n, where, "domain_hint")) {
    curve = in_section(where, n, [&] { return curve.with_domain_hint(*hint); });
  }
  return curve;
}

void parse_capacity(const YAML::Node& n, MarketTemplate& model) {
  const std::string where = "capacity";
  reject_unknown(n, where, {"dist", "mean", "sd", "lo", "hi", "shock_sd", "rho", "amplitude"});
  const auto dist = get<std::string>(n, where, "dist");
  in_section(where, n, [&] {
    if (dist == "normal") {
      if (n["lo"] || n["hi"]) config_error(where, "lo/hi apply to uniform capacity only", &n);
      model.base = BaseDistribution::normal(get<double>(n, where, "mean"), get<double>(n, where, "sd"));
    } else if (dist == "uniform") {
      if (n["sd"] || n["mean"]) config_error(where, "mean/sd apply to normal capacity only", &n);
      model.base = BaseDistribution::uniform(get<double>(n, where, "lo"), get<double>(n, where, "hi"));
    } else {
      config_error(where + ".dist", "must be normal or uniform, got '" + dist + "'", &n);
    }
    if (const auto sd = get_opt<double>(n, where, "shock_sd")) model.shock = BaseDistribution::normal(0.0, *sd);
    const auto rho = get_opt<double>(n, where, "rho");
    const auto amp = get_opt<double>(n, where, "amplitude");
    if (amp && !rho) config_error(where + ".amplitude", "requires rho", &n);
    if (rho) model.serial = SerialCorrelation{*rho, amp};
    CapacityModel probe{model.base, model.shock, model.serial, 1};
    probe.validate();
    return 0;
  });
}

PenaltySpec parse_penalty(const YAML::Node& n) {
  const std::string where = "penalty";
  const auto type = get<std::string>(n, where, "type");
  if (type == "linear") {
    reject_unknown(n, where, {"type", "q"});
    return in_section(where, n, [&] { return PenaltySpec::linear(get_opt<double>(n, where, "q").value_or(1.0)); });
  }
  if (type == "convex_power") {
    reject_unknown(n, where, {"type", "q", "exponent", "cap"});
    return in_section(where, n, [&] {
      return PenaltySpec::convex_power(get_opt<double>(n, where, "q").value_or(1.0), get<double>(n, where, "exponent"),
                                       get_opt<double>(n, where, "cap").value_or(1e6));
    });
  }
  config_error(where + ".type", "must be linear or convex_power, got '" + type + "'", &n);
}

void parse_solver(const YAML::Node& n, RunConfig& cfg) {
  const std::string where = "solver";
  reject_unknown(n, where,
                 {"tol_root", "max_iter", "mc_samples", "seed", "br_tol", "br_max_rounds", "irwin_hall_max", "threads"});
  SolverSettings& s = cfg.model.solver;
  if (auto v = get_opt<double>(n, where, "tol_root")) s.tol_root = *v;
  if (auto v = get_count_opt(n, where, "max_iter")) s.max_iter = *v;
  if (auto v = get_count_opt(n, where, "mc_samples")) s.mc_samples = *v;
  if (auto v = get_opt<std::uint64_t>(n, where, "seed")) s.seed = *v;
  if (auto v = get_opt<double>(n, where, "br_tol")) s.br_tol = *v;
  if (auto v = get_count_opt(n, where, "br_max_rounds")) s.br_max_rounds = *v;
  if (auto v = get_count_opt(n, where, "irwin_hall_max")) s.irwin_hall_max = *v;
  if (auto v = get_opt<long long>(n, where, "threads")) {
    if (*v < 0) config_error(where + ".threads", "must be nonnegative", &n);
    cfg.threads = static_cast<std::size_t>(*v);
  }
  in_section(where, n, [&] {
    s.validate();
    return 0;
  });
}

void parse_market(const YAML::Node& n, MarketSection& m) {
  const std::string where = "market";
  reject_unknown(n, where, {"n_firms", "k_groups", "k_rule", "n_grid", "replicates"});
  m.n_firms = get_count_opt(n, where, "n_firms");
  m.k_groups = get_count_opt(n, where, "k_groups");
  if (const auto rule = get_opt<std::string>(n, where, "k_rule")) {
    m.k_rule = in_section(where + ".k_rule", n, [&] { return KRule::parse(*rule); });
  }
  if (m.k_groups && m.k_rule) config_error(where, "give k_groups or k_rule, not both", &n);
  if (n["n_grid"]) {
    const auto grid = get<std::vector<long long>>(n, where, "n_grid");
    if (grid.empty()) config_error(where + ".n_grid", "must not be empty", &n);
    m.n_grid.clear();
    for (long long v : grid) {
      if (v <= 0) config_error(where + ".n_grid", "entries must be positive", &n);
      m.n_grid.push_back(static_cast<std::size_t>(v));
    }
  }
  if (auto v = get_count_opt(n, where, "replicates")) m.replicates = *v;
  if (m.n_firms && m.k_groups && *m.n_firms % *m.k_groups != 0) {
    std::ostringstream os;
    os << "k_groups (" << *m.k_groups << ") must divide n_firms (" << *m.n_firms << ")";
    config_error(where, os.str(), &n);
  }
  if (m.n_firms && m.k_groups && *m.k_groups > *m.n_firms) config_error(where, "k_groups exceeds n_firms", &n);
}

void parse_output(const YAML::Node& n, OutputSection& o) {
  const std::string where = "output";
  reject_unknown(n, where, {"csv_path", "plot_path", "denominator_mode"});
  if (auto v = get_opt<std::string>(n, where, "csv_path")) o.csv_path = *v;
  if (auto v = get_opt<std::string>(n, where, "plot_path")) o.plot_path = *v;
  if (auto v = get_opt<std::string>(n, where, "denominator_mode")) {
    o.denominator_mode = in_section(where + ".denominator_mode", n, [&] { return parse_denominator_mode(*v); });
  }
}

}  // namespace

DenominatorMode RunConfig::denominator() const {
  if (output.denominator_mode) return *output.denominator_mode;
  return model.shock ? DenominatorMode::y_prime : DenominatorMode::y_max;
}

std::size_t RunConfig::n_groups() const {
  if (!market.n_firms) raise(ErrorKind::config, "config: market.n_firms is required for this command");
  if (market.k_groups) return *market.k_groups;
  if (market.k_rule) return market.k_rule->groups_for(*market.n_firms);
  raise(ErrorKind::config, "config: market.k_groups or market.k_rule is required for this command");
}

MarketInstance RunConfig::market_instance() const {
  return model.instantiate(*market.n_firms, n_groups(), model.solver.seed);
}

SweepPlan RunConfig::sweep_plan() const {
  SweepPlan plan;
  plan.n_grid = market.n_grid;
  if (market.k_rule) {
    plan.rule = *market.k_rule;
  } else if (market.k_groups) {
    plan.rule = {KRuleKind::fixed, *market.k_groups};
  } else {
    raise(ErrorKind::config, "config: market.k_rule (or k_groups) is required for sweep");
  }
  plan.model = model;
  plan.denominator = denominator();
  plan.replicates = market.replicates;
  plan.base_seed = model.solver.seed;
  plan.threads = threads;
  return plan;
}

RunConfig parse_config(std::string_view text) {
  YAML::Node root;
  try {
    root = YAML::Load(std::string(text));
  } catch (const YAML::ParserException& e) {
    std::ostringstream os;
    os << "config: parse error at line " << e.mark.line + 1 << ", column " << e.mark.column + 1 << ": " << e.msg;
    raise(ErrorKind::config, os.str());
  }
  if (!root.IsMap()) raise(ErrorKind::config, "config: document must be a mapping of sections");
  reject_unknown(root, "document", {"price", "capacity", "penalty", "market", "solver", "output"});

  RunConfig cfg;
  if (!root["price"]) raise(ErrorKind::config, "config: missing required section 'price'");
  if (!root["capacity"]) raise(ErrorKind::config, "config: missing required section 'capacity'");
  cfg.model.price = parse_price(root["price"]);
  parse_capacity(root["capacity"], cfg.model);
  if (root["penalty"]) cfg.model.penalty = parse_penalty(root["penalty"]);
  if (root["solver"]) parse_solver(root["solver"], cfg);
  if (root["market"]) parse_market(root["market"], cfg.market);
  if (root["output"]) parse_output(root["output"], cfg.output);
  return cfg;
}

RunConfig load_config(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) raise(ErrorKind::config, "config: cannot open " + path.string());
  std::ostringstream ss;
  ss << in.rdbuf();
  return parse_config(ss.str());
}

}  // namespace cournot::app
