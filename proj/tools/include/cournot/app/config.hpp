#pragma once

#include <cstddef>
#include <cstdint>
#include <filesystem>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "cournot/equilibrium.hpp"
#include "cournot/experiments.hpp"
#include "cournot/planner.hpp"

namespace cournot::app {

struct MarketSection {
  std::optional<std::size_t> n_firms;
  std::optional<std::size_t> k_groups;
  std::optional<KRule> k_rule;
  std::vector<std::size_t> n_grid = kDefaultNGrid;
  std::size_t replicates = 1;
};

struct OutputSection {
  std::optional<std::filesystem::path> csv_path;
  std::optional<std::filesystem::path> plot_path;
  std::optional<DenominatorMode> denominator_mode;
};

/// Parsed configuration document. Sections: price, capacity (required),
/// penalty, market, solver, output (optional). Unknown keys are rejected.
struct RunConfig {
  MarketTemplate model;
  MarketSection market;
  OutputSection output;
  std::size_t threads = 0;

  /// Explicit output.denominator_mode, else yprime for common-shock models
  /// and ymax otherwise.
  DenominatorMode denominator() const;
  std::size_t n_groups() const;
  MarketInstance market_instance() const;
  SweepPlan sweep_plan() const;
};

/// Throws Error(ErrorKind::config) with the offending key path and, for
/// syntax errors, the line number.
RunConfig parse_config(std::string_view text);
RunConfig load_config(const std::filesystem::path& path);

}  // namespace cournot::app
