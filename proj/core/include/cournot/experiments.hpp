#pragma once

#include <cstddef>
#include <cstdint>
#include <filesystem>
#include <optional>
#include <ostream>
#include <string>
#include <vector>

#include "cournot/capacity_model.hpp"
#include "cournot/equilibrium.hpp"
#include "cournot/penalty.hpp"
#include "cournot/planner.hpp"
#include "cournot/price_curve.hpp"

namespace cournot {

enum class KRuleKind { sqrt, two_thirds, fixed, grand, singleton };

/// How the number of groups K is chosen for each N. sqrt and two_thirds
/// target K = N^(1/2) and K = N^(2/3), rounded to the nearest divisor of N
/// (ties go to the smaller divisor); fixed uses a constant K (which must
/// divide every N); grand is K = 1 and singleton K = N.
struct KRule {
  KRuleKind kind = KRuleKind::sqrt;
  std::size_t fixed_k = 1;

  static KRule parse(const std::string& text);
  std::string name() const;
  std::size_t groups_for(std::size_t n_firms) const;
};

std::size_t nearest_divisor(std::size_t n, double target);

/// Everything about a market except N and K.
struct MarketTemplate {
  PriceCurve price = PriceCurve::linear(1.0, -1.0);
  BaseDistribution base = BaseDistribution::normal(1.1, 1.0);
  std::optional<BaseDistribution> shock;
  std::optional<SerialCorrelation> serial;
  PenaltySpec penalty = PenaltySpec::linear();
  SolverSettings solver;

  MarketInstance instantiate(std::size_t n_firms, std::size_t k_groups, std::uint64_t seed) const;
};

inline const std::vector<std::size_t> kDefaultNGrid{16, 64, 256, 1024, 4096, 16384, 65536};

struct SweepPlan {
  std::vector<std::size_t> n_grid = kDefaultNGrid;
  KRule rule;
  MarketTemplate model;
  DenominatorMode denominator = DenominatorMode::y_max;
  std::size_t replicates = 1;
  std::uint64_t base_seed = 42;
  std::size_t threads = 0;  // 0: hardware concurrency

  void validate() const;
};

struct SweepRow {
  std::size_t n_firms = 0;
  std::size_t k_groups = 0;
  std::size_t group_size = 0;
  std::size_t replicate = 0;
  double x_group = 0.0;
  double total = 0.0;
  double y_star = 0.0;
  double r = 0.0;
  double k_delta = 0.0;
  double delta = 0.0;
  double residual = 0.0;
  std::uint64_t seed = 0;
  double wall_time = 0.0;  // seconds; not part of the CSV
  std::optional<std::string> error;
};

/// Seed for one grid task, mixed from (base, N, K, replicate) with splitmix64.
std::uint64_t derive_seed(std::uint64_t base, std::size_t n_firms, std::size_t k_groups, std::size_t replicate);

/// One row per (N, replicate), ordered by N then replicate. Tasks run
/// concurrently; failures are recorded in SweepRow::error.
std::vector<SweepRow> run_sweep(const SweepPlan& plan);

std::string csv_header();
void write_csv(std::ostream& os, const std::vector<SweepRow>& rows);

struct ScalingFit {
  double slope = 0.0;
  double intercept = 0.0;
  double r_squared = 0.0;
  std::size_t points = 0;
};

/// Least squares of log(1 - r) on log N over rows with r < 1 and N >= min_n.
/// Needs at least four distinct N; throws fit error otherwise.
ScalingFit scaling_fit(const std::vector<SweepRow>& rows, std::size_t min_n = 0);

/// Smallest grid N from which sign(r_a - r_b) equals its final sign through
/// the end of the grid, provided the opposite sign occurs before it. Ratios
/// are averaged over replicates. Throws input error when the N grids differ.
std::optional<std::size_t> crossover_detect(const std::vector<SweepRow>& rows_a, const std::vector<SweepRow>& rows_b);

enum class FigureId { ex1, ex1_log, ex2, ex2_log, corr };

std::string to_string(FigureId id);
FigureId parse_figure_id(const std::string& text);

struct Series {
  std::string name;
  SweepPlan plan;
};

struct FigurePreset {
  FigureId id;
  std::string title;
  bool log_x = false;
  std::vector<Series> series;  // exactly two; crossover is series[0] vs series[1]
};

FigurePreset figure_preset(FigureId id, std::uint64_t base_seed = 42);

struct SeriesTable {
  std::string name;
  std::vector<SweepRow> rows;
  std::filesystem::path csv_path;
};

struct ReproduceResult {
  FigureId id;
  std::vector<SeriesTable> series;
  std::filesystem::path plot_path;
  std::optional<std::size_t> crossover;
};

struct ReproduceOptions {
  std::uint64_t base_seed = 42;
  std::optional<std::vector<std::size_t>> n_grid;
  std::size_t threads = 0;
};

/// Runs a preset and writes <out>/<figure>_<series>.csv per series and
/// <out>/<figure>.svg.
ReproduceResult reproduce(FigureId id, const std::filesystem::path& out_dir, const ReproduceOptions& options = {});

}  // namespace cournot
