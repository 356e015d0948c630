#include <gtest/gtest.h>

#include <cmath>
#include <filesystem>
#include <fstream>
#include <sstream>

#include "cournot/errors.hpp"
#include "cournot/experiments.hpp"

using namespace cournot;

namespace {

MarketTemplate deterministic_model() {
  MarketTemplate m;
  m.base = BaseDistribution::normal(1e3, 0.0);
  return m;
}

SweepPlan plan_for(KRule rule, MarketTemplate model, std::vector<std::size_t> grid) {
  SweepPlan p;
  p.rule = rule;
  p.model = std::move(model);
  p.n_grid = std::move(grid);
  return p;
}

std::string slurp(const std::filesystem::path& p) {
  std::ifstream in(p, std::ios::binary);
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

}  // namespace

TEST(KRule, DivisorsAndParsing) {
  EXPECT_EQ(nearest_divisor(100, 10.0), 10u);
  EXPECT_EQ(nearest_divisor(12, 3.5), 3u);
  EXPECT_EQ(nearest_divisor(7, 2.6), 1u);
  EXPECT_EQ(KRule::parse("sqrt").groups_for(4096), 64u);
  EXPECT_EQ(KRule::parse("two_thirds").groups_for(4096), 256u);
  EXPECT_EQ(KRule::parse("two_thirds").groups_for(64), 16u);
  EXPECT_EQ(KRule::parse("grand").groups_for(64), 1u);
  EXPECT_EQ(KRule::parse("singleton").groups_for(64), 64u);
  EXPECT_EQ(KRule::parse("fixed:8").groups_for(64), 8u);
  EXPECT_THROW(KRule::parse("fixed:7").groups_for(64), Error);
  EXPECT_THROW(KRule::parse("cube"), Error);
  EXPECT_EQ(KRule::parse("fixed:8").name(), "fixed:8");
}

TEST(Sweep, SingletonAndGrandRules) {
  const std::vector<std::size_t> grid{4, 16, 64};
  for (const auto& row : run_sweep(plan_for({KRuleKind::singleton}, deterministic_model(), grid))) {
    EXPECT_NEAR(row.r, row.n_firms / (row.n_firms + 1.0), 1e-9);
  }
  for (const auto& row : run_sweep(plan_for({KRuleKind::grand}, deterministic_model(), grid))) {
    EXPECT_NEAR(row.r, 0.5, 1e-9);
    EXPECT_EQ(row.k_groups, 1u);
  }
}

TEST(Sweep, RowsOrderedAndSeedsDistinct) {
  auto plan = plan_for({KRuleKind::sqrt}, MarketTemplate{}, {64, 16, 256});
  plan.replicates = 2;
  const auto rows = run_sweep(plan);
  ASSERT_EQ(rows.size(), 6u);
  EXPECT_EQ(rows[0].n_firms, 16u);
  EXPECT_EQ(rows[1].replicate, 1u);
  EXPECT_EQ(rows[5].n_firms, 256u);
  EXPECT_NE(rows[0].seed, rows[1].seed);
  EXPECT_EQ(derive_seed(42, 16, 4, 0), rows[0].seed);
}

TEST(Sweep, SqrtRuleRatioIncreasing) {
  const auto rows = run_sweep(plan_for({KRuleKind::sqrt}, MarketTemplate{}, kDefaultNGrid));
  for (std::size_t i = 1; i < rows.size(); ++i) EXPECT_GT(rows[i].r, rows[i - 1].r);
  // 1 - r falls by at least 1.5x per 4x in N over the top two decades.
  for (std::size_t i = 1; i < rows.size(); ++i) {
    if (rows[i - 1].n_firms * 100 < rows.back().n_firms) continue;
    EXPECT_GE((1 - rows[i - 1].r) / (1 - rows[i].r), 1.5) << rows[i].n_firms;
  }
}

TEST(Sweep, FailedRowsRecorded) {
  MarketTemplate bad;
  bad.price = PriceCurve::linear(-1.0, -1.0);
  const auto rows = run_sweep(plan_for({KRuleKind::sqrt}, bad, {16}));
  ASSERT_EQ(rows.size(), 1u);
  EXPECT_TRUE(rows[0].error.has_value());
  std::ostringstream os;
  write_csv(os, rows);
  EXPECT_NE(os.str().find("nan"), std::string::npos);
}

TEST(Csv, HeaderAndDeterminism) {
  auto plan = plan_for({KRuleKind::sqrt}, MarketTemplate{}, {16, 64, 256});
  plan.threads = 3;
  std::ostringstream a, b;
  write_csv(a, run_sweep(plan));
  plan.threads = 1;
  write_csv(b, run_sweep(plan));
  EXPECT_EQ(a.str(), b.str());
  EXPECT_EQ(a.str().substr(0, a.str().find('\n')), csv_header());
  EXPECT_EQ(csv_header(),
            "n_firms,k_groups,group_size,x_group,total_output,y_star,efficiency_ratio,k_delta,delta,residual,seed");
}

TEST(ScalingFit, DeterministicFixedKIsFlat) {
  std::vector<SweepRow> rows;
  for (std::size_t n : {16u, 64u, 256u, 1024u}) {
    SweepRow r;
    r.n_firms = n;
    r.r = 0.8;
    rows.push_back(r);
  }
  const auto fit = scaling_fit(rows);
  EXPECT_NEAR(fit.slope, 0.0, 1e-12);
  EXPECT_EQ(fit.points, 4u);
}

TEST(ScalingFit, RecoversPowerLaw) {
  std::vector<SweepRow> rows;
  for (std::size_t n = 16; n <= 65536; n *= 4) {
    SweepRow r;
    r.n_firms = n;
    r.r = 1 - 3.0 * std::pow(double(n), -0.5);
    rows.push_back(r);
  }
  const auto fit = scaling_fit(rows);
  EXPECT_NEAR(fit.slope, -0.5, 1e-12);
  EXPECT_NEAR(std::exp(fit.intercept), 3.0, 1e-9);
  EXPECT_NEAR(fit.r_squared, 1.0, 1e-12);
  EXPECT_THROW(scaling_fit(std::vector<SweepRow>(rows.begin(), rows.begin() + 3)), Error);
  EXPECT_EQ(scaling_fit(rows, 1024).points, 4u);
}

TEST(ScalingFit, TwoThirdsRuleDeterministicSlope) {
  auto plan = plan_for({KRuleKind::two_thirds}, deterministic_model(), {4096, 32768, 262144, 2097152});
  EXPECT_NEAR(scaling_fit(run_sweep(plan)).slope, -2.0 / 3, 0.01);
}

TEST(ScalingFit, TwoThirdsRuleLocalSlopeSteepensThroughOneThird) {
  // N = 2^(3j), so K = N^(2/3) is exact.
  auto plan = plan_for({KRuleKind::two_thirds}, MarketTemplate{}, {4096, 32768, 262144, 2097152, 16777216, 134217728});
  const auto rows = run_sweep(plan);
  std::vector<double> local;
  for (std::size_t i = 1; i < rows.size(); ++i) {
    EXPECT_EQ(rows[i].k_groups * rows[i].k_groups * rows[i].k_groups, rows[i].n_firms * rows[i].n_firms);
    local.push_back(std::log((1 - rows[i].r) / (1 - rows[i - 1].r)) / std::log(8.0));
  }
  for (std::size_t i = 1; i < local.size(); ++i) EXPECT_LT(local[i], local[i - 1]);
  EXPECT_GT(local.front(), -1.0 / 3);
  EXPECT_LT(local.back(), -1.0 / 3);
  EXPECT_GT(local.back(), -2.0 / 3);
}

TEST(Crossover, Detection) {
  auto mk = [](std::vector<double> rs) {
    std::vector<SweepRow> rows;
    for (std::size_t i = 0; i < rs.size(); ++i) {
      SweepRow r;
      r.n_firms = 16u << (2 * i);
      r.r = rs[i];
      rows.push_back(r);
    }
    return rows;
  };
  EXPECT_EQ(crossover_detect(mk({0.5, 0.6, 0.8}), mk({0.6, 0.7, 0.7})), std::optional<std::size_t>(256));
  EXPECT_FALSE(crossover_detect(mk({0.7, 0.8}), mk({0.6, 0.7})).has_value());
  EXPECT_FALSE(crossover_detect(mk({0.5, 0.6, 0.8}), mk({0.5, 0.6, 0.8})).has_value());
  EXPECT_THROW(crossover_detect(mk({0.5, 0.6}), mk({0.5})), Error);
}

TEST(Reproduce, PresetsAndFiles) {
  EXPECT_EQ(figure_preset(FigureId::ex1).series.size(), 2u);
  EXPECT_EQ(figure_preset(FigureId::ex2).series[0].plan.model.base.kind(), DistKind::uniform);
  EXPECT_TRUE(figure_preset(FigureId::ex1_log).log_x);
  const auto corr = figure_preset(FigureId::corr);
  EXPECT_TRUE(corr.series[0].plan.model.shock.has_value());
  EXPECT_EQ(corr.series[0].plan.denominator, DenominatorMode::y_prime);
  EXPECT_EQ(parse_figure_id("ex2_log"), FigureId::ex2_log);
  EXPECT_THROW(parse_figure_id("fig9"), Error);

  const auto dir = std::filesystem::temp_directory_path() / "cournot_reproduce_test";
  std::filesystem::remove_all(dir);
  ReproduceOptions opt;
  opt.n_grid = std::vector<std::size_t>{16, 64, 256};
  const auto res = reproduce(FigureId::ex1, dir, opt);
  ASSERT_EQ(res.series.size(), 2u);
  for (const auto& s : res.series) {
    EXPECT_TRUE(std::filesystem::exists(s.csv_path));
    EXPECT_EQ(s.rows.size(), 3u);
  }
  const std::string svg = slurp(res.plot_path);
  EXPECT_EQ(svg.rfind("<svg", 0), 0u);
  EXPECT_NE(svg.find("two_thirds"), std::string::npos);
}
