#include <gtest/gtest.h>

#include <algorithm>
#include <cmath>
#include <random>

#include "cournot/aggregate.hpp"
#include "cournot/capacity_model.hpp"
#include "cournot/errors.hpp"
#include "support/oracles.hpp"

using namespace cournot;

namespace {

AggregateDistribution ex1_group() {
  CapacityModel m{BaseDistribution::normal(1.1, 1.0), std::nullopt, std::nullopt, 100};
  return group_aggregate(m, 10, 1);
}

}  // namespace

TEST(Aggregate, NormalGroupMoments) {
  const auto a = ex1_group();
  EXPECT_EQ(a.representation(), Representation::closed_form_normal);
  EXPECT_NEAR(a.mean(), 0.11, 1e-15);
  EXPECT_NEAR(a.variance(), 0.001, 1e-15);
  EXPECT_NEAR(a.cdf(0.11), 0.5, 1e-15);
}

TEST(Aggregate, SingleUniformFirmIsBase) {
  CapacityModel m{BaseDistribution::uniform(0.0, 2.2), std::nullopt, std::nullopt, 1};
  const auto a = group_aggregate(m, 1, 1);
  EXPECT_EQ(a.representation(), Representation::irwin_hall_uniform);
  for (double x : {-0.5, 0.0, 0.3, 1.1, 2.0, 2.2, 3.0}) EXPECT_NEAR(a.cdf(x), oracle::uniform_cdf(x, 0.0, 2.2), 1e-14);
  EXPECT_NEAR(a.mean(), 1.1, 1e-15);
  EXPECT_NEAR(a.expected_shortfall(0.0), 0.0, 1e-15);
  EXPECT_NEAR(a.expected_shortfall(2.2), 1.1, 1e-14);
}

TEST(Aggregate, TwoUniformsTriangularSymmetry) {
  const auto a = AggregateDistribution::irwin_hall(2, 0.0, 1.0);
  EXPECT_NEAR(a.cdf(1.0), 0.5, 1e-15);
  EXPECT_NEAR(a.cdf(0.5), 0.125, 1e-15);
  EXPECT_NEAR(a.cdf(1.5), 0.875, 1e-15);
}

TEST(Aggregate, NormalShortfallAtMean) {
  const double s = 0.37;
  const auto a = AggregateDistribution::normal(2.0, s);
  EXPECT_NEAR(a.expected_shortfall(2.0), s / std::sqrt(2.0 * M_PI), 1e-14);
  EXPECT_NEAR(a.expected_shortfall(2.0), s * 0.39894, 1e-5 * s);
}

TEST(Aggregate, ShockVarianceAlgebra) {
  CapacityModel m{BaseDistribution::normal(1.1, 0.7), BaseDistribution::normal(0.0, 0.71), std::nullopt, 100};
  const auto a = group_aggregate(m, 10, 1);
  const double want = 10.0 * std::pow(0.7 / 100.0, 2) + std::pow(0.71 / 10.0, 2);
  EXPECT_NEAR(a.variance(), want, 1e-15);
  EXPECT_NEAR(a.mean(), 0.11, 1e-15);

  // Firm-level simulation of one group: ten firms plus Z/10.
  std::mt19937_64 rng(99);
  std::normal_distribution<double> xhat(1.1 / 100, 0.7 / 100), z(0.0, 0.71);
  std::vector<double> sums(200000);
  for (auto& s : sums) {
    double t = z(rng) / 10.0;
    for (int i = 0; i < 10; ++i) t += xhat(rng);
    s = t;
  }
  const auto est = oracle::mean_and_se(sums);
  double ss = 0.0;
  for (double s : sums) ss += (s - est.mean) * (s - est.mean);
  const double var = ss / (sums.size() - 1);
  const double var_se = want * std::sqrt(2.0 / (sums.size() - 1));
  EXPECT_NEAR(var, want, 4.0 * var_se);
}

TEST(Aggregate, ClosedFormsMatchMonteCarloShortfall) {
  const auto normal = AggregateDistribution::normal(0.11, std::sqrt(0.001));
  const auto uni = AggregateDistribution::irwin_hall(5, 0.0, 2.2 / 5);
  std::normal_distribution<double> nd(0.11, std::sqrt(0.001));
  std::uniform_real_distribution<double> ud(0.0, 2.2 / 5);
  auto draw_normal = [&](std::mt19937_64& g) { return nd(g); };
  auto draw_uniform = [&](std::mt19937_64& g) {
    double t = 0.0;
    for (int i = 0; i < 5; ++i) t += ud(g);
    return t;
  };
  for (int i = 0; i < 20; ++i) {
    const double xn = 0.11 + (i - 10) * 0.01;
    const auto est_n = oracle::mc_expectation(draw_normal, [&](double s) { return std::max(xn - s, 0.0); }, 200000, i);
    EXPECT_LE(std::abs(normal.expected_shortfall(xn) - est_n.mean), 3.0 * est_n.se + 1e-12) << xn;
    const double xu = 0.25 + 0.09 * i;
    const auto est_u = oracle::mc_expectation(draw_uniform, [&](double s) { return std::max(xu - s, 0.0); }, 200000, 50 + i);
    EXPECT_LE(std::abs(uni.expected_shortfall(xu) - est_u.mean), 3.0 * est_u.se + 1e-12) << xu;
  }
}

TEST(Aggregate, ShortfallProbabilityIsDerivative) {
  const std::vector<AggregateDistribution> dists{
      AggregateDistribution::normal(0.11, std::sqrt(0.001)), AggregateDistribution::irwin_hall(1, 0.0, 2.2),
      AggregateDistribution::irwin_hall(7, 0.3, 0.1), AggregateDistribution::irwin_hall(30, 0.0, 0.05)};
  for (const auto& a : dists) {
    const double m = a.mean(), s = std::sqrt(a.variance());
    for (int i = 0; i <= 20; ++i) {
      const double x = m + (i - 10) * 0.3 * s;
      const double h = 1e-6 * std::max(1.0, std::abs(x));
      const double fd = (a.expected_shortfall(x + h) - a.expected_shortfall(x - h)) / (2 * h);
      EXPECT_NEAR(a.shortfall_probability(x), fd, 1e-4);
      EXPECT_EQ(a.shortfall_probability(x), a.cdf(x));
    }
  }
}

TEST(Aggregate, CdfMonotoneBoundedAndShortfallLipschitz) {
  std::mt19937_64 rng(5);
  std::normal_distribution<double> nd(1.0, 0.3);
  std::vector<double> samples(5000);
  for (auto& s : samples) s = nd(rng);
  const std::vector<AggregateDistribution> dists{AggregateDistribution::normal(1.0, 0.3),
                                                 AggregateDistribution::irwin_hall(12, 0.0, 1.0 / 6),
                                                 AggregateDistribution::empirical(samples)};
  for (const auto& a : dists) {
    double prev_c = -1.0, prev_s = 0.0, prev_x = -1.0;
    for (int i = 0; i <= 400; ++i) {
      const double x = -1.0 + 0.01 * i;
      const double c = a.cdf(x);
      const double s = a.expected_shortfall(x);
      EXPECT_GE(c, 0.0);
      EXPECT_LE(c, 1.0);
      EXPECT_GE(c, prev_c);
      if (i > 0) EXPECT_LE(s - prev_s, (x - prev_x) + 1e-12);
      prev_c = c;
      prev_s = s;
      prev_x = x;
    }
    EXPECT_NEAR(a.cdf(-50.0), 0.0, 1e-12);
    EXPECT_NEAR(a.cdf(50.0), 1.0, 1e-12);
  }
}

TEST(Aggregate, EmpiricalMeanWithinStandardErrors) {
  CapacityModel m{BaseDistribution::uniform(0.0, 2.2), std::nullopt, std::nullopt, 4096};
  const auto a = group_aggregate(m, 64, 3, {20000, 30});
  EXPECT_EQ(a.representation(), Representation::empirical_monte_carlo);
  const double se = std::sqrt(64 * (2.2 * 2.2 / 12) / (4096.0 * 4096.0) / 20000);
  EXPECT_NEAR(a.mean(), 1.1 / 64, 4 * se);
  EXPECT_TRUE(std::is_sorted(a.samples().begin(), a.samples().end()));
}

TEST(Aggregate, EmpiricalShortfallIsExactIntegralOfCdf) {
  std::vector<double> s{0.0, 1.0, 2.0, 4.0};
  const auto a = AggregateDistribution::empirical(s);
  for (double x : {-1.0, 0.5, 1.7, 3.0, 5.0}) {
    const double want = oracle::simpson([&](double t) { return a.cdf(t); }, -2.0, x, 20000);
    EXPECT_NEAR(a.expected_shortfall(x), want, 1e-6) << x;
  }
}

TEST(Aggregate, IrwinHallLargeNStable) {
  for (std::size_t n : {10u, 20u, 30u}) {
    const double mid = 0.5 * n;
    EXPECT_NEAR(irwin_hall::cdf(n, mid), 0.5, 1e-9);
    const double sd = std::sqrt(n / 12.0);
    EXPECT_NEAR(irwin_hall::cdf(n, mid + sd), oracle::normal_cdf(1.0, 0.0, 1.0), 0.01);
    EXPECT_NEAR(irwin_hall::integrated_cdf(n, n + 1.0), n + 1.0 - mid, 1e-9);
  }
}

TEST(Penalty, LinearPenaltyEqualsShortfall) {
  const auto a = AggregateDistribution::irwin_hall(1, 0.0, 2.2);
  for (double x : {0.0, 0.4, 1.1, 2.2}) {
    EXPECT_DOUBLE_EQ(a.expected_penalty(x, PenaltySpec::linear()), a.expected_shortfall(x));
  }
  EXPECT_NEAR(a.expected_penalty(2.2, PenaltySpec::linear(2.0)), 2.2, 1e-13);
}

TEST(Penalty, QuadraticPenaltyMatchesMonteCarlo) {
  const auto a = AggregateDistribution::normal(1.0, 0.5);
  const auto pen = PenaltySpec::convex_power(1.0, 2.0, 1e6);
  std::normal_distribution<double> nd(1.0, 0.5);
  auto draw = [&](std::mt19937_64& g) { return nd(g); };
  for (double x : {0.5, 1.0, 1.4, 2.0}) {
    const auto est = oracle::mc_expectation(draw, [&](double s) { return std::pow(std::max(x - s, 0.0), 2); }, 200000, 7);
    EXPECT_LE(std::abs(a.expected_penalty(x, pen) - est.mean), 3 * est.se) << x;
    const auto est_d = oracle::mc_expectation(draw, [&](double s) { return 2 * std::max(x - s, 0.0); }, 200000, 8);
    EXPECT_LE(std::abs(a.expected_penalty_slope(x, pen) - est_d.mean), 3 * est_d.se) << x;
  }
}

TEST(Penalty, TangentContinuationIsConvexWithBoundedSlope) {
  const auto pen = PenaltySpec::convex_power(1.5, 3.0, 0.5);
  EXPECT_EQ(pen.value(-1.0), 0.0);
  EXPECT_EQ(pen.derivative(-1.0), 0.0);
  const double bound = 1.5 * 3.0 * 0.25;
  double prev = pen.derivative(0.0);
  for (int i = 1; i <= 200; ++i) {
    const double z = 0.01 * i;
    EXPECT_GE(pen.derivative(z), prev - 1e-15);
    EXPECT_LE(pen.derivative(z), bound + 1e-12);
    prev = pen.derivative(z);
  }
  EXPECT_NEAR(pen.value(0.4), 1.5 * std::pow(0.4, 3), 1e-15);
  EXPECT_NEAR(pen.value(1.0), 1.5 * (0.125 + 0.75 * 0.5), 1e-14);
  EXPECT_THROW(PenaltySpec::convex_power(1.0, 0.5, 1.0).validate(), Error);
  EXPECT_THROW(PenaltySpec::linear(0.0).validate(), Error);
}

TEST(Jensen, PooledShortfallBelowSumOfIndividual) {
  std::mt19937_64 rng(17);
  std::normal_distribution<double> nd(0.1, 0.1);
  for (int group = 2; group <= 16; group *= 2) {
    const double xi = 0.09;
    std::vector<double> pooled(100000), separate(100000);
    for (std::size_t r = 0; r < pooled.size(); ++r) {
      double cap = 0.0, sep = 0.0;
      for (int i = 0; i < group; ++i) {
        const double c = nd(rng);
        cap += c;
        sep += std::max(xi - c, 0.0);
      }
      pooled[r] = std::max(group * xi - cap, 0.0);
      separate[r] = sep;
    }
    const auto p = oracle::mean_and_se(pooled), s = oracle::mean_and_se(separate);
    EXPECT_LE(p.mean, s.mean + 3 * std::hypot(p.se, s.se));
  }
}
