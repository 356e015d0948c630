#include <gtest/gtest.h>

#include <cmath>

#include "cournot/capacity_model.hpp"
#include "cournot/errors.hpp"
#include "support/oracles.hpp"

using namespace cournot;

namespace {

struct Moments {
  double mean;
  double var;
  std::size_t n;
};

Moments moments(const std::vector<double>& v) {
  const auto e = oracle::mean_and_se(v);
  double ss = 0.0;
  for (double x : v) ss += (x - e.mean) * (x - e.mean);
  return {e.mean, ss / (v.size() - 1), v.size()};
}

double mean_se(const Moments& m) { return std::sqrt(m.var / m.n); }
double var_se(double var, std::size_t n) { return var * std::sqrt(2.0 / (n - 1)); }

}  // namespace

TEST(CapacityModel, ModeAndValidation) {
  CapacityModel m{BaseDistribution::normal(1.1, 1.0), std::nullopt, std::nullopt, 10};
  EXPECT_EQ(m.mode(), CapacityMode::iid);
  m.shock = BaseDistribution::normal(0.0, 0.5);
  EXPECT_EQ(m.mode(), CapacityMode::shock);
  m.serial = SerialCorrelation{0.3, std::nullopt};
  EXPECT_THROW(m.validate(), Error);
  m.serial.reset();
  m.shock = BaseDistribution::normal(0.2, 0.5);
  EXPECT_THROW(m.validate(), Error);
  m.shock.reset();
  m.serial = SerialCorrelation{1.0, std::nullopt};
  EXPECT_THROW(m.validate(), Error);
  m.serial = SerialCorrelation{0.5, std::nullopt};
  EXPECT_EQ(m.mode(), CapacityMode::serial);
  EXPECT_NO_THROW(m.validate());
  m.n_firms = 0;
  EXPECT_THROW(m.validate(), Error);
}

TEST(CapacityModel, UnevenPartitionRejected) {
  CapacityModel m{BaseDistribution::normal(1.1, 1.0), std::nullopt, std::nullopt, 100};
  try {
    group_aggregate(m, 7, 1);
    FAIL();
  } catch (const Error& e) {
    EXPECT_EQ(e.kind(), ErrorKind::partition);
  }
}

TEST(CapacityModel, IidTotalMeanAndVariance) {
  CapacityModel m{BaseDistribution::uniform(0.0, 2.2), std::nullopt, std::nullopt, 50};
  const auto s = moments(sample_total_capacity(m, 11, 40000));
  EXPECT_NEAR(s.mean, 1.1, 4 * mean_se(s));
  const double var = 2.2 * 2.2 / 12 / 50;
  EXPECT_NEAR(s.var, var, 4 * var_se(var, s.n));
}

TEST(CapacityModel, ShockTotalVariance) {
  CapacityModel m{BaseDistribution::normal(1.1, 0.7), BaseDistribution::normal(0.0, 0.71), std::nullopt, 40};
  const auto s = moments(sample_total_capacity(m, 12, 40000));
  const double var = 0.49 / 40 + 0.71 * 0.71;
  EXPECT_NEAR(s.mean, 1.1, 4 * mean_se(s));
  EXPECT_NEAR(s.var, var, 4 * var_se(var, s.n));
}

TEST(CapacityModel, SerialRhoZeroMatchesIid) {
  CapacityModel iid{BaseDistribution::normal(1.1, 1.0), std::nullopt, std::nullopt, 30};
  CapacityModel ser = iid;
  ser.serial = SerialCorrelation{0.0, std::nullopt};
  const auto a = moments(sample_total_capacity(iid, 1, 40000));
  const auto b = moments(sample_total_capacity(ser, 2, 40000));
  EXPECT_NEAR(a.mean, b.mean, 4 * std::hypot(mean_se(a), mean_se(b)));
  EXPECT_NEAR(a.var, b.var, 4 * std::hypot(var_se(a.var, a.n), var_se(b.var, b.n)));
  EXPECT_NEAR(b.var, 1.0 / 30, 4 * var_se(1.0 / 30, b.n));
}

TEST(CapacityModel, SerialTotalVarianceMatchesCovarianceSum) {
  const std::size_t n = 20;
  const double rho = 0.6;
  CapacityModel m{BaseDistribution::normal(1.0, 1.0), std::nullopt, SerialCorrelation{rho, std::nullopt}, n};
  double cov_sum = 0.0;
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t j = 0; j < n; ++j) cov_sum += std::pow(rho, std::abs(double(i) - double(j))) / (n * n);
  const auto s = moments(sample_total_capacity(m, 3, 40000));
  EXPECT_NEAR(s.var, cov_sum, 4 * var_se(cov_sum, s.n));
  const auto g = group_aggregate(m, 4, 5, {40000, 30});
  EXPECT_EQ(g.representation(), Representation::empirical_monte_carlo);
  EXPECT_NEAR(g.mean(), 0.25, 4 * std::sqrt(g.variance() / 40000));
}

TEST(WeakCorrelation, RowSums) {
  const double sigma = 2.0;
  for (std::size_t n : {10u, 100u, 1000u}) {
    CapacityModel m{BaseDistribution::normal(1.0, sigma), std::nullopt, SerialCorrelation{0.0, std::nullopt}, n};
    const auto w0 = weak_correlation_bound(m);
    EXPECT_NEAR(w0.row_sum, sigma * sigma / double(n * n), 1e-15);
    m.serial->rho = 0.5;
    const auto w = weak_correlation_bound(m);
    double direct = 0.0;
    const std::size_t mid = n / 2;
    for (std::size_t j = 0; j < n; ++j) direct += std::pow(0.5, std::abs(double(j) - double(mid)));
    direct *= sigma * sigma / double(n * n);
    EXPECT_NEAR(w.row_sum, direct, 1e-12 * direct);
    EXPECT_LE(w.row_sum, 3 * sigma * sigma / double(n * n) + 1e-18);
    EXPECT_TRUE(w.satisfied);
  }
  CapacityModel small{BaseDistribution::normal(1.0, 1.0), std::nullopt, SerialCorrelation{0.5, std::nullopt}, 10};
  CapacityModel big = small;
  big.n_firms = 10000;
  EXPECT_LT(weak_correlation_bound(big).c_estimate, weak_correlation_bound(small).c_estimate);
  CapacityModel iid{BaseDistribution::normal(1.0, 1.0), std::nullopt, std::nullopt, 10};
  EXPECT_THROW(weak_correlation_bound(iid), Error);
}

TEST(ShockOnly, MeanAndSpread) {
  CapacityModel m{BaseDistribution::normal(1.1, 0.7), BaseDistribution::normal(0.0, 0.71), std::nullopt, 100};
  const auto a = shock_only_aggregate(m, 10);
  EXPECT_NEAR(a.mean(), 0.11, 1e-15);
  EXPECT_NEAR(a.variance(), 0.071 * 0.071, 1e-15);
}
