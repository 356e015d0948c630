#include <gtest/gtest.h>

#include <cmath>
#include <random>

#include "cournot/errors.hpp"
#include "cournot/price_curve.hpp"
#include "support/oracles.hpp"

using namespace cournot;

namespace {

PriceCurve quad() { return PriceCurve::quadratic(1.0, -1.0, -0.1); }

}  // namespace

TEST(PriceCurve, LinearValues) {
  const auto p = PriceCurve::linear(1.0, -1.0);
  EXPECT_DOUBLE_EQ(p.price(0.0), 1.0);
  EXPECT_DOUBLE_EQ(p.price(1.0), 0.0);
  EXPECT_DOUBLE_EQ(p.slope(0.3), -1.0);
  EXPECT_DOUBLE_EQ(p.slope(7.0), -1.0);
  EXPECT_DOUBLE_EQ(p.surplus(0.0), 0.0);
  EXPECT_NEAR(p.surplus(1.0), 0.5, 1e-15);
  EXPECT_DOUBLE_EQ(p.y_max(), 1.0);
  EXPECT_DOUBLE_EQ(PriceCurve::linear(2.0, -1.0).y_max(), 2.0);
}

TEST(PriceCurve, QuadraticValues) {
  const auto p = quad();
  EXPECT_NEAR(p.price(0.5), 0.475, 1e-15);
  EXPECT_NEAR(p.slope(0.0), -1.0, 1e-15);
  EXPECT_NEAR(p.slope(1.0), -1.2, 1e-15);
  EXPECT_NEAR(p.surplus(1.0), 1.0 - 0.5 - 0.1 / 3.0, 1e-14);
}

TEST(PriceCurve, QuadraticRootMatchesBisectionOracle) {
  const double want = oracle::bisect([](double y) { return 1.0 - y - 0.1 * y * y; }, 0.0, 2.0);
  const double got = quad().y_max();
  EXPECT_NEAR(got, want, 1e-10);
  EXPECT_NEAR(got, 0.91608, 1e-5);
}

TEST(PriceCurve, NegativeOutputRejected) {
  const auto p = PriceCurve::linear(1.0, -1.0);
  EXPECT_THROW(p.price(-0.1), Error);
}

TEST(PriceCurve, RootMissingIsModelError) {
  try {
    PriceCurve::linear(-1.0, -1.0).y_max();
    FAIL();
  } catch (const Error& e) {
    EXPECT_EQ(e.kind(), ErrorKind::model);
  }
}

TEST(PriceCurve, TabulatedInterpolatesKnotsAndStaysMonotone) {
  std::vector<double> y, v;
  for (int i = 0; i <= 10; ++i) {
    y.push_back(0.2 * i);
    v.push_back(1.0 - 0.2 * i - 0.1 * 0.04 * i * i);
  }
  const auto p = PriceCurve::tabulated(y, v);
  for (std::size_t i = 0; i < y.size(); ++i) EXPECT_NEAR(p.price(y[i]), v[i], 1e-14);
  double prev = p.price(0.0);
  for (int i = 1; i <= 400; ++i) {
    const double cur = p.price(0.005 * i);
    EXPECT_LT(cur, prev);
    prev = cur;
  }
  EXPECT_NEAR(p.y_max(), quad().y_max(), 1e-3);
  EXPECT_NEAR(p.surplus(1.0), quad().surplus(1.0), 1e-4);
  EXPECT_TRUE(validate_assumptions(p).ok());
}

TEST(PriceCurve, TabulatedStructureChecked) {
  EXPECT_THROW(PriceCurve::tabulated({0.1, 1.0}, {1.0, 0.0}), Error);
  EXPECT_THROW(PriceCurve::tabulated({0.0, 0.0}, {1.0, 0.0}), Error);
  EXPECT_THROW(PriceCurve::tabulated({0.0, 1.0}, {1.0}), Error);
}

TEST(Validation, LinearPassesEverything) {
  const auto rep = validate_assumptions(PriceCurve::linear(1.0, -1.0));
  EXPECT_TRUE(rep.ok());
  for (const auto& c : rep.checks) EXPECT_TRUE(c.passed) << c.name;
}

TEST(Validation, NegativeInterceptFailsPositivity) {
  const auto rep = validate_assumptions(PriceCurve::linear(-1.0, -1.0));
  EXPECT_FALSE(rep.ok());
  ASSERT_NE(rep.find("p0_positive"), nullptr);
  EXPECT_FALSE(rep.find("p0_positive")->passed);
}

TEST(Validation, ConvexCurveFailsConcavityAndZeroCrossing) {
  std::vector<double> y, v;
  for (int i = 0; i <= 40; ++i) {
    y.push_back(0.25 * i);
    v.push_back(1.0 / (1.0 + 0.25 * i));
  }
  const auto rep = validate_assumptions(PriceCurve::tabulated(y, v));
  EXPECT_FALSE(rep.find("concave")->passed);
  EXPECT_FALSE(rep.find("zero_crossing")->passed);
  EXPECT_TRUE(rep.find("strictly_decreasing")->passed);
}

TEST(Validation, IncreasingCurveRejected) {
  const auto rep = validate_assumptions(PriceCurve::linear(1.0, 0.5));
  EXPECT_FALSE(rep.find("strictly_decreasing")->passed);
  EXPECT_FALSE(rep.find("slope_at_zero_negative")->passed);
}

class RandomPolynomialCurve : public ::testing::TestWithParam<int> {};

TEST_P(RandomPolynomialCurve, RootSurplusAndSlopeProperties) {
  std::mt19937_64 rng(1000 + GetParam());
  std::uniform_real_distribution<double> u(0.2, 3.0);
  const double c0 = u(rng), c1 = -u(rng), c2 = GetParam() % 2 ? -0.5 * u(rng) : 0.0;
  const auto p = PriceCurve::quadratic(c0, c1, c2);
  ASSERT_TRUE(validate_assumptions(p).ok());
  const double ym = p.y_max();
  EXPECT_NEAR(p.price(ym), 0.0, 1e-9);
  for (int i = 0; i < 50; ++i) EXPECT_GT(p.price(ym * i / 50.0), 0.0);

  const double h = ym / 64;
  for (int i = 1; i < 63; ++i) {
    const double y = i * h;
    const double second = p.surplus(y + h) - 2.0 * p.surplus(y) + p.surplus(y - h);
    EXPECT_LE(second, 1e-12);
    const double fd = (p.price(y + 1e-6) - p.price(y - 1e-6)) / 2e-6;
    EXPECT_NEAR(p.slope(y), fd, 1e-6 * std::max(1.0, std::abs(fd)));
  }
}

INSTANTIATE_TEST_SUITE_P(Seeds, RandomPolynomialCurve, ::testing::Range(0, 20));
