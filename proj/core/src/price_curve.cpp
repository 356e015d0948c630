#include "cournot/price_curve.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>

#include "cournot/errors.hpp"
#include "cournot/root_find.hpp"

namespace cournot {

namespace {

void require_nonnegative(double y, const char* op) {
  if (!(y >= 0.0)) {
    std::ostringstream os;
    os << op << ": quantity must be nonnegative, got " << y;
    raise(ErrorKind::domain, os.str());
  }
}

// Smallest positive root of c0 + c1 y + c2 y^2, if any; only used to pick a
// sensible evaluation range.
std::optional<double> positive_root(double c0, double c1, double c2) {
  if (c2 == 0.0) {
    if (c1 == 0.0) return std::nullopt;
    const double r = -c0 / c1;
    return r > 0.0 ? std::optional(r) : std::nullopt;
  }
  const double disc = c1 * c1 - 4.0 * c2 * c0;
  if (disc < 0.0) return std::nullopt;
  const double s = std::sqrt(disc);
  std::optional<double> best;
  for (double r : {(-c1 - s) / (2.0 * c2), (-c1 + s) / (2.0 * c2)}) {
    if (r > 0.0 && (!best || r < *best)) best = r;
  }
  return best;
}

double hint_for(double c0, double c1, double c2) {
  const auto r = positive_root(c0, c1, c2);
  return r ? 2.0 * *r : 1.0;
}

}  // namespace

std::string to_string(PriceKind kind) {
  switch (kind) {
    case PriceKind::linear: return "linear";
    case PriceKind::quadratic: return "quadratic";
    case PriceKind::tabulated: return "tabulated";
  }
  return "unknown";
}

PriceCurve PriceCurve::linear(double intercept, double slope) {
  if (!std::isfinite(intercept) || !std::isfinite(slope)) {
    raise(ErrorKind::model, "linear price: coefficients must be finite");
  }
  PriceCurve c;
  c.kind_ = PriceKind::linear;
  c.coeffs_ = {intercept, slope};
  c.domain_hint_ = hint_for(intercept, slope, 0.0);
  return c;
}

PriceCurve PriceCurve::quadratic(double c0, double c1, double c2) {
  if (!std::isfinite(c0) || !std::isfinite(c1) || !std::isfinite(c2)) {
    raise(ErrorKind::model, "quadratic price: coefficients must be finite");
  }
  PriceCurve c;
  c.kind_ = PriceKind::quadratic;
  c.coeffs_ = {c0, c1, c2};
  c.domain_hint_ = hint_for(c0, c1, c2);
  return c;
}

PriceCurve PriceCurve::tabulated(std::vector<double> y, std::vector<double> p) {
  if (y.size() != p.size() || y.size() < 2) {
    raise(ErrorKind::model, "tabulated price: need at least two (y, p) knots of equal length");
  }
  if (y.front() != 0.0) raise(ErrorKind::model, "tabulated price: first knot must be at y = 0");
  for (std::size_t i = 1; i < y.size(); ++i) {
    if (!(y[i] > y[i - 1])) raise(ErrorKind::model, "tabulated price: knots must be strictly increasing");
  }
  for (double v : p) {
    if (!std::isfinite(v)) raise(ErrorKind::model, "tabulated price: values must be finite");
  }

  // Fritsch-Carlson tangents.
  const std::size_t n = y.size();
  std::vector<double> d(n - 1);
  for (std::size_t i = 0; i + 1 < n; ++i) d[i] = (p[i + 1] - p[i]) / (y[i + 1] - y[i]);
  std::vector<double> m(n);
  // One-sided three-point end slopes, clipped to keep the ends monotone.
  auto end_slope = [](double h0, double h1, double d0, double d1) {
    const double e = ((2.0 * h0 + h1) * d0 - h0 * d1) / (h0 + h1);
    if (e * d0 <= 0.0) return 0.0;
    if (d0 * d1 <= 0.0 && std::abs(e) > 3.0 * std::abs(d0)) return 3.0 * d0;
    return e;
  };
  if (n == 2) {
    m[0] = m[1] = d[0];
  } else {
    m[0] = end_slope(y[1] - y[0], y[2] - y[1], d[0], d[1]);
    m[n - 1] = end_slope(y[n - 1] - y[n - 2], y[n - 2] - y[n - 3], d[n - 2], d[n - 3]);
  }
  for (std::size_t i = 1; i + 1 < n; ++i) {
    m[i] = (d[i - 1] * d[i] <= 0.0) ? 0.0 : 0.5 * (d[i - 1] + d[i]);
  }
  for (std::size_t i = 0; i + 1 < n; ++i) {
    if (d[i] == 0.0) {
      m[i] = m[i + 1] = 0.0;
      continue;
    }
    const double a = m[i] / d[i];
    const double b = m[i + 1] / d[i];
    const double s = a * a + b * b;
    if (s > 9.0) {
      const double t = 3.0 / std::sqrt(s);
      m[i] = t * a * d[i];
      m[i + 1] = t * b * d[i];
    }
  }

  PriceCurve c;
  c.kind_ = PriceKind::tabulated;
  c.domain_hint_ = y.back();
  c.knots_y_ = std::move(y);
  c.knots_p_ = std::move(p);
  c.tangents_ = std::move(m);
  return c;
}

PriceCurve PriceCurve::with_domain_hint(double hint) const {
  if (!(hint > 0.0) || !std::isfinite(hint)) raise(ErrorKind::model, "price: domain_hint must be positive");
  PriceCurve c = *this;
  c.domain_hint_ = hint;
  return c;
}

double PriceCurve::hermite(double y) const {
  const std::size_t n = knots_y_.size();
  if (y >= knots_y_.back()) return knots_p_.back() + tangents_.back() * (y - knots_y_.back());
  const auto it = std::upper_bound(knots_y_.begin(), knots_y_.end(), y);
  const std::size_t i = std::min<std::size_t>(static_cast<std::size_t>(it - knots_y_.begin()) - 1, n - 2);
  const double h = knots_y_[i + 1] - knots_y_[i];
  const double t = (y - knots_y_[i]) / h;
  const double t2 = t * t;
  const double t3 = t2 * t;
  const double h00 = 2 * t3 - 3 * t2 + 1;
  const double h10 = t3 - 2 * t2 + t;
  const double h01 = -2 * t3 + 3 * t2;
  const double h11 = t3 - t2;
  return h00 * knots_p_[i] + h10 * h * tangents_[i] + h01 * knots_p_[i + 1] + h11 * h * tangents_[i + 1];
}

double PriceCurve::price(double y) const {
  require_nonnegative(y, "price");
  switch (kind_) {
    case PriceKind::linear: return coeffs_[0] + coeffs_[1] * y;
    case PriceKind::quadratic: return coeffs_[0] + y * (coeffs_[1] + y * coeffs_[2]);
    case PriceKind::tabulated: return hermite(y);
  }
  return 0.0;
}

double PriceCurve::slope(double y) const {
  require_nonnegative(y, "price_slope");
  switch (kind_) {
    case PriceKind::linear: return coeffs_[1];
    case PriceKind::quadratic: return coeffs_[1] + 2.0 * coeffs_[2] * y;
    case PriceKind::tabulated: {
      const double h = 1e-6 * std::max(1.0, y);
      if (y < h) return (hermite(y + h) - hermite(y)) / h;
      return (hermite(y + h) - hermite(y - h)) / (2.0 * h);
    }
  }
  return 0.0;
}

double PriceCurve::tabulated_integral(double y) const {
  auto simpson = [this](double a, double b) {
    return (b - a) / 6.0 * (hermite(a) + 4.0 * hermite(0.5 * (a + b)) + hermite(b));
  };
  double total = 0.0;
  for (std::size_t i = 0; i + 1 < knots_y_.size(); ++i) {
    const double a = knots_y_[i];
    if (a >= y) break;
    total += simpson(a, std::min(y, knots_y_[i + 1]));
  }
  if (y > knots_y_.back()) total += simpson(knots_y_.back(), y);
  return total;
}

double PriceCurve::surplus(double y) const {
  require_nonnegative(y, "consumer_surplus");
  switch (kind_) {
    case PriceKind::linear: return y * (coeffs_[0] + 0.5 * coeffs_[1] * y);
    case PriceKind::quadratic:
      return y * (coeffs_[0] + y * (0.5 * coeffs_[1] + y * coeffs_[2] / 3.0));
    case PriceKind::tabulated: return tabulated_integral(y);
  }
  return 0.0;
}

double PriceCurve::y_max(double tol) const {
  const double p0 = price(0.0);
  if (!(p0 > 0.0)) raise(ErrorKind::model, "y_max: p(0) must be positive");
  if (kind_ == PriceKind::linear) {
    if (!(coeffs_[1] < 0.0)) raise(ErrorKind::model, "y_max: linear price with nonnegative slope never crosses zero");
    return -coeffs_[0] / coeffs_[1];
  }
  double hi = domain_hint_;
  int expansions = 0;
  while (price(hi) >= 0.0) {
    if (++expansions > 64) raise(ErrorKind::model, "y_max: no sign change of p found; p does not tend to -infinity");
    hi *= 2.0;
  }
  return bisect_decreasing([this](double y) { return price(y); }, 0.0, hi, tol).x;
}

bool ValidationReport::ok() const {
  return std::all_of(checks.begin(), checks.end(), [](const auto& c) { return c.passed; });
}

const AssumptionCheck* ValidationReport::find(const std::string& name) const {
  for (const auto& c : checks) {
    if (c.name == name) return &c;
  }
  return nullptr;
}

ValidationReport validate_assumptions(const PriceCurve& curve, std::size_t grid_size) {
  grid_size = std::max<std::size_t>(grid_size, 3);
  const double top = curve.domain_hint();
  std::vector<double> ys(grid_size);
  std::vector<double> ps(grid_size);
  for (std::size_t i = 0; i < grid_size; ++i) {
    ys[i] = top * static_cast<double>(i) / static_cast<double>(grid_size - 1);
    ps[i] = curve.price(ys[i]);
  }
  double scale = 0.0;
  for (double v : ps) scale = std::max(scale, std::abs(v));
  const double tol = 1e-12 * std::max(1.0, scale);

  ValidationReport report;

  AssumptionCheck positive{"p0_positive", true, std::nullopt, {}};
  if (!(ps[0] > 0.0)) {
    positive.passed = false;
    positive.first_violation = 0.0;
    positive.detail = "p(0) = " + std::to_string(ps[0]);
  }
  report.checks.push_back(positive);

  AssumptionCheck decreasing{"strictly_decreasing", true, std::nullopt, {}};
  for (std::size_t i = 1; i < grid_size; ++i) {
    if (!(ps[i] < ps[i - 1])) {
      decreasing.passed = false;
      decreasing.first_violation = ys[i];
      decreasing.detail = "p does not decrease between consecutive samples";
      break;
    }
  }
  report.checks.push_back(decreasing);

  AssumptionCheck concave{"concave", true, std::nullopt, {}};
  for (std::size_t i = 1; i + 1 < grid_size; ++i) {
    const double second = ps[i + 1] - 2.0 * ps[i] + ps[i - 1];
    if (second > tol) {
      concave.passed = false;
      concave.first_violation = ys[i];
      concave.detail = "positive second difference " + std::to_string(second);
      break;
    }
  }
  report.checks.push_back(concave);

  AssumptionCheck slope0{"slope_at_zero_negative", true, std::nullopt, {}};
  const double s0 = curve.slope(0.0);
  if (!std::isfinite(s0) || !(s0 < 0.0)) {
    slope0.passed = false;
    slope0.first_violation = 0.0;
    slope0.detail = "p'(0+) = " + std::to_string(s0);
  }
  report.checks.push_back(slope0);

  AssumptionCheck crossing{"zero_crossing", true, std::nullopt, {}};
  try {
    const double root = curve.y_max();
    if (curve.kind() == PriceKind::tabulated && root > curve.knots().back()) {
      crossing.passed = false;
      crossing.first_violation = curve.knots().back();
      crossing.detail = "p stays positive over the whole table";
    }
  } catch (const Error& e) {
    crossing.passed = false;
    crossing.first_violation = top;
    crossing.detail = e.what();
  }
  report.checks.push_back(crossing);

  return report;
}

}  // namespace cournot
