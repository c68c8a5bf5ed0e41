#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>
#include <numbers>

#include "period_balance/compare.hpp"
#include "period_balance/errors.hpp"

using namespace period_balance;

namespace {

std::vector<double> log_grid(double lo, double hi, int n) {
  std::vector<double> g;
  for (int i = 0; i < n; ++i) g.push_back(lo * std::pow(hi / lo, double(i) / (n - 1)));
  return g;
}

}  // namespace

TEST_CASE("local match order") {
  const PeriodSeries exact = lindstedt_series(Potential::poly_family(2), 12);
  for (int N = 1; N <= 3; ++N) {
    CAPTURE(N);
    CHECK(local_match_order(exact, hbm_taylor(Potential::poly_family(2), N, 12)) == 2 * N + 2);
  }
  CHECK_FALSE(local_match_order(exact, exact).has_value());
  // A shorter series that agrees where it exists witnesses nothing.
  PeriodSeries shorter{{exact.coeffs.begin(), exact.coeffs.begin() + 5}};
  CHECK_FALSE(local_match_order(exact, shorter).has_value());
  PeriodSeries off = exact;
  off.coeffs[1] = Rational(1, 7);
  CHECK(local_match_order(exact, off) == 1);
}

TEST_CASE("error curve for Duffing at first order") {
  // T_1 = 2 pi / sqrt(1 + 3/4) at A = 1.
  const auto e = error_curve(Potential::poly_family(2), 1, {1.0});
  REQUIRE(e.size() == 1);
  const double T1 = 4 * std::numbers::pi / std::sqrt(7.0);
  CHECK(e[0].T_N == doctest::Approx(T1).epsilon(1e-14));
  CHECK(e[0].error == doctest::Approx(std::abs(duffing_period(1.0) - T1)).epsilon(1e-9));
  CHECK(e[0].T == doctest::Approx(duffing_period(1.0)).epsilon(1e-12));
}

TEST_CASE("second order improves on the first over [0.1, 10]") {
  const auto g = log_grid(0.1, 10, 15);
  const auto e1 = error_curve(Potential::poly_family(2), 1, g);
  const auto e2 = error_curve(Potential::poly_family(2), 2, g);
  for (size_t i = 0; i < g.size(); ++i) {
    CAPTURE(g[i]);
    CHECK(e2[i].error < e1[i].error);
  }
}

TEST_CASE("extended precision error curves") {
  const auto g = log_grid(1e-3, 1e-1, 9);
  for (int N = 1; N <= 3; ++N) {
    const auto e = duffing_error_curve(N, g);
    CAPTURE(N);
    // |T - T_N| = O(A^(2N+2)): the first coefficient mismatch.
    CHECK(error_slope(e) == doctest::Approx(2 * N + 2).epsilon(0.01));
    const double T = duffing_period(g.back());
    CHECK(e.back().T == doctest::Approx(T).epsilon(1e-14));
  }
  CHECK_THROWS_AS(duffing_error_curve(4, g), Error);
  // Synthetic slope.
  std::vector<ErrorSample> s;
  for (double A : g) s.push_back({A, 0, 0, 3 * std::pow(A, 5)});
  CHECK(error_slope(s) == doctest::Approx(5).epsilon(1e-12));
}

TEST_CASE("sampled extrema") {
  std::vector<double> A, T;
  for (int i = 0; i <= 200; ++i) {
    A.push_back(0.01 * i);
    T.push_back(-std::pow(A.back() - 0.737, 2) + 0.1 * std::pow(A.back() - 1.6, 2) * (A.back() > 1.6));
  }
  const auto ex = sampled_extrema(A, T);
  REQUIRE(ex.size() >= 1);
  CHECK(ex[0].kind == CriticalKind::max);
  CHECK(ex[0].A == doctest::Approx(0.737).epsilon(1e-9));
}

TEST_CASE("quintic critical periods from HBM and from the exact period") {
  const Potential p = Potential::quintic(-1);
  const auto exact = critical_periods(p, 1e-2, 10, 1e-9);
  REQUIRE(exact.size() == 1);
  for (int N = 1; N <= 3; ++N) {
    const auto h = hbm_critical_periods(p, N, 1e-2, 10);
    CAPTURE(N);
    REQUIRE(h.size() == 1);
    CHECK(h[0].kind == exact[0].kind);
    CHECK(std::abs(h[0].A - exact[0].A) <= 0.25 * exact[0].A);
  }
  CHECK(hbm_critical_periods(p, 1, 1e-2, 10)[0].A == doctest::Approx(0.774597).epsilon(1e-5));
}

TEST_CASE("full comparison report") {
  CompareOptions o;
  o.grid = log_grid(0.1, 10, 8);
  const ComparisonReport r = compare(Potential::poly_family(2), {1, 2, 3}, o);
  CHECK(r.family == "poly:m=2");
  REQUIRE(r.orders.size() == 3);
  const double tails[] = {7.25466, 7.40178, 7.41565};
  for (int i = 0; i < 3; ++i) {
    const OrderComparison& c = r.orders[static_cast<size_t>(i)];
    CAPTURE(c.N);
    CHECK(c.match_order == 2 * c.N + 2);
    REQUIRE(c.tail_exact.has_value());
    REQUIRE(c.tail_hbm.has_value());
    CHECK(c.tail_exact->C == doctest::Approx(7.41630).epsilon(1e-5));
    CHECK(c.tail_exact->source == "closed_form");
    CHECK(c.tail_hbm->C == doctest::Approx(tails[i]).epsilon(1e-5));
    CHECK(c.tail_hbm->exponent == doctest::Approx(-1).epsilon(1e-3));
    CHECK(c.critical_exact.empty());
    CHECK(c.critical_hbm.empty());
    CHECK(c.errors.size() == o.grid.size());
  }
  // Exact tail unavailable: falls back to a fit and says so.
  const ComparisonReport g = compare(Potential::parse("gen:2=1/10,3=1"), {1}, o);
  REQUIRE(g.orders[0].tail_exact.has_value());
  CHECK(g.orders[0].tail_exact->source == "fit");
  CHECK_FALSE(g.orders[0].notes.empty());
}
