#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <boost/math/special_functions/beta.hpp>

#include <cmath>
#include <numbers>
#include <random>

#include "period_balance/asymptotics.hpp"
#include "period_balance/errors.hpp"
#include "period_balance/period.hpp"

using namespace period_balance;

namespace {

// T ~ C A^(1-m) for F ~ x^(2m) / (2m): C = 2 B(1/(2m), 1/2) / sqrt(m).
double poly_tail_constant(int m) { return 2 * boost::math::beta(1.0 / (2 * m), 0.5) / std::sqrt(double(m)); }

std::vector<std::pair<double, double>> log_samples(double lo, double hi, int n, const std::function<double(double)>& T) {
  std::vector<std::pair<double, double>> s;
  for (int i = 0; i < n; ++i) {
    const double A = lo * std::pow(hi / lo, double(i) / (n - 1));
    s.emplace_back(A, T(A));
  }
  return s;
}

}  // namespace

TEST_CASE("beta against an independent implementation") {
  std::mt19937_64 rng(5);
  std::uniform_real_distribution<double> u(0.05, 6);
  for (int i = 0; i < 200; ++i) {
    const double x = u(rng), y = u(rng);
    CAPTURE(x);
    CAPTURE(y);
    CHECK(beta(x, y) == doctest::Approx(boost::math::beta(x, y)).epsilon(1e-12));
    CHECK(beta(x, y) == doctest::Approx(beta(y, x)).epsilon(1e-13));
    CHECK(beta(x + 1, y) == doctest::Approx(beta(x, y) * x / (x + y)).epsilon(1e-12));
  }
  CHECK(beta(0.5, 0.5) == doctest::Approx(std::numbers::pi).epsilon(1e-14));
  CHECK(std::sqrt(2.0) * beta(0.25, 0.5) == doctest::Approx(7.4163).epsilon(1e-5));
  CHECK_THROWS_AS(beta(0, 1), Error);
  CHECK_THROWS_AS(beta(1, -2), Error);
}

TEST_CASE("exact tails of the polynomial families") {
  for (int m = 2; m <= 6; ++m) {
    const AsymptoticTerm t = exact_tail(Potential::poly_family(m));
    CAPTURE(m);
    CHECK(t.at == LimitPoint::infinity);
    CHECK(t.a == doctest::Approx(1 - m).epsilon(1e-15));
    CHECK(t.M == doctest::Approx(poly_tail_constant(m)).epsilon(1e-12));
  }
  for (double k : {-1.5, -1.0, 0.0, 3.0}) {
    const AsymptoticTerm t = exact_tail(Potential::quintic(k));
    CHECK(t.a == -2);
    CHECK(t.M == doctest::Approx(poly_tail_constant(3)).epsilon(1e-12));
  }
  CHECK(exact_tail(Potential::quintic(-1)).M == doctest::Approx(8.41309).epsilon(1e-6));
  CHECK_THROWS_AS(exact_tail(Potential::quintic(-2)), Error);
  CHECK_THROWS_AS(exact_tail(Potential::rational_family(1, 2)), Error);
  CHECK_THROWS_AS(exact_tail(Potential::parse("gen:2=1,3=1")), Error);
}

TEST_CASE("exact tail matches the quadrature period at large A") {
  for (const char* spec : {"poly:m=2", "poly:m=3", "quintic:k=-1"}) {
    const Potential p = Potential::parse(spec);
    const AsymptoticTerm t = exact_tail(p);
    const double A = 1e4;
    CAPTURE(spec);
    CHECK(period_quadrature(p, A) / (t.M * std::pow(A, t.a)) == doctest::Approx(1).epsilon(1e-3));
  }
}

TEST_CASE("tail fit on synthetic data") {
  const auto exact = log_samples(1, 1e3, 20, [](double A) { return 5 / (A * A); });
  const TailFit f = tail_fit(exact);
  CHECK(f.C == doctest::Approx(5).epsilon(1e-12));
  CHECK(f.exponent == doctest::Approx(-2).epsilon(1e-12));
  CHECK(f.residual < 1e-12);
  // A subleading term is absorbed by refitting on the upper half.
  const auto noisy = log_samples(1, 1e4, 24, [](double A) { return 5 / (A * A) * (1 + 3 / A); });
  const TailFit g = tail_fit(noisy);
  CHECK(g.exponent == doctest::Approx(-2).epsilon(0.02));
  CHECK_THROWS_AS(tail_fit(log_samples(1, 1e3, 5, [](double A) { return 1 / A; })), Error);
  CHECK_THROWS_AS(tail_fit(log_samples(1, 5, 10, [](double A) { return 1 / A; })), Error);
  CHECK_THROWS_AS(tail_fit(log_samples(1, 1e3, 10, [](double A) { return -1 / A; })), Error);
}

TEST_CASE("tail fit on quadrature data recovers the poly tails") {
  for (int m : {2, 3, 4}) {
    const Potential p = Potential::poly_family(m);
    const TailFit f = tail_fit(log_samples(1e2, 1e4, 12, [&](double A) { return period_quadrature(p, A); }));
    CAPTURE(m);
    CHECK(f.C == doctest::Approx(poly_tail_constant(m)).epsilon(0.02));
    CHECK(std::abs(f.exponent - (1 - m)) <= 0.05);
  }
}
