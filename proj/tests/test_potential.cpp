#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <boost/math/quadrature/gauss_kronrod.hpp>

#include <cmath>
#include <functional>
#include <string>

#include "period_balance/errors.hpp"
#include "period_balance/potential.hpp"

using namespace period_balance;

namespace {

std::vector<Potential> zoo() {
  return {Potential::poly_family(2), Potential::poly_family(5), Potential::rational_family(1, 2),
          Potential::rational_family(1, 1), Potential::rational_family(1, 2.5), Potential::quintic(-1),
          Potential::quintic(0.7), Potential::parse("gen:2=1,3=-1/2"), Potential::parse("gen:2=1/3,4=2,5=1")};
}

// Plain bisection on F(x) = h between the origin and a bracketing point.
double bisect_inverse(const Potential& p, double h, double far) {
  double lo = 0, hi = far;
  for (int i = 0; i < 200; ++i) {
    const double mid = 0.5 * (lo + hi);
    (p.F(mid) < h ? lo : hi) = mid;
  }
  return 0.5 * (lo + hi);
}

int exit_kind(const std::function<void()>& f) {
  try {
    f();
  } catch (const Error& e) {
    return static_cast<int>(e.kind());
  }
  return -1;
}

}  // namespace

TEST_CASE("normalization at the origin") {
  for (const auto& p : zoo()) {
    CAPTURE(p.spec());
    CHECK(p.F(0) == 0);
    CHECK(p.dF(0) == 0);
    CHECK(p.d2F(0) == doctest::Approx(1).epsilon(1e-15));
  }
}

TEST_CASE("derivatives agree with centered differences of F") {
  for (const auto& p : zoo()) {
    for (double x : {-1.3, -0.6, -0.1, 0.2, 0.45, 0.9, 1.7}) {
      if (p.kind() == PotentialKind::general_poly && std::abs(x) > 0.5) continue;
      CAPTURE(p.spec());
      CAPTURE(x);
      // Five-point stencils: truncation h^4, roundoff eps / h.
      auto diff = [](const std::function<double(double)>& f, double at, double h) {
        return (f(at - 2 * h) - 8 * f(at - h) + 8 * f(at + h) - f(at + 2 * h)) / (12 * h);
      };
      const double h = 1e-3;
      const double d1 = diff([&](double t) { return p.F(t); }, x, h);
      const double d2 = diff([&](double t) { return p.dF(t); }, x, h);
      CHECK(std::abs(d1 - p.dF(x)) <= 1e-8 * std::max({1.0, std::abs(p.dF(x)), std::abs(p.F(x))}));
      CHECK(std::abs(d2 - p.d2F(x)) <= 1e-8 * std::max({1.0, std::abs(p.d2F(x)), std::abs(p.dF(x))}));
    }
  }
}

TEST_CASE("rational family F matches the integral of F'") {
  for (double m : {1.0, 2.0, 2.5, 4.0}) {
    const Potential p = Potential::rational_family(1, m);
    for (double x : {0.3, 1.0, 3.0}) {
      const double integral = boost::math::quadrature::gauss_kronrod<double, 31>::integrate(
          [&](double t) { return t / std::pow(1 + t * t, m); }, 0.0, x, 10, 1e-14);
      CAPTURE(m);
      CAPTURE(x);
      CHECK(p.F(x) == doctest::Approx(integral).epsilon(1e-12));
    }
  }
  CHECK(Potential::parse("rat:k=1,m=2").F(1) == doctest::Approx(0.25).epsilon(1e-15));
  CHECK(Potential::poly_family(2).F(1) == 0.75);
}

TEST_CASE("slope is a stable divided difference") {
  for (const auto& p : zoo()) {
    for (double a : {0.3, -0.4, 0.8}) {
      for (double d : {1e-1, 1e-5, 1e-11}) {
        const double b = a + d;
        if (p.kind() == PotentialKind::general_poly && std::abs(b) > 0.9) continue;
        const double direct = (p.F(a) - p.F(b)) / (a - b);
        CAPTURE(p.spec());
        const double tol = d > 1e-3 ? 1e-12 : 1e-4;
        CHECK(p.slope(a, b) == doctest::Approx(direct).epsilon(tol));
        if (d < 1e-10) CHECK(p.slope(a, b) == doctest::Approx(p.dF(a)).epsilon(1e-9));
      }
    }
  }
}

TEST_CASE("parsing and canonical specs") {
  CHECK(Potential::parse("poly:m=3").spec() == "poly:m=3");
  CHECK(Potential::parse("duffing").spec() == "poly:m=2");
  CHECK(Potential::parse("gen:3=-1/2,2=1").spec() == "gen:2=1,3=-1/2");
  CHECK(Potential::parse("rat:k=0.5,m=2").k() == 0.5);
  CHECK(Potential::parse("quintic:k=-1.5").k() == -1.5);
  const int parse = static_cast<int>(ErrorKind::parse);
  const int domain = static_cast<int>(ErrorKind::domain);
  CHECK(exit_kind([] { Potential::parse("poly"); }) == parse);
  CHECK(exit_kind([] { Potential::parse("poly:m=2.5"); }) == parse);
  CHECK(exit_kind([] { Potential::parse("poly:m=1"); }) == domain);
  CHECK(exit_kind([] { Potential::parse("rat:k=1"); }) == parse);
  CHECK(exit_kind([] { Potential::parse("rat:k=0,m=2"); }) == domain);
  CHECK(exit_kind([] { Potential::parse("gen:1=2"); }) == domain);
  CHECK(exit_kind([] { Potential::parse("gen:x=2"); }) == parse);
  CHECK(exit_kind([] { Potential::parse("cubic:k=1"); }) == parse);
  CHECK(exit_kind([] { Potential::parse("quintic:k=1,j=2"); }) == parse);
}

TEST_CASE("restricted domains") {
  const Potential p = Potential::poly_family(2).with_domain({-1, 2});
  CHECK(p.F(1.5) > 0);
  CHECK(exit_kind([&] { p.F(2.5); }) == static_cast<int>(ErrorKind::domain));
  CHECK(exit_kind([&] { is_global_center(p); }) == static_cast<int>(ErrorKind::unsupported));
  CHECK(exit_kind([&] { Potential::poly_family(2).with_domain({0.5, 1}); }) == static_cast<int>(ErrorKind::domain));
  // The level F = F(1.5) is not reached on the left inside (-1, 2).
  CHECK(exit_kind([&] { lf_length(p, p.F(1.5)); }) == static_cast<int>(ErrorKind::energy_out_of_range));
}

TEST_CASE("global center test") {
  for (int m = 2; m <= 10; ++m) CHECK(is_global_center(Potential::poly_family(m)));
  CHECK(is_global_center(Potential::rational_family(1, 1)));
  CHECK_FALSE(is_global_center(Potential::rational_family(1, 2)));
  CHECK_FALSE(is_global_center(Potential::quintic(-3)));
  CHECK_FALSE(is_global_center(Potential::quintic(-2)));
  CHECK(is_global_center(Potential::quintic(-1.999)));
  CHECK(is_global_center(Potential::quintic(5)));
  // F' = x + x^2: second zero at -1.
  CHECK_FALSE(is_global_center(Potential::parse("gen:2=1")));
  // F' = x + x^3 + x^2/10: g = 1 + x/10 + x^2 has no real root.
  CHECK(is_global_center(Potential::parse("gen:2=1/10,3=1")));
  // F' = x - x^3: bounded wells.
  CHECK_FALSE(is_global_center(Potential::parse("gen:3=-1")));
}

TEST_CASE("monotonicity criterion") {
  for (int m : {2, 3, 4}) CHECK(monotonicity_criterion(Potential::poly_family(m)).verdict == Monotonicity::decreasing);
  for (double m : {1.0, 2.0, 3.0}) {
    CHECK(monotonicity_criterion(Potential::rational_family(1, m)).verdict == Monotonicity::increasing);
  }
  CHECK(monotonicity_criterion(Potential::quintic(-1)).verdict == Monotonicity::inconclusive);
  CHECK_THROWS_AS(monotonicity_criterion(Potential::poly_family(2), {10, 999}), Error);
  // Stable under doubling the grid.
  for (const auto& p : zoo()) {
    const auto a = monotonicity_criterion(p, {5, 1001}).verdict;
    const auto b = monotonicity_criterion(p, {5, 2001}).verdict;
    CAPTURE(p.spec());
    CHECK_FALSE(((a == Monotonicity::increasing && b == Monotonicity::decreasing) ||
                 (a == Monotonicity::decreasing && b == Monotonicity::increasing)));
  }
}

TEST_CASE("inverse branches and lf_length") {
  const Potential duffing = Potential::poly_family(2);
  CHECK(lf_length(duffing, 0.75) == doctest::Approx(2).epsilon(1e-14));
  for (const auto& p : zoo()) {
    if (!p.is_odd()) continue;
    for (double h : {1e-3, 0.1, 0.4}) {
      if (p.kind() == PotentialKind::rational_family && p.m() > 1 && h >= 0.5 / (p.m() - 1)) continue;
      CAPTURE(p.spec());
      CHECK(lf_length(p, h) == doctest::Approx(2 * inverse_branch(p, h, 1)).epsilon(1e-12));
      CHECK(inverse_branch(p, h, 1) == doctest::Approx(-inverse_branch(p, h, -1)).epsilon(1e-12));
    }
  }
  // F' = x + x^2: the level F(2/5) is below the saddle level F(-1) = 1/6.
  const Potential g = Potential::parse("gen:2=1");
  const double h = 0.08 + 0.064 / 3;
  const double right = inverse_branch(g, h, 1);
  CHECK(right == doctest::Approx(0.4).epsilon(1e-13));
  double lo = -1, hi = 0;
  for (int i = 0; i < 200; ++i) {
    const double mid = 0.5 * (lo + hi);
    (g.F(mid) > h ? lo : hi) = mid;
  }
  CHECK(lf_length(g, h) == doctest::Approx(0.4 - 0.5 * (lo + hi)).epsilon(1e-12));
  CHECK(inverse_branch(g, h, 1) == doctest::Approx(bisect_inverse(g, h, 1)).epsilon(1e-13));
  // The saddle level is a tangency on the left.
  CHECK(inverse_branch(g, 1.0 / 6, -1) == doctest::Approx(-1).epsilon(1e-6));
  CHECK(exit_kind([&] { inverse_branch(g, 0.2, -1); }) == static_cast<int>(ErrorKind::energy_out_of_range));
  // Bounded rational potential: F < 1/2 for m = 2.
  CHECK(exit_kind([] { lf_length(Potential::rational_family(1, 2), 0.6); }) == static_cast<int>(ErrorKind::energy_out_of_range));
  CHECK(exit_kind([&] { lf_length(duffing, -1); }) == static_cast<int>(ErrorKind::energy_out_of_range));
}

TEST_CASE("lf_length grows like 2 (2 m h)^(1/(2m))") {
  const Potential p = Potential::poly_family(2);
  CHECK(lf_length(p, 1e6) == doctest::Approx(2 * std::pow(4e6, 0.25)).epsilon(0.01));
  for (int m : {2, 3, 4}) {
    const Potential q = Potential::poly_family(m);
    const double h = 1e8;
    const double dh = 1e-4 * h;
    const double numeric = (lf_length(q, h + dh) - lf_length(q, h - dh)) / (2 * dh);
    const double law = std::pow(2.0 * m, 1.0 / (2 * m)) / m * std::pow(h, -(2.0 * m - 1) / (2 * m));
    CAPTURE(m);
    CHECK(numeric == doctest::Approx(law).epsilon(0.01));
  }
}
