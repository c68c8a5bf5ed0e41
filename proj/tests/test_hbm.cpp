#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>
#include <numbers>
#include <random>

#include "period_balance/errors.hpp"
#include "period_balance/hbm.hpp"

using namespace period_balance;

namespace {

// a == c b for some nonzero rational c.
bool proportional(const MPoly& a, const MPoly& b) {
  if (a.is_zero() || b.is_zero()) return a.is_zero() && b.is_zero();
  const auto& [mono, coeff] = a.leading_term();
  const Rational c = b.coefficient(mono) / coeff;
  return c != 0 && a * c == b;
}

UPoly in_omega(const MPoly& curve, const Rational& A) {
  const auto cs = curve.substitute(HbmSystem::kA, A).coefficients_in(HbmSystem::kOmega);
  std::vector<Rational> c;
  for (const auto& p : cs) c.push_back(p.constant_term());
  return UPoly(c);
}

std::vector<double> grid(double lo, double hi, int n) {
  std::vector<double> g;
  for (int i = 0; i < n; ++i) g.push_back(lo * std::pow(hi / lo, double(i) / (n - 1)));
  return g;
}

Rational R(long n, long d = 1) {
  Rational q(n, d);
  q.canonicalize();
  return q;
}

}  // namespace

TEST_CASE("Duffing order 2 equations and sextic") {
  const HbmSystem s = build_system(Potential::poly_family(2), 2);
  REQUIRE(s.ring->size() == 3);
  const MPoly A = MPoly::variable(s.ring, 0), w = MPoly::variable(s.ring, 1), a3 = MPoly::variable(s.ring, 2);
  const MPoly one = MPoly::constant(1, s.ring);
  const MPoly e1 = w.pow(2) * R(-4) + a3.pow(2) * R(6) - a3 * A * R(3) + A.pow(2) * R(3) + one * R(4);
  const MPoly e2 = w.pow(2) * a3 * R(-9) + a3.pow(3) * R(2) - a3.pow(2) * A * R(9, 4) + a3 * A.pow(2) * R(3, 4) + a3 +
                   A.pow(3) * R(1, 4);
  REQUIRE(s.equations.size() == 2);
  CHECK(proportional(s.equations[0], e1));
  CHECK(s.equations[1] == e2);

  const MPoly sextic = duffing_order2_sextic();
  const RingPtr r2 = sextic.ring();
  const MPoly B = MPoly::variable(r2, 0), W = MPoly::variable(r2, 1);
  const MPoly reference = W.pow(6) * R(1058) - (B.pow(2) * R(219) + MPoly::constant(322, r2)) * W.pow(4) * R(3) -
                        (B.pow(4) * R(21) + B.pow(2) * R(80) + MPoly::constant(40, r2)) * W.pow(2) * R(9, 4) -
                        B.pow(6) * R(1323, 64) - B.pow(4) * R(189, 4) - B.pow(2) * R(27) - MPoly::constant(2, r2);
  CHECK(sextic == reference);
  CHECK(proportional(duffing_order2().eliminant, sextic));
}

TEST_CASE("the sextic has one positive root") {
  const MPoly sextic = duffing_order2_sextic();
  for (const Rational& A : {R(0), R(1, 2), R(1), R(10), R(1000)}) {
    CAPTURE(to_string(A));
    const UPoly u = in_omega(sextic, A);
    const auto roots = positive_real_roots(u);
    REQUIRE(roots.size() == 1);
    const double expect = A == 0 ? 1.0 : solve_order2_duffing(A.get_d()).omega;
    CHECK(roots[0] == doctest::Approx(expect).epsilon(1e-12));
  }
}

TEST_CASE("Duffing order 3 equations") {
  const HbmSystem s = build_system(Potential::poly_family(2), 3);
  REQUIRE(s.ring->size() == 4);
  const MPoly A = MPoly::variable(s.ring, 0), w = MPoly::variable(s.ring, 1);
  const MPoly a3 = MPoly::variable(s.ring, 2), a5 = MPoly::variable(s.ring, 3);
  const MPoly one = MPoly::constant(1, s.ring);
  const MPoly w2 = w.pow(2);
  const MPoly P = A - w2 * A + A.pow(3) * R(3, 4) + (w2 - A.pow(2) * R(3, 2) - one) * a3 +
                  (w2 - A.pow(2) * R(9, 4) - one) * a5 + a3 * a5 * A * R(9, 2) + A * a3.pow(2) * R(9, 4) +
                  a5.pow(2) * A * R(15, 4) - a5.pow(3) * R(9, 4) - a3.pow(2) * a5 * R(3) - a3 * a5.pow(2) * R(9, 2) -
                  a3.pow(3) * R(3, 2);
  const MPoly Q = A.pow(3) * R(1, 4) + (one + A.pow(2) * R(3, 4) - w2 * R(9)) * a3 - a3 * a5 * A * R(3, 2) -
                  a5.pow(2) * A * R(3, 4) - A * a3.pow(2) * R(9, 4) + a3.pow(2) * a5 * R(3, 2) +
                  a3 * a5.pow(2) * R(9, 4) + a3.pow(3) * R(2) + a5.pow(3) * R(1, 2);
  const MPoly Rr = A.pow(2) * a3 * R(3, 4) + (w2 * R(-25) + A.pow(2) * R(3, 2) + one) * a5 - a5.pow(2) * A * R(3) -
                   a3 * a5 * A * R(9, 2) - A * a3.pow(2) * R(3, 4) + a3.pow(2) * a5 * R(15, 4) + a5.pow(3) * R(9, 4) +
                   a3 * a5.pow(2) * R(15, 4);
  REQUIRE(s.equations.size() == 3);
  CHECK(proportional(s.equations[0], P));
  CHECK(proportional(s.equations[1], Q));
  CHECK(proportional(s.equations[2], Rr));
}

TEST_CASE("sine projections vanish for the cosine ansatz") {
  for (const char* spec : {"poly:m=2", "poly:m=3", "quintic:k=-1", "gen:2=1,3=1", "rat:k=1,m=2"}) {
    const Potential p = Potential::parse(spec);
    for (int N = 1; N <= 3; ++N) {
      CAPTURE(spec);
      CAPTURE(N);
      for (const MPoly& e : sine_projections(p, build_system(p, N))) CHECK(e.is_zero());
    }
  }
}

TEST_CASE("first-order closed forms agree with Newton") {
  const auto g = grid(0.05, 20, 30);
  for (const char* spec : {"poly:m=2", "poly:m=4", "quintic:k=-1", "quintic:k=2", "rat:k=1,m=1", "rat:k=1,m=3"}) {
    const Potential p = Potential::parse(spec);
    const auto numeric = solve_numeric(p, 1, g);
    REQUIRE(numeric.size() == g.size());
    for (size_t i = 0; i < g.size(); ++i) {
      CAPTURE(spec);
      CAPTURE(g[i]);
      CHECK(solve_order1(p, g[i]).T == doctest::Approx(numeric[i].T).epsilon(1e-12));
    }
  }
  // N = 1 Duffing: omega^2 = 1 + 3 A^2 / 4.
  CHECK(solve_order1(Potential::poly_family(2), 2).omega == doctest::Approx(2).epsilon(1e-15));
  const Potential q = Potential::quintic(-1);
  const double h = 1e-5;
  CHECK(order1_period_derivative(q, 0.7) ==
        doctest::Approx((solve_order1(q, 0.7 + h).T - solve_order1(q, 0.7 - h).T) / (2 * h)).epsilon(1e-7));
}

TEST_CASE("Duffing resultant paths agree with Newton") {
  const auto g = grid(0.01, 50, 25);
  const Potential p = Potential::poly_family(2);
  const auto n2 = solve_numeric(p, 2, g);
  const auto n3 = solve_numeric(p, 3, g);
  const auto b3 = DuffingOrder3::instance().branch(g);
  for (size_t i = 0; i < g.size(); ++i) {
    CAPTURE(g[i]);
    const HbmSolution s2 = solve_order2_duffing(g[i]);
    CHECK(s2.omega == doctest::Approx(n2[i].omega).epsilon(1e-10));
    CHECK(s2.a[3] == doctest::Approx(n2[i].a[3]).epsilon(1e-8).scale(g[i]));
    CHECK(b3[i].omega == doctest::Approx(n3[i].omega).epsilon(1e-10));
  }
}

TEST_CASE("errors shrink with the order at A = 1") {
  const double exact = duffing_period(1.0);
  double prev = INFINITY;
  for (int N = 1; N <= 3; ++N) {
    const double e = std::abs(solve_hbm(Potential::poly_family(2), N, {1.0})[0].T - exact);
    CAPTURE(N);
    CHECK(e < prev);
    prev = e;
  }
  const Potential q = Potential::quintic(0);
  const double T = period_quadrature(q, 1.0);
  prev = INFINITY;
  for (int N = 1; N <= 4; ++N) {
    const double e = std::abs(solve_hbm(q, N, {1.0})[0].T - T);
    CAPTURE(N);
    CHECK(e < prev);
    prev = e;
  }
}

TEST_CASE("HBM Taylor series") {
  const PeriodSeries s2 = duffing_order2_series(8);
  const std::vector<Rational> expect2 = {R(2), R(0), R(-3, 4), R(0), R(57, 128), R(0), R(-633, 2048), R(0)};
  for (int k = 0; k < 8; ++k) CHECK(s2.coeff(k) == expect2[static_cast<size_t>(k)]);
  CHECK(hbm_series(Potential::poly_family(2), 2, 8) == s2);

  const PeriodSeries exact = lindstedt_series(Potential::poly_family(2), 10);
  const PeriodSeries s3 = DuffingOrder3::instance().series(10);
  CHECK(hbm_series(Potential::poly_family(2), 3, 10) == s3);
  for (int k = 0; k <= 7; ++k) CHECK(s3.coeff(k) == exact.coeff(k));
  CHECK(s3.coeff(6) == R(-315, 1024));
  CHECK(s3.coeff(8) == R(30339, 131072));
  CHECK(exact.coeff(8) == R(30345, 131072));
  CHECK(s3.coeff(10) == R(-193185, 1048576));

  // Order N agrees with the exact series through A^(2N).
  for (int N = 1; N <= 3; ++N) {
    const PeriodSeries s = hbm_taylor(Potential::poly_family(2), N, 2 * N + 2);
    CAPTURE(N);
    for (int k = 0; k <= 2 * N; ++k) CHECK(s.coeff(k) == exact.coeff(k));
    CHECK(s.coeff(2 * N + 2) != exact.coeff(2 * N + 2));
  }
}

TEST_CASE("second-order coefficients for general polynomial potentials") {
  std::mt19937_64 rng(3);
  std::uniform_int_distribution<int> d(-4, 4);
  for (int trial = 0; trial < 12; ++trial) {
    const Rational k2 = R(d(rng), 2), k3 = R(d(rng), 3), k4 = R(d(rng)), k5 = R(d(rng), 2);
    const std::string spec = "gen:2=" + to_string(k2) + ",3=" + to_string(k3) + ",4=" + to_string(k4) + ",5=" + to_string(k5);
    CAPTURE(spec);
    const Potential p = Potential::parse(spec);
    const PeriodSeries n1 = hbm_series(p, 1, 2);
    const PeriodSeries n2 = hbm_series(p, 2, 2);
    const PeriodSeries ex = lindstedt_series(p, 4);
    CHECK(n1.coeff(2) == k2 * k2 - R(3, 4) * k3);
    CHECK(n2.coeff(2) == R(5, 6) * k2 * k2 - R(3, 4) * k3);
    CHECK(ex.coeff(2) == n2.coeff(2));
    CHECK(ex.coeff(3) == R(5, 9) * k2 * k2 * k2 - R(1, 2) * k2 * k3);
    CHECK(ex.coeff(4) == R(385, 288) * k2 * k2 * k2 * k2 - R(275, 96) * k2 * k2 * k3 + R(7, 4) * k2 * k4 +
                             R(57, 128) * k3 * k3 - R(5, 8) * k5);
  }
  CHECK(hbm_series(Potential::parse("gen:2=1,3=1"), 2, 2).coeff(2) == R(1, 12));
  CHECK(hbm_series(Potential::parse("gen:2=1,3=1"), 1, 2).coeff(2) == R(1, 4));
  CHECK_THROWS_AS(hbm_series(Potential::rational_family(1, 2.5), 1, 4), Error);
}

TEST_CASE("limits at infinity") {
  const double d2 = duffing_order2_infinity();
  CHECK(d2 == doctest::Approx(7.40178069).epsilon(1e-8));
  CHECK(duffing_order2_infinity_closed_form() == doctest::Approx(d2).epsilon(1e-12));
  CHECK(solve_order2_duffing(1e5).T * 1e5 == doctest::Approx(d2).epsilon(1e-6));
  const DuffingOrder3& o3 = DuffingOrder3::instance();
  CHECK(o3.infinity_constant() == doctest::Approx(7.41564707).epsilon(1e-8));
  CHECK(o3.branch(1e4).T * 1e4 == doctest::Approx(o3.infinity_constant()).epsilon(1e-5));
}

TEST_CASE("order 3 cascade") {
  const DuffingOrder3& o3 = DuffingOrder3::instance();
  CHECK(o3.curve().total_degree() == 70);
  CHECK(o3.curve().size() == 666);
  CHECK(o3.curve().ring()->size() == 2);
  // Vanishes on the tracked branch.
  for (double A : {0.3, 1.0, 4.0}) {
    const HbmSolution s = o3.branch(A);
    double scale = 0;
    for (const auto& [m, c] : o3.curve().terms()) {
      scale += std::abs(c.get_d()) * std::pow(A, m[0]) * std::pow(s.omega, m[1]);
    }
    CAPTURE(A);
    CHECK(std::abs(o3.curve().evaluate(std::vector<double>{A, s.omega})) <= 1e-10 * scale);
  }
  CHECK(o3.curve().canonical_text() == o3.curve().canonical_text());
  CHECK(o3.curve().canonical_text().find("omega") != std::string::npos);
}

TEST_CASE("implicit series") {
  // u^2 + u - A = 0, u(0) = 0: u = A - A^2 + 2 A^3 - 5 A^4 + 14 A^5.
  const RingPtr r = make_ring({"A", "u"});
  const MPoly A = MPoly::variable(r, 0), u = MPoly::variable(r, 1);
  const auto s = implicit_series({u.pow(2) + u - A}, 0, {1}, {R(0)}, 5);
  REQUIRE(s.size() == 1);
  const std::vector<Rational> expect = {R(0), R(1), R(-1), R(2), R(-5), R(14)};
  for (int k = 0; k <= 5; ++k) CHECK(s[0][k] == expect[static_cast<size_t>(k)]);
  // Singular Jacobian at the origin.
  CHECK_THROWS_AS(implicit_series({u.pow(2) - A}, 0, {1}, {R(0)}, 4), Error);
}

TEST_CASE("solver input validation") {
  const Potential p = Potential::poly_family(2);
  CHECK_THROWS_AS(solve_hbm(p, 0, {1.0}), Error);
  CHECK_THROWS_AS(solve_hbm(p, 9, {1.0}), Error);
  CHECK_THROWS_AS(solve_hbm(p, 2, {2.0, 1.0}), Error);
  CHECK_THROWS_AS(solve_hbm(p, 2, {-1.0}), Error);
}
