#include "period_balance/period.hpp"

#include <boost/math/quadrature/tanh_sinh.hpp>

#include <algorithm>
#include <cmath>
#include <map>
#include <mutex>
#include <numbers>

#include "period_balance/errors.hpp"
#include "period_balance/power_series.hpp"

namespace period_balance {

namespace {

using std::numbers::pi;

// Orbit between the turning points x_minus < 0 < x_plus, parametrized by
// x = x_minus + L sin^2(pi s / 2) so that the integrand is smooth and even
// about both ends of [0, 1].
struct Orbit {
  const Potential* p;
  double xm;
  double xp;
  double L;

  double integrand(double s) const {
    const double c = std::cos(pi * s / 2);
    const double sn = std::sin(pi * s / 2);
    if (s < 0.5) {
      const double x = xm + L * sn * sn;
      return pi * c * std::sqrt(L) / std::sqrt(-p->slope(xm, x));
    }
    const double x = xp - L * c * c;
    return pi * sn * std::sqrt(L) / std::sqrt(p->slope(xp, x));
  }

  double trapezoid(int n) const {
    double sum = 0.5 * (integrand(0) + integrand(1));
    for (int i = 1; i < n; ++i) sum += integrand(static_cast<double>(i) / n);
    return std::sqrt(2.0) * sum / n;
  }
};

Orbit make_orbit(const Potential& p, double A) {
  if (!(A > 0) || !std::isfinite(A)) fail(ErrorKind::domain, "amplitude must be positive and finite");
  if (!p.domain().contains(A)) fail(ErrorKind::annulus, "amplitude lies outside the domain of F");
  constexpr int kChecks = 64;
  for (int i = 1; i <= kChecks; ++i) {
    if (!(p.dF(A * i / kChecks) > 0)) fail(ErrorKind::annulus, "F' vanishes on (0, A]; A is outside the period annulus");
  }
  double xm = -A;
  if (!p.is_odd()) {
    try {
      xm = inverse_branch(p, p.F(A), -1);
    } catch (const Error& e) {
      if (e.kind() != ErrorKind::energy_out_of_range) throw;
      fail(ErrorKind::annulus, "no turning point on x < 0 at the energy of A");
    }
  }
  return Orbit{&p, xm, A, A - xm};
}

}  // namespace

mpf_class pi_mpf(mp_bitcnt_t prec) {
  // Gauss-Legendre iteration.
  static std::mutex mu;
  static std::map<mp_bitcnt_t, mpf_class> cache;
  std::lock_guard<std::mutex> lock(mu);
  auto it = cache.find(prec);
  if (it != cache.end()) return it->second;
  mpf_class a(1, prec), b(0, prec), t(0.25, prec), p(1, prec), tmp(0, prec);
  b = sqrt(mpf_class(0.5, prec));
  const int iterations = 8 + static_cast<int>(std::log2(static_cast<double>(prec)));
  for (int i = 0; i < iterations; ++i) {
    tmp = (a + b) / 2;
    b = sqrt(a * b);
    t -= p * (a - tmp) * (a - tmp);
    a = tmp;
    p *= 2;
  }
  mpf_class result((a + b) * (a + b) / (4 * t), prec);
  cache.emplace(prec, result);
  return result;
}

double PeriodSeries::evaluate(double A) const {
  double acc = 0;
  for (int k = order(); k >= 0; --k) acc = acc * A + coeffs[static_cast<size_t>(k)].get_d();
  return pi * acc;
}

QuadratureResult period_quadrature_detail(const Potential& p, double A, double tol) {
  if (!(tol > 1e-15 && tol < 1e-3)) fail(ErrorKind::domain, "tolerance must lie in (1e-15, 1e-3)");
  const double a_scale = p.amplitude_scale();
  const double t_scale = p.time_scale();
  const Orbit orbit = make_orbit(p, A / a_scale);
  const double local_tol = tol / t_scale;

  QuadratureResult r;
  r.x_minus = orbit.xm * a_scale;
  // Trapezoid doubling: the integrand extends to a smooth periodic function,
  // so the error decays faster than any power of the node count.
  int n = 8;
  double sum = 0.5 * (orbit.integrand(0) + orbit.integrand(1));
  for (int i = 1; i < n; ++i) sum += orbit.integrand(static_cast<double>(i) / n);
  double prev = std::sqrt(2.0) * sum / n;
  constexpr int kMaxNodes = 1 << 20;
  while (n < kMaxNodes) {
    for (int i = 1; i < 2 * n; i += 2) sum += orbit.integrand(static_cast<double>(i) / (2 * n));
    n *= 2;
    const double cur = std::sqrt(2.0) * sum / n;
    if (n >= 16 && std::abs(cur - prev) < local_tol) {
      r.T = cur * t_scale;
      r.nodes = n;
      r.method = "trapezoid";
      return r;
    }
    prev = cur;
  }
  boost::math::quadrature::tanh_sinh<double> integrator;
  double err = 0;
  const double v = integrator.integrate([&](double s) { return orbit.integrand(s); }, 0.0, 1.0,
                                        std::sqrt(std::numeric_limits<double>::epsilon()), &err);
  if (!(err * std::sqrt(2.0) <= local_tol)) fail(ErrorKind::convergence, "period quadrature did not reach the requested tolerance");
  r.T = std::sqrt(2.0) * v * t_scale;
  r.nodes = n;
  r.method = "tanh_sinh";
  return r;
}

double period_quadrature(const Potential& p, double A, double tol) {
  return period_quadrature_detail(p, A, tol).T;
}

double period_fixed_nodes(const Potential& p, double A, int n) {
  if (n < 2) fail(ErrorKind::domain, "need at least 2 panels");
  const Orbit orbit = make_orbit(p, A / p.amplitude_scale());
  return orbit.trapezoid(n) * p.time_scale();
}

double period_derivative(const Potential& p, double A) {
  const double h = std::max(1e-5, 1e-4 * A);
  const int n = std::max(64, 2 * period_quadrature_detail(p, A, 1e-13).nodes);
  if (A - h <= 0) return (period_fixed_nodes(p, A + h, n) - period_fixed_nodes(p, A, n)) / h;
  return (period_fixed_nodes(p, A + h, n) - period_fixed_nodes(p, A - h, n)) / (2 * h);
}

double elliptic_K(double kappa) {
  if (!(kappa < 1)) fail(ErrorKind::domain, "elliptic K needs kappa < 1");
  double a = 1;
  double b = std::sqrt(1 - kappa);
  for (int i = 0; i < 64 && std::abs(a - b) > 1e-16 * a; ++i) {
    const double an = 0.5 * (a + b);
    b = std::sqrt(a * b);
    a = an;
  }
  return pi / (a + b);
}

mpf_class elliptic_K(const mpf_class& kappa) {
  if (kappa >= 1) fail(ErrorKind::domain, "elliptic K needs kappa < 1");
  const mp_bitcnt_t prec = kappa.get_prec();
  mpf_class a(1, prec), b(0, prec), an(0, prec);
  b = sqrt(mpf_class(1 - kappa, prec));
  mpf_class eps(1, prec);
  mpf_div_2exp(eps.get_mpf_t(), eps.get_mpf_t(), prec);
  for (int i = 0; i < 200; ++i) {
    mpf_class diff(abs(a - b), prec);
    if (diff <= eps * a) break;
    an = (a + b) / 2;
    b = sqrt(a * b);
    a = an;
  }
  return mpf_class(pi_mpf(prec) / (a + b), prec);
}

double duffing_period(double A) {
  if (A < 0 || !std::isfinite(A)) fail(ErrorKind::domain, "amplitude must be nonnegative and finite");
  const double a2 = A * A;
  return 4 / std::sqrt(1 + a2 / 2) * elliptic_K(-a2 / (2 + a2));
}

mpf_class duffing_period(const mpf_class& A) {
  if (A < 0) fail(ErrorKind::domain, "amplitude must be nonnegative");
  const mp_bitcnt_t prec = A.get_prec();
  mpf_class a2(A * A, prec);
  mpf_class kappa(-a2 / (2 + a2), prec);
  mpf_class root(sqrt(mpf_class(1 + a2 / 2, prec)), prec);
  return mpf_class(4 / root * elliptic_K(kappa), prec);
}

PeriodSeries lindstedt_series(const Potential& p, int order) {
  if (order < 0 || order > 12) fail(ErrorKind::domain, "series order must lie in 0..12");
  if (!p.is_polynomial()) fail(ErrorKind::unsupported, "series needs a polynomial potential");
  const UPoly force = p.force_poly();
  using TP = TrigPoly<Rational>;
  // x = sum A^n x_n(tau), omega^2 = 1 + sum A^n w_n, with
  // omega^2 x'' + F'(x) = 0 and x(0) = A, x'(0) = 0.
  const int top = order + 1;
  std::vector<TP> xs(static_cast<size_t>(top) + 1);
  std::vector<Rational> w(static_cast<size_t>(top) + 1);
  xs[1] = TP::cos_term(1, 1);
  for (int n = 2; n <= top; ++n) {
    // [A^n] of the nonlinear part, using x_1..x_{n-1}.
    std::vector<TP> X(static_cast<size_t>(n) + 1);
    for (int l = 1; l < n; ++l) X[static_cast<size_t>(l)] = xs[static_cast<size_t>(l)];
    std::vector<TP> power = X;
    TP nonlinear;
    for (int i = 2; i <= force.degree(); ++i) {
      std::vector<TP> next(static_cast<size_t>(n) + 1);
      for (int a = 1; a <= n; ++a) {
        if (power[static_cast<size_t>(a)].trimmed() == TP()) continue;
        for (int b = 1; a + b <= n; ++b) next[static_cast<size_t>(a + b)] += power[static_cast<size_t>(a)] * X[static_cast<size_t>(b)];
      }
      power = std::move(next);
      if (force.coeff(i) != 0) nonlinear += power[static_cast<size_t>(n)].scaled(force.coeff(i));
    }
    TP rhs = nonlinear.scaled(Rational(-1));
    for (int j = 1; j <= n - 2; ++j) rhs -= xs[static_cast<size_t>(n - j)].derivative(2).scaled(w[static_cast<size_t>(j)]);
    rhs = rhs.trimmed();
    for (int k = 1; k <= rhs.degree(); ++k) {
      if (rhs.b(k) != 0) fail(ErrorKind::consistency, "sine terms in a cosine-symmetric expansion");
    }
    // The term -w_{n-1} x_1'' = w_{n-1} cos(tau) must cancel the resonance.
    w[static_cast<size_t>(n - 1)] = -rhs.cos_coeff(1);
    TP xn(std::max(rhs.degree(), 1));
    Rational at_zero = 0;
    for (int k = 0; k <= rhs.degree(); ++k) {
      if (k == 1) continue;
      const Rational c = rhs.a(k) / (1 - k * k);
      xn.set_a(k, c);
      at_zero += c;
    }
    xn.set_a(1, -at_zero);
    xs[static_cast<size_t>(n)] = xn.trimmed();
  }
  PowerSeries omega2(order);
  omega2[0] = 1;
  for (int j = 1; j <= order; ++j) omega2[j] = w[static_cast<size_t>(j)];
  const PowerSeries t = omega2.pow(Rational(-1, 2)) * Rational(2);
  return PeriodSeries{t.coeffs()};
}

namespace {

// int_0^theta f; f must have zero mean.
TrigPoly<Rational> integrate_from_zero(const TrigPoly<Rational>& f) {
  if (f.a(0) != 0) fail(ErrorKind::consistency, "secular term in trigonometric integration");
  TrigPoly<Rational> r(f.degree());
  Rational constant = 0;
  for (int k = 1; k <= f.degree(); ++k) {
    if (f.a(k) != 0) r.set_b(k, f.a(k) / k);
    if (f.b(k) != 0) {
      r.set_a(k, -f.b(k) / k);
      constant += f.b(k) / k;
    }
  }
  r.set_a(0, constant);
  return r.trimmed();
}

}  // namespace

CherkasResult cherkas_expansion(int m, int terms) {
  if (m < 2) fail(ErrorKind::domain, "Abel recursion needs m >= 2");
  if (terms != 1 && terms != 2) fail(ErrorKind::domain, "terms must be 1 or 2");
  using TP = TrigPoly<Rational>;
  const TP sin1 = TP::sin_term(1, 1);
  const TP P = (sin1 * cos_power(4 * m - 1)).scaled(Rational(2 - 2 * m));
  const TP Q = (sin1 * cos_power(2 * m - 1)).scaled(Rational(2 * (2 * m - 1)));
  CherkasResult r;
  r.u2 = integrate_from_zero(Q);
  r.u3 = integrate_from_zero(P + (Q * r.u2).scaled(Rational(2)));
  const TP c2m = cos_power(2 * m);
  // int_0^{2 pi} f = 2 pi mean(f); in units of pi that is 2 a_0.
  r.s1 = c2m.a(0) * 2;
  r.s2 = (c2m * r.u2).a(0) * 2;

  // T / pi = 2 - sum_k (S_k / pi) rho^k, rho = A^{2m-2} / (1 + A^{2m-2}).
  const int step = 2 * m - 2;
  const int order = (terms + 1) * step - 1;
  PowerSeries base(order);
  base[0] = 1;
  if (step <= order) base[step] = 1;
  PowerSeries rho = base.inverse();
  for (int k = order; k >= step; --k) rho[k] = rho[k - step];
  for (int k = 0; k < step; ++k) rho[k] = 0;
  PowerSeries t = PowerSeries::constant(2, order);
  t -= rho * r.s1;
  if (terms == 2) t -= rho * rho * r.s2;
  r.series = PeriodSeries{t.coeffs()};
  return r;
}

PeriodSeries cherkas_series(int m, int terms) { return cherkas_expansion(m, terms).series; }

const char* to_string(CriticalKind kind) { return kind == CriticalKind::max ? "max" : "min"; }

std::vector<CriticalPeriod> critical_periods(const std::function<double(double)>& T,
                                             const std::function<double(double)>& dT,
                                             double lo, double hi, double tol) {
  if (!(hi > 0) || !(hi > lo) || !std::isfinite(hi)) fail(ErrorKind::domain, "invalid amplitude range");
  if (!(tol > 0)) fail(ErrorKind::domain, "tolerance must be positive");
  const double start = std::max(lo, 1e-3 * hi);
  auto brackets = [&](int n) {
    std::vector<std::pair<double, double>> out;
    double a_prev = start;
    double d_prev = dT(start);
    for (int i = 1; i <= n; ++i) {
      const double a = start * std::pow(hi / start, static_cast<double>(i) / n);
      const double d = dT(a);
      if ((d_prev > 0 && d < 0) || (d_prev < 0 && d > 0)) out.emplace_back(a_prev, a);
      if (d != 0) {
        a_prev = a;
        d_prev = d;
      }
    }
    return out;
  };
  int n = 64;
  auto found = brackets(n);
  int stable = 0;
  while (n < 1024 && stable < 2) {
    n *= 2;
    auto next = brackets(n);
    stable = next.size() == found.size() ? stable + 1 : 0;
    found = std::move(next);
  }
  std::vector<CriticalPeriod> out;
  for (auto [a, b] : found) {
    const double da = dT(a);
    for (int it = 0; it < 200 && b - a > tol; ++it) {
      const double mid = 0.5 * (a + b);
      const double dm = dT(mid);
      if (dm == 0) {
        a = b = mid;
        break;
      }
      if ((dm > 0) == (da > 0)) {
        a = mid;
      } else {
        b = mid;
      }
    }
    CriticalPeriod c;
    c.A = 0.5 * (a + b);
    c.kind = da > 0 ? CriticalKind::max : CriticalKind::min;
    c.T = T(c.A);
    out.push_back(c);
  }
  return out;
}

std::vector<CriticalPeriod> critical_periods(const Potential& p, double lo, double hi, double tol) {
  return critical_periods([&](double A) { return period_quadrature(p, A, 1e-12); },
                          [&](double A) { return period_derivative(p, A); }, lo, hi, tol);
}

}  // namespace period_balance
