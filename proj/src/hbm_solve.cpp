#include <Eigen/Dense>

#include <algorithm>
#include <cmath>
#include <numbers>
#include <sstream>

#include "period_balance/errors.hpp"
#include "period_balance/hbm.hpp"
#include "period_balance/power_series.hpp"

namespace period_balance {

namespace {

using std::numbers::pi;

// MPoly flattened for repeated double evaluation.
class CompiledPoly {
 public:
  CompiledPoly() = default;
  explicit CompiledPoly(const MPoly& p) : nvars_(p.ring() ? p.ring()->size() : 0) {
    max_deg_.assign(static_cast<size_t>(nvars_), 0);
    for (const auto& [m, c] : p.terms()) {
      coeff_.push_back(c.get_d());
      for (int v = 0; v < nvars_; ++v) {
        exps_.push_back(m[static_cast<size_t>(v)]);
        max_deg_[static_cast<size_t>(v)] = std::max<int>(max_deg_[static_cast<size_t>(v)], m[static_cast<size_t>(v)]);
      }
    }
  }

  // Value and the sum of absolute term values.
  double eval(const std::vector<double>& x, double* scale) const {
    std::vector<std::vector<double>> pw(static_cast<size_t>(nvars_));
    for (int v = 0; v < nvars_; ++v) {
      auto& p = pw[static_cast<size_t>(v)];
      p.resize(static_cast<size_t>(max_deg_[static_cast<size_t>(v)]) + 1);
      p[0] = 1;
      for (size_t k = 1; k < p.size(); ++k) p[k] = p[k - 1] * x[static_cast<size_t>(v)];
    }
    double acc = 0;
    double mag = 0;
    for (size_t t = 0; t < coeff_.size(); ++t) {
      double term = coeff_[t];
      for (int v = 0; v < nvars_; ++v) {
        const int e = exps_[t * static_cast<size_t>(nvars_) + static_cast<size_t>(v)];
        if (e) term *= pw[static_cast<size_t>(v)][static_cast<size_t>(e)];
      }
      acc += term;
      mag += std::abs(term);
    }
    if (scale) *scale = mag;
    return acc;
  }

 private:
  int nvars_ = 0;
  std::vector<double> coeff_;
  std::vector<int> exps_;
  std::vector<int> max_deg_;
};

// Square system in the ring variables `unknowns`, other variables fixed.
struct NumericSystem {
  std::vector<CompiledPoly> eqs;
  std::vector<std::vector<CompiledPoly>> jac;
  std::vector<int> unknowns;

  NumericSystem(const std::vector<MPoly>& equations, std::vector<int> vars) : unknowns(std::move(vars)) {
    for (const auto& e : equations) {
      eqs.emplace_back(e);
      std::vector<CompiledPoly> row;
      for (int v : unknowns) row.emplace_back(e.derivative(v));
      jac.push_back(std::move(row));
    }
  }

  // max_i |F_i| / sum of |terms of F_i|
  double residual(const std::vector<double>& x, Eigen::VectorXd& f) const {
    f.resize(static_cast<long>(eqs.size()));
    double worst = 0;
    for (size_t i = 0; i < eqs.size(); ++i) {
      double scale = 0;
      f[static_cast<long>(i)] = eqs[i].eval(x, &scale);
      const double rel = scale > 0 ? std::abs(f[static_cast<long>(i)]) / scale : std::abs(f[static_cast<long>(i)]);
      worst = std::max(worst, rel);
    }
    return worst;
  }

  // Damped Newton on x[unknowns]; x is updated in place.
  bool newton(std::vector<double>& x, double tol = 1e-12, int max_steps = 50) const {
    const long n = static_cast<long>(unknowns.size());
    Eigen::VectorXd f;
    double res = residual(x, f);
    for (int step = 0; step < max_steps; ++step) {
      if (!std::isfinite(res)) return false;
      if (res <= tol) return true;
      Eigen::MatrixXd J(static_cast<long>(eqs.size()), n);
      for (size_t i = 0; i < eqs.size(); ++i) {
        for (long j = 0; j < n; ++j) J(static_cast<long>(i), j) = jac[i][static_cast<size_t>(j)].eval(x, nullptr);
      }
      const Eigen::VectorXd delta = J.fullPivLu().solve(-f);
      if (!delta.allFinite()) return false;
      double lambda = 1;
      bool improved = false;
      const double norm0 = f.norm();
      for (int halving = 0; halving <= 10; ++halving) {
        std::vector<double> trial = x;
        for (long j = 0; j < n; ++j) trial[static_cast<size_t>(unknowns[static_cast<size_t>(j)])] += lambda * delta[j];
        Eigen::VectorXd ft;
        const double rt = residual(trial, ft);
        if (std::isfinite(rt) && (ft.norm() < norm0 || rt <= tol)) {
          x = std::move(trial);
          f = std::move(ft);
          res = rt;
          improved = true;
          break;
        }
        lambda /= 2;
      }
      if (!improved) return res <= tol;
    }
    return res <= tol;
  }
};

std::string fmt(double x) {
  std::ostringstream os;
  os.precision(6);
  os << x;
  return os.str();
}

Rational rational_scale(const Potential& p) {
  return p.kind() == PotentialKind::rational_family ? Rational(rational_from_double(std::abs(p.k()))) : Rational(1);
}

// Exact Gaussian elimination for the Jacobian at A = 0.
std::vector<Rational> solve_exact(std::vector<std::vector<Rational>> m, std::vector<Rational> rhs) {
  const size_t n = rhs.size();
  for (size_t k = 0; k < n; ++k) {
    size_t piv = k;
    while (piv < n && m[piv][k] == 0) ++piv;
    if (piv == n) fail(ErrorKind::consistency, "singular Jacobian at A = 0");
    std::swap(m[k], m[piv]);
    std::swap(rhs[k], rhs[piv]);
    for (size_t i = k + 1; i < n; ++i) {
      if (m[i][k] == 0) continue;
      const Rational f = m[i][k] / m[k][k];
      for (size_t j = k; j < n; ++j) m[i][j] -= f * m[k][j];
      rhs[i] -= f * rhs[k];
    }
  }
  std::vector<Rational> x(n);
  for (size_t k = n; k-- > 0;) {
    Rational s = rhs[k];
    for (size_t j = k + 1; j < n; ++j) s -= m[k][j] * x[j];
    x[k] = s / m[k][k];
  }
  return x;
}

HbmSolution make_solution(const HbmSystem& s, const Potential& p, double A_local, const std::vector<double>& x) {
  const double ks = p.amplitude_scale();
  const double ts = p.time_scale();
  HbmSolution sol;
  sol.N = s.N;
  sol.A = A_local * ks;
  sol.omega = x[HbmSystem::kOmega] / ts;
  sol.T = 2 * pi / sol.omega;
  int top = 1;
  for (int h : s.unknown_harmonics) top = std::max(top, h);
  sol.a.assign(static_cast<size_t>(top) + 1, 0.0);
  sol.b.assign(static_cast<size_t>(top), 0.0);
  double rest = 0;
  for (int j = 0; j < s.num_unknowns(); ++j) {
    const double c = x[static_cast<size_t>(2 + j)];
    rest += c;
    sol.a[static_cast<size_t>(s.unknown_harmonics[static_cast<size_t>(j)])] = c * A_local * ks;
  }
  sol.a[1] = (1 - rest) * A_local * ks;
  return sol;
}

}  // namespace

std::vector<PowerSeries> implicit_series(const std::vector<MPoly>& equations, int a_var,
                                         const std::vector<int>& unknowns,
                                         const std::vector<Rational>& at_zero, int order) {
  if (equations.size() != unknowns.size() || unknowns.size() != at_zero.size()) {
    fail(ErrorKind::domain, "implicit series needs a square system");
  }
  if (order < 0) fail(ErrorKind::domain, "negative series order");
  RingPtr ring;
  for (const auto& e : equations) {
    if (e.ring()) ring = e.ring();
  }
  const int nvars = ring ? ring->size() : 0;
  for (int v = 0; v < nvars; ++v) {
    if (v == a_var || std::find(unknowns.begin(), unknowns.end(), v) != unknowns.end()) continue;
    for (const auto& e : equations) {
      if (e.degree(v) > 0) fail(ErrorKind::domain, "equations involve a variable that is neither A nor an unknown");
    }
  }
  const size_t n = unknowns.size();
  std::vector<Rational> point0(static_cast<size_t>(nvars), Rational(0));
  for (size_t j = 0; j < n; ++j) point0[static_cast<size_t>(unknowns[j])] = at_zero[j];
  std::vector<std::vector<Rational>> J(n, std::vector<Rational>(n));
  for (size_t i = 0; i < n; ++i) {
    if (equations[i].evaluate(point0) != 0) fail(ErrorKind::consistency, "the base point does not solve the system at A = 0");
    for (size_t j = 0; j < n; ++j) J[i][j] = equations[i].derivative(unknowns[j]).evaluate(point0);
  }
  std::vector<PowerSeries> u(n, PowerSeries(order));
  for (size_t j = 0; j < n; ++j) u[j][0] = at_zero[j];
  for (int k = 1; k <= order; ++k) {
    std::vector<PowerSeries> point(static_cast<size_t>(nvars), PowerSeries::constant(0, k));
    point[static_cast<size_t>(a_var)] = PowerSeries::variable(k);
    for (size_t j = 0; j < n; ++j) point[static_cast<size_t>(unknowns[j])] = u[j].truncated(k);
    auto from = [k](const Rational& q) { return PowerSeries::constant(q, k); };
    std::vector<Rational> rhs(n);
    for (size_t i = 0; i < n; ++i) rhs[i] = -equations[i].evaluate<PowerSeries>(point, from)[k];
    const auto delta = solve_exact(J, rhs);
    for (size_t j = 0; j < n; ++j) u[j][k] = delta[j];
  }
  return u;
}

HbmSolution solve_order1(const Potential& p, double A) {
  if (!(A > 0) || !std::isfinite(A)) fail(ErrorKind::domain, "amplitude must be positive and finite");
  HbmSolution s;
  s.N = 1;
  s.A = A;
  s.a = {0.0, A};
  s.b = {0.0};
  switch (p.kind()) {
    case PotentialKind::poly_family: {
      const int m = p.integer_m();
      // (2m-1)! / ((m-1)! m!) = C(2m-1, m)
      const double c = binomial(2 * m - 1, m).get_d();
      s.T = std::pow(2.0, m) * pi / std::sqrt(c * std::pow(A, 2 * m - 2) + std::pow(4.0, m - 1));
      break;
    }
    case PotentialKind::rational_family: {
      const int m = p.integer_m();
      const double k2 = p.k() * p.k();
      double sum = 0;
      for (int j = 0; j <= m; ++j) {
        sum += std::pow(0.25, j) * binomial(m, j).get_d() * binomial(2 * j + 1, j).get_d() * std::pow(k2, m - j) * std::pow(A, 2 * j);
      }
      s.T = 2 * pi * std::sqrt(sum);
      break;
    }
    case PotentialKind::quintic: {
      const double rad = 16 + 12 * p.k() * A * A + 10 * std::pow(A, 4);
      if (!(rad > 0)) fail(ErrorKind::no_real_solution, "first-order frequency has no real solution at A = " + fmt(A));
      s.T = 8 * pi / std::sqrt(rad);
      break;
    }
    case PotentialKind::general_poly: return solve_numeric(p, 1, {A}).front();
  }
  s.omega = 2 * pi / s.T;
  return s;
}

double order1_period_derivative(const Potential& p, double A) {
  switch (p.kind()) {
    case PotentialKind::poly_family: {
      const int m = p.integer_m();
      const double c = binomial(2 * m - 1, m).get_d();
      const double rho = c * std::pow(A, 2 * m - 2) + std::pow(4.0, m - 1);
      return -0.5 * std::pow(2.0, m) * pi * std::pow(rho, -1.5) * c * (2 * m - 2) * std::pow(A, 2 * m - 3);
    }
    case PotentialKind::rational_family: {
      const int m = p.integer_m();
      const double k2 = p.k() * p.k();
      double sum = 0, dsum = 0;
      for (int j = 0; j <= m; ++j) {
        const double s = std::pow(0.25, j) * binomial(m, j).get_d() * binomial(2 * j + 1, j).get_d() * std::pow(k2, m - j);
        sum += s * std::pow(A, 2 * j);
        if (j > 0) dsum += s * 2 * j * std::pow(A, 2 * j - 1);
      }
      return pi * dsum / std::sqrt(sum);
    }
    case PotentialKind::quintic: {
      const double rad = 16 + 12 * p.k() * A * A + 10 * std::pow(A, 4);
      if (!(rad > 0)) fail(ErrorKind::no_real_solution, "first-order frequency has no real solution at A = " + fmt(A));
      return -4 * pi * std::pow(rad, -1.5) * (24 * p.k() * A + 40 * std::pow(A, 3));
    }
    case PotentialKind::general_poly:
      fail(ErrorKind::unsupported, "no closed-form first-order period for general polynomials");
  }
  return 0;
}

std::vector<HbmSolution> solve_numeric(const Potential& p, int N, const std::vector<double>& grid) {
  if (grid.empty()) return {};
  for (size_t i = 0; i < grid.size(); ++i) {
    if (!(grid[i] > 0) || !std::isfinite(grid[i])) fail(ErrorKind::domain, "amplitudes must be positive and finite");
    if (i && !(grid[i] > grid[i - 1])) fail(ErrorKind::domain, "amplitude grid must be strictly increasing");
  }
  const HbmSystem s = build_system(p, N, true);
  std::vector<int> unknowns;
  for (int v = 1; v < s.ring->size(); ++v) unknowns.push_back(v);
  const NumericSystem sys(s.equations, unknowns);
  const double ks = p.amplitude_scale();

  std::vector<double> x(static_cast<size_t>(s.ring->size()), 0.0);
  x[HbmSystem::kOmega] = 1;
  double a_cur = std::min(grid.front() / ks, 0.05);
  x[HbmSystem::kA] = a_cur;
  if (!sys.newton(x)) fail(ErrorKind::convergence, "Newton failed at the starting amplitude A = " + fmt(a_cur * ks));
  std::vector<double> x_prev;
  double a_prev = 0;

  std::vector<HbmSolution> out;
  for (double target_phys : grid) {
    const double target = target_phys / ks;
    double step = target - a_cur;
    int halvings = 0;
    while (a_cur < target) {
      step = std::min({step, target - a_cur, 0.5 * a_cur + 0.05});
      const double a_next = (target - a_cur - step) <= 1e-14 * target ? target : a_cur + step;
      std::vector<double> guess = x;
      if (!x_prev.empty()) {
        const double r = (a_next - a_cur) / (a_cur - a_prev);
        for (int v : unknowns) guess[static_cast<size_t>(v)] += r * (x[static_cast<size_t>(v)] - x_prev[static_cast<size_t>(v)]);
      }
      guess[HbmSystem::kA] = a_next;
      if (sys.newton(guess) && guess[HbmSystem::kOmega] > 0) {
        x_prev = x;
        a_prev = a_cur;
        x = std::move(guess);
        a_cur = a_next;
        halvings = 0;
        step *= 2;
      } else {
        if (++halvings > 10) {
          fail(ErrorKind::convergence, "harmonic balance Newton diverged at A = " + fmt(a_next * ks) +
                                           "; last good A = " + fmt(a_cur * ks));
        }
        step /= 2;
      }
    }
    out.push_back(make_solution(s, p, a_cur, x));
  }
  return out;
}

PeriodSeries hbm_series(const Potential& p, int N, int order) {
  if (order < 0 || order > 16) fail(ErrorKind::domain, "series order must lie in 0..16");
  const HbmSystem s = build_system(p, N, true);
  std::vector<int> unknowns;
  std::vector<Rational> at_zero;
  for (int v = 1; v < s.ring->size(); ++v) {
    unknowns.push_back(v);
    at_zero.push_back(v == HbmSystem::kOmega ? 1 : 0);
  }
  const auto u = implicit_series(s.equations, HbmSystem::kA, unknowns, at_zero, order);
  PowerSeries t = u[0].inverse() * Rational(2);
  // T(A) = K^m T_1(A / K) for the rational family.
  if (p.kind() == PotentialKind::rational_family) {
    const Rational K = rational_scale(p);
    const int m = p.integer_m();
    for (int k = 0; k <= order; ++k) {
      Rational f = 1;
      const int e = m - k;
      for (int i = 0; i < std::abs(e); ++i) f *= K;
      t[k] = e >= 0 ? Rational(t[k] * f) : Rational(t[k] / f);
    }
  }
  return PeriodSeries{t.coeffs()};
}

}  // namespace period_balance
