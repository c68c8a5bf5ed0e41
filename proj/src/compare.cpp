#include "period_balance/compare.hpp"

#include <algorithm>
#include <cmath>

#include "period_balance/errors.hpp"

namespace period_balance {

namespace {

std::vector<double> log_grid(double lo, double hi, int n) {
  std::vector<double> g(static_cast<size_t>(n));
  for (int i = 0; i < n; ++i) g[static_cast<size_t>(i)] = lo * std::pow(hi / lo, static_cast<double>(i) / (n - 1));
  return g;
}

TailEstimate fitted(const std::vector<double>& A, const std::vector<double>& T) {
  std::vector<std::pair<double, double>> s;
  for (size_t i = 0; i < A.size(); ++i) s.emplace_back(A[i], T[i]);
  const TailFit f = tail_fit(s);
  return {f.C, f.exponent, "fit"};
}

std::string describe(const Error& e) { return std::string(to_string(e.kind())) + ": " + e.what(); }

}  // namespace

std::optional<int> local_match_order(const PeriodSeries& exact, const PeriodSeries& hbm) {
  const int n = std::min(exact.order(), hbm.order());
  for (int k = 0; k <= n; ++k) {
    if (exact.coeff(k) != hbm.coeff(k)) return k;
  }
  return std::nullopt;
}

std::vector<ErrorSample> error_curve(const Potential& p, int N, const std::vector<double>& grid, double tol) {
  const auto hbm = solve_hbm(p, N, grid);
  std::vector<ErrorSample> out;
  for (size_t i = 0; i < grid.size(); ++i) {
    ErrorSample e;
    e.A = grid[i];
    e.T = period_quadrature(p, grid[i], tol);
    e.T_N = hbm[i].T;
    e.error = std::abs(e.T - e.T_N);
    out.push_back(e);
  }
  return out;
}

std::vector<ErrorSample> duffing_error_curve(int N, const std::vector<double>& grid, mp_bitcnt_t bits) {
  if (N < 1 || N > 3) fail(ErrorKind::unsupported, "extended-precision Duffing errors exist for N = 1, 2, 3");
  std::vector<ErrorSample> out;
  for (double A : grid) {
    if (!(A > 0) || !std::isfinite(A)) fail(ErrorKind::domain, "amplitudes must be positive and finite");
    const mpf_class a(A, bits);
    const mpf_class T = duffing_period(a);
    const mpf_class TN = N == 1 ? duffing_order1_period(a) : N == 2 ? duffing_order2_period(a) : duffing_order3_period(a);
    const mpf_class d(abs(T - TN), bits);
    out.push_back({A, T.get_d(), TN.get_d(), d.get_d()});
  }
  return out;
}

double error_slope(const std::vector<ErrorSample>& samples) {
  if (samples.size() < 2) fail(ErrorKind::ill_conditioned, "slope needs at least two samples");
  double sx = 0, sy = 0, sxx = 0, sxy = 0;
  for (const auto& s : samples) {
    if (!(s.error > 0)) fail(ErrorKind::domain, "slope needs positive errors");
    const double x = std::log(s.A), y = std::log(s.error);
    sx += x;
    sy += y;
    sxx += x * x;
    sxy += x * y;
  }
  const double n = static_cast<double>(samples.size());
  const double den = n * sxx - sx * sx;
  if (!(den > 0)) fail(ErrorKind::ill_conditioned, "slope needs distinct amplitudes");
  return (n * sxy - sx * sy) / den;
}

std::vector<CriticalPeriod> sampled_extrema(const std::vector<double>& A, const std::vector<double>& T) {
  std::vector<CriticalPeriod> out;
  for (size_t i = 1; i + 1 < A.size(); ++i) {
    const double d0 = T[i] - T[i - 1];
    const double d1 = T[i + 1] - T[i];
    if (!((d0 > 0 && d1 <= 0) || (d0 < 0 && d1 >= 0))) continue;
    // Vertex of the parabola through the three samples.
    const double x0 = A[i - 1], x1 = A[i], x2 = A[i + 1];
    const double den = (x0 - x1) * (x0 - x2) * (x1 - x2);
    const double a = (x2 * (T[i] - T[i - 1]) + x1 * (T[i - 1] - T[i + 1]) + x0 * (T[i + 1] - T[i])) / den;
    const double b = (x2 * x2 * (T[i - 1] - T[i]) + x1 * x1 * (T[i + 1] - T[i - 1]) + x0 * x0 * (T[i] - T[i + 1])) / den;
    const double c = T[i] - a * x1 * x1 - b * x1;
    double xv = a != 0 ? -b / (2 * a) : x1;
    if (!(xv >= x0 && xv <= x2)) xv = x1;
    out.push_back({xv, d0 > 0 ? CriticalKind::max : CriticalKind::min, a * xv * xv + b * xv + c});
  }
  return out;
}

std::vector<CriticalPeriod> hbm_critical_periods(const Potential& p, int N, double lo, double hi) {
  if (!(lo > 0 && hi > lo)) fail(ErrorKind::domain, "critical range must satisfy 0 < lo < hi");
  if (N == 1 && p.kind() != PotentialKind::general_poly && p.domain().is_full()) {
    return critical_periods([&](double A) { return solve_order1(p, A).T; },
                            [&](double A) { return order1_period_derivative(p, A); }, lo, hi, 1e-12);
  }
  const auto g = log_grid(lo, hi, 400);
  std::vector<double> T;
  for (const auto& s : solve_hbm(p, N, g)) T.push_back(s.T);
  return sampled_extrema(g, T);
}

ComparisonReport compare(const Potential& p, const std::vector<int>& orders, const CompareOptions& options) {
  if (orders.empty()) fail(ErrorKind::domain, "no HBM orders to compare");
  if (!(options.critical_lo > 0 && options.critical_hi > options.critical_lo)) {
    fail(ErrorKind::domain, "critical range must satisfy 0 < lo < hi");
  }
  ComparisonReport r;
  r.family = p.spec();
  const std::vector<double> tail_grid = options.tail_grid.empty() ? log_grid(1e2, 1e4, 12) : options.tail_grid;

  std::optional<PeriodSeries> exact_series;
  std::string series_note;
  try {
    exact_series = lindstedt_series(p, std::min(options.series_order, 12));
  } catch (const Error& e) {
    series_note = "exact series: " + describe(e);
  }

  std::optional<TailEstimate> tail_exact;
  std::string tail_note;
  try {
    const AsymptoticTerm t = exact_tail(p);
    tail_exact = TailEstimate{t.M, t.a, "closed_form"};
  } catch (const Error& unavailable) {
    try {
      std::vector<double> T;
      for (double A : tail_grid) T.push_back(period_quadrature(p, A, options.tol));
      tail_exact = fitted(tail_grid, T);
      tail_note = "exact tail fitted to quadrature: " + describe(unavailable);
    } catch (const Error& e) {
      tail_note = "exact tail: " + describe(e);
    }
  }

  std::vector<CriticalPeriod> critical_exact;
  std::string critical_note;
  try {
    critical_exact = critical_periods(p, options.critical_lo, options.critical_hi, 1e-10);
  } catch (const Error& e) {
    critical_note = "exact critical periods: " + describe(e);
  }

  for (int N : orders) {
    OrderComparison oc;
    oc.N = N;
    oc.tail_exact = tail_exact;
    oc.critical_exact = critical_exact;
    for (const auto* note : {&series_note, &tail_note, &critical_note}) {
      if (!note->empty()) oc.notes.push_back(*note);
    }

    if (exact_series) {
      try {
        oc.match_order = local_match_order(*exact_series, hbm_taylor(p, N, exact_series->order()));
        if (!oc.match_order) oc.notes.push_back("series agree through the computed order");
      } catch (const Error& e) {
        oc.notes.push_back("HBM series: " + describe(e));
      }
    }

    try {
      if (N == 2 && is_duffing(p)) {
        oc.tail_hbm = TailEstimate{duffing_order2_infinity(), -1, "closed_form"};
      } else if (N == 3 && is_duffing(p)) {
        oc.tail_hbm = TailEstimate{DuffingOrder3::instance().infinity_constant(), -1, "closed_form"};
      } else {
        std::vector<double> T;
        for (const auto& s : solve_hbm(p, N, tail_grid)) T.push_back(s.T);
        oc.tail_hbm = fitted(tail_grid, T);
      }
    } catch (const Error& e) {
      oc.notes.push_back("HBM tail: " + describe(e));
    }

    try {
      oc.critical_hbm = hbm_critical_periods(p, N, options.critical_lo, options.critical_hi);
    } catch (const Error& e) {
      oc.notes.push_back("HBM critical periods: " + describe(e));
    }

    if (!options.grid.empty()) oc.errors = error_curve(p, N, options.grid, options.tol);
    r.orders.push_back(std::move(oc));
  }
  return r;
}

}  // namespace period_balance
