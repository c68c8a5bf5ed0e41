#pragma once

#include <optional>
#include <string>
#include <vector>

#include "period_balance/asymptotics.hpp"
#include "period_balance/hbm.hpp"
#include "period_balance/period.hpp"
#include "period_balance/potential.hpp"

namespace period_balance {

// Smallest k with different coefficients of A^k; nullopt when the shorter
// series agrees with the longer one throughout (nothing witnessed).
std::optional<int> local_match_order(const PeriodSeries& exact, const PeriodSeries& hbm);

struct ErrorSample {
  double A = 0;
  double T = 0;
  double T_N = 0;
  double error = 0;  // |T - T_N|
};

// Quadrature against T_N from solve_hbm.
std::vector<ErrorSample> error_curve(const Potential& p, int N, const std::vector<double>& grid, double tol = 1e-12);

// Duffing only, N in 1..3, in extended precision: usable where |T - T_N|
// sits below double resolution.
std::vector<ErrorSample> duffing_error_curve(int N, const std::vector<double>& grid, mp_bitcnt_t bits = 512);

// Slope of log error against log A by least squares.
double error_slope(const std::vector<ErrorSample>& samples);

struct TailEstimate {
  double C = 0;
  double exponent = 0;
  std::string source;  // "closed_form" or "fit"
};

struct OrderComparison {
  int N = 1;
  std::optional<int> match_order;
  std::optional<TailEstimate> tail_exact;
  std::optional<TailEstimate> tail_hbm;
  std::vector<CriticalPeriod> critical_exact;
  std::vector<CriticalPeriod> critical_hbm;
  std::vector<ErrorSample> errors;
  std::vector<std::string> notes;  // parts that could not be computed, and why
};

struct CompareOptions {
  std::vector<double> grid;           // error curve amplitudes
  double critical_lo = 1e-2;
  double critical_hi = 10;
  double tol = 1e-12;
  int series_order = 12;
  std::vector<double> tail_grid;      // large-A samples for fits; default 1e2..1e4
};

struct ComparisonReport {
  std::string family;
  std::vector<OrderComparison> orders;
};

ComparisonReport compare(const Potential& p, const std::vector<int>& orders, const CompareOptions& options);

// Critical periods of T_N on (lo, hi): analytic derivative for the N = 1
// closed forms, sampled_extrema on a 400-point log grid otherwise.
std::vector<CriticalPeriod> hbm_critical_periods(const Potential& p, int N, double lo, double hi);

// Extrema of a sampled curve: sign changes of the differences, refined by a
// parabola through the three samples around each one.
std::vector<CriticalPeriod> sampled_extrema(const std::vector<double>& A, const std::vector<double>& T);

}  // namespace period_balance
