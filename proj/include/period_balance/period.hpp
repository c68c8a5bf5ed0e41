#pragma once

#include <gmpxx.h>

#include <functional>
#include <string>
#include <vector>

#include "period_balance/potential.hpp"
#include "period_balance/rational.hpp"
#include "period_balance/trig_poly.hpp"

namespace period_balance {

// T(A) = pi * sum_k c_k A^k through `order`.
struct PeriodSeries {
  std::vector<Rational> coeffs;

  int order() const { return static_cast<int>(coeffs.size()) - 1; }
  Rational coeff(int k) const { return k <= order() ? coeffs[static_cast<size_t>(k)] : Rational(0); }
  double evaluate(double A) const;
  bool operator==(const PeriodSeries& o) const { return coeffs == o.coeffs; }
};

struct QuadratureResult {
  double T = 0;
  double x_minus = 0;  // left turning point
  int nodes = 0;
  std::string method;  // "trapezoid" or "tanh_sinh"
};

// Exact period of the orbit through (A, 0), absolute error <= tol.
QuadratureResult period_quadrature_detail(const Potential& p, double A, double tol);
double period_quadrature(const Potential& p, double A, double tol = 1e-12);

// Same integrand on a fixed trapezoid grid of n panels; smooth in A, which
// keeps finite differences free of adaptive-refinement noise.
double period_fixed_nodes(const Potential& p, double A, int n);

// Centered-difference T'(A) with step max(1e-5, 1e-4 A).
double period_derivative(const Potential& p, double A);

// pi at the given precision in bits; cached.
mpf_class pi_mpf(mp_bitcnt_t prec);

// K(kappa) = int_0^1 dz / sqrt((1 - z^2)(1 - kappa z^2)), kappa < 1.
double elliptic_K(double kappa);
mpf_class elliptic_K(const mpf_class& kappa);

// Closed-form period of x'' + x + x^3 = 0.
double duffing_period(double A);
mpf_class duffing_period(const mpf_class& A);

// Frequency-amplitude expansion with secular-term elimination; exact.
PeriodSeries lindstedt_series(const Potential& p, int order);

struct CherkasResult {
  TrigPoly<Rational> u2;
  TrigPoly<Rational> u3;
  // S_k / pi
  Rational s1;
  Rational s2;
  PeriodSeries series;
};

// Period series of the poly family from the Abel-equation recursion.
CherkasResult cherkas_expansion(int m, int terms);
PeriodSeries cherkas_series(int m, int terms);

enum class CriticalKind { max, min };

const char* to_string(CriticalKind kind);

struct CriticalPeriod {
  double A = 0;
  CriticalKind kind = CriticalKind::max;
  double T = 0;
};

// Zeros of dT on (lo, hi), found on a refining log grid and polished by
// bisection to |interval| <= tol.
std::vector<CriticalPeriod> critical_periods(const std::function<double(double)>& T,
                                             const std::function<double(double)>& dT,
                                             double lo, double hi, double tol);
std::vector<CriticalPeriod> critical_periods(const Potential& p, double lo, double hi, double tol);

}  // namespace period_balance
