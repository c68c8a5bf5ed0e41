#pragma once

#include <string>
#include <vector>

#include "period_balance/mpoly.hpp"
#include "period_balance/period.hpp"
#include "period_balance/power_series.hpp"
#include "period_balance/potential.hpp"
#include "period_balance/trig_poly.hpp"
#include "period_balance/upoly.hpp"

namespace period_balance {

// The equation of motion written as mass(x) x'' + force(x) = 0 with
// polynomial mass and force.
struct ResidualForm {
  UPoly mass;
  UPoly force;
};

// Polynomial kinds use mass = 1, force = F'. The rational family (integer m)
// uses its cleared-denominator form (x^2 + 1)^m x'' + x = 0.
ResidualForm residual_form(const Potential& p);

// Harmonic balance equations for the ansatz x = sum a_k cos(k tau), tau = omega t.
//
// Odd potentials use harmonics 1, 3, .., 2N-1 and no mean term; the others use
// a_0 (the mean) and harmonics 1..N. The initial condition x(0) = A fixes
// a_1 = A - sum of the other coefficients. Ring variables are A, omega, then
// one unknown per free coefficient.
//
// In the scaled form the unknowns are c_k = a_k / A and every equation is
// divided by A, which keeps the system regular at A = 0.
struct HbmSystem {
  RingPtr ring;
  bool odd = true;
  bool scaled = false;
  int N = 1;
  std::vector<int> harmonics;          // equation i balances cos(harmonics[i] tau)
  std::vector<int> unknown_harmonics;  // harmonic of ring variable 2 + j
  MPoly first_coefficient;             // a_1 (or c_1) in terms of the unknowns
  TrigPoly<MPoly> ansatz;
  std::vector<MPoly> equations;
  std::vector<bool> divided;  // true when a_1 was divided out of the equation

  int num_unknowns() const { return static_cast<int>(unknown_harmonics.size()); }
  static constexpr int kA = 0;
  static constexpr int kOmega = 1;
};

HbmSystem build_system(const Potential& p, int N, bool scaled = false);

// Sine projections of the residual for the symmetric ansatz; all zero when
// the cosine-only ansatz is consistent.
std::vector<MPoly> sine_projections(const Potential& p, const HbmSystem& system);

struct HbmSolution {
  int N = 1;
  double A = 0;
  double omega = 0;
  double T = 0;
  std::vector<double> a;  // cosine coefficients a_0..a_K
  std::vector<double> b;  // sine coefficients b_1..b_K (zero by symmetry)
};

// Closed-form first-order solution for the poly, rational (integer m) and
// quintic families; Newton on the N = 1 system otherwise.
HbmSolution solve_order1(const Potential& p, double A);
// dT_1/dA for the closed-form families.
double order1_period_derivative(const Potential& p, double A);

// Newton continuation along an increasing amplitude grid.
std::vector<HbmSolution> solve_numeric(const Potential& p, int N, const std::vector<double>& grid);

// Exact Taylor series of T_N at A = 0 from the scaled system.
PeriodSeries hbm_series(const Potential& p, int N, int order);

// x'' + x + x^3 = 0, written as poly:m=2 or gen:3=1.
bool is_duffing(const Potential& p);

// T_N on an increasing grid by the most direct route: closed forms at N = 1,
// the resultant paths for Duffing at N = 2 and 3, Newton continuation otherwise.
std::vector<HbmSolution> solve_hbm(const Potential& p, int N, const std::vector<double>& grid);

// Series of T_N, through the eliminants for Duffing N = 2, 3.
PeriodSeries hbm_taylor(const Potential& p, int N, int order);

// Duffing (x'' + x + x^3 = 0) at order 2, by elimination of a_3.
struct DuffingOrder2 {
  HbmSystem system;
  MPoly eliminant;  // in the ring (A, omega)
};
const DuffingOrder2& duffing_order2();
// The reference sextic in omega, in the ring (A, omega).
MPoly duffing_order2_sextic();
HbmSolution solve_order2_duffing(double A);
PeriodSeries duffing_order2_series(int order);
// lim T_2 A from the top homogeneous part of the eliminant.
double duffing_order2_infinity();
// The same limit from the radical expression for omega_2.
double duffing_order2_infinity_closed_form();

// Duffing at order 3: resultant cascade
//   PQ = Res(P, Q, a3) / (A - a5), QR = Res(Q, R, a3),
//   PQR = Res(PQ, QR, a5) / (3 A^2 + 4 - 36 omega^2).
class DuffingOrder3 {
 public:
  // Built once, on first use.
  static const DuffingOrder3& instance();

  const HbmSystem& system() const { return system_; }
  const MPoly& P() const { return system_.equations[0]; }
  const MPoly& Q() const { return system_.equations[1]; }
  const MPoly& R() const { return system_.equations[2]; }
  const MPoly& PQ() const { return pq_; }
  const MPoly& QR() const { return qr_; }
  // Primitive integer form, ring (A, omega).
  const MPoly& curve() const { return curve_; }
  double build_seconds() const { return build_seconds_; }

  // Physical branch by continuation in A from the order-2 frequency.
  std::vector<HbmSolution> branch(const std::vector<double>& grid) const;
  HbmSolution branch(double A) const;
  PeriodSeries series(int order) const;
  // delta with T_3 ~ delta / A.
  double infinity_constant() const;

 private:
  DuffingOrder3();

  HbmSystem system_;
  MPoly pq_;
  MPoly qr_;
  MPoly curve_;
  double build_seconds_ = 0;
};

// Extended-precision periods for error studies near A = 0, where T - T_N
// falls far below double resolution. Precision follows A.
mpf_class duffing_order1_period(const mpf_class& A);
mpf_class duffing_order2_period(const mpf_class& A);
mpf_class duffing_order3_period(const mpf_class& A);

// Series omega(A) of a branch of curve(A, omega) = 0 through (0, reference[0]),
// found by imposing omega = s + w A^k order by order. Where the lowest
// nonvanishing coefficient in w has several roots, the chain through the
// reference coefficient is taken. Same order as the reference.
PowerSeries curve_branch_series(const MPoly& curve, const PowerSeries& reference);

// Power-series solution u(A) of equations(A, u) = 0 through u(0) = at_zero,
// by Newton's method on truncated series; needs a nonsingular Jacobian at A = 0.
std::vector<PowerSeries> implicit_series(const std::vector<MPoly>& equations, int a_var,
                                         const std::vector<int>& unknowns,
                                         const std::vector<Rational>& at_zero, int order);

}  // namespace period_balance
