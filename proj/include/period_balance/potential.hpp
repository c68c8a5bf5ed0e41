#pragma once

#include <limits>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

#include "period_balance/rational.hpp"
#include "period_balance/upoly.hpp"

namespace period_balance {

enum class PotentialKind { poly_family, rational_family, quintic, general_poly };

const char* to_string(PotentialKind kind);

// Open interval containing the origin.
struct Interval {
  double lo = -std::numeric_limits<double>::infinity();
  double hi = std::numeric_limits<double>::infinity();

  bool contains(double x) const { return x > lo && x < hi; }
  bool is_full() const {
    return lo == -std::numeric_limits<double>::infinity() && hi == std::numeric_limits<double>::infinity();
  }
};

// Potential F of the system x' = -y, y' = F'(x), normalized so that
// F(0) = F'(0) = 0 and F''(0) = 1.
//
// The rational family x'' = -x / (x^2 + k^2)^m is stored in its k = 1 form;
// time and amplitude rescale as T_k(A) = |k|^m T_1(A / |k|), which the period
// routines apply through amplitude_scale() and time_scale().
class Potential {
 public:
  static Potential poly_family(int m);
  static Potential rational_family(double k, double m);
  static Potential quintic(double k);
  // F'(x) = x + sum k_i x^i with i >= 2.
  static Potential general_poly(std::vector<std::pair<int, Rational>> coeffs);
  static Potential duffing() { return poly_family(2); }

  // "poly:m=2", "rat:k=1,m=2", "quintic:k=-1", "gen:2=1,3=-1/2", "duffing".
  static Potential parse(std::string_view text);

  PotentialKind kind() const { return kind_; }
  // PolyFamily and RationalFamily exponent.
  double m() const { return m_; }
  int integer_m() const;
  // Quintic and RationalFamily parameter.
  double k() const { return k_; }
  const std::vector<std::pair<int, Rational>>& general_coeffs() const { return general_; }

  const Interval& domain() const { return domain_; }
  Potential with_domain(Interval domain) const;

  // order 0, 1, 2 -> F, F', F''.
  double eval(double x, int order) const;
  double F(double x) const { return eval(x, 0); }
  double dF(double x) const { return eval(x, 1); }
  double d2F(double x) const { return eval(x, 2); }
  // Divided difference (F(a) - F(b)) / (a - b), accurate when a is close to b.
  double slope(double a, double b) const;

  bool is_polynomial() const { return kind_ != PotentialKind::rational_family; }
  // F' odd, so orbits are symmetric about the origin.
  bool is_odd() const;
  // Exact F' for polynomial kinds.
  UPoly force_poly() const;
  UPoly energy_poly() const;

  double amplitude_scale() const;
  double time_scale() const;

  // Canonical text form, parseable by parse().
  std::string spec() const;

 private:
  Potential() = default;
  void check_domain(double x) const;

  PotentialKind kind_ = PotentialKind::poly_family;
  double m_ = 2;
  double k_ = 0;
  std::vector<std::pair<int, Rational>> general_;
  // F' = sum force_[i] x^i, F = sum energy_[i] x^i (polynomial kinds).
  std::vector<double> force_;
  std::vector<double> energy_;
  Interval domain_;
};

// Global center test: F' != 0 for x != 0 and F -> infinity on both sides.
bool is_global_center(const Potential& p);

enum class Monotonicity { increasing, decreasing, inconclusive };

const char* to_string(Monotonicity verdict);

struct MonotonicityGrid {
  double half_width = 10;
  int points = 2001;
};

struct MonotonicityReport {
  Monotonicity verdict = Monotonicity::inconclusive;
  double g_min = 0;
  double g_max = 0;
  double x_at_min = 0;
  double x_at_max = 0;
  double tol = 0;
};

// Samples G = F'^2 - 2 F F'' on a symmetric grid; a numerical certificate.
MonotonicityReport monotonicity_criterion(const Potential& p, MonotonicityGrid grid = {});

// Solution of F(x) = h on the side sign(side) of the origin.
double inverse_branch(const Potential& p, double h, int side);

// l_F(h) = F_+^{-1}(h) - F_-^{-1}(h).
double lf_length(const Potential& p, double h);

}  // namespace period_balance
