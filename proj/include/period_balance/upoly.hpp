#pragma once

#include <vector>

#include "period_balance/rational.hpp"

namespace period_balance {

// Dense univariate polynomial over Q, coefficients low to high degree.
class UPoly {
 public:
  UPoly() = default;
  explicit UPoly(std::vector<Rational> coeffs);

  int degree() const { return static_cast<int>(coeffs_.size()) - 1; }  // -1 for zero
  bool is_zero() const { return coeffs_.empty(); }
  const Rational& coeff(int k) const;
  const std::vector<Rational>& coeffs() const { return coeffs_; }
  const Rational& leading() const { return coeffs_.back(); }

  Rational eval(const Rational& x) const;
  double eval(double x) const;
  UPoly derivative() const;

  friend UPoly operator+(const UPoly& a, const UPoly& b);
  friend UPoly operator-(const UPoly& a, const UPoly& b);
  friend UPoly operator*(const UPoly& a, const UPoly& b);
  friend UPoly operator*(const UPoly& a, const Rational& s);
  bool operator==(const UPoly& o) const { return coeffs_ == o.coeffs_; }

  // Euclidean division; throws on zero divisor.
  void divmod(const UPoly& d, UPoly& q, UPoly& r) const;
  UPoly rem(const UPoly& d) const;

  // Monic, content-free representative of the squarefree part.
  UPoly squarefree() const;

 private:
  void trim();
  std::vector<Rational> coeffs_;
};

UPoly gcd(UPoly a, UPoly b);

// Sturm chain of p (p, p', -rem, ...).
std::vector<UPoly> sturm_chain(const UPoly& p);

// Number of distinct real roots in (lo, hi].
int count_real_roots(const std::vector<UPoly>& chain, const Rational& lo, const Rational& hi);
int count_real_roots(const UPoly& p);  // on the whole line

// Distinct real roots in (lo, hi), isolated by Sturm bisection and refined
// by exact bisection to |interval| <= rel_tol * |root|; ascending order.
std::vector<double> real_roots_in(const UPoly& p, const Rational& lo, const Rational& hi,
                                  double rel_tol = 1e-15);
std::vector<double> positive_real_roots(const UPoly& p, double rel_tol = 1e-15);

// Cauchy bound on |root|.
Rational root_bound(const UPoly& p);

}  // namespace period_balance
