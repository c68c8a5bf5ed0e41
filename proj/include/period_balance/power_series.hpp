#pragma once

#include <vector>

#include "period_balance/rational.hpp"

namespace period_balance {

// Truncated power series sum_{k<=order} c_k x^k with exact rational
// coefficients. Arithmetic between series truncates to the smaller order.
class PowerSeries {
 public:
  PowerSeries() = default;
  explicit PowerSeries(int order) : coeffs_(static_cast<size_t>(order) + 1) {}
  PowerSeries(std::vector<Rational> coeffs, int order);

  static PowerSeries constant(const Rational& c, int order);
  // The series x itself.
  static PowerSeries variable(int order);

  int order() const { return static_cast<int>(coeffs_.size()) - 1; }
  const Rational& operator[](int k) const { return coeffs_[static_cast<size_t>(k)]; }
  Rational& operator[](int k) { return coeffs_[static_cast<size_t>(k)]; }
  const std::vector<Rational>& coeffs() const { return coeffs_; }

  PowerSeries truncated(int order) const;

  PowerSeries& operator+=(const PowerSeries& o);
  PowerSeries& operator-=(const PowerSeries& o);
  PowerSeries& operator*=(const Rational& s);
  friend PowerSeries operator+(PowerSeries a, const PowerSeries& b) { return a += b; }
  friend PowerSeries operator-(PowerSeries a, const PowerSeries& b) { return a -= b; }
  friend PowerSeries operator*(PowerSeries a, const Rational& s) { return a *= s; }
  friend PowerSeries operator*(const PowerSeries& a, const PowerSeries& b);
  PowerSeries operator-() const;

  // 1/f; requires c_0 != 0.
  PowerSeries inverse() const;
  // f^alpha for rational alpha; requires c_0 == 1.
  PowerSeries pow(const Rational& alpha) const;
  PowerSeries pow(int n) const;

  bool operator==(const PowerSeries& o) const { return coeffs_ == o.coeffs_; }

 private:
  std::vector<Rational> coeffs_;
};

}  // namespace period_balance
