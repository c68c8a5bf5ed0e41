#pragma once

#include <array>
#include <cstdint>
#include <functional>
#include <memory>
#include <string>
#include <utility>
#include <vector>

#include "period_balance/rational.hpp"

namespace period_balance {

constexpr int kMaxVars = 16;

// Exponent vector; variable 0 is the most significant in lex order.
using Monomial = std::array<std::uint8_t, kMaxVars>;

struct MonomialHash {
  size_t operator()(const Monomial& m) const noexcept;
};

// Ordered variable names shared by all polynomials of one ring.
class PolyRing {
 public:
  explicit PolyRing(std::vector<std::string> names);

  int size() const { return static_cast<int>(names_.size()); }
  const std::string& name(int i) const { return names_[static_cast<size_t>(i)]; }
  const std::vector<std::string>& names() const { return names_; }
  // -1 when absent.
  int index(const std::string& name) const;
  int require(const std::string& name) const;

 private:
  std::vector<std::string> names_;
};

using RingPtr = std::shared_ptr<const PolyRing>;

RingPtr make_ring(std::vector<std::string> names);

// Sparse multivariate polynomial with exact rational coefficients.
//
// A default-constructed MPoly is a ring-less zero; ring-less constants combine
// with polynomials of any ring.
class MPoly {
 public:
  using Term = std::pair<Monomial, Rational>;

  MPoly() = default;
  explicit MPoly(RingPtr ring) : ring_(std::move(ring)) {}
  MPoly(RingPtr ring, std::vector<Term> terms);  // combines and sorts

  static MPoly constant(const Rational& c, RingPtr ring = nullptr);
  static MPoly variable(const RingPtr& ring, int index, unsigned power = 1);
  static MPoly variable(const RingPtr& ring, const std::string& name, unsigned power = 1);

  const RingPtr& ring() const { return ring_; }
  const std::vector<Term>& terms() const { return terms_; }
  size_t size() const { return terms_.size(); }
  bool is_zero() const { return terms_.empty(); }
  bool is_constant() const;
  Rational constant_term() const;
  const Term& leading_term() const { return terms_.front(); }

  int degree(int var) const;
  int degree(const std::string& var) const;
  int total_degree() const;
  // Coefficient of the exact monomial, zero when absent.
  Rational coefficient(const Monomial& m) const;

  MPoly& operator+=(const MPoly& o);
  MPoly& operator-=(const MPoly& o);
  MPoly& operator*=(const Rational& s);
  friend MPoly operator+(MPoly a, const MPoly& b) { return a += b; }
  friend MPoly operator-(MPoly a, const MPoly& b) { return a -= b; }
  friend MPoly operator*(MPoly a, const Rational& s) { return a *= s; }
  friend MPoly operator*(const Rational& s, MPoly a) { return a *= s; }
  friend MPoly operator*(const MPoly& a, const MPoly& b);
  MPoly operator-() const;
  MPoly pow(unsigned n) const;

  bool operator==(const MPoly& o) const;
  bool operator!=(const MPoly& o) const { return !(*this == o); }

  // Exact quotient; throws Error(consistency) on a nonzero remainder.
  MPoly exact_divide(const MPoly& d) const;
  // Quotient if d divides exactly, otherwise nullopt-like empty flag.
  bool divides_into(const MPoly& d, MPoly& quotient) const;

  MPoly derivative(int var) const;
  MPoly substitute(int var, const MPoly& value) const;
  MPoly substitute(int var, const Rational& value) const;
  // Coefficients c_k with p = sum_k c_k var^k (c_k free of var).
  std::vector<MPoly> coefficients_in(int var) const;

  // Integer coefficients with gcd 1 and positive leading coefficient.
  MPoly primitive_part() const;
  // Same polynomial expressed in another ring containing all used variables.
  MPoly in_ring(const RingPtr& target) const;

  template <class T, class FromRational>
  T evaluate(const std::vector<T>& point, FromRational from_rational) const;
  double evaluate(const std::vector<double>& point) const;
  Rational evaluate(const std::vector<Rational>& point) const;

  // Human-readable, e.g. "3*A^2*omega - 1/4*a3".
  std::string to_string() const;
  // One term per line: "e_0 e_1 ... e_{n-1} : coeff" in descending lex order.
  std::string canonical_text() const;

 private:
  void normalize();
  const RingPtr& common_ring(const MPoly& o) const;

  RingPtr ring_;
  std::vector<Term> terms_;  // descending lex, no zero coefficients
};

// Determinant of the Sylvester matrix of p and q with respect to var.
MPoly resultant(const MPoly& p, const MPoly& q, int var);

// Fraction-free (Bareiss) determinant of a square matrix of polynomials.
MPoly bareiss_determinant(std::vector<std::vector<MPoly>> m);

template <class T, class FromRational>
T MPoly::evaluate(const std::vector<T>& point, FromRational from_rational) const {
  const int nvars = ring_ ? ring_->size() : 0;
  std::vector<std::vector<T>> powers(static_cast<size_t>(nvars));
  for (int v = 0; v < nvars; ++v) {
    const int d = degree(v);
    auto& pw = powers[static_cast<size_t>(v)];
    if (d <= 0) continue;
    pw.reserve(static_cast<size_t>(d) + 1);
    pw.push_back(from_rational(Rational(1)));
    for (int k = 1; k <= d; ++k) pw.push_back(pw.back() * point[static_cast<size_t>(v)]);
  }
  T acc = from_rational(Rational(0));
  for (const auto& [mono, coeff] : terms_) {
    T t = from_rational(coeff);
    for (int v = 0; v < nvars; ++v) {
      if (mono[static_cast<size_t>(v)] != 0) t = t * powers[static_cast<size_t>(v)][mono[static_cast<size_t>(v)]];
    }
    acc = acc + t;
  }
  return acc;
}

}  // namespace period_balance
