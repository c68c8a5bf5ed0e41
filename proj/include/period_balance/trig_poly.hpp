#pragma once

#include <algorithm>
#include <cmath>
#include <type_traits>
#include <utility>
#include <vector>

#include "period_balance/errors.hpp"
#include "period_balance/mpoly.hpp"
#include "period_balance/rational.hpp"

namespace period_balance {

template <class C>
struct CoeffTraits;

template <>
struct CoeffTraits<double> {
  static double from_rational(const Rational& q) { return q.get_d(); }
  static bool is_zero(double c) { return c == 0.0; }
};

template <>
struct CoeffTraits<Rational> {
  static Rational from_rational(const Rational& q) { return q; }
  static bool is_zero(const Rational& c) { return c == 0; }
};

template <>
struct CoeffTraits<MPoly> {
  static MPoly from_rational(const Rational& q) { return MPoly::constant(q); }
  static bool is_zero(const MPoly& c) { return c.is_zero(); }
};

// Trigonometric polynomial sum_k a_k cos(k tau) + b_k sin(k tau), k = 0..N.
// a_0 is the mean value (no 1/2 factor); b_0 is always zero.
template <class C>
class TrigPoly {
  using Traits = CoeffTraits<C>;

 public:
  TrigPoly() : TrigPoly(0) {}
  explicit TrigPoly(int degree)
      : a_(static_cast<size_t>(degree) + 1, Traits::from_rational(0)),
        b_(static_cast<size_t>(degree) + 1, Traits::from_rational(0)) {}

  static TrigPoly constant(C c) {
    TrigPoly p(0);
    p.a_[0] = std::move(c);
    return p;
  }
  static TrigPoly cos_term(int k, C c) {
    TrigPoly p(k);
    p.a_[static_cast<size_t>(k)] = std::move(c);
    return p;
  }
  static TrigPoly sin_term(int k, C c) {
    if (k == 0) fail(ErrorKind::domain, "sin(0*tau) term is identically zero");
    TrigPoly p(k);
    p.b_[static_cast<size_t>(k)] = std::move(c);
    return p;
  }

  int degree() const { return static_cast<int>(a_.size()) - 1; }
  const C& a(int k) const { return a_[static_cast<size_t>(k)]; }
  const C& b(int k) const { return b_[static_cast<size_t>(k)]; }
  // Coefficient lookups that return zero beyond the stored degree.
  C cos_coeff(int k) const { return k <= degree() ? a_[static_cast<size_t>(k)] : Traits::from_rational(0); }
  C sin_coeff(int k) const { return (k >= 1 && k <= degree()) ? b_[static_cast<size_t>(k)] : Traits::from_rational(0); }
  void set_a(int k, C c) {
    grow(k);
    a_[static_cast<size_t>(k)] = std::move(c);
  }
  void set_b(int k, C c) {
    if (k == 0) fail(ErrorKind::domain, "sin(0*tau) term is identically zero");
    grow(k);
    b_[static_cast<size_t>(k)] = std::move(c);
  }

  TrigPoly& operator+=(const TrigPoly& o) {
    grow(o.degree());
    for (int k = 0; k <= o.degree(); ++k) {
      a_[static_cast<size_t>(k)] = a_[static_cast<size_t>(k)] + o.a(k);
      b_[static_cast<size_t>(k)] = b_[static_cast<size_t>(k)] + o.b(k);
    }
    return *this;
  }
  TrigPoly& operator-=(const TrigPoly& o) { return *this += o.scaled(Rational(-1)); }
  friend TrigPoly operator+(TrigPoly x, const TrigPoly& y) { return x += y; }
  friend TrigPoly operator-(TrigPoly x, const TrigPoly& y) { return x -= y; }

  TrigPoly scaled(const Rational& s) const {
    TrigPoly r = *this;
    const C f = Traits::from_rational(s);
    for (auto& c : r.a_) c = c * f;
    for (auto& c : r.b_) c = c * f;
    return r;
  }
  TrigPoly times(const C& s) const {
    TrigPoly r = *this;
    for (auto& c : r.a_) c = c * s;
    for (auto& c : r.b_) c = c * s;
    return r;
  }

  // Product-to-sum linearization; the result has degree p + q.
  friend TrigPoly operator*(const TrigPoly& x, const TrigPoly& y) {
    const int p = x.degree();
    const int q = y.degree();
    TrigPoly r(p + q);
    const C half = Traits::from_rational(Rational(1, 2));
    auto add_cos = [&](int k, const C& v) { r.a_[static_cast<size_t>(std::abs(k))] = r.a_[static_cast<size_t>(std::abs(k))] + v; };
    auto add_sin = [&](int k, const C& v) {
      if (k == 0) return;
      if (k > 0) {
        r.b_[static_cast<size_t>(k)] = r.b_[static_cast<size_t>(k)] + v;
      } else {
        r.b_[static_cast<size_t>(-k)] = r.b_[static_cast<size_t>(-k)] - v;
      }
    };
    for (int i = 0; i <= p; ++i) {
      const bool ai = !Traits::is_zero(x.a(i));
      const bool bi = i > 0 && !Traits::is_zero(x.b(i));
      if (!ai && !bi) continue;
      for (int j = 0; j <= q; ++j) {
        const bool aj = !Traits::is_zero(y.a(j));
        const bool bj = j > 0 && !Traits::is_zero(y.b(j));
        if (ai && aj) {
          C v = x.a(i) * y.a(j) * half;
          add_cos(i - j, v);
          add_cos(i + j, v);
        }
        if (bi && bj) {
          C v = x.b(i) * y.b(j) * half;
          add_cos(i - j, v);
          add_cos(i + j, -v);
        }
        if (ai && bj) {
          // cos(i) sin(j) = (sin(i+j) - sin(i-j)) / 2
          C v = x.a(i) * y.b(j) * half;
          add_sin(i + j, v);
          add_sin(i - j, -v);
        }
        if (bi && aj) {
          // sin(i) cos(j) = (sin(i+j) + sin(i-j)) / 2
          C v = x.b(i) * y.a(j) * half;
          add_sin(i + j, v);
          add_sin(i - j, v);
        }
      }
    }
    return r;
  }

  TrigPoly pow(int n) const {
    if (n < 0) fail(ErrorKind::domain, "negative power of a trigonometric polynomial");
    TrigPoly result = constant(Traits::from_rational(1));
    TrigPoly base = *this;
    while (n > 0) {
      if (n & 1) result = result * base;
      n >>= 1;
      if (n > 0) base = base * base;
    }
    return result;
  }

  // d/dtau applied `order` times.
  TrigPoly derivative(int order = 1) const {
    TrigPoly r = *this;
    for (int it = 0; it < order; ++it) {
      TrigPoly next(r.degree());
      for (int k = 1; k <= r.degree(); ++k) {
        const C kk = Traits::from_rational(Rational(k));
        next.a_[static_cast<size_t>(k)] = r.b(k) * kk;
        next.b_[static_cast<size_t>(k)] = -(r.a(k) * kk);
      }
      r = std::move(next);
    }
    return r;
  }

  // Drop high harmonics whose coefficients are all zero.
  TrigPoly trimmed() const {
    int d = degree();
    while (d > 0 && Traits::is_zero(a(d)) && Traits::is_zero(b(d))) --d;
    TrigPoly r(d);
    for (int k = 0; k <= d; ++k) {
      r.a_[static_cast<size_t>(k)] = a(k);
      r.b_[static_cast<size_t>(k)] = b(k);
    }
    return r;
  }

  TrigPoly truncated(int degree) const {
    TrigPoly r(std::min(degree, this->degree()));
    for (int k = 0; k <= r.degree(); ++k) {
      r.a_[static_cast<size_t>(k)] = a(k);
      r.b_[static_cast<size_t>(k)] = b(k);
    }
    return r;
  }

  template <class F>
  auto map(F f) const -> TrigPoly<decltype(f(std::declval<const C&>()))> {
    using D = decltype(f(std::declval<const C&>()));
    TrigPoly<D> r(degree());
    for (int k = 0; k <= degree(); ++k) {
      r.set_a(k, f(a(k)));
      if (k > 0) r.set_b(k, f(b(k)));
    }
    return r;
  }

  double evaluate(double tau) const
    requires std::is_same_v<C, double>
  {
    double s = a_[0];
    for (int k = 1; k <= degree(); ++k) s += a(k) * std::cos(k * tau) + b(k) * std::sin(k * tau);
    return s;
  }

  bool operator==(const TrigPoly& o) const {
    const TrigPoly x = trimmed();
    const TrigPoly y = o.trimmed();
    return x.a_ == y.a_ && x.b_ == y.b_;
  }

 private:
  void grow(int degree) {
    if (degree > this->degree()) {
      a_.resize(static_cast<size_t>(degree) + 1, Traits::from_rational(0));
      b_.resize(static_cast<size_t>(degree) + 1, Traits::from_rational(0));
    }
  }

  std::vector<C> a_;
  std::vector<C> b_;
};

enum class Harmonic { cos, sin };

// Harmonic projection (2/T) * integral of f * cos/sin(k tau):
// the cosine coefficient for k >= 1, twice the mean for k = 0.
template <class C>
C project(const TrigPoly<C>& f, int k, Harmonic kind) {
  if (k < 0) fail(ErrorKind::domain, "negative harmonic index");
  if (kind == Harmonic::sin) return f.sin_coeff(k);
  C c = f.cos_coeff(k);
  if (k == 0) c = c * CoeffTraits<C>::from_rational(Rational(2));
  return c;
}

// Linearizes a formal product of powers prod_i f_i^{n_i}.
template <class C>
TrigPoly<C> trig_reduce(const std::vector<std::pair<TrigPoly<C>, int>>& factors) {
  TrigPoly<C> result = TrigPoly<C>::constant(CoeffTraits<C>::from_rational(1));
  for (const auto& [f, n] : factors) result = result * f.pow(n);
  return result;
}

// cos^n(tau) in linearized form; exact.
TrigPoly<Rational> cos_power(int n);

}  // namespace period_balance
