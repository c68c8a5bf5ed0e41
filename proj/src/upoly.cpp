#include "period_balance/upoly.hpp"

#include <algorithm>
#include <cmath>
#include <utility>

#include "period_balance/errors.hpp"

namespace period_balance {

namespace {

const Rational kZero = 0;

int sign(const Rational& q) { return sgn(q); }

int sign_at(const UPoly& p, const Rational& x) { return sign(p.eval(x)); }

int sign_changes(const std::vector<UPoly>& chain, const Rational& x) {
  int changes = 0;
  int last = 0;
  for (const auto& p : chain) {
    int s = sign_at(p, x);
    if (s == 0) continue;
    if (last != 0 && s != last) ++changes;
    last = s;
  }
  return changes;
}

int sign_changes_at_infinity(const std::vector<UPoly>& chain, bool positive) {
  int changes = 0;
  int last = 0;
  for (const auto& p : chain) {
    if (p.is_zero()) continue;
    int s = sign(p.leading());
    if (!positive && (p.degree() % 2 == 1)) s = -s;
    if (last != 0 && s != last) ++changes;
    last = s;
  }
  return changes;
}

// Remove the integer content so Sturm remainders stay small.
UPoly primitive(const UPoly& p) {
  if (p.is_zero()) return p;
  BigInt num_gcd = 0;
  BigInt den_lcm = 1;
  for (const auto& c : p.coeffs()) {
    if (c == 0) continue;
    mpz_gcd(num_gcd.get_mpz_t(), num_gcd.get_mpz_t(), c.get_num_mpz_t());
    mpz_lcm(den_lcm.get_mpz_t(), den_lcm.get_mpz_t(), c.get_den_mpz_t());
  }
  Rational scale(den_lcm, num_gcd);
  scale.canonicalize();
  return p * scale;
}

}  // namespace

UPoly::UPoly(std::vector<Rational> coeffs) : coeffs_(std::move(coeffs)) { trim(); }

void UPoly::trim() {
  while (!coeffs_.empty() && coeffs_.back() == 0) coeffs_.pop_back();
}

const Rational& UPoly::coeff(int k) const {
  if (k < 0 || k > degree()) return kZero;
  return coeffs_[static_cast<size_t>(k)];
}

Rational UPoly::eval(const Rational& x) const {
  Rational acc = 0;
  for (auto it = coeffs_.rbegin(); it != coeffs_.rend(); ++it) acc = acc * x + *it;
  return acc;
}

double UPoly::eval(double x) const {
  double acc = 0;
  for (auto it = coeffs_.rbegin(); it != coeffs_.rend(); ++it) acc = acc * x + it->get_d();
  return acc;
}

UPoly UPoly::derivative() const {
  std::vector<Rational> d;
  for (int k = 1; k <= degree(); ++k) d.push_back(coeffs_[static_cast<size_t>(k)] * k);
  return UPoly(std::move(d));
}

UPoly operator+(const UPoly& a, const UPoly& b) {
  std::vector<Rational> c(static_cast<size_t>(std::max(a.degree(), b.degree()) + 1));
  for (int k = 0; k <= a.degree(); ++k) c[static_cast<size_t>(k)] += a.coeff(k);
  for (int k = 0; k <= b.degree(); ++k) c[static_cast<size_t>(k)] += b.coeff(k);
  return UPoly(std::move(c));
}

UPoly operator-(const UPoly& a, const UPoly& b) { return a + b * Rational(-1); }

UPoly operator*(const UPoly& a, const UPoly& b) {
  if (a.is_zero() || b.is_zero()) return UPoly();
  std::vector<Rational> c(static_cast<size_t>(a.degree() + b.degree() + 1));
  for (int i = 0; i <= a.degree(); ++i) {
    if (a.coeff(i) == 0) continue;
    for (int j = 0; j <= b.degree(); ++j) c[static_cast<size_t>(i + j)] += a.coeff(i) * b.coeff(j);
  }
  return UPoly(std::move(c));
}

UPoly operator*(const UPoly& a, const Rational& s) {
  std::vector<Rational> c = a.coeffs();
  for (auto& x : c) x *= s;
  return UPoly(std::move(c));
}

void UPoly::divmod(const UPoly& d, UPoly& q, UPoly& r) const {
  if (d.is_zero()) fail(ErrorKind::domain, "polynomial division by zero");
  std::vector<Rational> rem = coeffs_;
  std::vector<Rational> quot(static_cast<size_t>(std::max(0, degree() - d.degree() + 1)));
  const Rational& lc = d.leading();
  for (int k = degree(); k >= d.degree(); --k) {
    const Rational& top = rem[static_cast<size_t>(k)];
    if (top == 0) continue;
    Rational f = top / lc;
    quot[static_cast<size_t>(k - d.degree())] = f;
    for (int j = 0; j <= d.degree(); ++j) rem[static_cast<size_t>(k - d.degree() + j)] -= f * d.coeff(j);
  }
  q = UPoly(std::move(quot));
  r = UPoly(std::move(rem));
}

UPoly UPoly::rem(const UPoly& d) const {
  UPoly q, r;
  divmod(d, q, r);
  return r;
}

UPoly gcd(UPoly a, UPoly b) {
  while (!b.is_zero()) {
    UPoly r = primitive(a.rem(b));
    a = std::move(b);
    b = std::move(r);
  }
  if (a.is_zero()) return a;
  return a * (1 / a.leading());
}

UPoly UPoly::squarefree() const {
  if (degree() <= 0) return *this;
  UPoly g = gcd(*this, derivative());
  UPoly q, r;
  divmod(g, q, r);
  return primitive(q);
}

std::vector<UPoly> sturm_chain(const UPoly& p) {
  std::vector<UPoly> chain;
  if (p.is_zero()) return chain;
  chain.push_back(primitive(p));
  UPoly d = p.derivative();
  if (d.is_zero()) return chain;
  chain.push_back(primitive(d));
  while (true) {
    UPoly r = chain[chain.size() - 2].rem(chain.back());
    if (r.is_zero()) break;
    // Positive rescaling keeps the sign pattern of -rem.
    chain.push_back(primitive(r) * Rational(-1));
  }
  return chain;
}

int count_real_roots(const std::vector<UPoly>& chain, const Rational& lo, const Rational& hi) {
  if (chain.empty()) return 0;
  return sign_changes(chain, lo) - sign_changes(chain, hi);
}

int count_real_roots(const UPoly& p) {
  auto chain = sturm_chain(p);
  if (chain.empty()) return 0;
  return sign_changes_at_infinity(chain, false) - sign_changes_at_infinity(chain, true);
}

Rational root_bound(const UPoly& p) {
  if (p.degree() <= 0) return 1;
  Rational best = 0;
  for (int k = 0; k < p.degree(); ++k) {
    Rational r = abs(p.coeff(k) / p.leading());
    if (r > best) best = r;
  }
  return best + 1;
}

std::vector<double> real_roots_in(const UPoly& p, const Rational& lo, const Rational& hi,
                                  double rel_tol) {
  std::vector<double> roots;
  if (p.degree() <= 0) return roots;
  UPoly sf = p.squarefree();
  auto chain = sturm_chain(sf);
  // (lo, hi) open: shave the right endpoint if it is a root.
  struct Interval {
    Rational a, b;
    int count;
  };
  auto count = [&](const Rational& a, const Rational& b) {
    int c = count_real_roots(chain, a, b);
    if (sign_at(sf, b) == 0) --c;
    return c;
  };
  std::vector<Interval> stack{{lo, hi, count(lo, hi)}};
  std::vector<std::pair<Rational, Rational>> isolated;
  while (!stack.empty()) {
    Interval iv = stack.back();
    stack.pop_back();
    if (iv.count == 0) continue;
    if (iv.count == 1) {
      isolated.emplace_back(iv.a, iv.b);
      continue;
    }
    Rational mid = (iv.a + iv.b) / 2;
    if (sign_at(sf, mid) == 0) {
      // An exact rational root; record it and split around it.
      isolated.emplace_back(mid, mid);
      Rational eps = (iv.b - iv.a) / 1024;
      while (count_real_roots(chain, mid - eps, mid + eps) > 1) eps /= 2;
      stack.push_back({iv.a, mid - eps, count(iv.a, mid - eps)});
      stack.push_back({mid + eps, iv.b, count(mid + eps, iv.b)});
      continue;
    }
    stack.push_back({iv.a, mid, count(iv.a, mid)});
    stack.push_back({mid, iv.b, count(mid, iv.b)});
  }
  for (auto& [a, b] : isolated) {
    if (a == b) {
      roots.push_back(a.get_d());
      continue;
    }
    // Single simple root in (a, b]; sf changes sign across it.
    int sa = sign_at(sf, a);
    const int sb = sign_at(sf, b);
    if (sb == 0) {
      roots.push_back(b.get_d());
      continue;
    }
    if (sa == 0) sa = -sb;
    for (int it = 0; it < 4000; ++it) {
      double da = a.get_d(), db = b.get_d();
      if (std::abs(db - da) <= rel_tol * std::max(std::abs(da), std::abs(db))) break;
      Rational mid = (a + b) / 2;
      int sm = sign_at(sf, mid);
      if (sm == 0) {
        a = b = mid;
        break;
      }
      if (sm == sa) {
        a = mid;
      } else {
        b = mid;
      }
    }
    Rational mid = (a + b) / 2;
    roots.push_back(mid.get_d());
  }
  std::sort(roots.begin(), roots.end());
  return roots;
}

std::vector<double> positive_real_roots(const UPoly& p, double rel_tol) {
  if (p.degree() <= 0) return {};
  return real_roots_in(p, Rational(0), root_bound(p), rel_tol);
}

}  // namespace period_balance
