#include "period_balance/power_series.hpp"

#include <algorithm>

#include "period_balance/errors.hpp"

namespace period_balance {

PowerSeries::PowerSeries(std::vector<Rational> coeffs, int order) : coeffs_(std::move(coeffs)) {
  coeffs_.resize(static_cast<size_t>(order) + 1);
}

PowerSeries PowerSeries::constant(const Rational& c, int order) {
  PowerSeries s(order);
  s[0] = c;
  return s;
}

PowerSeries PowerSeries::variable(int order) {
  PowerSeries s(order);
  if (order >= 1) s[1] = 1;
  return s;
}

PowerSeries PowerSeries::truncated(int order) const {
  return PowerSeries(coeffs_, std::min(order, this->order()));
}

PowerSeries& PowerSeries::operator+=(const PowerSeries& o) {
  coeffs_.resize(static_cast<size_t>(std::min(order(), o.order())) + 1);
  for (int k = 0; k <= order(); ++k) (*this)[k] += o[k];
  return *this;
}

PowerSeries& PowerSeries::operator-=(const PowerSeries& o) {
  coeffs_.resize(static_cast<size_t>(std::min(order(), o.order())) + 1);
  for (int k = 0; k <= order(); ++k) (*this)[k] -= o[k];
  return *this;
}

PowerSeries& PowerSeries::operator*=(const Rational& s) {
  for (auto& c : coeffs_) c *= s;
  return *this;
}

PowerSeries operator*(const PowerSeries& a, const PowerSeries& b) {
  const int n = std::min(a.order(), b.order());
  PowerSeries r(n);
  for (int i = 0; i <= n; ++i) {
    if (a[i] == 0) continue;
    for (int j = 0; i + j <= n; ++j) {
      if (b[j] != 0) r[i + j] += a[i] * b[j];
    }
  }
  return r;
}

PowerSeries PowerSeries::operator-() const {
  PowerSeries r = *this;
  for (auto& c : r.coeffs_) c = -c;
  return r;
}

PowerSeries PowerSeries::inverse() const {
  if (coeffs_.empty() || coeffs_[0] == 0) {
    fail(ErrorKind::domain, "power series inverse needs a nonzero constant term");
  }
  const int n = order();
  PowerSeries r(n);
  r[0] = 1 / (*this)[0];
  for (int k = 1; k <= n; ++k) {
    Rational acc = 0;
    for (int j = 1; j <= k; ++j) acc += (*this)[j] * r[k - j];
    r[k] = -acc * r[0];
  }
  return r;
}

// Miller's recurrence: k f_0 g_k = sum_{j=1}^k ((alpha+1) j - k) f_j g_{k-j}.
PowerSeries PowerSeries::pow(const Rational& alpha) const {
  if (coeffs_.empty() || coeffs_[0] != 1) {
    fail(ErrorKind::domain, "rational power of a series needs constant term 1");
  }
  const int n = order();
  PowerSeries g(n);
  g[0] = 1;
  for (int k = 1; k <= n; ++k) {
    Rational acc = 0;
    for (int j = 1; j <= k; ++j) {
      if ((*this)[j] == 0) continue;
      acc += ((alpha + 1) * j - k) * (*this)[j] * g[k - j];
    }
    g[k] = acc / k;
  }
  return g;
}

PowerSeries PowerSeries::pow(int n) const {
  if (n < 0) return inverse().pow(-n);
  PowerSeries result = constant(1, order());
  PowerSeries base = *this;
  while (n > 0) {
    if (n & 1) result = result * base;
    n >>= 1;
    if (n > 0) base = base * base;
  }
  return result;
}

}  // namespace period_balance
