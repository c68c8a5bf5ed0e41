#include "period_balance/asymptotics.hpp"

#include <algorithm>
#include <cmath>

#include "period_balance/errors.hpp"

namespace period_balance {

namespace {

TailFit fit_window(const std::vector<std::pair<double, double>>& s) {
  const double n = static_cast<double>(s.size());
  double sx = 0, sy = 0;
  for (const auto& [A, T] : s) {
    sx += std::log(A);
    sy += std::log(T);
  }
  const double mx = sx / n;
  const double my = sy / n;
  double sxx = 0, sxy = 0;
  for (const auto& [A, T] : s) {
    const double dx = std::log(A) - mx;
    sxx += dx * dx;
    sxy += dx * (std::log(T) - my);
  }
  TailFit f;
  f.exponent = sxy / sxx;
  f.C = std::exp(my - f.exponent * mx);
  for (const auto& [A, T] : s) {
    const double model = f.C * std::pow(A, f.exponent);
    f.residual = std::max(f.residual, std::abs(T - model) / std::abs(T));
  }
  f.used = static_cast<int>(s.size());
  return f;
}

}  // namespace

double beta(double x, double y) {
  if (!(x > 0) || !(y > 0) || !std::isfinite(x) || !std::isfinite(y)) fail(ErrorKind::domain, "beta needs positive finite arguments");
  const double s = x + y;
  // tgamma is accurate to a few ulps while it stays finite.
  if (s < 170) {
    const double gx = std::tgamma(x);
    const double gy = std::tgamma(y);
    const double gs = std::tgamma(s);
    if (std::isfinite(gx) && std::isfinite(gy) && std::isfinite(gs) && gs != 0) return gx / gs * gy;
  }
  return std::exp(std::lgamma(x) + std::lgamma(y) - std::lgamma(s));
}

AsymptoticTerm exact_tail(const Potential& p) {
  switch (p.kind()) {
    case PotentialKind::poly_family: {
      // T = sqrt(2) int_0^h l_F'(u) (h - u)^{-1/2} du with
      // l_F'(h) ~ ((2m)^{1/(2m)} / m) h^{-(2m-1)/(2m)} gives
      // T ~ sqrt(2) M B(a + 1, 1/2) h^{a + 1/2}, and h ~ A^{2m} / (2m).
      const double m = p.m();
      const double a = -(2 * m - 1) / (2 * m);
      const double M = std::pow(2 * m, 1 / (2 * m)) / m;
      const double C_h = std::sqrt(2.0) * M * beta(a + 1, 0.5);
      const double C_A = C_h * std::pow(2 * m, -(a + 0.5));
      return {C_A, 2 * m * (a + 0.5), LimitPoint::infinity};
    }
    case PotentialKind::quintic:
      if (!(p.k() > -2)) fail(ErrorKind::unsupported, "quintic tail needs a global center (k > -2)");
      // Only the x^6 / 6 term matters at infinity.
      return {2 * beta(1.0 / 6, 0.5) / std::sqrt(3.0), -2, LimitPoint::infinity};
    case PotentialKind::rational_family:
      fail(ErrorKind::unsupported, "no tail at infinity: the rational family has a bounded period annulus for m > 1");
    case PotentialKind::general_poly:
      fail(ErrorKind::unsupported, "exact tail is only available for the poly and quintic families; use tail_fit");
  }
  fail(ErrorKind::unsupported, "unknown potential kind");
}

TailFit tail_fit(const std::vector<std::pair<double, double>>& samples) {
  if (samples.size() < 6) fail(ErrorKind::ill_conditioned, "tail fit needs at least 6 samples");
  for (const auto& [A, T] : samples) {
    if (!(A > 0) || !(T > 0) || !std::isfinite(A) || !std::isfinite(T)) fail(ErrorKind::domain, "tail fit needs positive finite samples");
  }
  auto sorted = samples;
  std::sort(sorted.begin(), sorted.end());
  if (sorted.back().first < 10 * sorted.front().first) fail(ErrorKind::ill_conditioned, "amplitudes span less than one decade");
  TailFit f = fit_window(sorted);
  if (f.residual > 0.05) {
    std::vector<std::pair<double, double>> upper(sorted.begin() + static_cast<long>(sorted.size() / 2), sorted.end());
    if (upper.size() >= 3) f = fit_window(upper);
  }
  return f;
}

}  // namespace period_balance
