#include <string>

#include "period_balance/errors.hpp"
#include "period_balance/hbm.hpp"

namespace period_balance {

namespace {

using TP = TrigPoly<MPoly>;

TP poly_of(const UPoly& c, const TP& x) {
  TP acc;
  for (int j = c.degree(); j >= 0; --j) {
    acc = acc * x;
    if (c.coeff(j) != 0) acc += TP::constant(MPoly::constant(c.coeff(j), x.a(0).ring()));
  }
  return acc.trimmed();
}

TP residual(const ResidualForm& rf, const HbmSystem& s) {
  const MPoly A = MPoly::variable(s.ring, HbmSystem::kA);
  const MPoly omega = MPoly::variable(s.ring, HbmSystem::kOmega);
  const TP x = s.scaled ? s.ansatz.times(A) : s.ansatz;
  TP r = (poly_of(rf.mass, x) * x.derivative(2)).times(omega * omega) + poly_of(rf.force, x);
  if (s.scaled) {
    r = r.map([&](const MPoly& c) { return c.exact_divide(A); });
  }
  return r;
}

}  // namespace

ResidualForm residual_form(const Potential& p) {
  if (p.is_polynomial()) return {UPoly({Rational(1)}), p.force_poly()};
  const int m = p.integer_m();
  // (1 + x^2)^m
  std::vector<Rational> mass(static_cast<size_t>(2 * m) + 1);
  for (int j = 0; j <= m; ++j) mass[static_cast<size_t>(2 * j)] = binomial(m, j);
  return {UPoly(std::move(mass)), UPoly({Rational(0), Rational(1)})};
}

HbmSystem build_system(const Potential& p, int N, bool scaled) {
  if (N < 1 || N > 8) fail(ErrorKind::domain, "harmonic balance order must lie in 1..8");
  const ResidualForm rf = residual_form(p);
  HbmSystem s;
  s.N = N;
  s.odd = p.is_odd();
  s.scaled = scaled;
  const std::string prefix = scaled ? "c" : "a";
  std::vector<std::string> names{"A", "omega"};
  if (s.odd) {
    for (int j = 0; j < N; ++j) s.harmonics.push_back(2 * j + 1);
    for (int j = 1; j < N; ++j) s.unknown_harmonics.push_back(2 * j + 1);
  } else {
    for (int h = 0; h <= N; ++h) s.harmonics.push_back(h);
    s.unknown_harmonics.push_back(0);
    for (int h = 2; h <= N; ++h) s.unknown_harmonics.push_back(h);
  }
  for (int h : s.unknown_harmonics) names.push_back(prefix + std::to_string(h));
  s.ring = make_ring(names);

  s.first_coefficient = scaled ? MPoly::constant(1, s.ring) : MPoly::variable(s.ring, HbmSystem::kA);
  for (int j = 0; j < s.num_unknowns(); ++j) s.first_coefficient -= MPoly::variable(s.ring, 2 + j);
  s.ansatz = TP::cos_term(1, s.first_coefficient);
  for (int j = 0; j < s.num_unknowns(); ++j) s.ansatz.set_a(s.unknown_harmonics[static_cast<size_t>(j)], MPoly::variable(s.ring, 2 + j));

  const TP r = residual(rf, s);
  for (int h : s.harmonics) {
    MPoly eq = project(r, h, Harmonic::cos);
    bool divided = false;
    if (h == 1) {
      MPoly q;
      if (eq.divides_into(s.first_coefficient, q)) {
        eq = std::move(q);
        divided = true;
      }
    }
    s.equations.push_back(std::move(eq));
    s.divided.push_back(divided);
  }
  return s;
}

std::vector<MPoly> sine_projections(const Potential& p, const HbmSystem& system) {
  const TP r = residual(residual_form(p), system);
  std::vector<MPoly> out;
  for (int k = 1; k <= r.degree(); ++k) out.push_back(project(r, k, Harmonic::sin));
  return out;
}

}  // namespace period_balance
