#include <chrono>
#include <cmath>
#include <mutex>
#include <numbers>

#include "period_balance/errors.hpp"
#include "period_balance/hbm.hpp"

namespace period_balance {

namespace {

using std::numbers::pi;

constexpr mp_bitcnt_t kCurveBits = 512;

RingPtr curve_ring() {
  static const RingPtr ring = make_ring({"A", "omega"});
  return ring;
}

bool same_up_to_scalar(const MPoly& p, const MPoly& q) {
  if (p.is_zero() || q.is_zero()) return p.is_zero() && q.is_zero();
  return p * q.leading_term().second == q * p.leading_term().second;
}

// Terms of maximal total degree, as a polynomial in c = omega / A.
UPoly top_homogeneous_part(const MPoly& curve) {
  const int d = curve.total_degree();
  std::vector<Rational> c(static_cast<size_t>(d) + 1);
  for (const auto& [m, coeff] : curve.terms()) {
    if (m[0] + m[1] == d) c[m[1]] += coeff;
  }
  return UPoly(std::move(c));
}

// Curve coefficients in omega as integer polynomials in A, for fast
// extended-precision evaluation of omega -> curve(A, omega).
class CurveEvaluator {
 public:
  explicit CurveEvaluator(const MPoly& curve) {
    const int d = curve.degree(HbmSystem::kOmega);
    coeffs_.resize(static_cast<size_t>(d) + 1);
    for (const auto& [m, c] : curve.terms()) coeffs_[m[1]].emplace_back(m[0], c);
  }

  // Values c_j(A).
  std::vector<mpf_class> at(const mpf_class& A) const {
    const mp_bitcnt_t prec = A.get_prec();
    std::vector<mpf_class> out;
    out.reserve(coeffs_.size());
    int max_e = 0;
    for (const auto& row : coeffs_) {
      for (const auto& t : row) max_e = std::max(max_e, t.first);
    }
    std::vector<mpf_class> pw(static_cast<size_t>(max_e) + 1, mpf_class(1, prec));
    for (size_t k = 1; k < pw.size(); ++k) pw[k] = pw[k - 1] * A;
    for (const auto& row : coeffs_) {
      mpf_class acc(0, prec);
      for (const auto& [e, c] : row) acc += mpf_class(c, prec) * pw[static_cast<size_t>(e)];
      out.push_back(acc);
    }
    return out;
  }

  // Newton in omega; false when it fails to settle within `iters` steps.
  static bool newton(const std::vector<mpf_class>& c, mpf_class& omega, int iters = 60) {
    const mp_bitcnt_t prec = omega.get_prec();
    mpf_class tol(1, prec);
    mpf_div_2exp(tol.get_mpf_t(), tol.get_mpf_t(), prec - 24);
    for (int it = 0; it < iters; ++it) {
      mpf_class f(0, prec), df(0, prec);
      for (size_t j = c.size(); j-- > 0;) {
        df = df * omega + f;
        f = f * omega + c[j];
      }
      if (df == 0) return false;
      mpf_class delta(f / df, prec);
      omega -= delta;
      if (abs(delta) <= tol * abs(omega)) return true;
    }
    return false;
  }

 private:
  std::vector<std::vector<std::pair<int, Rational>>> coeffs_;
};

double positive_root_nearest(const UPoly& p, double target) {
  const auto roots = positive_real_roots(p);
  if (roots.empty()) fail(ErrorKind::no_real_solution, "no positive root for the limit at infinity");
  double best = roots.front();
  for (double r : roots) {
    if (std::abs(r - target) < std::abs(best - target)) best = r;
  }
  return best;
}

}  // namespace

PowerSeries curve_branch_series(const MPoly& curve, const PowerSeries& reference) {
  const int order = reference.order();
  const auto cw = curve.coefficients_in(HbmSystem::kOmega);
  std::vector<Rational> s{reference[0]};
  for (int k = 1; k <= order; ++k) {
    UPoly cand;
    for (int extra = 8; extra <= 64 && cand.is_zero(); extra *= 2) {
      const int M = k + extra;
      const int wdeg = M / k;
      const PowerSeries base(s, M);
      // Horner in omega on polynomials in w with series coefficients in A.
      std::vector<PowerSeries> acc(static_cast<size_t>(wdeg) + 1, PowerSeries(M));
      for (size_t i = cw.size(); i-- > 0;) {
        std::vector<PowerSeries> next(acc.size(), PowerSeries(M));
        for (size_t j = 0; j < acc.size(); ++j) {
          next[j] = acc[j] * base;
          if (j) {
            for (int e = 0; e + k <= M; ++e) next[j][e + k] += acc[j - 1][e];
          }
        }
        for (const auto& [m, c] : cw[i].terms()) {
          if (m[HbmSystem::kA] <= M) next[0][m[HbmSystem::kA]] += c;
        }
        acc = std::move(next);
      }
      for (int e = 0; e <= M && cand.is_zero(); ++e) {
        std::vector<Rational> c(acc.size());
        for (size_t j = 0; j < acc.size(); ++j) c[j] = acc[j][e];
        cand = UPoly(std::move(c));
      }
    }
    if (cand.is_zero()) fail(ErrorKind::consistency, "curve vanishes identically along the series ansatz");
    const UPoly sf = cand.squarefree();
    Rational w;
    if (sf.degree() == 1) {
      w = -sf.coeff(0) / sf.coeff(1);
    } else if (sf.degree() > 1 && cand.eval(reference[k]) == 0) {
      w = reference[k];
    } else {
      fail(ErrorKind::consistency, "no admissible series coefficient at order " + std::to_string(k));
    }
    s.push_back(w);
  }
  return PowerSeries(std::move(s), order);
}

const DuffingOrder2& duffing_order2() {

  static const DuffingOrder2 value = [] {
    DuffingOrder2 d;
    d.system = build_system(Potential::duffing(), 2);
    const int a3 = d.system.ring->require("a3");
    const MPoly res = resultant(d.system.equations[0], d.system.equations[1], a3);
    d.eliminant = res.primitive_part().in_ring(curve_ring());
    if (!same_up_to_scalar(d.eliminant, duffing_order2_sextic())) {
      fail(ErrorKind::consistency, "order-2 eliminant differs from the reference sextic");
    }
    return d;
  }();
  return value;
}

MPoly duffing_order2_sextic() {
  const RingPtr ring = curve_ring();
  const MPoly A = MPoly::variable(ring, 0);
  const MPoly w = MPoly::variable(ring, 1);
  const MPoly one = MPoly::constant(1, ring);
  const MPoly A2 = A * A;
  const MPoly w2 = w * w;
  const MPoly inner = A2 * Rational(7) + one * Rational(8);
  return w2.pow(3) * Rational(1058) - (A2 * Rational(219) + one * Rational(322)) * w2.pow(2) * Rational(3) -
         (A2.pow(2) * Rational(21) + A2 * Rational(80) + one * Rational(40)) * w2 * Rational(9, 4) -
         A2 * inner * inner * Rational(27, 64) - one * Rational(2);
}

HbmSolution solve_order2_duffing(double A) {
  if (!(A > 0) || !std::isfinite(A)) fail(ErrorKind::domain, "amplitude must be positive and finite");
  const auto& d = duffing_order2();
  // Cubic in W = omega^2 with coefficients evaluated at A.
  const auto cw = d.eliminant.coefficients_in(HbmSystem::kOmega);
  long double c[4] = {0, 0, 0, 0};
  for (int j = 0; j <= 3; ++j) {
    if (static_cast<size_t>(2 * j) < cw.size()) {
      for (const auto& [m, q] : cw[static_cast<size_t>(2 * j)].terms()) c[j] += static_cast<long double>(q.get_d()) * std::pow(static_cast<long double>(A), m[0]);
    }
  }
  if (c[3] < 0) {
    for (auto& x : c) x = -x;
  }
  auto f = [&](long double W) { return ((c[3] * W + c[2]) * W + c[1]) * W + c[0]; };
  // c3 > 0 and c0 < 0 with one sign change: exactly one positive root.
  long double lo = 0;
  long double hi = 1;
  while (f(hi) < 0) hi *= 2;
  for (int it = 0; it < 200 && hi - lo > 1e-19L * hi; ++it) {
    const long double mid = (lo + hi) / 2;
    (f(mid) < 0 ? lo : hi) = mid;
  }
  const double W = static_cast<double>((lo + hi) / 2);
  double omega = std::sqrt(W);

  // a3 from the first equation, 3/2 a3^2 - 3/4 A a3 + (3/4 A^2 + 1 - W) = 0;
  // keep the root that satisfies the second equation.
  const double qa = 1.5, qb = -0.75 * A, qc = 0.75 * A * A + 1 - W;
  const double disc = std::max(0.0, qb * qb - 4 * qa * qc);
  const double q = -0.5 * (qb + std::copysign(std::sqrt(disc), qb));
  const double r1 = q / qa;
  const double r2 = q != 0 ? qc / q : r1;
  const auto& eq2 = d.system.equations[1];
  auto e2 = [&](double a3) { return eq2.evaluate(std::vector<double>{A, omega, a3}); };
  double a3 = std::abs(e2(r1)) < std::abs(e2(r2)) ? r1 : r2;

  HbmSolution s;
  s.N = 2;
  s.A = A;
  s.omega = omega;
  s.T = 2 * pi / omega;
  s.a = {0.0, A - a3, 0.0, a3};
  s.b = {0.0, 0.0, 0.0};
  return s;
}

PeriodSeries duffing_order2_series(int order) {
  if (order < 0 || order > 16) fail(ErrorKind::domain, "series order must lie in 0..16");
  const auto u = implicit_series({duffing_order2().eliminant}, HbmSystem::kA, {HbmSystem::kOmega}, {Rational(1)}, order);
  return PeriodSeries{(u[0].inverse() * Rational(2)).coeffs()};
}

double duffing_order2_infinity() {
  const UPoly top = top_homogeneous_part(duffing_order2().eliminant);
  const auto roots = positive_real_roots(top);
  if (roots.size() != 1) fail(ErrorKind::consistency, "expected one positive limit slope at order 2");
  return 2 * pi / roots.front();
}

double duffing_order2_infinity_closed_form() {
  const double delta = std::cbrt(1763014086.0 + 71386434.0 * std::sqrt(393.0));
  // The limit of the radical expression for omega_2 carries sqrt(delta) here.
  return 92 * std::sqrt(2.0) * pi * std::sqrt(delta) / std::sqrt(1033992 + 876 * delta + delta * delta);
}

const DuffingOrder3& DuffingOrder3::instance() {
  static const DuffingOrder3 value;
  return value;
}

DuffingOrder3::DuffingOrder3() {
  const auto start = std::chrono::steady_clock::now();
  system_ = build_system(Potential::duffing(), 3);
  const RingPtr& ring = system_.ring;
  const int a3 = ring->require("a3");
  const int a5 = ring->require("a5");
  const MPoly A = MPoly::variable(ring, HbmSystem::kA);
  const MPoly omega = MPoly::variable(ring, HbmSystem::kOmega);
  // Integer coefficients throughout: P, Q, R carry denominators 4.
  const MPoly P4 = P() * Rational(4);
  const MPoly Q4 = Q() * Rational(4);
  const MPoly R4 = R() * Rational(4);
  pq_ = resultant(P4, Q4, a3).exact_divide(A - MPoly::variable(ring, a5)).primitive_part();
  qr_ = resultant(Q4, R4, a3).primitive_part();
  const MPoly factor = A * A * Rational(3) + MPoly::constant(4, ring) - omega * omega * Rational(36);
  curve_ = resultant(pq_, qr_, a5).exact_divide(factor).primitive_part().in_ring(curve_ring());
  build_seconds_ = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
}

std::vector<HbmSolution> DuffingOrder3::branch(const std::vector<double>& grid) const {
  if (grid.empty()) return {};
  for (size_t i = 0; i < grid.size(); ++i) {
    if (!(grid[i] > 0) || !std::isfinite(grid[i])) fail(ErrorKind::domain, "amplitudes must be positive and finite");
    if (i && !(grid[i] > grid[i - 1])) fail(ErrorKind::domain, "amplitude grid must be strictly increasing");
  }
  const CurveEvaluator ev(curve_);
  const HbmSystem scaled = build_system(Potential::duffing(), 3, true);

  double a_cur = std::min(grid.front(), 0.05);
  mpf_class w_cur(solve_order2_duffing(a_cur).omega, kCurveBits);
  if (!CurveEvaluator::newton(ev.at(mpf_class(a_cur, kCurveBits)), w_cur)) {
    fail(ErrorKind::convergence, "order-3 branch: no root near the order-2 frequency at the start");
  }
  double a_prev = 0;
  mpf_class w_prev(0, kCurveBits);
  bool have_prev = false;

  // (c3, c5) from the harmonic 3 and 5 equations at fixed omega.
  double c3 = 0, c5 = 0;
  auto coefficients = [&](double A, double omega) {
    for (int it = 0; it < 50; ++it) {
      const std::vector<double> x{A, omega, c3, c5};
      const double f1 = scaled.equations[1].evaluate(x);
      const double f2 = scaled.equations[2].evaluate(x);
      const double j11 = scaled.equations[1].derivative(2).evaluate(x);
      const double j12 = scaled.equations[1].derivative(3).evaluate(x);
      const double j21 = scaled.equations[2].derivative(2).evaluate(x);
      const double j22 = scaled.equations[2].derivative(3).evaluate(x);
      const double det = j11 * j22 - j12 * j21;
      const double d3 = (f1 * j22 - f2 * j12) / det;
      const double d5 = (j11 * f2 - j21 * f1) / det;
      c3 -= d3;
      c5 -= d5;
      if (std::abs(d3) + std::abs(d5) <= 1e-15 * (1 + std::abs(c3) + std::abs(c5))) return;
    }
    fail(ErrorKind::convergence, "order-3 branch: harmonic coefficients did not converge at A = " + std::to_string(A));
  };

  coefficients(a_cur, w_cur.get_d());

  std::vector<HbmSolution> out;
  for (double target : grid) {
    double step = target - a_cur;
    int halvings = 0;
    while (a_cur < target) {
      step = std::min({step, target - a_cur, 0.25 * a_cur + 0.02});
      const double a_next = (target - a_cur - step) <= 1e-14 * target ? target : a_cur + step;
      mpf_class guess(w_cur, kCurveBits);
      if (have_prev) guess += (w_cur - w_prev) * ((a_next - a_cur) / (a_cur - a_prev));
      mpf_class w(guess, kCurveBits);
      const bool ok = CurveEvaluator::newton(ev.at(mpf_class(a_next, kCurveBits)), w, 30) && w > 0 &&
                      abs(w - guess) <= 1e-2 * abs(w_cur);
      if (ok) {
        a_prev = a_cur;
        w_prev = w_cur;
        have_prev = true;
        a_cur = a_next;
        w_cur = w;
        coefficients(a_cur, w_cur.get_d());
        halvings = 0;
        step *= 2;
      } else {
        if (++halvings > 12) {
          fail(ErrorKind::convergence, "order-3 branch lost at A = " + std::to_string(a_next) + "; last good A = " + std::to_string(a_cur));
        }
        step /= 2;
      }
    }
    const double omega = w_cur.get_d();
    HbmSolution s;
    s.N = 3;
    s.A = a_cur;
    s.omega = omega;
    s.T = 2 * pi / omega;
    s.a = {0.0, (1 - c3 - c5) * a_cur, 0.0, c3 * a_cur, 0.0, c5 * a_cur};
    s.b.assign(5, 0.0);
    out.push_back(s);
  }
  return out;
}

HbmSolution DuffingOrder3::branch(double A) const { return branch(std::vector<double>{A}).front(); }

PeriodSeries DuffingOrder3::series(int order) const {
  if (order < 0 || order > 16) fail(ErrorKind::domain, "series order must lie in 0..16");
  // (0, 1) is a triple root of the curve: simple on the physical branch, double
  // on two spurious ones. Chains are told apart by the order-2 frequency.
  const auto w2 = implicit_series({duffing_order2().eliminant}, HbmSystem::kA, {HbmSystem::kOmega}, {Rational(1)}, order);
  const PowerSeries w = curve_branch_series(curve_, w2[0]);
  return PeriodSeries{(w.inverse() * Rational(2)).coeffs()};
}

double DuffingOrder3::infinity_constant() const {
  static std::once_flag flag;
  static double delta = 0;
  std::call_once(flag, [&] {
    constexpr double kFar = 1e3;
    const double slope = branch(kFar).omega / kFar;
    delta = 2 * pi / positive_root_nearest(top_homogeneous_part(curve_), slope);
  });
  return delta;
}

mpf_class duffing_order1_period(const mpf_class& A) {
  const mp_bitcnt_t prec = A.get_prec();
  mpf_class r(sqrt(mpf_class(3 * A * A + 4, prec)), prec);
  return mpf_class(4 * pi_mpf(prec) / r, prec);
}

mpf_class duffing_order2_period(const mpf_class& A) {
  const mp_bitcnt_t prec = A.get_prec();
  const CurveEvaluator ev(duffing_order2().eliminant);
  mpf_class w(solve_order2_duffing(A.get_d()).omega, prec);
  if (!CurveEvaluator::newton(ev.at(A), w)) fail(ErrorKind::convergence, "order-2 frequency refinement failed");
  return mpf_class(2 * pi_mpf(prec) / w, prec);
}

mpf_class duffing_order3_period(const mpf_class& A) {
  const mp_bitcnt_t prec = A.get_prec();
  const CurveEvaluator ev(DuffingOrder3::instance().curve());
  mpf_class w(2 * pi_mpf(prec) / duffing_order2_period(A), prec);
  if (!CurveEvaluator::newton(ev.at(A), w)) fail(ErrorKind::convergence, "order-3 frequency refinement failed");
  return mpf_class(2 * pi_mpf(prec) / w, prec);
}

}  // namespace period_balance
