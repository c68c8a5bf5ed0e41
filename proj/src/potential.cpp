#include "period_balance/potential.hpp"

#include <boost/math/tools/roots.hpp>

#include <algorithm>
#include <charconv>
#include <cmath>
#include <map>
#include <sstream>

#include "period_balance/errors.hpp"

namespace period_balance {

namespace {

constexpr double kLogCaseTol = 1e-12;
constexpr double kBracketCap = 1e100;

std::string format_double(double x) {
  char buf[64];
  auto res = std::to_chars(buf, buf + sizeof(buf), x);
  return std::string(buf, res.ptr);
}

double parse_real(std::string_view text, std::string_view what) {
  try {
    return to_double(parse_rational(text));
  } catch (const Error&) {
    fail(ErrorKind::parse, "invalid value for " + std::string(what) + ": '" + std::string(text) + "'");
  }
}

std::vector<std::pair<std::string, std::string>> split_params(std::string_view body) {
  std::vector<std::pair<std::string, std::string>> out;
  if (body.empty()) return out;
  size_t start = 0;
  while (start <= body.size()) {
    size_t comma = body.find(',', start);
    std::string_view item = body.substr(start, comma == std::string_view::npos ? std::string_view::npos : comma - start);
    size_t eq = item.find('=');
    if (eq == std::string_view::npos || eq == 0 || eq + 1 == item.size()) {
      fail(ErrorKind::parse, "expected key=value, got '" + std::string(item) + "'");
    }
    out.emplace_back(std::string(item.substr(0, eq)), std::string(item.substr(eq + 1)));
    if (comma == std::string_view::npos) break;
    start = comma + 1;
  }
  return out;
}

double horner(const std::vector<double>& c, double x) {
  double acc = 0;
  for (auto it = c.rbegin(); it != c.rend(); ++it) acc = acc * x + *it;
  return acc;
}

std::vector<double> to_doubles(const UPoly& p) {
  std::vector<double> out;
  for (const auto& c : p.coeffs()) out.push_back(c.get_d());
  return out;
}

}  // namespace

const char* to_string(PotentialKind kind) {
  switch (kind) {
    case PotentialKind::poly_family: return "poly";
    case PotentialKind::rational_family: return "rat";
    case PotentialKind::quintic: return "quintic";
    case PotentialKind::general_poly: return "gen";
  }
  return "?";
}

const char* to_string(Monotonicity verdict) {
  switch (verdict) {
    case Monotonicity::increasing: return "increasing";
    case Monotonicity::decreasing: return "decreasing";
    case Monotonicity::inconclusive: return "inconclusive";
  }
  return "?";
}

Potential Potential::poly_family(int m) {
  if (m < 2) fail(ErrorKind::domain, "poly family needs integer m >= 2");
  Potential p;
  p.kind_ = PotentialKind::poly_family;
  p.m_ = m;
  p.force_ = to_doubles(p.force_poly());
  p.energy_ = to_doubles(p.energy_poly());
  return p;
}

Potential Potential::rational_family(double k, double m) {
  if (!std::isfinite(k) || k == 0) fail(ErrorKind::domain, "rational family needs a nonzero finite k");
  if (!std::isfinite(m) || m < 1) fail(ErrorKind::domain, "rational family needs real m >= 1");
  Potential p;
  p.kind_ = PotentialKind::rational_family;
  p.k_ = k;
  p.m_ = m;
  return p;
}

Potential Potential::quintic(double k) {
  if (!std::isfinite(k)) fail(ErrorKind::domain, "quintic family needs a finite k");
  Potential p;
  p.kind_ = PotentialKind::quintic;
  p.k_ = k;
  p.force_ = to_doubles(p.force_poly());
  p.energy_ = to_doubles(p.energy_poly());
  return p;
}

Potential Potential::general_poly(std::vector<std::pair<int, Rational>> coeffs) {
  std::map<int, Rational> merged;
  for (auto& [i, c] : coeffs) {
    if (i < 2) fail(ErrorKind::domain, "general polynomial indices must be >= 2");
    if (i > 64) fail(ErrorKind::domain, "general polynomial index too large");
    if (merged.count(i)) fail(ErrorKind::domain, "duplicate coefficient index " + std::to_string(i));
    merged[i] = c;
  }
  Potential p;
  p.kind_ = PotentialKind::general_poly;
  for (auto& [i, c] : merged) {
    if (c != 0) p.general_.emplace_back(i, c);
  }
  p.force_ = to_doubles(p.force_poly());
  p.energy_ = to_doubles(p.energy_poly());
  return p;
}

Potential Potential::parse(std::string_view text) {
  if (text == "duffing") return duffing();
  const size_t colon = text.find(':');
  if (colon == std::string_view::npos) fail(ErrorKind::parse, "potential spec needs 'kind:params', got '" + std::string(text) + "'");
  const std::string_view kind = text.substr(0, colon);
  const auto params = split_params(text.substr(colon + 1));
  auto single = [&](const std::vector<std::string>& keys) {
    std::map<std::string, std::string> found;
    for (const auto& [k, v] : params) {
      if (std::find(keys.begin(), keys.end(), k) == keys.end()) fail(ErrorKind::parse, "unknown parameter '" + k + "' for " + std::string(kind));
      if (found.count(k)) fail(ErrorKind::parse, "parameter '" + k + "' given twice");
      found[k] = v;
    }
    for (const auto& k : keys) {
      if (!found.count(k)) fail(ErrorKind::parse, "missing parameter '" + k + "' for " + std::string(kind));
    }
    return found;
  };
  if (kind == "poly") {
    auto kv = single({"m"});
    Rational m;
    try {
      m = parse_rational(kv["m"]);
    } catch (const Error&) {
      fail(ErrorKind::parse, "invalid m '" + kv["m"] + "'");
    }
    if (m.get_den() != 1) fail(ErrorKind::parse, "poly family needs an integer m");
    if (m < 2 || m > 1000) fail(ErrorKind::domain, "poly family needs 2 <= m <= 1000");
    return poly_family(static_cast<int>(m.get_num().get_si()));
  }
  if (kind == "rat") {
    auto kv = single({"k", "m"});
    return rational_family(parse_real(kv["k"], "k"), parse_real(kv["m"], "m"));
  }
  if (kind == "quintic") {
    auto kv = single({"k"});
    return quintic(parse_real(kv["k"], "k"));
  }
  if (kind == "gen") {
    std::vector<std::pair<int, Rational>> coeffs;
    for (const auto& [key, value] : params) {
      int index = 0;
      auto res = std::from_chars(key.data(), key.data() + key.size(), index);
      if (res.ec != std::errc() || res.ptr != key.data() + key.size()) fail(ErrorKind::parse, "invalid coefficient index '" + key + "'");
      Rational c;
      try {
        c = parse_rational(value);
      } catch (const Error&) {
        fail(ErrorKind::parse, "invalid coefficient '" + value + "'");
      }
      coeffs.emplace_back(index, c);
    }
    return general_poly(std::move(coeffs));
  }
  fail(ErrorKind::parse, "unknown potential kind '" + std::string(kind) + "'");
}

int Potential::integer_m() const {
  if (kind_ != PotentialKind::poly_family && kind_ != PotentialKind::rational_family) {
    fail(ErrorKind::unsupported, "potential has no exponent m");
  }
  if (m_ != std::floor(m_)) fail(ErrorKind::unsupported, "exact operations need an integer m");
  return static_cast<int>(m_);
}

Potential Potential::with_domain(Interval domain) const {
  if (!(domain.lo < 0 && domain.hi > 0)) fail(ErrorKind::domain, "domain must be an open interval containing 0");
  Potential p = *this;
  p.domain_ = domain;
  return p;
}

void Potential::check_domain(double x) const {
  if (!domain_.contains(x)) fail(ErrorKind::domain, "x = " + format_double(x) + " is outside the domain");
}

double Potential::eval(double x, int order) const {
  check_domain(x);
  if (order < 0 || order > 2) fail(ErrorKind::domain, "derivative order must be 0, 1 or 2");
  if (kind_ == PotentialKind::rational_family) {
    const double l = std::log1p(x * x);
    switch (order) {
      case 0:
        if (std::abs(m_ - 1) < kLogCaseTol) return 0.5 * l;
        return -std::expm1(-(m_ - 1) * l) / (2 * (m_ - 1));
      case 1: return x * std::exp(-m_ * l);
      default: return (1 - (2 * m_ - 1) * x * x) * std::exp(-(m_ + 1) * l);
    }
  }
  switch (order) {
    case 0: return horner(energy_, x);
    case 1: return horner(force_, x);
    default: {
      double acc = 0;
      for (size_t i = force_.size(); i-- > 1;) acc = acc * x + static_cast<double>(i) * force_[i];
      return acc;
    }
  }
}

double Potential::slope(double a, double b) const {
  check_domain(a);
  check_domain(b);
  if (a == b) return dF(a);
  if (kind_ == PotentialKind::rational_family) {
    // log1p(a^2) - log1p(b^2) = log1p(t) with t = (a - b) d.
    const double d = (a + b) / (1 + b * b);
    const double t = (a - b) * d;
    const double lt = std::log1p(t);
    const double ratio_log = t == 0 ? 1.0 : lt / t;
    if (std::abs(m_ - 1) < kLogCaseTol) return 0.5 * d * ratio_log;
    const double mu = m_ - 1;
    const double ratio = t == 0 ? -mu : std::expm1(-mu * lt) / t;
    return -std::exp(-mu * std::log1p(b * b)) * ratio * d / (2 * mu);
  }
  // sum_n e_n (a^n - b^n) / (a - b) with h_{n+1} = a h_n + b^n.
  double h = 1;
  double bpow = b;
  double acc = 0;
  for (size_t n = 1; n < energy_.size(); ++n) {
    acc += energy_[n] * h;
    h = a * h + bpow;
    bpow *= b;
  }
  return acc;
}

bool Potential::is_odd() const {
  if (kind_ != PotentialKind::general_poly) return true;
  return std::all_of(general_.begin(), general_.end(), [](const auto& t) { return t.first % 2 == 1; });
}

UPoly Potential::force_poly() const {
  std::vector<Rational> c{0, 1};
  auto put = [&](int i, const Rational& v) {
    if (static_cast<int>(c.size()) <= i) c.resize(static_cast<size_t>(i) + 1);
    c[static_cast<size_t>(i)] += v;
  };
  switch (kind_) {
    case PotentialKind::poly_family: put(2 * integer_m() - 1, 1); break;
    case PotentialKind::quintic:
      put(3, rational_from_double(k_));
      put(5, 1);
      break;
    case PotentialKind::general_poly:
      for (const auto& [i, v] : general_) put(i, v);
      break;
    case PotentialKind::rational_family: fail(ErrorKind::unsupported, "rational family has no polynomial force");
  }
  return UPoly(std::move(c));
}

UPoly Potential::energy_poly() const {
  const UPoly f = force_poly();
  std::vector<Rational> c(static_cast<size_t>(f.degree()) + 2);
  for (int i = 0; i <= f.degree(); ++i) c[static_cast<size_t>(i) + 1] = f.coeff(i) / (i + 1);
  return UPoly(std::move(c));
}

double Potential::amplitude_scale() const {
  return kind_ == PotentialKind::rational_family ? std::abs(k_) : 1.0;
}

double Potential::time_scale() const {
  return kind_ == PotentialKind::rational_family ? std::pow(std::abs(k_), m_) : 1.0;
}

std::string Potential::spec() const {
  switch (kind_) {
    case PotentialKind::poly_family: return "poly:m=" + std::to_string(integer_m());
    case PotentialKind::rational_family: return "rat:k=" + format_double(k_) + ",m=" + format_double(m_);
    case PotentialKind::quintic: return "quintic:k=" + format_double(k_);
    case PotentialKind::general_poly: {
      std::string s = "gen:";
      for (size_t i = 0; i < general_.size(); ++i) {
        if (i) s += ",";
        s += std::to_string(general_[i].first) + "=" + to_string(general_[i].second);
      }
      return s;
    }
  }
  return "";
}

bool is_global_center(const Potential& p) {
  if (!p.domain().is_full()) fail(ErrorKind::unsupported, "global center test needs the full real line");
  switch (p.kind()) {
    case PotentialKind::poly_family: return true;
    case PotentialKind::quintic: return p.k() > -2;
    // F is bounded for m > 1; for m = 1 it grows like log|x|.
    case PotentialKind::rational_family: return std::abs(p.m() - 1) < kLogCaseTol;
    case PotentialKind::general_poly: {
      // F' = x g(x) with g(0) = 1: no other zero iff g has no real root,
      // which also forces an even-degree F with positive leading term.
      const UPoly f = p.force_poly();
      std::vector<Rational> g(f.coeffs().begin() + 1, f.coeffs().end());
      const UPoly gp(std::move(g));
      if (count_real_roots(gp) != 0) return false;
      const UPoly e = p.energy_poly();
      return e.degree() % 2 == 0 && e.leading() > 0;
    }
  }
  return false;
}

MonotonicityReport monotonicity_criterion(const Potential& p, MonotonicityGrid grid) {
  if (grid.points < 1000) fail(ErrorKind::domain, "monotonicity grid needs at least 1000 points");
  if (!(grid.half_width > 0) || !std::isfinite(grid.half_width)) fail(ErrorKind::domain, "grid half-width must be positive and finite");
  double w = grid.half_width;
  const Interval& d = p.domain();
  w = std::min({w, -d.lo * (1 - 1e-9), d.hi * (1 - 1e-9)});
  MonotonicityReport r;
  r.g_min = std::numeric_limits<double>::infinity();
  r.g_max = -std::numeric_limits<double>::infinity();
  double gabs = 0;
  for (int i = 0; i < grid.points; ++i) {
    const double x = -w + 2 * w * i / (grid.points - 1);
    const double f1 = p.dF(x);
    const double g = f1 * f1 - 2 * p.F(x) * p.d2F(x);
    if (g < r.g_min) {
      r.g_min = g;
      r.x_at_min = x;
    }
    if (g > r.g_max) {
      r.g_max = g;
      r.x_at_max = x;
    }
    gabs = std::max(gabs, std::abs(g));
  }
  r.tol = 1e-12 * gabs;
  if (r.g_min >= -r.tol && r.g_max > r.tol) {
    r.verdict = Monotonicity::increasing;
  } else if (r.g_max <= r.tol && r.g_min < -r.tol) {
    r.verdict = Monotonicity::decreasing;
  }
  return r;
}

namespace {

// Distance from the origin to the solution of F(x) = h on the side s.
double inverse_distance(const Potential& p, double h, int side) {
  if (!(h > 0) || !std::isfinite(h)) fail(ErrorKind::energy_out_of_range, "energy level must be positive and finite");
  const double s = side >= 0 ? 1.0 : -1.0;
  const double limit = s > 0 ? p.domain().hi : -p.domain().lo;
  auto f = [&](double t) { return p.F(s * t) - h; };
  auto df = [&](double t) { return s * p.dF(s * t); };
  auto solve = [&](auto&& g, double a, double b, double ga, double gb) {
    boost::math::tools::eps_tolerance<double> tol(std::numeric_limits<double>::digits - 2);
    std::uintmax_t iters = 200;
    auto [x0, x1] = boost::math::tools::toms748_solve(g, a, b, ga, gb, tol, iters);
    return 0.5 * (x0 + x1);
  };
  const std::string where = s > 0 ? "x > 0" : "x < 0";
  constexpr int kSamples = 32;
  double t_prev = 0;
  double f_prev = -h;
  double lo = 0;
  double hi = 1;
  while (lo < kBracketCap) {
    for (int i = 1; i <= kSamples; ++i) {
      double t = lo + (hi - lo) * i / kSamples;
      bool at_edge = false;
      if (t >= limit) {
        t = limit * (1 - 1e-12);
        at_edge = true;
      }
      if (t <= t_prev) continue;
      const double ft = f(t);
      if (df(t) <= 0) {
        // F turns back inside this step; a tangency counts as a solution.
        const double tc = t_prev == 0 ? t : solve(df, t_prev, t, df(t_prev), df(t));
        const double fc = f(tc);
        if (std::abs(fc) <= 1e-12 * h) return tc;
        if (fc > 0) return solve(f, t_prev, tc, f_prev, fc);
        fail(ErrorKind::energy_out_of_range, "level F = " + format_double(h) + " not reached on " + where + " before a critical point of F");
      }
      if (ft >= 0) return solve(f, t_prev, t, f_prev, ft);
      t_prev = t;
      f_prev = ft;
      if (at_edge) fail(ErrorKind::energy_out_of_range, "level F = " + format_double(h) + " not reached on " + where + " inside the domain");
    }
    lo = hi;
    hi *= 2;
  }
  fail(ErrorKind::energy_out_of_range, "level F = " + format_double(h) + " not reached on " + where);
}

}  // namespace

double inverse_branch(const Potential& p, double h, int side) {
  const double t = inverse_distance(p, h, side);
  return side >= 0 ? t : -t;
}

double lf_length(const Potential& p, double h) {
  return inverse_distance(p, h, 1) + inverse_distance(p, h, -1);
}

}  // namespace period_balance
