#include "period_balance/mpoly.hpp"

#include <algorithm>
#include <map>
#include <sstream>
#include <unordered_map>

#include "period_balance/errors.hpp"

namespace period_balance {

namespace {

Monomial zero_monomial() {
  Monomial m{};
  return m;
}

bool divisible(const Monomial& a, const Monomial& b) {
  for (int i = 0; i < kMaxVars; ++i) {
    if (a[static_cast<size_t>(i)] < b[static_cast<size_t>(i)]) return false;
  }
  return true;
}

Monomial mono_mul(const Monomial& a, const Monomial& b) {
  Monomial r;
  for (int i = 0; i < kMaxVars; ++i) {
    const unsigned s = unsigned(a[static_cast<size_t>(i)]) + b[static_cast<size_t>(i)];
    if (s > 255) fail(ErrorKind::domain, "monomial exponent overflow (> 255)");
    r[static_cast<size_t>(i)] = static_cast<std::uint8_t>(s);
  }
  return r;
}

Monomial mono_div(const Monomial& a, const Monomial& b) {
  Monomial r;
  for (int i = 0; i < kMaxVars; ++i) {
    r[static_cast<size_t>(i)] = static_cast<std::uint8_t>(a[static_cast<size_t>(i)] - b[static_cast<size_t>(i)]);
  }
  return r;
}

bool term_greater(const MPoly::Term& a, const MPoly::Term& b) { return a.first > b.first; }

}  // namespace

size_t MonomialHash::operator()(const Monomial& m) const noexcept {
  std::uint64_t lo = 0, hi = 0;
  for (int i = 0; i < 8; ++i) lo |= std::uint64_t(m[static_cast<size_t>(i)]) << (8 * i);
  for (int i = 0; i < 8; ++i) hi |= std::uint64_t(m[static_cast<size_t>(8 + i)]) << (8 * i);
  std::uint64_t h = lo * 0x9E3779B97F4A7C15ULL ^ (hi + 0x632BE59BD9B4E019ULL + (lo << 6) + (lo >> 2));
  h ^= h >> 29;
  return static_cast<size_t>(h * 0xBF58476D1CE4E5B9ULL);
}

PolyRing::PolyRing(std::vector<std::string> names) : names_(std::move(names)) {
  if (static_cast<int>(names_.size()) > kMaxVars) {
    fail(ErrorKind::unsupported, "polynomial rings support at most 16 variables");
  }
}

int PolyRing::index(const std::string& name) const {
  auto it = std::find(names_.begin(), names_.end(), name);
  return it == names_.end() ? -1 : static_cast<int>(it - names_.begin());
}

int PolyRing::require(const std::string& name) const {
  int i = index(name);
  if (i < 0) fail(ErrorKind::domain, "unknown variable '" + name + "'");
  return i;
}

RingPtr make_ring(std::vector<std::string> names) {
  return std::make_shared<const PolyRing>(std::move(names));
}

MPoly::MPoly(RingPtr ring, std::vector<Term> terms) : ring_(std::move(ring)), terms_(std::move(terms)) {
  normalize();
}

MPoly MPoly::constant(const Rational& c, RingPtr ring) {
  MPoly p(std::move(ring));
  if (c != 0) p.terms_.emplace_back(zero_monomial(), c);
  return p;
}

MPoly MPoly::variable(const RingPtr& ring, int index, unsigned power) {
  if (index < 0 || index >= ring->size()) fail(ErrorKind::domain, "variable index out of range");
  Monomial m = zero_monomial();
  if (power > 255) fail(ErrorKind::domain, "monomial exponent overflow (> 255)");
  m[static_cast<size_t>(index)] = static_cast<std::uint8_t>(power);
  MPoly p(ring);
  p.terms_.emplace_back(m, Rational(1));
  return p;
}

MPoly MPoly::variable(const RingPtr& ring, const std::string& name, unsigned power) {
  return variable(ring, ring->require(name), power);
}

void MPoly::normalize() {
  std::sort(terms_.begin(), terms_.end(), term_greater);
  std::vector<Term> out;
  out.reserve(terms_.size());
  for (auto& t : terms_) {
    if (!out.empty() && out.back().first == t.first) {
      out.back().second += t.second;
    } else {
      if (!out.empty() && out.back().second == 0) out.pop_back();
      out.push_back(std::move(t));
    }
  }
  if (!out.empty() && out.back().second == 0) out.pop_back();
  terms_ = std::move(out);
}

const RingPtr& MPoly::common_ring(const MPoly& o) const {
  if (!ring_) return o.ring_;
  if (!o.ring_ || ring_ == o.ring_) return ring_;
  if (ring_->names() != o.ring_->names()) {
    // Ring-less behaviour only applies to constants.
    if (o.is_constant()) return ring_;
    if (is_constant()) return o.ring_;
    fail(ErrorKind::domain, "polynomials live in different rings");
  }
  return ring_;
}

bool MPoly::is_constant() const {
  return terms_.empty() || (terms_.size() == 1 && terms_[0].first == zero_monomial());
}

Rational MPoly::constant_term() const {
  if (!terms_.empty() && terms_.back().first == zero_monomial()) return terms_.back().second;
  return 0;
}

int MPoly::degree(int var) const {
  if (terms_.empty()) return -1;
  int d = 0;
  for (const auto& t : terms_) d = std::max(d, int(t.first[static_cast<size_t>(var)]));
  return d;
}

int MPoly::degree(const std::string& var) const {
  if (!ring_) return terms_.empty() ? -1 : 0;
  return degree(ring_->require(var));
}

int MPoly::total_degree() const {
  if (terms_.empty()) return -1;
  int d = 0;
  for (const auto& t : terms_) {
    int s = 0;
    for (auto e : t.first) s += e;
    d = std::max(d, s);
  }
  return d;
}

Rational MPoly::coefficient(const Monomial& m) const {
  auto it = std::lower_bound(terms_.begin(), terms_.end(), Term{m, Rational(0)}, term_greater);
  if (it != terms_.end() && it->first == m) return it->second;
  return 0;
}

MPoly& MPoly::operator+=(const MPoly& o) {
  RingPtr ring = common_ring(o);
  std::vector<Term> out;
  out.reserve(terms_.size() + o.terms_.size());
  size_t i = 0, j = 0;
  while (i < terms_.size() || j < o.terms_.size()) {
    if (j == o.terms_.size() || (i < terms_.size() && terms_[i].first > o.terms_[j].first)) {
      out.push_back(std::move(terms_[i++]));
    } else if (i == terms_.size() || o.terms_[j].first > terms_[i].first) {
      out.push_back(o.terms_[j++]);
    } else {
      Rational s = terms_[i].second + o.terms_[j].second;
      if (s != 0) out.emplace_back(terms_[i].first, std::move(s));
      ++i;
      ++j;
    }
  }
  terms_ = std::move(out);
  ring_ = std::move(ring);
  return *this;
}

MPoly& MPoly::operator-=(const MPoly& o) { return *this += -o; }

MPoly& MPoly::operator*=(const Rational& s) {
  if (s == 0) {
    terms_.clear();
    return *this;
  }
  for (auto& t : terms_) t.second *= s;
  return *this;
}

MPoly MPoly::operator-() const {
  MPoly r = *this;
  for (auto& t : r.terms_) t.second = -t.second;
  return r;
}

MPoly operator*(const MPoly& a, const MPoly& b) {
  RingPtr ring = a.common_ring(b);
  MPoly r(ring);
  if (a.is_zero() || b.is_zero()) return r;
  if (a.size() == 1 || b.size() == 1) {
    const MPoly& single = a.size() == 1 ? a : b;
    const MPoly& other = a.size() == 1 ? b : a;
    const auto& [m, c] = single.terms_[0];
    r.terms_.reserve(other.size());
    for (const auto& [mo, co] : other.terms_) r.terms_.emplace_back(mono_mul(m, mo), c * co);
    return r;  // monomial multiplication preserves the order
  }
  std::unordered_map<Monomial, Rational, MonomialHash> acc;
  acc.reserve(std::min<size_t>(a.size() * b.size(), 1u << 20));
  Rational tmp;
  for (const auto& [ma, ca] : a.terms_) {
    for (const auto& [mb, cb] : b.terms_) {
      mpq_mul(tmp.get_mpq_t(), ca.get_mpq_t(), cb.get_mpq_t());
      auto [it, inserted] = acc.try_emplace(mono_mul(ma, mb));
      if (inserted) {
        it->second = tmp;
      } else {
        mpq_add(it->second.get_mpq_t(), it->second.get_mpq_t(), tmp.get_mpq_t());
      }
    }
  }
  r.terms_.reserve(acc.size());
  for (auto& [m, c] : acc) {
    if (c != 0) r.terms_.emplace_back(m, std::move(c));
  }
  std::sort(r.terms_.begin(), r.terms_.end(), term_greater);
  return r;
}

MPoly MPoly::pow(unsigned n) const {
  MPoly result = constant(1, ring_);
  MPoly base = *this;
  while (n > 0) {
    if (n & 1u) result = result * base;
    n >>= 1u;
    if (n > 0) base = base * base;
  }
  return result;
}

bool MPoly::operator==(const MPoly& o) const {
  if (terms_.size() != o.terms_.size()) return false;
  if (ring_ && o.ring_ && ring_ != o.ring_ && ring_->names() != o.ring_->names() && !is_constant()) {
    return false;
  }
  for (size_t i = 0; i < terms_.size(); ++i) {
    if (terms_[i].first != o.terms_[i].first || terms_[i].second != o.terms_[i].second) return false;
  }
  return true;
}

bool MPoly::divides_into(const MPoly& d, MPoly& quotient) const {
  if (d.is_zero()) fail(ErrorKind::domain, "polynomial division by zero");
  RingPtr ring = common_ring(d);
  quotient = MPoly(ring);
  if (is_zero()) return true;
  const auto& [lm, lc] = d.terms_.front();
  if (d.size() == 1) {
    for (const auto& [m, c] : terms_) {
      if (!divisible(m, lm)) return false;
      quotient.terms_.emplace_back(mono_div(m, lm), c / lc);
    }
    return true;
  }
  std::map<Monomial, Rational, std::greater<>> rem;
  for (const auto& t : terms_) rem.emplace(t.first, t.second);
  std::vector<Term> q;
  Rational tmp;
  while (!rem.empty()) {
    auto top = rem.begin();
    if (!divisible(top->first, lm)) return false;
    Monomial qm = mono_div(top->first, lm);
    Rational qc = top->second / lc;
    rem.erase(top);
    for (size_t k = 1; k < d.terms_.size(); ++k) {
      const auto& [dm, dc] = d.terms_[k];
      mpq_mul(tmp.get_mpq_t(), qc.get_mpq_t(), dc.get_mpq_t());
      auto [it, inserted] = rem.try_emplace(mono_mul(qm, dm));
      if (inserted) {
        it->second = -tmp;
      } else {
        it->second -= tmp;
        if (it->second == 0) rem.erase(it);
      }
    }
    q.emplace_back(qm, std::move(qc));
  }
  quotient.terms_ = std::move(q);
  return true;
}

MPoly MPoly::exact_divide(const MPoly& d) const {
  MPoly q;
  if (!divides_into(d, q)) {
    fail(ErrorKind::consistency, "exact polynomial division left a nonzero remainder");
  }
  return q;
}

MPoly MPoly::derivative(int var) const {
  MPoly r(ring_);
  for (const auto& [m, c] : terms_) {
    const auto e = m[static_cast<size_t>(var)];
    if (e == 0) continue;
    Monomial dm = m;
    dm[static_cast<size_t>(var)] = static_cast<std::uint8_t>(e - 1);
    r.terms_.emplace_back(dm, c * e);
  }
  r.normalize();
  return r;
}

std::vector<MPoly> MPoly::coefficients_in(int var) const {
  const int d = degree(var);
  std::vector<MPoly> out(static_cast<size_t>(std::max(d, 0)) + 1, MPoly(ring_));
  if (d < 0) return out;
  std::vector<std::vector<Term>> buckets(static_cast<size_t>(d) + 1);
  for (const auto& [m, c] : terms_) {
    Monomial rm = m;
    const auto e = rm[static_cast<size_t>(var)];
    rm[static_cast<size_t>(var)] = 0;
    buckets[e].emplace_back(rm, c);
  }
  for (int k = 0; k <= d; ++k) out[static_cast<size_t>(k)] = MPoly(ring_, std::move(buckets[static_cast<size_t>(k)]));
  return out;
}

MPoly MPoly::substitute(int var, const MPoly& value) const {
  auto parts = coefficients_in(var);
  MPoly result = MPoly(common_ring(value));
  // Horner in the substituted value.
  for (auto it = parts.rbegin(); it != parts.rend(); ++it) result = result * value + *it;
  return result;
}

MPoly MPoly::substitute(int var, const Rational& value) const {
  MPoly r(ring_);
  Rational pw;
  for (const auto& [m, c] : terms_) {
    Monomial rm = m;
    const auto e = rm[static_cast<size_t>(var)];
    rm[static_cast<size_t>(var)] = 0;
    mpz_class num, den;
    mpz_pow_ui(num.get_mpz_t(), value.get_num_mpz_t(), e);
    mpz_pow_ui(den.get_mpz_t(), value.get_den_mpz_t(), e);
    pw = Rational(num, den);
    r.terms_.emplace_back(rm, c * pw);
  }
  r.normalize();
  return r;
}

MPoly MPoly::primitive_part() const {
  if (is_zero()) return *this;
  BigInt num_gcd = 0;
  BigInt den_lcm = 1;
  for (const auto& [m, c] : terms_) {
    mpz_gcd(num_gcd.get_mpz_t(), num_gcd.get_mpz_t(), c.get_num_mpz_t());
    mpz_lcm(den_lcm.get_mpz_t(), den_lcm.get_mpz_t(), c.get_den_mpz_t());
  }
  Rational scale(den_lcm, num_gcd);
  scale.canonicalize();
  if (terms_.front().second < 0) scale = -scale;
  return *this * scale;
}

MPoly MPoly::in_ring(const RingPtr& target) const {
  if (!ring_) {
    MPoly r = *this;
    r.ring_ = target;
    return r;
  }
  std::vector<int> map(static_cast<size_t>(ring_->size()));
  for (int i = 0; i < ring_->size(); ++i) map[static_cast<size_t>(i)] = target->index(ring_->name(i));
  std::vector<Term> out;
  out.reserve(terms_.size());
  for (const auto& [m, c] : terms_) {
    Monomial nm = zero_monomial();
    for (int i = 0; i < ring_->size(); ++i) {
      if (m[static_cast<size_t>(i)] == 0) continue;
      if (map[static_cast<size_t>(i)] < 0) {
        fail(ErrorKind::domain, "variable '" + ring_->name(i) + "' missing from target ring");
      }
      nm[static_cast<size_t>(map[static_cast<size_t>(i)])] = m[static_cast<size_t>(i)];
    }
    out.emplace_back(nm, c);
  }
  return MPoly(target, std::move(out));
}

double MPoly::evaluate(const std::vector<double>& point) const {
  return evaluate<double>(point, [](const Rational& q) { return q.get_d(); });
}

Rational MPoly::evaluate(const std::vector<Rational>& point) const {
  return evaluate<Rational>(point, [](const Rational& q) { return q; });
}

std::string MPoly::to_string() const {
  if (terms_.empty()) return "0";
  std::ostringstream os;
  bool first = true;
  for (const auto& [m, c] : terms_) {
    Rational mag = abs(c);
    if (first) {
      if (c < 0) os << "-";
    } else {
      os << (c < 0 ? " - " : " + ");
    }
    first = false;
    bool has_var = false;
    std::ostringstream vars;
    for (int i = 0; ring_ && i < ring_->size(); ++i) {
      const auto e = m[static_cast<size_t>(i)];
      if (e == 0) continue;
      if (has_var) vars << "*";
      vars << ring_->name(i);
      if (e > 1) vars << "^" << int(e);
      has_var = true;
    }
    if (!has_var) {
      os << period_balance::to_string(mag);
    } else if (mag == 1) {
      os << vars.str();
    } else {
      os << period_balance::to_string(mag) << "*" << vars.str();
    }
  }
  return os.str();
}

std::string MPoly::canonical_text() const {
  std::ostringstream os;
  const int n = ring_ ? ring_->size() : 0;
  os << "vars:";
  for (int i = 0; i < n; ++i) os << " " << ring_->name(i);
  os << "\n";
  for (const auto& [m, c] : terms_) {
    for (int i = 0; i < n; ++i) os << (i ? " " : "") << int(m[static_cast<size_t>(i)]);
    os << " : " << period_balance::to_string(c) << "\n";
  }
  return os.str();
}

MPoly bareiss_determinant(std::vector<std::vector<MPoly>> m) {
  const size_t n = m.size();
  if (n == 0) return MPoly::constant(1);
  for (const auto& row : m) {
    if (row.size() != n) fail(ErrorKind::domain, "determinant needs a square matrix");
  }
  RingPtr ring;
  for (const auto& row : m) {
    for (const auto& e : row) {
      if (e.ring()) ring = e.ring();
    }
  }
  bool negate = false;
  MPoly prev = MPoly::constant(1, ring);
  for (size_t k = 0; k + 1 < n; ++k) {
    if (m[k][k].is_zero()) {
      size_t swap = k + 1;
      while (swap < n && m[swap][k].is_zero()) ++swap;
      if (swap == n) return MPoly(ring);
      std::swap(m[k], m[swap]);
      negate = !negate;
    }
    for (size_t i = k + 1; i < n; ++i) {
      for (size_t j = k + 1; j < n; ++j) {
        MPoly num = m[k][k] * m[i][j];
        if (!m[i][k].is_zero() && !m[k][j].is_zero()) num -= m[i][k] * m[k][j];
        m[i][j] = num.exact_divide(prev);
      }
      m[i][k] = MPoly(ring);
    }
    prev = m[k][k];
  }
  MPoly det = m[n - 1][n - 1];
  return negate ? -det : det;
}

MPoly resultant(const MPoly& p, const MPoly& q, int var) {
  RingPtr ring = p.ring() ? p.ring() : q.ring();
  if (p.is_zero() || q.is_zero()) return MPoly(ring);
  const int dp = p.degree(var);
  const int dq = q.degree(var);
  if (dp == 0) return p.pow(static_cast<unsigned>(dq));
  if (dq == 0) return q.pow(static_cast<unsigned>(dp));
  auto cp = p.coefficients_in(var);
  auto cq = q.coefficients_in(var);
  const size_t n = static_cast<size_t>(dp + dq);
  std::vector<std::vector<MPoly>> s(n, std::vector<MPoly>(n, MPoly(ring)));
  for (int r = 0; r < dq; ++r) {
    for (int k = 0; k <= dp; ++k) s[static_cast<size_t>(r)][static_cast<size_t>(r + k)] = cp[static_cast<size_t>(dp - k)];
  }
  for (int r = 0; r < dp; ++r) {
    for (int k = 0; k <= dq; ++k) s[static_cast<size_t>(dq + r)][static_cast<size_t>(r + k)] = cq[static_cast<size_t>(dq - k)];
  }
  return bareiss_determinant(std::move(s));
}

}  // namespace period_balance
