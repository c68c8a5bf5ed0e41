#include "period_balance/trig_poly.hpp"

namespace period_balance {

// cos^n = 2^{1-n} sum_{k < n/2} C(n,k) cos((n-2k) tau) + [n even] 2^{-n} C(n, n/2)
TrigPoly<Rational> cos_power(int n) {
  if (n < 0) fail(ErrorKind::domain, "negative power of cos");
  TrigPoly<Rational> r(n);
  if (n == 0) {
    r.set_a(0, 1);
    return r;
  }
  BigInt two_n;
  mpz_ui_pow_ui(two_n.get_mpz_t(), 2, static_cast<unsigned long>(n));
  for (int k = 0; 2 * k < n; ++k) r.set_a(n - 2 * k, binomial(n, k) * 2 / Rational(two_n));
  if (n % 2 == 0) r.set_a(0, binomial(n, n / 2) / Rational(two_n));
  return r;
}

}  // namespace period_balance
