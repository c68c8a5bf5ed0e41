#pragma once

#include <gmpxx.h>

#include <string>
#include <string_view>
#include <vector>

namespace period_balance {

using Rational = mpq_class;
using BigInt = mpz_class;

// Accepts "3", "-1/2", "0.25", "1e-3". Decimal forms are converted exactly.
Rational parse_rational(std::string_view text);

// "p/q" or "p" for integers.
std::string to_string(const Rational& q);

// Exact value of a finite double.
Rational rational_from_double(double x);

inline double to_double(const Rational& q) { return q.get_d(); }

Rational binomial(long n, long k);
Rational factorial(long n);
// n!! with 0!! = (-1)!! = 1.
Rational double_factorial(long n);

std::vector<std::string> to_strings(const std::vector<Rational>& values);

}  // namespace period_balance
