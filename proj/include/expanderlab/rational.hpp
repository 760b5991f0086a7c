#pragma once

#include <gmpxx.h>

#include <cstdint>
#include <string>
#include <string_view>

namespace expanderlab {

// Exact rationals are GMP's mpq_class, always kept canonical
// (gcd(num, den) = 1, den > 0).
using Rational = mpq_class;
using BigInt = mpz_class;

// Accepts "num" or "num/den" with an optional sign on the numerator.
// Throws Error{ParseError} on malformed input or a zero denominator.
Rational parse_rational(std::string_view token);

std::string format_rational(const Rational& r);

// Exponent of p in |n|; n must be non-zero.
int64_t valuation(const BigInt& n, uint64_t p);

// p-adic absolute value p^(-v_p(r)); zero maps to zero.
Rational padic_abs(const Rational& r, uint64_t p);

// r^e for integer e (negative exponents need r != 0).
Rational rational_pow(const Rational& r, int64_t e);

}  // namespace expanderlab
