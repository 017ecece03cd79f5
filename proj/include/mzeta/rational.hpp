#pragma once

#include <gmpxx.h>

#include <string>
#include <string_view>

namespace mzeta {

// gmpxx canonicalizes mpq_class after every arithmetic operation, so values
// are always in lowest terms with a positive denominator.
using BigInt = mpz_class;
using Rational = mpq_class;

// "numerator/denominator", always with an explicit denominator.
std::string to_fraction_string(const Rational& q);

// Accepts "a", "a/b" and finite decimals such as "1.5"; throws std::invalid_argument.
Rational parse_rational(std::string_view text);

BigInt pow_int(const BigInt& base, unsigned long exponent);
Rational pow_rational(const Rational& base, long exponent);

}  // namespace mzeta
