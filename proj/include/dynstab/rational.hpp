#pragma once

#include <gmpxx.h>

#include <string>
#include <string_view>

namespace dynstab {

// Arbitrary precision rational, always kept canonical (reduced, den > 0).
using Rational = mpq_class;
using Integer = mpz_class;

// "p/q" form, always with an explicit denominator ("0/1", "-3/1").
std::string to_string(const Rational& r);

// Accepts "p/q" or an integer "p". Throws DomainError on malformed input or q = 0.
Rational parse_rational(std::string_view text);

}  // namespace dynstab
