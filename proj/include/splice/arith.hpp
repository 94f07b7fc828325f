#pragma once

#include <gmpxx.h>

#include <cstdint>
#include <string>
#include <string_view>
#include <vector>

namespace splice {

using BigInt = mpz_class;
using Rational = mpq_class;

BigInt gcd(const BigInt& a, const BigInt& b);
BigInt lcm(const BigInt& a, const BigInt& b);
BigInt gcd_of(const std::vector<BigInt>& values);

/// Canonical p/q with q > 0 and gcd(p, q) = 1.
Rational make_rational(const BigInt& num, const BigInt& den);

bool is_integer(const Rational& q);

std::string to_string(const BigInt& x);
/// "p" when the denominator is one, "p/q" otherwise.
std::string to_string(const Rational& q);

BigInt parse_bigint(std::string_view text);
/// Accepts "p", "-p", "p/q"; rejects zero denominators and stray characters.
Rational parse_rational(std::string_view text);

/// Dot product of an integer vector with a rational one.
Rational pair(const std::vector<Rational>& w, const std::vector<std::int64_t>& m);
BigInt pair(const std::vector<BigInt>& w, const std::vector<std::int64_t>& m);

/// Divides by the gcd of the entries. The zero vector is returned unchanged.
std::vector<BigInt> primitive(const std::vector<BigInt>& v);

bool fits_int64(const BigInt& x);
std::int64_t to_int64(const BigInt& x);

}  // namespace splice
