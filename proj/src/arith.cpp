#include "splice/arith.hpp"

#include <limits>

#include "splice/error.hpp"

namespace splice {

std::string_view to_string(ErrorCode code) {
  switch (code) {
    case ErrorCode::Parse: return "ParseError";
    case ErrorCode::InvalidArgument: return "InvalidArgument";
    case ErrorCode::InvalidDiagram: return "InvalidDiagram";
    case ErrorCode::UnknownVertex: return "UnknownVertex";
    case ErrorCode::EdgeNotInternal: return "EdgeNotInternal";
    case ErrorCode::NotALeaf: return "NotALeaf";
    case ErrorCode::NotAnEndNode: return "NotAnEndNode";
    case ErrorCode::GenerationExhausted: return "GenerationExhausted";
    case ErrorCode::ShapeMismatch: return "ShapeMismatch";
    case ErrorCode::HammViolation: return "HammViolation";
    case ErrorCode::TailViolation: return "TailViolation";
    case ErrorCode::ConditionViolation: return "ConditionViolation";
    case ErrorCode::NonIntegralMultiplicity: return "NonIntegralMultiplicity";
    case ErrorCode::Inconsistent: return "Inconsistent";
    case ErrorCode::NoTorusPoint: return "NoTorusPoint";
    case ErrorCode::EliminationDegenerate: return "EliminationDegenerate";
    case ErrorCode::SolveFailed: return "SolveFailed";
    case ErrorCode::NotRealizable: return "NotRealizable";
    case ErrorCode::NonCoprimeFan: return "NonCoprimeFan";
    case ErrorCode::VerificationFailed: return "VerificationFailed";
  }
  return "Unknown";
}

BigInt gcd(const BigInt& a, const BigInt& b) {
  BigInt r;
  mpz_gcd(r.get_mpz_t(), a.get_mpz_t(), b.get_mpz_t());
  return r;
}

BigInt lcm(const BigInt& a, const BigInt& b) {
  BigInt r;
  mpz_lcm(r.get_mpz_t(), a.get_mpz_t(), b.get_mpz_t());
  return r;
}

BigInt gcd_of(const std::vector<BigInt>& values) {
  BigInt g = 0;
  for (const auto& v : values) g = gcd(g, v);
  return g;
}

Rational make_rational(const BigInt& num, const BigInt& den) {
  if (den == 0) throw Error(ErrorCode::InvalidArgument, "zero denominator");
  Rational q(num, den);
  q.canonicalize();
  return q;
}

bool is_integer(const Rational& q) { return q.get_den() == 1; }

std::string to_string(const BigInt& x) { return x.get_str(); }

std::string to_string(const Rational& q) {
  if (q.get_den() == 1) return q.get_num().get_str();
  return q.get_num().get_str() + "/" + q.get_den().get_str();
}

namespace {

bool is_decimal_integer(std::string_view s) {
  if (s.empty()) return false;
  std::size_t i = (s[0] == '-' || s[0] == '+') ? 1 : 0;
  if (i == s.size()) return false;
  for (; i < s.size(); ++i) {
    if (s[i] < '0' || s[i] > '9') return false;
  }
  return true;
}

}  // namespace

BigInt parse_bigint(std::string_view text) {
  if (!is_decimal_integer(text)) {
    throw Error(ErrorCode::Parse, "not an integer: '" + std::string(text) + "'");
  }
  std::string s(text);
  if (s[0] == '+') s.erase(0, 1);
  return BigInt(s, 10);
}

Rational parse_rational(std::string_view text) {
  auto slash = text.find('/');
  if (slash == std::string_view::npos) return Rational(parse_bigint(text));
  BigInt num = parse_bigint(text.substr(0, slash));
  std::string_view den_text = text.substr(slash + 1);
  if (!den_text.empty() && (den_text[0] == '-' || den_text[0] == '+')) {
    throw Error(ErrorCode::Parse, "signed denominator: '" + std::string(text) + "'");
  }
  BigInt den = parse_bigint(den_text);
  if (den == 0) throw Error(ErrorCode::Parse, "zero denominator: '" + std::string(text) + "'");
  return make_rational(num, den);
}

Rational pair(const std::vector<Rational>& w, const std::vector<std::int64_t>& m) {
  if (w.size() != m.size()) throw Error(ErrorCode::ShapeMismatch, "weight vector and exponent differ in length");
  Rational s = 0;
  for (std::size_t i = 0; i < m.size(); ++i) {
    if (m[i] != 0) s += w[i] * Rational(static_cast<long>(m[i]));
  }
  return s;
}

BigInt pair(const std::vector<BigInt>& w, const std::vector<std::int64_t>& m) {
  if (w.size() != m.size()) throw Error(ErrorCode::ShapeMismatch, "weight vector and exponent differ in length");
  BigInt s = 0;
  for (std::size_t i = 0; i < m.size(); ++i) {
    if (m[i] != 0) s += w[i] * static_cast<long>(m[i]);
  }
  return s;
}

std::vector<BigInt> primitive(const std::vector<BigInt>& v) {
  BigInt g = gcd_of(v);
  if (g == 0 || g == 1) return v;
  std::vector<BigInt> out;
  out.reserve(v.size());
  for (const auto& x : v) out.push_back(BigInt(x / g));
  return out;
}

bool fits_int64(const BigInt& x) {
  return x >= BigInt(std::to_string(std::numeric_limits<std::int64_t>::min())) &&
         x <= BigInt(std::to_string(std::numeric_limits<std::int64_t>::max()));
}

std::int64_t to_int64(const BigInt& x) {
  if (!fits_int64(x)) throw Error(ErrorCode::InvalidArgument, "integer out of 64-bit range: " + x.get_str());
  return std::stoll(x.get_str());
}

}  // namespace splice
