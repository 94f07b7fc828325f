#pragma once

#include <complex>
#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "splice/arith.hpp"

namespace splice {

/// Per-leaf exponents, in leaf declaration order.
using ExponentVector = std::vector<std::int64_t>;

/// Non-negative rational weights, one per leaf.
using WeightVector = std::vector<Rational>;

struct Term {
  Rational coeff;
  ExponentVector exponent;
};

/// Finite sum of terms with non-zero rational coefficients and distinct
/// exponents, kept in graded-lex order (total degree ascending, ties broken
/// lexicographically with z1 > z2 > ...).
class Polynomial {
 public:
  Polynomial() = default;
  explicit Polynomial(int num_vars) : num_vars_(num_vars) {}
  /// Merges equal exponents and drops zero coefficients.
  Polynomial(int num_vars, std::vector<Term> terms);

  static Polynomial monomial(ExponentVector exponent, Rational coeff = 1);

  int num_vars() const { return num_vars_; }
  const std::vector<Term>& terms() const { return terms_; }
  bool is_zero() const { return terms_.empty(); }
  bool is_monomial() const { return terms_.size() == 1; }
  /// Coefficient of z^m, zero when absent.
  Rational coeff(const ExponentVector& m) const;

  Polynomial operator+(const Polynomial& other) const;
  Polynomial operator-(const Polynomial& other) const;
  Polynomial operator*(const Polynomial& other) const;
  Polynomial scaled(const Rational& c) const;

  bool operator==(const Polynomial& other) const;

 private:
  int num_vars_ = 0;
  std::vector<Term> terms_;
};

bool term_order_less(const ExponentVector& a, const ExponentVector& b);

/// Minimum of w.m over the terms; nullopt for the zero polynomial.
std::optional<Rational> w_weight(const Polynomial& p, const WeightVector& w);
Polynomial initial_form(const Polynomial& p, const WeightVector& w);

/// Sets the variables of the given leaves to zero.
Polynomial tau_truncate(const Polynomial& p, const std::vector<int>& leaves);

Rational evaluate(const Polynomial& p, const std::vector<Rational>& point);
std::complex<double> evaluate(const Polynomial& p, const std::vector<std::complex<double>>& point);

/// Human-readable form such as "z1^2 - 2*z2^3 + z4*z5".
std::string to_string(const Polynomial& p);

}  // namespace splice
