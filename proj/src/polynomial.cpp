#include "splice/polynomial.hpp"

#include <algorithm>
#include <map>
#include <numeric>

#include "splice/error.hpp"

namespace splice {

namespace {

std::int64_t degree(const ExponentVector& m) { return std::accumulate(m.begin(), m.end(), std::int64_t{0}); }

struct OrderLess {
  bool operator()(const ExponentVector& a, const ExponentVector& b) const { return term_order_less(a, b); }
};

}  // namespace

bool term_order_less(const ExponentVector& a, const ExponentVector& b) {
  const std::int64_t da = degree(a), db = degree(b);
  if (da != db) return da < db;
  return a > b;
}

Polynomial::Polynomial(int num_vars, std::vector<Term> terms) : num_vars_(num_vars) {
  std::map<ExponentVector, Rational, OrderLess> merged;
  for (auto& t : terms) {
    if (static_cast<int>(t.exponent.size()) != num_vars) {
      throw Error(ErrorCode::ShapeMismatch, "exponent of length " + std::to_string(t.exponent.size()) +
                                                " in a polynomial in " + std::to_string(num_vars) + " variables");
    }
    for (auto e : t.exponent) {
      if (e < 0) throw Error(ErrorCode::InvalidArgument, "negative exponent");
    }
    merged[t.exponent] += t.coeff;
  }
  for (auto& [m, c] : merged) {
    if (c != 0) terms_.push_back({c, m});
  }
}

Polynomial Polynomial::monomial(ExponentVector exponent, Rational coeff) {
  const int n = static_cast<int>(exponent.size());
  return Polynomial(n, {{std::move(coeff), std::move(exponent)}});
}

Rational Polynomial::coeff(const ExponentVector& m) const {
  for (const auto& t : terms_) {
    if (t.exponent == m) return t.coeff;
  }
  return 0;
}

Polynomial Polynomial::operator+(const Polynomial& other) const {
  if (!other.is_zero() && !is_zero() && other.num_vars_ != num_vars_) {
    throw Error(ErrorCode::ShapeMismatch, "adding polynomials in different numbers of variables");
  }
  const int n = is_zero() ? other.num_vars_ : num_vars_;
  std::vector<Term> all = terms_;
  all.insert(all.end(), other.terms_.begin(), other.terms_.end());
  return Polynomial(n, std::move(all));
}

Polynomial Polynomial::operator-(const Polynomial& other) const { return *this + other.scaled(-1); }

Polynomial Polynomial::operator*(const Polynomial& other) const {
  if (is_zero() || other.is_zero()) return Polynomial(std::max(num_vars_, other.num_vars_));
  if (other.num_vars_ != num_vars_) {
    throw Error(ErrorCode::ShapeMismatch, "multiplying polynomials in different numbers of variables");
  }
  std::vector<Term> out;
  out.reserve(terms_.size() * other.terms_.size());
  for (const auto& a : terms_) {
    for (const auto& b : other.terms_) {
      ExponentVector m(a.exponent);
      for (std::size_t i = 0; i < m.size(); ++i) m[i] += b.exponent[i];
      out.push_back({a.coeff * b.coeff, std::move(m)});
    }
  }
  return Polynomial(num_vars_, std::move(out));
}

Polynomial Polynomial::scaled(const Rational& c) const {
  std::vector<Term> out = terms_;
  for (auto& t : out) t.coeff *= c;
  return Polynomial(num_vars_, std::move(out));
}

bool Polynomial::operator==(const Polynomial& other) const {
  if (terms_.size() != other.terms_.size()) return false;
  if (!terms_.empty() && num_vars_ != other.num_vars_) return false;
  for (std::size_t i = 0; i < terms_.size(); ++i) {
    if (terms_[i].coeff != other.terms_[i].coeff || terms_[i].exponent != other.terms_[i].exponent) return false;
  }
  return true;
}

std::optional<Rational> w_weight(const Polynomial& p, const WeightVector& w) {
  std::optional<Rational> best;
  for (const auto& t : p.terms()) {
    Rational v = pair(w, t.exponent);
    if (!best || v < *best) best = std::move(v);
  }
  return best;
}

Polynomial initial_form(const Polynomial& p, const WeightVector& w) {
  const auto min = w_weight(p, w);
  if (!min) return p;
  std::vector<Term> keep;
  for (const auto& t : p.terms()) {
    if (pair(w, t.exponent) == *min) keep.push_back(t);
  }
  return Polynomial(p.num_vars(), std::move(keep));
}

Polynomial tau_truncate(const Polynomial& p, const std::vector<int>& leaves) {
  std::vector<Term> keep;
  for (const auto& t : p.terms()) {
    const bool killed = std::any_of(leaves.begin(), leaves.end(), [&](int l) { return t.exponent.at(l) > 0; });
    if (!killed) keep.push_back(t);
  }
  return Polynomial(p.num_vars(), std::move(keep));
}

Rational evaluate(const Polynomial& p, const std::vector<Rational>& point) {
  if (!p.is_zero() && static_cast<int>(point.size()) != p.num_vars()) {
    throw Error(ErrorCode::ShapeMismatch, "point has the wrong length");
  }
  Rational sum = 0;
  for (const auto& t : p.terms()) {
    Rational v = t.coeff;
    for (std::size_t i = 0; i < point.size(); ++i) {
      if (t.exponent[i] == 0) continue;
      mpq_class pw;
      mpz_pow_ui(pw.get_num_mpz_t(), point[i].get_num_mpz_t(), static_cast<unsigned long>(t.exponent[i]));
      mpz_pow_ui(pw.get_den_mpz_t(), point[i].get_den_mpz_t(), static_cast<unsigned long>(t.exponent[i]));
      pw.canonicalize();
      v *= pw;
    }
    sum += v;
  }
  return sum;
}

std::complex<double> evaluate(const Polynomial& p, const std::vector<std::complex<double>>& point) {
  if (!p.is_zero() && static_cast<int>(point.size()) != p.num_vars()) {
    throw Error(ErrorCode::ShapeMismatch, "point has the wrong length");
  }
  std::complex<double> sum = 0;
  for (const auto& t : p.terms()) {
    std::complex<double> v = t.coeff.get_d();
    for (std::size_t i = 0; i < point.size(); ++i) {
      if (t.exponent[i] != 0) v *= std::pow(point[i], static_cast<double>(t.exponent[i]));
    }
    sum += v;
  }
  return sum;
}

std::string to_string(const Polynomial& p) {
  if (p.is_zero()) return "0";
  std::string out;
  bool first = true;
  for (const auto& t : p.terms()) {
    Rational c = t.coeff;
    if (first) {
      if (c < 0) out += "-";
    } else {
      out += c < 0 ? " - " : " + ";
    }
    c = abs(c);
    std::string mono;
    for (std::size_t i = 0; i < t.exponent.size(); ++i) {
      if (t.exponent[i] == 0) continue;
      if (!mono.empty()) mono += "*";
      mono += "z" + std::to_string(i + 1);
      if (t.exponent[i] > 1) mono += "^" + std::to_string(t.exponent[i]);
    }
    if (mono.empty()) {
      out += splice::to_string(c);
    } else if (c == 1) {
      out += mono;
    } else {
      out += splice::to_string(c) + "*" + mono;
    }
    first = false;
  }
  return out;
}

}  // namespace splice
