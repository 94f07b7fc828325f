#include "splice/endcurve.hpp"

#include <Eigen/Dense>

#include <algorithm>
#include <cmath>
#include <map>
#include <tuple>

#include "splice/error.hpp"

namespace splice {

RootedDiagram root(const SpliceDiagram& d, VertexId r) {
  d.require_valid();
  if (!d.is_leaf(r)) throw Error(ErrorCode::NotALeaf, "root must be a leaf");
  RootedDiagram out;
  out.diagram = &d;
  out.root = r;
  for (VertexId l = 0; l < d.num_leaves(); ++l) {
    if (l == r) continue;
    out.others.push_back(l);
    out.links.push_back(d.linking().link(r, l));
  }
  return out;
}

RootedDiagram root(const SpliceDiagram& d, const std::string& label) {
  const VertexId r = d.vertex(label);
  if (!d.is_leaf(r)) throw Error(ErrorCode::NotALeaf, "'" + label + "'");
  return root(d, r);
}

EndCurveSystem end_curve_system(const SpliceSystem& s, const RootedDiagram& r) {
  const SpliceDiagram& d = s.diagram();
  if (r.diagram == nullptr || r.diagram->num_leaves() != d.num_leaves() || !d.is_leaf(r.root)) {
    throw Error(ErrorCode::ShapeMismatch, "rooted diagram does not match the system");
  }
  const int n = d.num_leaves();
  EndCurveSystem out;
  out.root = r.root;
  out.num_vars = n;
  for (int j = 0; j < d.num_nodes(); ++j) {
    const VertexId v = d.node_id(j);
    const int toward = d.edge_toward(v, r.root);
    const auto& coweights = s.coweights(j);
    const auto& rows = s.coefficients(j).rows;
    const auto adjacency = d.incident(v);
    std::vector<ExponentVector> columns;
    for (std::size_t e = 0; e < adjacency.size(); ++e) {
      if (adjacency[e].edge != toward) columns.push_back(exponent_of(coweights[e]));
    }
    const int count = d.valency(v) - 2;
    for (int i = 0; i < count; ++i) {
      std::vector<Term> terms;
      for (std::size_t e = 0; e < adjacency.size(); ++e) {
        if (adjacency[e].edge != toward) terms.push_back({rows[e][i], exponent_of(coweights[e])});
      }
      out.equations.push_back({v, i + 1, Polynomial(n, std::move(terms))});
    }
    out.columns.emplace_back(v, std::move(columns));
  }
  return out;
}

Polynomial to_polynomial(const Binomial& b, int num_vars) {
  return Polynomial(num_vars, {{1, b.lead}, {b.kappa, b.other}});
}

BinomialSystem binomial_reduce(const EndCurveSystem& ecs) {
  BinomialSystem out;
  out.root = ecs.root;
  out.num_vars = ecs.num_vars;

  std::vector<VertexId> nodes;
  for (const auto& eq : ecs.equations) {
    if (std::find(nodes.begin(), nodes.end(), eq.node) == nodes.end()) nodes.push_back(eq.node);
  }
  for (VertexId v : nodes) {
    std::vector<const Polynomial*> rows;
    for (const auto& eq : ecs.equations) {
      if (eq.node == v) rows.push_back(&eq.poly);
    }
    std::vector<ExponentVector> columns;
    for (const auto& [node, cols] : ecs.columns) {
      if (node == v) columns = cols;
    }
    for (const auto* p : rows) {
      for (const auto& t : p->terms()) {
        if (std::find(columns.begin(), columns.end(), t.exponent) == columns.end()) columns.push_back(t.exponent);
      }
    }
    QMatrix a(rows.size(), std::vector<Rational>(columns.size(), 0));
    for (std::size_t i = 0; i < rows.size(); ++i) {
      for (std::size_t c = 0; c < columns.size(); ++c) a[i][c] = rows[i]->coeff(columns[c]);
    }
    const Echelon e = rref(a);
    if (e.pivots.size() != rows.size()) {
      throw Error(ErrorCode::EliminationDegenerate, "equations at node " + std::to_string(v) + " are dependent");
    }
    for (std::size_t i = 0; i < rows.size(); ++i) {
      std::vector<std::size_t> support;
      for (std::size_t c = 0; c < columns.size(); ++c) {
        if (e.matrix[i][c] != 0) support.push_back(c);
      }
      if (support.size() != 2) {
        throw Error(ErrorCode::EliminationDegenerate,
                    "relation " + std::to_string(i + 1) + " at node " + std::to_string(v) + " is not a binomial");
      }
      out.binomials.push_back({v, columns[support[0]], columns[support[1]], e.matrix[i][support[1]]});
    }
  }
  return out;
}

std::optional<BigInt> binomial_degree(const RootedDiagram& r, const Binomial& b) {
  std::vector<BigInt> weights(r.diagram->num_leaves(), 0);
  for (std::size_t i = 0; i < r.others.size(); ++i) weights[r.others[i]] = r.links[i];
  if (b.lead.at(r.root) != 0 || b.other.at(r.root) != 0) return std::nullopt;
  const BigInt x = pair(weights, b.lead);
  if (x != pair(weights, b.other)) return std::nullopt;
  return x;
}

namespace {

constexpr double kResidualTolerance = 1e-9;
constexpr long kMaxRootSearch = 4096;

double log_abs(const Rational& q) {
  auto log_z = [](const BigInt& z) {
    long exp = 0;
    const double mant = mpz_get_d_2exp(&exp, z.get_mpz_t());
    return std::log(std::abs(mant)) + static_cast<double>(exp) * std::log(2.0);
  };
  return log_z(q.get_num()) - log_z(q.get_den());
}

// Offsets q = 0..roots-1 of num - q*step (mod 2*unit); returns the first one
// minimizing the summed distance of num/unit to the integers.
template <typename Int>
std::pair<std::vector<Int>, Int> search_roots(std::vector<Int> num, const std::vector<Int>& step, const Int& unit,
                                             long roots) {
  const Int period = 2 * unit;
  std::vector<Int> best = num;
  Int best_score = -1;
  for (long q = 0; q < roots; ++q) {
    Int score = 0;
    for (const auto& x : num) {
      const Int r = x >= unit ? Int(x - unit) : x;
      score += r < unit - r ? r : Int(unit - r);
    }
    if (best_score < 0 || score < best_score) {
      best_score = score;
      best = num;
    }
    if (score == 0) break;
    for (std::size_t c = 0; c < num.size(); ++c) {
      num[c] -= step[c];
      if (num[c] < 0) num[c] += period;
    }
  }
  return {best, best_score};
}

// x mod 2 in [0, 2)
Rational mod2(const Rational& x) {
  BigInt fl;
  mpz_fdiv_q(fl.get_mpz_t(), x.get_num_mpz_t(), x.get_den_mpz_t());
  Rational r = x - Rational(fl);
  BigInt half;
  mpz_fdiv_q_2exp(half.get_mpz_t(), fl.get_mpz_t(), 1);
  if (fl - 2 * half == 1) r += 1;
  return r;
}

// Best rational approximation with denominator <= 10^6, if it is very close.
std::optional<Rational> snap(double x) {
  if (!std::isfinite(x)) return std::nullopt;
  const double ax = std::abs(x);
  long long p0 = 0, q0 = 1, p1 = 1, q1 = 0;
  double rest = ax;
  for (int k = 0; k < 40; ++k) {
    const double a = std::floor(rest);
    if (a > 1e15) break;
    const long long ai = static_cast<long long>(a);
    const long long p2 = ai * p1 + p0, q2 = ai * q1 + q0;
    if (q2 > 1000000) break;
    p0 = p1; q0 = q1; p1 = p2; q1 = q2;
    const double approx = static_cast<double>(p1) / static_cast<double>(q1);
    if (std::abs(approx - ax) <= 1e-12 * std::max(1.0, ax)) {
      Rational r(BigInt(static_cast<long>(p1)), BigInt(static_cast<long>(q1)));
      r.canonicalize();
      return x < 0 ? Rational(-r) : r;
    }
    const double frac = rest - a;
    if (frac < 1e-15) break;
    rest = 1 / frac;
  }
  return std::nullopt;
}

Rational power(const Rational& c, std::int64_t e) {
  BigInt num, den;
  mpz_pow_ui(num.get_mpz_t(), c.get_num_mpz_t(), static_cast<unsigned long>(e));
  mpz_pow_ui(den.get_mpz_t(), c.get_den_mpz_t(), static_cast<unsigned long>(e));
  return make_rational(num, den);
}

bool exact_check(const MonomialCurve& curve, const std::vector<Rational>& c, const EndCurveSystem& ecs) {
  for (const auto& eq : ecs.equations) {
    std::map<BigInt, Rational> by_degree;
    for (const auto& t : eq.poly.terms()) {
      if (t.exponent.at(curve.root) != 0) return false;
      Rational value = t.coeff;
      BigInt degree = 0;
      for (std::size_t i = 0; i < curve.leaves.size(); ++i) {
        const std::int64_t a = t.exponent.at(curve.leaves[i]);
        if (a == 0) continue;
        value *= power(c[i], a);
        degree += curve.exponents[i] * static_cast<long>(a);
      }
      by_degree[degree] += value;
    }
    for (const auto& [deg, sum] : by_degree) {
      if (sum != 0) return false;
    }
  }
  return true;
}

// Total degree cap for exact substitution (keeps rational powers small).
bool small_enough(const EndCurveSystem& ecs) {
  for (const auto& eq : ecs.equations) {
    for (const auto& t : eq.poly.terms()) {
      std::int64_t deg = 0;
      for (auto a : t.exponent) deg += a;
      if (deg > 4096) return false;
    }
  }
  return true;
}

double residual_of(const MonomialCurve& curve, const std::vector<Complex>& c, const EndCurveSystem& ecs) {
  double worst = 0;
  std::vector<Complex> logs;
  for (const auto& x : c) logs.push_back(std::log(x));
  for (double t : {1.0, 2.0}) {
    const double log_t = std::log(t);
    for (const auto& eq : ecs.equations) {
      std::vector<Complex> parts;
      // t-degrees are large; keep them exact and offset by the smallest one
      std::vector<BigInt> degrees;
      for (const auto& term : eq.poly.terms()) {
        if (term.exponent.at(curve.root) != 0) return INFINITY;
        const double coeff = term.coeff.get_d();
        Complex lv(log_abs(term.coeff), coeff < 0 ? M_PI : 0);
        BigInt degree = 0;
        for (std::size_t i = 0; i < curve.leaves.size(); ++i) {
          const std::int64_t a = term.exponent.at(curve.leaves[i]);
          if (a == 0) continue;
          lv += static_cast<double>(a) * logs[i];
          degree += curve.exponents[i] * static_cast<long>(a);
        }
        parts.push_back(lv);
        degrees.push_back(degree);
      }
      if (!degrees.empty()) {
        const BigInt low = *std::min_element(degrees.begin(), degrees.end());
        for (std::size_t j = 0; j < parts.size(); ++j) {
          parts[j] += BigInt(degrees[j] - low).get_d() * log_t;
        }
      }
      if (parts.empty()) continue;
      double top = -INFINITY;
      for (const auto& p : parts) top = std::max(top, p.real());
      Complex sum = 0;
      double scale = 0;
      for (const auto& p : parts) {
        const Complex v = std::exp(p - top);
        sum += v;
        scale += std::abs(v);
      }
      worst = std::max(worst, std::abs(sum) / scale);
    }
  }
  return worst;
}

}  // namespace

MonomialCurve parameterize(const EndCurveSystem& ecs, const RootedDiagram& r) {
  const BinomialSystem bs = binomial_reduce(ecs);
  const int m = static_cast<int>(r.others.size());
  const int k = static_cast<int>(bs.binomials.size());

  MonomialCurve curve;
  curve.root = r.root;
  curve.leaves = r.others;
  curve.g = gcd_of(r.links);
  for (const auto& l : r.links) curve.exponents.push_back(l / curve.g);
  if (m == 0) throw Error(ErrorCode::SolveFailed, "no non-root leaves");
  if (k != m - 1) {
    throw Error(ErrorCode::SolveFailed, std::to_string(k) + " relations for " + std::to_string(m) + " unknowns");
  }

  // c^(a - b) = -kappa for every binomial; split into modulus and phase
  ZMatrix mat(k, std::vector<BigInt>(m, 0));
  Eigen::MatrixXd real_mat(k, m);
  Eigen::VectorXd moduli(k);
  std::vector<BigInt> signs(k);  // phase of -kappa in units of pi
  for (int i = 0; i < k; ++i) {
    const Binomial& b = bs.binomials[i];
    if (b.lead.at(r.root) != 0 || b.other.at(r.root) != 0) {
      throw Error(ErrorCode::SolveFailed, "a relation involves the root variable");
    }
    BigInt check = 0;
    for (int c = 0; c < m; ++c) {
      const std::int64_t diff = b.lead[r.others[c]] - b.other[r.others[c]];
      mat[i][c] = static_cast<long>(diff);
      real_mat(i, c) = static_cast<double>(diff);
      check += mat[i][c] * curve.exponents[c];
    }
    if (check != 0) throw Error(ErrorCode::SolveFailed, "relation " + std::to_string(i + 1) + " is not homogeneous");
    moduli(i) = log_abs(b.kappa);
    signs[i] = b.kappa > 0 ? 1 : 0;
  }

  const SmithForm snf = smith_normal_form(mat);
  BigInt count = 1;
  for (int i = 0; i < k; ++i) {
    if (snf.d[i][i] == 0) throw Error(ErrorCode::SolveFailed, "relations are dependent");
    count *= snf.d[i][i];
  }
  if (count != curve.g) {
    throw Error(ErrorCode::SolveFailed, "component count " + to_string(count) + " differs from g = " + to_string(curve.g));
  }
  if (count > 100000) throw Error(ErrorCode::SolveFailed, "too many components to enumerate");

  Eigen::VectorXd x_re = Eigen::VectorXd::Zero(m);
  if (k > 0) {
    x_re = real_mat.completeOrthogonalDecomposition().solve(moduli);
    if ((real_mat * x_re - moduli).norm() > 1e-9 * (1 + moduli.norm())) {
      throw Error(ErrorCode::SolveFailed, "modulus equations are inconsistent");
    }
  }
  // normalize moduli so the last coefficient has modulus one
  const int last = m - 1;
  const double e_last = curve.exponents[last].get_d();
  std::vector<double> modulus(m);
  for (int c = 0; c < m; ++c) modulus[c] = x_re(c) - curve.exponents[c].get_d() * x_re(last) / e_last;

  std::vector<BigInt> us(k, 0);
  for (int i = 0; i < k; ++i) {
    for (int j = 0; j < k; ++j) us[i] += snf.u[i][j] * signs[j];
  }

  // phases theta (units of pi): theta = V y, d_i y_i = (U s)_i + 2 j_i, y_last = 0
  std::vector<long> digits(k, 0);
  for (long comp = 0; comp < count.get_si(); ++comp) {
    std::vector<Rational> y(m, 0);
    for (int i = 0; i < k; ++i) y[i] = make_rational(us[i] + 2 * BigInt(digits[i]), snf.d[i][i]);
    std::vector<Rational> theta(m, 0);
    for (int c = 0; c < m; ++c) {
      for (int i = 0; i < m; ++i) theta[c] += Rational(snf.v[c][i]) * y[i];
      theta[c] = mod2(theta[c]);
    }

    // t-action: pick the root of unity making the coefficients most real.
    // phi_c(q) = theta_c - e_c (theta_last + 2q) / e_last, kept as integers
    // over the common denominator den * e_last.
    const BigInt& el = curve.exponents[last];
    const long roots = el.fits_slong_p() ? std::min(el.get_si(), kMaxRootSearch) : kMaxRootSearch;
    BigInt den = 1;
    for (const auto& t : theta) den = lcm(den, t.get_den());
    const BigInt unit = den * el;
    const BigInt period = 2 * unit;
    std::vector<BigInt> num(m), step(m);
    for (int c = 0; c < m; ++c) {
      const BigInt tc = theta[c].get_num() * (den / theta[c].get_den());
      const BigInt tl = theta[last].get_num() * (den / theta[last].get_den());
      num[c] = tc * el - curve.exponents[c] * tl;
      mpz_fdiv_r(num[c].get_mpz_t(), num[c].get_mpz_t(), period.get_mpz_t());
      step[c] = 2 * den * curve.exponents[c];
      mpz_fdiv_r(step[c].get_mpz_t(), step[c].get_mpz_t(), period.get_mpz_t());
    }
    std::vector<BigInt> best_num;
    BigInt best_score;
    if (fits_int64(period) && period < (BigInt(1) << 56)) {
      std::vector<std::int64_t> n64(m), s64(m);
      for (int c = 0; c < m; ++c) {
        n64[c] = to_int64(num[c]);
        s64[c] = to_int64(step[c]);
      }
      const auto [found, score] = search_roots(n64, s64, to_int64(unit), roots);
      best_score = static_cast<long>(score);
      for (auto x : found) best_num.emplace_back(static_cast<long>(x));
    } else {
      std::tie(best_num, best_score) = search_roots(num, step, unit, roots);
    }
    std::vector<Rational> best(m);
    for (int c = 0; c < m; ++c) best[c] = make_rational(best_num[c], unit);

    std::vector<Complex> coeffs(m);
    for (int c = 0; c < m; ++c) {
      const double angle = M_PI * best[c].get_d();
      coeffs[c] = std::polar(std::exp(modulus[c]), angle);
      if (best[c] == 0) coeffs[c] = Complex(std::exp(modulus[c]), 0);
      if (best[c] == 1) coeffs[c] = Complex(-std::exp(modulus[c]), 0);
      if (best[c] == Rational(1, 2)) coeffs[c] = Complex(0, std::exp(modulus[c]));
      if (best[c] == Rational(3, 2)) coeffs[c] = Complex(0, -std::exp(modulus[c]));
    }
    coeffs[last] = 1;

    std::optional<std::vector<Rational>> exact;
    if (best_score == 0 && small_enough(ecs)) {
      std::vector<Rational> q(m);
      bool ok = true;
      for (int c = 0; c < m && ok; ++c) {
        auto s = snap(coeffs[c].real());
        if (!s) ok = false;
        else q[c] = *s;
      }
      if (ok && exact_check(curve, q, ecs)) {
        exact = q;
        for (int c = 0; c < m; ++c) coeffs[c] = Complex(q[c].get_d(), 0);
      }
    }
    curve.components.push_back(std::move(coeffs));
    curve.exact.push_back(std::move(exact));

    for (int i = k - 1; i >= 0; --i) {
      if (++digits[i] < snf.d[i][i]) break;
      digits[i] = 0;
    }
  }

  const double res = parameterization_residual(curve, ecs);
  if (!(res <= kResidualTolerance)) {
    throw Error(ErrorCode::SolveFailed, "substitution residual " + std::to_string(res) + " exceeds tolerance");
  }
  return curve;
}

double parameterization_residual(const MonomialCurve& curve, const EndCurveSystem& ecs) {
  double worst = 0;
  for (const auto& c : curve.components) worst = std::max(worst, residual_of(curve, c, ecs));
  return worst;
}

bool verify_parameterization(const MonomialCurve& curve, const EndCurveSystem& ecs) {
  for (std::size_t i = 0; i < curve.components.size(); ++i) {
    if (curve.components[i].size() != curve.leaves.size()) return false;
    const bool has_exact = i < curve.exact.size() && curve.exact[i];
    if (has_exact) {
      if (!exact_check(curve, *curve.exact[i], ecs)) return false;
    } else if (!(residual_of(curve, curve.components[i], ecs) <= kResidualTolerance)) {
      return false;
    }
  }
  return true;
}

}  // namespace splice
