#include "splice/smoothness.hpp"

#include <Eigen/Dense>

#include <algorithm>
#include <cmath>
#include <complex>
#include <map>
#include <random>

#include "splice/error.hpp"

namespace splice {

namespace {

using cd = std::complex<double>;

struct LogTerm {
  cd log_value;  // log of coeff * z^a, up to a multiple of 2 pi i
  const Term* term;
};

// Terms of p evaluated in log space at z = exp(x).
std::vector<LogTerm> log_terms(const Polynomial& p, const Eigen::VectorXcd& x) {
  std::vector<LogTerm> out;
  for (const auto& t : p.terms()) {
    const double c = t.coeff.get_d();
    cd lv = std::log(cd(std::abs(c), 0)) + (c < 0 ? cd(0, M_PI) : cd(0, 0));
    for (std::size_t j = 0; j < t.exponent.size(); ++j) {
      if (t.exponent[j] != 0) lv += static_cast<double>(t.exponent[j]) * x[static_cast<Eigen::Index>(j)];
    }
    out.push_back({lv, &t});
  }
  return out;
}

double max_real(const std::vector<LogTerm>& terms) {
  double m = -INFINITY;
  for (const auto& t : terms) m = std::max(m, t.log_value.real());
  return m;
}

// |p(z)| / sum |terms|
double relative_residual(const Polynomial& p, const Eigen::VectorXcd& x) {
  const auto terms = log_terms(p, x);
  if (terms.empty()) return 0;
  const double top = max_real(terms);
  cd sum = 0;
  double scale = 0;
  for (const auto& t : terms) {
    const cd v = std::exp(t.log_value - top);
    sum += v;
    scale += std::abs(v);
  }
  return std::abs(sum) / scale;
}

// Per node: constraints (a_s - a_0).x = log(M_s / M_0) forcing the monomial
// values into a random kernel vector M of the node's coefficient matrix.
struct LogSystem {
  std::vector<ExponentVector> lhs;
  std::vector<cd> rhs;
};

LogSystem log_system(const SpliceSystem& s, const std::vector<Polynomial>& forms, std::mt19937_64& rng) {
  const SpliceDiagram& d = s.diagram();
  std::normal_distribution<double> gauss;
  LogSystem out;
  for (int j = 0; j < d.num_nodes(); ++j) {
    const VertexId v = d.node_id(j);
    std::vector<const Polynomial*> rows;
    for (std::size_t i = 0; i < s.equations().size(); ++i) {
      if (s.equations()[i].node == v) rows.push_back(&forms[i]);
    }
    std::map<ExponentVector, int> column;
    std::vector<ExponentVector> monomials;
    for (const auto* p : rows) {
      for (const auto& t : p->terms()) {
        if (column.emplace(t.exponent, static_cast<int>(monomials.size())).second) monomials.push_back(t.exponent);
      }
    }
    const int cols = static_cast<int>(monomials.size());
    if (cols == 0) continue;
    QMatrix k(rows.size(), std::vector<Rational>(cols, 0));
    for (std::size_t i = 0; i < rows.size(); ++i) {
      for (const auto& t : rows[i]->terms()) k[i][column[t.exponent]] = t.coeff;
    }
    const auto basis = nullspace(k, cols);
    if (basis.empty()) throw Error(ErrorCode::NoTorusPoint, "initial forms at '" + d.label(v) + "' force a monomial to vanish");

    std::vector<cd> m(cols, 0);
    if (basis.size() == 1) {
      for (int c = 0; c < cols; ++c) m[c] = basis[0][c].get_d();
    } else {
      for (const auto& b : basis) {
        const cd r(gauss(rng), gauss(rng));
        for (int c = 0; c < cols; ++c) m[c] += r * b[c].get_d();
      }
    }
    for (int c = 0; c < cols; ++c) {
      if (std::abs(m[c]) < 1e-12) {
        throw Error(ErrorCode::NoTorusPoint, "initial forms at '" + d.label(v) + "' force a monomial to vanish");
      }
    }
    for (int c = 1; c < cols; ++c) {
      ExponentVector diff(monomials[c]);
      for (std::size_t i = 0; i < diff.size(); ++i) diff[i] -= monomials[0][i];
      out.lhs.push_back(std::move(diff));
      out.rhs.push_back(std::log(m[c] / m[0]));
    }
  }
  return out;
}

}  // namespace

SmoothnessReport smoothness_smoke(const SpliceSystem& s, const WeightVector& w, int samples, std::uint64_t seed) {
  const int n = s.num_vars();
  if (static_cast<int>(w.size()) != n) throw Error(ErrorCode::ShapeMismatch, "weight vector has the wrong length");
  for (const auto& x : w) {
    if (x <= 0) throw Error(ErrorCode::InvalidArgument, "weight vector must be strictly positive");
  }
  if (samples < 1) throw Error(ErrorCode::InvalidArgument, "at least one sample is needed");

  std::vector<Polynomial> forms;
  for (const auto& eq : s.equations()) forms.push_back(initial_form(eq.full(), w));

  std::mt19937_64 rng(seed);
  std::normal_distribution<double> gauss;
  SmoothnessReport report;
  report.expected_rank = static_cast<int>(forms.size());
  report.min_ratio = INFINITY;

  for (int k = 0; k < samples; ++k) {
    const LogSystem ls = log_system(s, forms, rng);
    const auto rows = static_cast<Eigen::Index>(ls.lhs.size());
    Eigen::MatrixXd a(rows, n);
    Eigen::VectorXd b_re(rows), b_im(rows);
    for (Eigen::Index i = 0; i < rows; ++i) {
      for (int j = 0; j < n; ++j) a(i, j) = static_cast<double>(ls.lhs[i][j]);
      b_re(i) = ls.rhs[i].real();
      b_im(i) = ls.rhs[i].imag();
    }

    Eigen::VectorXcd x(n);
    if (rows > 0) {
      Eigen::JacobiSVD<Eigen::MatrixXd> svd(a, Eigen::ComputeFullU | Eigen::ComputeFullV);
      const Eigen::VectorXd x_re = svd.solve(b_re);
      const Eigen::VectorXd x_im = svd.solve(b_im);
      const double scale = 1 + b_re.cwiseAbs().maxCoeff() + b_im.cwiseAbs().maxCoeff();
      if ((a * x_re - b_re).norm() > 1e-8 * scale || (a * x_im - b_im).norm() > 1e-8 * scale) {
        throw Error(ErrorCode::NoTorusPoint, "the binomial part of the initial degeneration has no torus point");
      }
      // random point of the solution torus: add a kernel direction
      const double top = svd.singularValues().size() ? svd.singularValues()(0) : 1;
      Eigen::VectorXd shift_re = Eigen::VectorXd::Zero(n), shift_im = Eigen::VectorXd::Zero(n);
      for (int c = 0; c < n; ++c) {
        const bool null_dir = c >= svd.singularValues().size() || svd.singularValues()(c) <= 1e-10 * top;
        if (!null_dir) continue;
        shift_re += 0.5 * gauss(rng) * svd.matrixV().col(c);
        shift_im += 0.5 * gauss(rng) * svd.matrixV().col(c);
      }
      for (int j = 0; j < n; ++j) x(j) = cd(x_re(j) + shift_re(j), x_im(j) + shift_im(j));
    } else {
      for (int j = 0; j < n; ++j) x(j) = cd(0.5 * gauss(rng), 0.5 * gauss(rng));
    }

    double residual = 0;
    for (const auto& f : forms) residual = std::max(residual, relative_residual(f, x));
    report.max_residual = std::max(report.max_residual, residual);
    if (residual > 1e-6) throw Error(ErrorCode::NoTorusPoint, "sampled point does not satisfy the initial forms");

    // toric Jacobian z_j df_i/dz_j, each row scaled by its largest term
    Eigen::MatrixXcd jac = Eigen::MatrixXcd::Zero(static_cast<Eigen::Index>(forms.size()), n);
    for (std::size_t i = 0; i < forms.size(); ++i) {
      const auto terms = log_terms(forms[i], x);
      if (terms.empty()) continue;
      const double top = max_real(terms);
      for (const auto& t : terms) {
        const cd v = std::exp(t.log_value - top);
        for (int j = 0; j < n; ++j) {
          if (t.term->exponent[j] != 0) jac(static_cast<Eigen::Index>(i), j) += static_cast<double>(t.term->exponent[j]) * v;
        }
      }
    }
    Eigen::JacobiSVD<Eigen::MatrixXcd> jsvd(jac);
    const auto& sv = jsvd.singularValues();
    double ratio = 0;
    if (sv.size() > 0 && sv(0) > 0 && sv.size() >= report.expected_rank && report.expected_rank > 0) {
      ratio = sv(report.expected_rank - 1) / sv(0);
    } else if (report.expected_rank == 0) {
      ratio = 1;
    }
    report.ratios.push_back(ratio);
    report.min_ratio = std::min(report.min_ratio, ratio);
    ++report.samples;
  }
  report.full_rank = report.min_ratio > kRankTolerance;
  return report;
}

}  // namespace splice
