#include "splice/linalg.hpp"

#include <utility>

#include "splice/error.hpp"

namespace splice {

Echelon rref(QMatrix a) {
  Echelon out;
  const int rows = static_cast<int>(a.size());
  const int cols = rows == 0 ? 0 : static_cast<int>(a[0].size());
  int r = 0;
  for (int c = 0; c < cols && r < rows; ++c) {
    int p = r;
    while (p < rows && a[p][c] == 0) ++p;
    if (p == rows) continue;
    std::swap(a[p], a[r]);
    const Rational inv = 1 / a[r][c];
    for (int j = c; j < cols; ++j) a[r][j] *= inv;
    for (int i = 0; i < rows; ++i) {
      if (i == r || a[i][c] == 0) continue;
      const Rational f = a[i][c];
      for (int j = c; j < cols; ++j) a[i][j] -= f * a[r][j];
    }
    out.pivots.push_back(c);
    ++r;
  }
  out.matrix = std::move(a);
  return out;
}

int rank(const QMatrix& a) { return static_cast<int>(rref(a).pivots.size()); }

std::optional<std::vector<Rational>> solve(const QMatrix& a, const std::vector<Rational>& b) {
  if (a.size() != b.size()) throw Error(ErrorCode::ShapeMismatch, "right-hand side has the wrong length");
  const int cols = a.empty() ? 0 : static_cast<int>(a[0].size());
  QMatrix aug = a;
  for (std::size_t i = 0; i < aug.size(); ++i) aug[i].push_back(b[i]);
  const Echelon e = rref(std::move(aug));
  std::vector<Rational> x(cols, 0);
  for (std::size_t i = 0; i < e.pivots.size(); ++i) {
    if (e.pivots[i] == cols) return std::nullopt;
    x[e.pivots[i]] = e.matrix[i][cols];
  }
  return x;
}

std::vector<std::vector<Rational>> nullspace(const QMatrix& a, int num_cols) {
  const Echelon e = rref(a);
  std::vector<char> is_pivot(num_cols, 0);
  for (int p : e.pivots) is_pivot[p] = 1;
  std::vector<std::vector<Rational>> basis;
  for (int f = 0; f < num_cols; ++f) {
    if (is_pivot[f]) continue;
    std::vector<Rational> v(num_cols, 0);
    v[f] = 1;
    for (std::size_t i = 0; i < e.pivots.size(); ++i) v[e.pivots[i]] = -e.matrix[i][f];
    basis.push_back(std::move(v));
  }
  return basis;
}

Rational determinant(const QMatrix& a) {
  const int n = static_cast<int>(a.size());
  if (n == 0) return 1;
  ZMatrix m(n, std::vector<BigInt>(n));
  BigInt scale = 1;
  for (int i = 0; i < n; ++i) {
    if (static_cast<int>(a[i].size()) != n) throw Error(ErrorCode::ShapeMismatch, "determinant of a non-square matrix");
    BigInt den = 1;
    for (const auto& x : a[i]) den = lcm(den, x.get_den());
    for (int j = 0; j < n; ++j) m[i][j] = a[i][j].get_num() * (den / a[i][j].get_den());
    scale *= den;
  }
  int sign = 1;
  BigInt prev = 1;
  for (int k = 0; k < n - 1; ++k) {
    if (m[k][k] == 0) {
      int p = k + 1;
      while (p < n && m[p][k] == 0) ++p;
      if (p == n) return 0;
      std::swap(m[p], m[k]);
      sign = -sign;
    }
    for (int i = k + 1; i < n; ++i) {
      for (int j = k + 1; j < n; ++j) {
        m[i][j] = (m[i][j] * m[k][k] - m[i][k] * m[k][j]) / prev;
      }
    }
    prev = m[k][k];
  }
  return make_rational(sign * m[n - 1][n - 1], scale);
}

ZMatrix multiply(const ZMatrix& a, const ZMatrix& b) {
  const std::size_t n = a.size(), k = b.size(), m = b.empty() ? 0 : b[0].size();
  ZMatrix c(n, std::vector<BigInt>(m, 0));
  for (std::size_t i = 0; i < n; ++i) {
    if (a[i].size() != k) throw Error(ErrorCode::ShapeMismatch, "matrix product with mismatched shapes");
    for (std::size_t l = 0; l < k; ++l) {
      if (a[i][l] == 0) continue;
      for (std::size_t j = 0; j < m; ++j) c[i][j] += a[i][l] * b[l][j];
    }
  }
  return c;
}

namespace {

ZMatrix identity(std::size_t n) {
  ZMatrix id(n, std::vector<BigInt>(n, 0));
  for (std::size_t i = 0; i < n; ++i) id[i][i] = 1;
  return id;
}

BigInt floor_div(const BigInt& a, const BigInt& b) {
  BigInt q;
  mpz_fdiv_q(q.get_mpz_t(), a.get_mpz_t(), b.get_mpz_t());
  return q;
}

// Row and column operations on d that keep u * m * v = d and u * u_inverse = 1.
struct SmithState {
  SmithForm f;
  std::size_t rows, cols;

  void swap_rows(std::size_t i, std::size_t j) {
    std::swap(f.d[i], f.d[j]);
    std::swap(f.u[i], f.u[j]);
    for (auto& row : f.u_inverse) std::swap(row[i], row[j]);
  }
  void swap_cols(std::size_t i, std::size_t j) {
    for (auto& row : f.d) std::swap(row[i], row[j]);
    for (auto& row : f.v) std::swap(row[i], row[j]);
  }
  // row_i += q * row_t
  void add_row(std::size_t i, std::size_t t, const BigInt& q) {
    for (std::size_t c = 0; c < cols; ++c) f.d[i][c] += q * f.d[t][c];
    for (std::size_t c = 0; c < rows; ++c) f.u[i][c] += q * f.u[t][c];
    for (auto& row : f.u_inverse) row[t] -= q * row[i];
  }
  // col_j += q * col_t
  void add_col(std::size_t j, std::size_t t, const BigInt& q) {
    for (auto& row : f.d) row[j] += q * row[t];
    for (auto& row : f.v) row[j] += q * row[t];
  }
  void negate_row(std::size_t i) {
    for (auto& x : f.d[i]) x = -x;
    for (auto& x : f.u[i]) x = -x;
    for (auto& row : f.u_inverse) row[i] = -row[i];
  }
};

}  // namespace

SmithForm smith_normal_form(const ZMatrix& m) {
  const std::size_t rows = m.size();
  const std::size_t cols = rows == 0 ? 0 : m[0].size();
  SmithState s{{identity(rows), identity(rows), identity(cols), m}, rows, cols};
  auto& d = s.f.d;

  for (std::size_t t = 0; t < std::min(rows, cols); ++t) {
    while (true) {
      // smallest non-zero entry of the trailing block goes to (t, t)
      std::size_t pi = rows, pj = cols;
      for (std::size_t i = t; i < rows; ++i) {
        for (std::size_t j = t; j < cols; ++j) {
          if (d[i][j] != 0 && (pi == rows || abs(d[i][j]) < abs(d[pi][pj]))) {
            pi = i;
            pj = j;
          }
        }
      }
      if (pi == rows) return s.f;
      if (pi != t) s.swap_rows(pi, t);
      if (pj != t) s.swap_cols(pj, t);

      bool clean = true;
      for (std::size_t i = t + 1; i < rows; ++i) {
        if (d[i][t] == 0) continue;
        s.add_row(i, t, -floor_div(d[i][t], d[t][t]));
        if (d[i][t] != 0) clean = false;
      }
      for (std::size_t j = t + 1; j < cols; ++j) {
        if (d[t][j] == 0) continue;
        s.add_col(j, t, -floor_div(d[t][j], d[t][t]));
        if (d[t][j] != 0) clean = false;
      }
      if (!clean) continue;

      // the pivot must divide the whole trailing block
      bool divides = true;
      for (std::size_t i = t + 1; i < rows && divides; ++i) {
        for (std::size_t j = t + 1; j < cols; ++j) {
          if (d[i][j] % d[t][t] != 0) {
            s.add_row(t, i, 1);
            divides = false;
            break;
          }
        }
      }
      if (divides) break;
    }
    if (d[t][t] < 0) s.negate_row(t);
  }
  return s.f;
}

}  // namespace splice
