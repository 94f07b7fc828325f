#pragma once

#include <optional>
#include <vector>

#include "splice/arith.hpp"

namespace splice {

using QMatrix = std::vector<std::vector<Rational>>;
using ZMatrix = std::vector<std::vector<BigInt>>;

struct Echelon {
  QMatrix matrix;           // reduced row echelon form
  std::vector<int> pivots;  // pivot column of each non-zero row
};

Echelon rref(QMatrix a);
int rank(const QMatrix& a);

/// Some solution of a x = b (free variables set to zero), or nullopt.
std::optional<std::vector<Rational>> solve(const QMatrix& a, const std::vector<Rational>& b);

/// Basis of {x : a x = 0}, one vector per free column.
std::vector<std::vector<Rational>> nullspace(const QMatrix& a, int num_cols);

/// Exact determinant via fraction-free (Bareiss) elimination after clearing
/// row denominators.
Rational determinant(const QMatrix& a);

/// u * m * v = d with u, v unimodular and d diagonal with
/// d[0][0] | d[1][1] | ..., all non-negative.
struct SmithForm {
  ZMatrix u;
  ZMatrix u_inverse;
  ZMatrix v;
  ZMatrix d;
};

SmithForm smith_normal_form(const ZMatrix& m);

ZMatrix multiply(const ZMatrix& a, const ZMatrix& b);

}  // namespace splice
