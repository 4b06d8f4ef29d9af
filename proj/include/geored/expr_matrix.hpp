#pragma once

#include <Eigen/Dense>
#include <vector>

#include "geored/chart.hpp"
#include "geored/expr.hpp"

namespace geored {

// Dense matrix of symbolic entries. Sizes here are chart dimensions (<= 8),
// so cofactor expansion is fine for determinants and inverses.
using ExprMatrix = std::vector<std::vector<Expr>>;

inline ExprMatrix expr_matrix_zero(int rows, int cols) {
  return ExprMatrix(rows, std::vector<Expr>(cols, Expr::integer(0)));
}

inline ExprMatrix expr_matrix_identity(int n) {
  ExprMatrix m = expr_matrix_zero(n, n);
  for (int i = 0; i < n; ++i) m[i][i] = Expr::integer(1);
  return m;
}

inline bool is_square(const ExprMatrix& m, int n) {
  if (static_cast<int>(m.size()) != n) return false;
  for (const auto& row : m)
    if (static_cast<int>(row.size()) != n) return false;
  return true;
}

inline ExprMatrix expr_matrix_transpose(const ExprMatrix& m) {
  const int rows = static_cast<int>(m.size());
  const int cols = rows ? static_cast<int>(m[0].size()) : 0;
  ExprMatrix t = expr_matrix_zero(cols, rows);
  for (int i = 0; i < rows; ++i)
    for (int j = 0; j < cols; ++j) t[j][i] = m[i][j];
  return t;
}

inline ExprMatrix expr_matrix_mul(const ExprMatrix& a, const ExprMatrix& b) {
  const int rows = static_cast<int>(a.size());
  const int inner = static_cast<int>(b.size());
  const int cols = inner ? static_cast<int>(b[0].size()) : 0;
  ExprMatrix out = expr_matrix_zero(rows, cols);
  for (int i = 0; i < rows; ++i)
    for (int j = 0; j < cols; ++j) {
      Expr acc = Expr::integer(0);
      for (int k = 0; k < inner; ++k) acc = acc + a[i][k] * b[k][j];
      out[i][j] = acc;
    }
  return out;
}

namespace detail {

inline ExprMatrix expr_minor(const ExprMatrix& m, int row, int col) {
  const int n = static_cast<int>(m.size());
  ExprMatrix out;
  out.reserve(n - 1);
  for (int i = 0; i < n; ++i) {
    if (i == row) continue;
    std::vector<Expr> r;
    r.reserve(n - 1);
    for (int j = 0; j < n; ++j) {
      if (j == col) continue;
      r.push_back(m[i][j]);
    }
    out.push_back(std::move(r));
  }
  return out;
}

}  // namespace detail

// Determinant by cofactor expansion along the first row; zero entries prune
// whole branches thanks to the smart constructors.
inline Expr expr_det(const ExprMatrix& m) {
  const int n = static_cast<int>(m.size());
  if (n == 1) return m[0][0];
  if (n == 2) return m[0][0] * m[1][1] - m[0][1] * m[1][0];
  Expr acc = Expr::integer(0);
  for (int j = 0; j < n; ++j) {
    if (m[0][j].is_zero_literal()) continue;
    const Expr cof = m[0][j] * expr_det(detail::expr_minor(m, 0, j));
    acc = (j % 2 == 0) ? acc + cof : acc - cof;
  }
  return acc;
}

// Inverse via the adjugate. `det` is passed in so callers can reuse the
// determinant they already checked for vanishing.
inline ExprMatrix expr_matrix_inverse(const ExprMatrix& m, const Expr& det) {
  const int n = static_cast<int>(m.size());
  ExprMatrix inv = expr_matrix_zero(n, n);
  if (n == 1) {
    inv[0][0] = Expr::integer(1) / det;
    return inv;
  }
  for (int i = 0; i < n; ++i)
    for (int j = 0; j < n; ++j) {
      Expr cof = expr_det(detail::expr_minor(m, i, j));
      if ((i + j) % 2 == 1) cof = -cof;
      inv[j][i] = simplify(cof / det);  // adjugate transpose
    }
  return inv;
}

inline Eigen::MatrixXd eval_matrix(const ExprMatrix& m, const Point& p) {
  const int rows = static_cast<int>(m.size());
  const int cols = rows ? static_cast<int>(m[0].size()) : 0;
  Eigen::MatrixXd out(rows, cols);
  for (int i = 0; i < rows; ++i)
    for (int j = 0; j < cols; ++j) out(i, j) = eval(m[i][j], p);
  return out;
}

}  // namespace geored
