#pragma once

#include <cstddef>
#include <optional>
#include <vector>

#include "relspace/rational.hpp"

namespace relspace {

/// Dense rational matrix, row-major. Vectors act as columns: apply(v) = M*v.
class QMatrix {
 public:
  QMatrix() = default;
  QMatrix(std::size_t rows, std::size_t cols)
      : rows_(rows), cols_(cols), data_(rows * cols) {}

  static QMatrix identity(std::size_t n);
  static QMatrix from_rows(const std::vector<QVec>& rows, std::size_t cols);
  static QMatrix zero(std::size_t rows, std::size_t cols) { return QMatrix(rows, cols); }

  std::size_t rows() const { return rows_; }
  std::size_t cols() const { return cols_; }

  Rational& at(std::size_t i, std::size_t j) { return data_[i * cols_ + j]; }
  const Rational& at(std::size_t i, std::size_t j) const { return data_[i * cols_ + j]; }

  QVec row(std::size_t i) const;
  QVec col(std::size_t j) const;
  void set_row(std::size_t i, const QVec& v);
  void set_col(std::size_t j, const QVec& v);

  QMatrix transpose() const;
  QMatrix mul(const QMatrix& other) const;
  QVec apply(const QVec& v) const;
  QMatrix add(const QMatrix& other) const;
  QMatrix sub(const QMatrix& other) const;
  QMatrix scale(const Rational& c) const;
  QMatrix vstack(const QMatrix& below) const;
  QMatrix hstack(const QMatrix& right) const;
  QMatrix cols_slice(std::size_t from, std::size_t count) const;
  QMatrix rows_slice(std::size_t from, std::size_t count) const;
  /// Write `block` into this matrix with top-left corner at (i0, j0).
  void set_block(std::size_t i0, std::size_t j0, const QMatrix& block);

  bool is_zero() const;
  bool operator==(const QMatrix& other) const = default;

 private:
  std::size_t rows_ = 0, cols_ = 0;
  std::vector<Rational> data_;
};

struct Echelon {
  QMatrix mat;                       // reduced row echelon form, zero rows kept
  std::vector<std::size_t> pivots;   // pivot column per pivot row
  std::size_t rank = 0;
};

/// Reduced row echelon form with leftmost pivots, pivot entries 1,
/// eliminated above and below. Deterministic.
Echelon rref(const QMatrix& m);

std::size_t rank_of(const QMatrix& m);

/// Canonical basis of the null space {v : m v = 0}, one basis vector per row,
/// in reduced row echelon form. kernel of an r x c matrix has c columns.
QMatrix kernel(const QMatrix& m);

/// Solve m x = rhs; free variables are pinned to zero. Returns nullopt when
/// the system is inconsistent.
std::optional<QVec> solve(const QMatrix& m, const QVec& rhs);

/// Columnwise solve: find X with m X = rhs (rhs given column by column).
std::optional<QMatrix> solve_many(const QMatrix& m, const QMatrix& rhs);

Rational det(const QMatrix& m);

}  // namespace relspace
