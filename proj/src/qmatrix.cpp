#include "relspace/qmatrix.hpp"

#include <stdexcept>

namespace relspace {

QMatrix QMatrix::identity(std::size_t n) {
  QMatrix m(n, n);
  for (std::size_t i = 0; i < n; ++i) m.at(i, i) = 1;
  return m;
}

QMatrix QMatrix::from_rows(const std::vector<QVec>& rows, std::size_t cols) {
  QMatrix m(rows.size(), cols);
  for (std::size_t i = 0; i < rows.size(); ++i) {
    if (rows[i].size() != cols) throw std::invalid_argument("from_rows: ragged input");
    m.set_row(i, rows[i]);
  }
  return m;
}

QVec QMatrix::row(std::size_t i) const {
  QVec v(cols_);
  for (std::size_t j = 0; j < cols_; ++j) v[j] = at(i, j);
  return v;
}

QVec QMatrix::col(std::size_t j) const {
  QVec v(rows_);
  for (std::size_t i = 0; i < rows_; ++i) v[i] = at(i, j);
  return v;
}

void QMatrix::set_row(std::size_t i, const QVec& v) {
  if (v.size() != cols_) throw std::invalid_argument("set_row: length mismatch");
  for (std::size_t j = 0; j < cols_; ++j) at(i, j) = v[j];
}

void QMatrix::set_col(std::size_t j, const QVec& v) {
  if (v.size() != rows_) throw std::invalid_argument("set_col: length mismatch");
  for (std::size_t i = 0; i < rows_; ++i) at(i, j) = v[i];
}

QMatrix QMatrix::transpose() const {
  QMatrix t(cols_, rows_);
  for (std::size_t i = 0; i < rows_; ++i)
    for (std::size_t j = 0; j < cols_; ++j) t.at(j, i) = at(i, j);
  return t;
}

QMatrix QMatrix::mul(const QMatrix& other) const {
  if (cols_ != other.rows_) throw std::invalid_argument("mul: dimension mismatch");
  QMatrix r(rows_, other.cols_);
  for (std::size_t i = 0; i < rows_; ++i)
    for (std::size_t k = 0; k < cols_; ++k) {
      const Rational& a = at(i, k);
      if (a == 0) continue;
      for (std::size_t j = 0; j < other.cols_; ++j) {
        const Rational& b = other.at(k, j);
        if (b != 0) r.at(i, j) += a * b;
      }
    }
  return r;
}

QVec QMatrix::apply(const QVec& v) const {
  if (v.size() != cols_) throw std::invalid_argument("apply: dimension mismatch");
  QVec r(rows_);
  for (std::size_t i = 0; i < rows_; ++i) {
    Rational s = 0;
    for (std::size_t j = 0; j < cols_; ++j)
      if (at(i, j) != 0) s += at(i, j) * v[j];
    r[i] = s;
  }
  return r;
}

QMatrix QMatrix::add(const QMatrix& other) const {
  if (rows_ != other.rows_ || cols_ != other.cols_)
    throw std::invalid_argument("add: shape mismatch");
  QMatrix r(rows_, cols_);
  for (std::size_t i = 0; i < data_.size(); ++i) r.data_[i] = data_[i] + other.data_[i];
  return r;
}

QMatrix QMatrix::sub(const QMatrix& other) const {
  if (rows_ != other.rows_ || cols_ != other.cols_)
    throw std::invalid_argument("sub: shape mismatch");
  QMatrix r(rows_, cols_);
  for (std::size_t i = 0; i < data_.size(); ++i) r.data_[i] = data_[i] - other.data_[i];
  return r;
}

QMatrix QMatrix::scale(const Rational& c) const {
  QMatrix r(rows_, cols_);
  for (std::size_t i = 0; i < data_.size(); ++i) r.data_[i] = data_[i] * c;
  return r;
}

QMatrix QMatrix::vstack(const QMatrix& below) const {
  if (rows_ == 0 && cols_ == 0) return below;
  if (below.rows_ == 0 && below.cols_ == 0) return *this;
  if (cols_ != below.cols_) throw std::invalid_argument("vstack: column mismatch");
  QMatrix r(rows_ + below.rows_, cols_);
  for (std::size_t i = 0; i < rows_; ++i)
    for (std::size_t j = 0; j < cols_; ++j) r.at(i, j) = at(i, j);
  for (std::size_t i = 0; i < below.rows_; ++i)
    for (std::size_t j = 0; j < cols_; ++j) r.at(rows_ + i, j) = below.at(i, j);
  return r;
}

QMatrix QMatrix::hstack(const QMatrix& right) const {
  if (rows_ == 0 && cols_ == 0) return right;
  if (right.rows_ == 0 && right.cols_ == 0) return *this;
  if (rows_ != right.rows_) throw std::invalid_argument("hstack: row mismatch");
  QMatrix r(rows_, cols_ + right.cols_);
  for (std::size_t i = 0; i < rows_; ++i) {
    for (std::size_t j = 0; j < cols_; ++j) r.at(i, j) = at(i, j);
    for (std::size_t j = 0; j < right.cols_; ++j) r.at(i, cols_ + j) = right.at(i, j);
  }
  return r;
}

QMatrix QMatrix::cols_slice(std::size_t from, std::size_t count) const {
  if (from + count > cols_) throw std::invalid_argument("cols_slice: out of range");
  QMatrix r(rows_, count);
  for (std::size_t i = 0; i < rows_; ++i)
    for (std::size_t j = 0; j < count; ++j) r.at(i, j) = at(i, from + j);
  return r;
}

QMatrix QMatrix::rows_slice(std::size_t from, std::size_t count) const {
  if (from + count > rows_) throw std::invalid_argument("rows_slice: out of range");
  QMatrix r(count, cols_);
  for (std::size_t i = 0; i < count; ++i)
    for (std::size_t j = 0; j < cols_; ++j) r.at(i, j) = at(from + i, j);
  return r;
}

void QMatrix::set_block(std::size_t i0, std::size_t j0, const QMatrix& block) {
  if (i0 + block.rows() > rows_ || j0 + block.cols() > cols_)
    throw std::invalid_argument("set_block: out of range");
  for (std::size_t i = 0; i < block.rows(); ++i)
    for (std::size_t j = 0; j < block.cols(); ++j) at(i0 + i, j0 + j) = block.at(i, j);
}

bool QMatrix::is_zero() const {
  for (const auto& x : data_)
    if (x != 0) return false;
  return true;
}

Echelon rref(const QMatrix& m) {
  Echelon e;
  e.mat = m;
  QMatrix& a = e.mat;
  std::size_t r = 0;
  for (std::size_t c = 0; c < a.cols() && r < a.rows(); ++c) {
    std::size_t p = r;
    while (p < a.rows() && a.at(p, c) == 0) ++p;
    if (p == a.rows()) continue;
    if (p != r)
      for (std::size_t j = 0; j < a.cols(); ++j) std::swap(a.at(p, j), a.at(r, j));
    Rational inv = 1 / a.at(r, c);
    for (std::size_t j = c; j < a.cols(); ++j) a.at(r, j) *= inv;
    for (std::size_t i = 0; i < a.rows(); ++i) {
      if (i == r || a.at(i, c) == 0) continue;
      Rational f = a.at(i, c);
      for (std::size_t j = c; j < a.cols(); ++j) a.at(i, j) -= f * a.at(r, j);
    }
    e.pivots.push_back(c);
    ++r;
  }
  e.rank = r;
  return e;
}

std::size_t rank_of(const QMatrix& m) { return rref(m).rank; }

QMatrix kernel(const QMatrix& m) {
  Echelon e = rref(m);
  std::vector<bool> is_pivot(m.cols(), false);
  for (auto p : e.pivots) is_pivot[p] = true;
  std::vector<QVec> basis;
  for (std::size_t f = 0; f < m.cols(); ++f) {
    if (is_pivot[f]) continue;
    QVec v(m.cols());
    v[f] = 1;
    for (std::size_t i = 0; i < e.rank; ++i) v[e.pivots[i]] = -e.mat.at(i, f);
    basis.push_back(std::move(v));
  }
  Echelon k = rref(QMatrix::from_rows(basis, m.cols()));
  return k.mat.rows_slice(0, k.rank);
}

std::optional<QVec> solve(const QMatrix& m, const QVec& rhs) {
  if (rhs.size() != m.rows()) throw std::invalid_argument("solve: rhs length mismatch");
  QMatrix aug(m.rows(), m.cols() + 1);
  for (std::size_t i = 0; i < m.rows(); ++i) {
    for (std::size_t j = 0; j < m.cols(); ++j) aug.at(i, j) = m.at(i, j);
    aug.at(i, m.cols()) = rhs[i];
  }
  Echelon e = rref(aug);
  for (auto p : e.pivots)
    if (p == m.cols()) return std::nullopt;
  QVec x(m.cols());
  for (std::size_t i = 0; i < e.pivots.size(); ++i) x[e.pivots[i]] = e.mat.at(i, m.cols());
  return x;
}

std::optional<QMatrix> solve_many(const QMatrix& m, const QMatrix& rhs) {
  if (rhs.rows() != m.rows()) throw std::invalid_argument("solve_many: shape mismatch");
  QMatrix aug = m.hstack(rhs);
  if (m.rows() == 0) return QMatrix(m.cols(), rhs.cols());
  Echelon e = rref(aug);
  for (auto p : e.pivots)
    if (p >= m.cols()) return std::nullopt;
  QMatrix x(m.cols(), rhs.cols());
  for (std::size_t i = 0; i < e.pivots.size(); ++i)
    for (std::size_t j = 0; j < rhs.cols(); ++j)
      x.at(e.pivots[i], j) = e.mat.at(i, m.cols() + j);
  return x;
}

Rational det(const QMatrix& m) {
  if (m.rows() != m.cols()) throw std::invalid_argument("det: not square");
  QMatrix a = m;
  Rational d = 1;
  std::size_t n = a.rows();
  for (std::size_t c = 0; c < n; ++c) {
    std::size_t p = c;
    while (p < n && a.at(p, c) == 0) ++p;
    if (p == n) return 0;
    if (p != c) {
      for (std::size_t j = 0; j < n; ++j) std::swap(a.at(p, j), a.at(c, j));
      d = -d;
    }
    d *= a.at(c, c);
    Rational inv = 1 / a.at(c, c);
    for (std::size_t i = c + 1; i < n; ++i) {
      if (a.at(i, c) == 0) continue;
      Rational f = a.at(i, c) * inv;
      for (std::size_t j = c; j < n; ++j) a.at(i, j) -= f * a.at(c, j);
    }
  }
  return d;
}

}  // namespace relspace
