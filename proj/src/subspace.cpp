#include "relspace/subspace.hpp"

#include <stdexcept>

namespace relspace {

Subspace Subspace::span_of(const QMatrix& rows) {
  Subspace s(rows.cols());
  Echelon e = rref(rows);
  s.basis_ = e.mat.rows_slice(0, e.rank);
  return s;
}

Subspace Subspace::span_of(const std::vector<QVec>& rows, std::size_t ambient) {
  return span_of(QMatrix::from_rows(rows, ambient));
}

Subspace Subspace::full(std::size_t ambient) {
  return span_of(QMatrix::identity(ambient));
}

bool Subspace::contains(const QVec& v) const {
  if (v.size() != ambient_) throw std::invalid_argument("contains: ambient mismatch");
  QVec r = v;  // reduce against the echelon basis
  for (std::size_t i = 0; i < basis_.rows(); ++i) {
    std::size_t p = 0;
    while (p < ambient_ && basis_.at(i, p) == 0) ++p;
    if (p == ambient_) continue;
    if (r[p] != 0) {
      Rational f = r[p];
      for (std::size_t j = p; j < ambient_; ++j) r[j] -= f * basis_.at(i, j);
    }
  }
  return is_zero_vec(r);
}

bool Subspace::contains(const Subspace& other) const {
  if (other.ambient_ != ambient_) throw std::invalid_argument("contains: ambient mismatch");
  for (std::size_t i = 0; i < other.basis_.rows(); ++i)
    if (!contains(other.basis_.row(i))) return false;
  return true;
}

Subspace Subspace::sum(const Subspace& other) const {
  if (other.ambient_ != ambient_) throw std::invalid_argument("sum: ambient mismatch");
  return span_of(basis_.vstack(other.basis_));
}

Subspace Subspace::intersect(const Subspace& other) const {
  if (other.ambient_ != ambient_) throw std::invalid_argument("intersect: ambient mismatch");
  // Coefficient vectors (a, b) with a^T basis = b^T other.basis span the
  // intersection; they form the kernel of [basis^T | -other.basis^T].
  QMatrix sys = basis_.transpose().hstack(other.basis_.transpose().scale(-1));
  QMatrix k = kernel(sys);
  std::vector<QVec> vecs;
  for (std::size_t i = 0; i < k.rows(); ++i) {
    QVec v(ambient_);
    for (std::size_t a = 0; a < basis_.rows(); ++a) {
      if (k.at(i, a) == 0) continue;
      for (std::size_t j = 0; j < ambient_; ++j) v[j] += k.at(i, a) * basis_.at(a, j);
    }
    vecs.push_back(std::move(v));
  }
  return span_of(vecs, ambient_);
}

std::optional<QVec> Subspace::coords_of(const QVec& v) const {
  return solve(basis_.transpose(), v);
}

Subspace Subspace::perp() const { return span_of(kernel(basis_)); }

QVec line_rep(const QVec& v) {
  for (const auto& x : v) {
    if (x != 0) return scaled(v, 1 / x);
  }
  return v;
}

}  // namespace relspace
