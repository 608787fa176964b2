#pragma once

#include "relspace/qmatrix.hpp"

namespace relspace {

/// Linear subspace of Q^n held in canonical form: the basis matrix is in
/// reduced row echelon form with no zero rows, so two subspaces are equal
/// exactly when their representations are bit-equal.
class Subspace {
 public:
  explicit Subspace(std::size_t ambient) : ambient_(ambient), basis_(0, ambient) {}

  static Subspace span_of(const QMatrix& rows);
  static Subspace span_of(const std::vector<QVec>& rows, std::size_t ambient);
  static Subspace full(std::size_t ambient);

  std::size_t ambient() const { return ambient_; }
  std::size_t dim() const { return basis_.rows(); }
  const QMatrix& basis() const { return basis_; }

  bool contains(const QVec& v) const;
  bool contains(const Subspace& other) const;
  Subspace sum(const Subspace& other) const;
  Subspace intersect(const Subspace& other) const;

  /// Coordinates of v in this basis; nullopt when v is outside the subspace.
  std::optional<QVec> coords_of(const QVec& v) const;

  /// Orthogonal complement with respect to the standard dot product.
  Subspace perp() const;

  bool operator==(const Subspace& other) const = default;

 private:
  std::size_t ambient_;
  QMatrix basis_;
};

/// Canonical representative of the line spanned by v: first nonzero entry 1.
QVec line_rep(const QVec& v);

}  // namespace relspace
