#pragma once

#include <cstddef>
#include <map>
#include <vector>

#include "relspace/qmatrix.hpp"
#include "relspace/rational.hpp"
#include "relspace/subspace.hpp"

namespace relspace {

Integer binomial(std::size_t n, std::size_t k);

/// Degree slices of the polynomial ring on a fixed ordered set of
/// generators. Monomials of one degree are listed in lexicographic order on
/// exponent vectors, largest first-generator power first, so every slice is
/// a coordinate space with a deterministic basis.
class PolyDegreewise {
 public:
  PolyDegreewise() = default;
  PolyDegreewise(std::size_t generators, int max_deg);

  std::size_t generators_dim() const { return n_; }
  int max_deg() const { return max_deg_; }

  std::size_t slice_dim(int d) const;
  const std::vector<std::vector<int>>& exponents(int d) const;
  std::size_t index_of(int d, const std::vector<int>& expo) const;

  /// Index in degree d+1 of generator g times the degree-d monomial m.
  std::size_t raise(int d, std::size_t m, std::size_t g) const;

  /// Slice coordinates of the product of u (degree d1) and v (degree d2).
  QVec multiply(int d1, const QVec& u, int d2, const QVec& v) const;

 private:
  void check_degree(int d) const;

  std::size_t n_ = 0;
  int max_deg_ = -1;
  std::vector<std::vector<std::vector<int>>> expo_;
  std::vector<std::map<std::vector<int>, std::size_t>> index_;
  std::vector<std::vector<std::vector<std::size_t>>> raise_;
};

/// Homogeneous ideal generated by a subspace of the linear slice. The
/// degree-d slice is spanned by the products of the generator basis with
/// all monomials of degree d-1.
struct LinearIdeal {
  const PolyDegreewise* ring = nullptr;
  Subspace generators{0};

  Subspace slice(int d) const;
};

}  // namespace relspace
