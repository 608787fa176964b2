#pragma once

#include <compare>
#include <cstddef>
#include <cstdint>
#include <map>
#include <optional>
#include <utility>
#include <vector>

#include "relspace/arrangement.hpp"
#include "relspace/complexes.hpp"
#include "relspace/lattice.hpp"
#include "relspace/polyslice.hpp"
#include "relspace/subspace.hpp"

namespace relspace {

/// Monomial in the supercommutative algebra on the pieces of a graded
/// complex: a multiset of even generators and a set of odd generators, both
/// ascending. Generators are numbered flat by flat in id order, then by
/// basis index; parity is the flat rank mod 2.
struct SuperMono {
  std::vector<std::uint32_t> even;
  std::vector<std::uint32_t> odd;
  auto operator<=>(const SuperMono&) const = default;
};

/// Product of two monomials in canonical form with the transposition sign,
/// or nullopt when an odd generator repeats.
std::optional<std::pair<SuperMono, int>> super_product(const SuperMono& a, const SuperMono& b);

/// One graded piece of the algebra: the monomials with the piece's factor
/// count whose factor flats join to the piece's flat, the span of those
/// with a dependent factor tuple, and its closure under the boundary.
struct SuperSlice {
  std::vector<SuperMono> monos;
  std::vector<char> dep;  // factor tuple dependent, counting multiplicity
  Subspace products{0};   // span of the dependent monomials
  Subspace ideal{0};      // products plus the same-grade boundary image
};

/// Degree-by-degree slices of the supercommutative algebra generated by the
/// pieces of a graded complex, graded by total factor count and by flat.
/// Construction enumerates all monomials up to max_deg, flags dependent
/// factor tuples and closes their span under the boundary, so quotient
/// dimensions reduce to rank counts. Lower-grade boundary terms of
/// dependent monomials are dependent again (verify_ideal_structure checks
/// this), which is why closing at the top grade suffices.
class SuperAlgebraSlice {
 public:
  static constexpr std::size_t default_cap = 200000;

  SuperAlgebraSlice(const GradedComplex& V, int max_deg, std::size_t cap = default_cap);

  int max_deg() const { return max_deg_; }
  std::size_t n_flats() const { return n_flats_; }
  std::size_t n_generators() const { return gen_flat_.size(); }
  FlatId gen_flat(std::size_t g) const { return gen_flat_[g]; }
  bool gen_odd(std::size_t g) const { return gen_odd_[g] != 0; }

  /// Monomial count of one degree, computed before enumerating it.
  static Integer estimate(const GradedComplex& V, int d);

  /// nullptr when the piece is empty.
  const SuperSlice* slice(int d, FlatId x) const;
  std::size_t slice_dim(int d, FlatId x) const;
  std::size_t quotient_dim(int d, FlatId x) const;

  /// Boundary of one monomial (or of a coefficient vector on a slice),
  /// split by the flat of each term. Terms keep the slice degree.
  std::map<FlatId, QVec> boundary_of(int d, FlatId x, std::size_t mono) const;
  std::map<FlatId, QVec> boundary_of_vec(int d, FlatId x, const QVec& v) const;

  /// Dependent monomials stay dependent one grade down under the boundary,
  /// the boundary squares to zero, the bottom grade carries no ideal, and
  /// the atom-grade boundary images match the ideals generated by the atom
  /// piece boundaries.
  CheckReport verify_ideal_structure() const;

 private:
  int max_deg_ = 0;
  std::size_t n_flats_ = 0;
  FlatId bottom_ = 0;
  std::vector<int> flat_rank_;
  std::vector<FlatId> gen_flat_;
  std::vector<char> gen_odd_;
  std::vector<std::vector<std::pair<std::uint32_t, Rational>>> gen_bnd_;
  std::vector<std::map<FlatId, SuperSlice>> by_degree_;
  std::vector<std::map<SuperMono, std::pair<FlatId, std::size_t>>> lookup_;
};

/// Per-flat dimensions of the algebra slices after killing the dependent
/// products and their boundaries; dim[d][x] indexes degree then flat.
struct OsDimsReport {
  int max_deg = 0;
  std::vector<std::vector<std::size_t>> dim;
  CheckReport checks;
};

OsDimsReport generalized_os_dims(const GradedComplex& V, int max_deg,
                                 std::size_t cap = SuperAlgebraSlice::default_cap);

/// Complex with the datum spaces at the rank-one flats and nothing above.
GradedComplex atoms_only_complex(const GeomLattice& L, const AtomicDatum& d);

TruncationMap identity_truncation(const GeomLattice& L);

/// Reindex a complex along a truncation: each image flat collects the
/// pieces of its fiber ordered by source id, and the boundary blocks
/// assemble at the matching offsets.
GradedComplex truncate_complex(const GradedComplex& V, const TruncationMap& t);

/// Exactness data for one polynomial-degree slice of an ideal complex.
struct DegreeSliceReport {
  int degree = 0;
  std::vector<std::size_t> dim;  // per flat
  ExactnessReport exactness;
  long long euler = 0;
  long long euler_expected = 0;
  bool euler_ok = true;
};

struct IdealComplexReport {
  int max_deg = 0;
  std::vector<DegreeSliceReport> degrees;
  CheckReport checks;

  bool ok() const { return checks.ok; }
};

/// Minimal complexes of the ideals generated by the atom piece boundaries
/// of the relation complex (the spans of the hyperplane normals), one
/// polynomial degree at a time, with exactness and Euler counts.
IdealComplexReport defining_ideal_complex(const Arrangement& a, const GradedComplex& V,
                                          int max_deg);

/// Total dimension of the rank-k layer of V.
std::size_t layer_dim(const GradedComplex& V, int k);

/// Boundary image of each projected hyperplane's source flat, embedded in
/// the rank-k layer of V with flats in id order. These generate the edge
/// and slice ideals downstream of a projection.
std::vector<Subspace> projected_ideal_generators(const GradedComplex& V, const Projection& pr);

/// Minimal complexes over the truncated lattice of the ideals generated by
/// the projected piece boundaries inside the full rank-k layer of V, one
/// degree at a time. Atoms of the projected lattice correspond to rank k+1
/// source flats.
IdealComplexReport projected_ideal_complex(const GradedComplex& V, const Projection& pr,
                                           int max_deg);

}  // namespace relspace
