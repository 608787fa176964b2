#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <variant>
#include <vector>

#include "json.hpp"
#include "relspace/lattice.hpp"
#include "relspace/subspace.hpp"

namespace relspace {

/// Central arrangement: hyperplanes u.v = 0 given by their normals u in U.
struct Arrangement {
  std::size_t dim = 0;
  std::vector<QVec> normals;
  std::string name;

  std::size_t size() const { return normals.size(); }
};

/// Intersection lattice with flats represented by the spans of their
/// normals, so rank = dim span and the flat itself is the orthogonal
/// complement. Lattice atoms are the hyperplanes in input order.
struct ArrLattice {
  GeomLattice lat;
  std::vector<Subspace> span;  // per flat
};

/// Full flat enumeration by iterated closure. Validates nonzero normals
/// and pairwise distinct hyperplanes. Non-essential input is fine; the
/// top rank is then smaller than dim.
ArrLattice build_lattice(const Arrangement& a);

bool is_essential(const Arrangement& a);

/// Rewrite the normals in an echelon basis of their span. Linear relations
/// among normals are preserved; inner products are not.
Arrangement essentialize(const Arrangement& a);

/// Sub-arrangement of the hyperplanes below x, in hyperplane order.
Arrangement localize(const Arrangement& a, const ArrLattice& L, FlatId x);

/// Restriction to the flat of x. Lives in an echelon basis (chart) of the
/// orthogonal complement of span[x]; hyperplanes correspond to the covers
/// of x in cover id order, normals are the projections proj(u_H) of the
/// original normals in chart coordinates, deduplicated per cover.
struct Restriction {
  Arrangement arr;
  QMatrix chart;                           // rows: basis of span[x]-perp
  FlatId flat = 0;
  std::vector<FlatId> atom_to_cover;       // restriction hyperplane -> cover of x
  std::vector<std::size_t> hyper_to_atom;  // original hyperplane -> restriction hyperplane, npos below x
  std::vector<Rational> hyper_scale;       // proj(u_H) = scale * chart-pullback of its atom normal
  static constexpr std::size_t npos = static_cast<std::size_t>(-1);
};

Restriction restrict_to(const Arrangement& a, const ArrLattice& L, FlatId x);

struct GeneralPositionFailure {
  std::string what;
  std::vector<FlatId> flats;
};

/// Image of an essential arrangement under projection along a screen
/// P of codimension k: hyperplanes correspond to the rank k+1 flats
/// (normals generate span[x] meet P, in an echelon basis of P) and the
/// intersection lattice is the k-th truncation of L.
struct Projection {
  Arrangement arr;                 // ambient dimension dim - k
  ArrLattice lat;
  QMatrix chart;                   // rows: basis of P
  int k = 0;
  std::vector<FlatId> hyper_flat;  // projected hyperplane -> source flat of rank k+1
  std::vector<FlatId> trunc_img;   // source flat -> projected flat, for ranks >= k
  TruncationMap truncation(const GeomLattice& src) const;
};

using ProjectResult = std::variant<Projection, GeneralPositionFailure>;

ProjectResult project(const Arrangement& a, const ArrLattice& L, int k, const Subspace& screen);

/// Retry random integer screens, coordinate bound doubling per attempt,
/// until project succeeds. Deterministic in the seed; nullopt after
/// max_tries failures.
std::optional<Projection> random_general_position(const Arrangement& a, const ArrLattice& L,
                                                  int k, std::uint64_t seed,
                                                  int max_tries = 64);

/// Reflection arrangement families. A n lives in dimension n+1 (essentialize
/// to taste); B n and D n (n >= 2) are essential in dimension n; Phi n m is
/// D n plus the first m coordinate hyperplanes, so Phi n 0 = D n and
/// Phi n n = B n.
Arrangement coxeter_family(const std::string& family, int n, int m = 0);

Arrangement arrangement_from_json(const nlohmann::ordered_json& j);
nlohmann::ordered_json arrangement_to_json(const Arrangement& a);
Arrangement load_arrangement(const std::string& path);

}  // namespace relspace
