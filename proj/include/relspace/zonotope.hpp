#pragma once

#include <cstddef>
#include <vector>

#include "json.hpp"
#include "relspace/arrangement.hpp"
#include "relspace/lattice.hpp"
#include "relspace/qmatrix.hpp"

namespace relspace {

/// Open chamber of a homogeneous sign system: the sign of every input
/// direction on the chamber, plus a rational interior point realizing
/// exactly those signs. Zero directions get sign 0 in every chamber.
struct Chamber {
  std::vector<int> signs;
  QVec witness;
};

/// Interior point of {y : dot(row, y) > 0 for all rows}, or nullopt when
/// the system is infeasible. Exact Fourier-Motzkin elimination with
/// back-substituted witnesses.
std::optional<QVec> strict_feasible(const std::vector<QVec>& rows, std::size_t d);

/// All chambers of the directions in Q^d. Deterministic: directions are
/// inserted in input order and chambers reported sorted by sign vector.
/// Throws std::runtime_error when more than cap chambers appear.
std::vector<Chamber> chamber_enumeration(const std::vector<QVec>& dirs, std::size_t d,
                                         std::size_t cap);

/// Face of the zonotope sum of segments [-u_H, u_H], encoded by the signs
/// sign_H = sign(lambda, u_H) of a linear functional attaining its maximum
/// on the face. The zero set {H : sign_H = 0} is the atom set of a lattice
/// flat, the face's type; the face dimension is the type's rank. Face id 0
/// is reserved for the empty face: dim -1, no signs, no witness.
struct CovectorFace {
  std::vector<int> signs;
  FlatId type_flat = npos;
  int dim = -1;
  QVec barycenter;  // sum of sign_H * u_H, the face's center point
  QVec witness;     // functional lambda realizing the signs
  std::vector<std::size_t> vertices_below;

  static constexpr FlatId npos = static_cast<FlatId>(-1);
};

/// Covering pair sub < super of faces with the incidence orientation sign.
struct FacetPair {
  std::size_t sub = 0;
  std::size_t super = 0;
  int sign = 1;
};

struct FaceLattice {
  std::vector<CovectorFace> faces;  // id 0 = empty face, then sorted by (dim, signs)
  std::vector<std::vector<std::size_t>> by_dim;  // by_dim[j + 1] = ids of dim-j faces
  std::vector<FacetPair> facet_pairs;
  std::size_t n_hyperplanes = 0;
  int top_dim = 0;

  /// Face counts by dimension 0..top_dim.
  std::vector<std::size_t> counts() const;
};

inline constexpr std::size_t default_face_cap = 100000;

/// Face lattice of the zonotope dual to the arrangement. Faces of type x
/// are the chambers of the arrangement restricted to x, enumerated per
/// flat with rational witnesses. Requires an essential arrangement.
FaceLattice enumerate_faces(const Arrangement& a, const ArrLattice& L,
                            std::size_t cap = default_face_cap);

/// Ids of the faces whose type is exactly x.
std::vector<std::size_t> faces_of_type(const FaceLattice& z, FlatId x);

/// Structural checks on an enumerated face lattice: witnesses realize
/// their sign vectors, zero sets are flat closures, vertices have no zero
/// signs and are pairwise distinct, facet pairs flip exactly the
/// hyperplanes between the two types, and negation is an automorphism.
CheckReport verify_face_lattice(const FaceLattice& z, const Arrangement& a,
                                const ArrLattice& L);

/// Chain complex of the face lattice with coefficient blocks of dimension
/// coeff_dim: space i holds the dim-(i-1) faces, so space 0 is the empty
/// face and delta[i] maps space i+1 to space i by signed facet incidence.
struct EpComplex {
  std::vector<std::size_t> dims;  // dims[i] = coeff_dim * |faces of dim i-1|
  std::vector<QMatrix> delta;     // delta[i]: space i+1 -> space i
  std::size_t coeff_dim = 1;
};

EpComplex ep_complex(const FaceLattice& z, std::size_t coeff_dim = 1);

/// delta . delta = 0 and exactness at every position of
/// 0 -> space top+1 -> ... -> space 0 -> 0.
CheckReport verify_ep(const EpComplex& ep);

/// Face lattice of the restriction to x, cross-checked against the faces
/// of type >= x in the full lattice: the sign vectors transported through
/// the restriction chart must biject with the restriction's own faces,
/// dimension shifted down by rk(x).
struct ProjectedFaces {
  FaceLattice faces;
  CheckReport check;
};

ProjectedFaces projected_zonotope_faces(const Arrangement& a, const ArrLattice& L, FlatId x,
                                        const FaceLattice& full,
                                        std::size_t cap = default_face_cap);

nlohmann::ordered_json face_lattice_to_json(const FaceLattice& z);

}  // namespace relspace
