#pragma once

#include <cstddef>
#include <vector>

#include "relspace/arrangement.hpp"
#include "relspace/complexes.hpp"
#include "relspace/lattice.hpp"
#include "relspace/polyslice.hpp"
#include "relspace/subspace.hpp"
#include "relspace/zonotope.hpp"

namespace relspace {

/// Edge of a vertex graph with congruences: values at v1 and v2 agree
/// modulo the ideal attached to the label.
struct GraphEdge {
  std::size_t v1 = 0;
  std::size_t v2 = 0;
  std::size_t label = 0;
};

/// Degreewise graphical module: for each degree d, the functions
/// vertex -> R_d whose differences along edges lie in the edge ideals,
/// held as a subspace of R_d^(vertices) in vertex-major coordinates.
struct DegreewiseModule {
  std::vector<Subspace> slices;
  std::vector<std::size_t> hilbert;
  std::vector<std::size_t> generation;  // dim of slice d modulo R_1 * slice d-1

  int max_deg() const { return static_cast<int>(slices.size()) - 1; }
};

inline constexpr std::size_t default_slice_cap = 2000000;

/// Kernel computation of the graphical module through degree max_deg.
/// edge_gens[label] holds the degree-1 generator space of that label's
/// ideal; a zero space makes the congruence an equality. Solved on a
/// spanning forest: tree differences are free ideal elements, off-tree
/// edges contribute quotient constraints. Throws std::runtime_error when
/// a slice would exceed cap coordinates.
DegreewiseModule graphical_module(std::size_t n_vertices, const std::vector<GraphEdge>& edges,
                                  const std::vector<Subspace>& edge_gens,
                                  const PolyDegreewise& ring,
                                  std::size_t cap = default_slice_cap);

/// Merge classes of vertices connected by zero-ideal edges, dense ids in
/// first-appearance order.
std::vector<std::size_t> vertex_classes(std::size_t n_vertices,
                                        const std::vector<GraphEdge>& edges,
                                        const std::vector<Subspace>& edge_gens);

/// The 1-skeleton of an enumerated face lattice: one edge per dim-1 face,
/// labeled by the single atom of its type flat.
std::vector<GraphEdge> edges_from_faces(const FaceLattice& z);

/// Relation algebra of an arrangement with respect to a projection:
/// graphical module on the projected arrangement's zonotope graph over
/// R = Sym of the rank-k layer of the relation complex, with edge ideals
/// generated by the images of the flat boundaries.
struct RelationAlgebra {
  FaceLattice faces;
  PolyDegreewise ring;
  std::vector<Subspace> atom_gens;  // per projected hyperplane
  std::vector<GraphEdge> edges;
  DegreewiseModule mod;
};

RelationAlgebra build_relation_algebra(const Arrangement& a, const ArrLattice& L,
                                       const GradedComplex& V, const Projection& pr,
                                       int max_deg,
                                       std::size_t slice_cap = default_slice_cap,
                                       std::size_t face_cap = default_face_cap);

/// Degree slice of the modified Euler-Poincare complex
/// 0 -> R_d -> M_d -> (+)_{edges} (M_F)_d -> ... -> (M_top)_d -> 0.
/// euler_ok is the alternating dimension count; anchor_ok re-derives
/// dim M_d as dim R_d + dim ker of the map out of the edge position,
/// which exactness at the first two places forces.
struct ModifiedEpDegree {
  int degree = 0;
  std::vector<std::size_t> dims;
  std::vector<char> exact_at;  // per position, dim ker = dim im
  CheckReport exactness;
  bool euler_ok = true;
  bool anchor_ok = true;
};

struct ModifiedEpReport {
  std::vector<ModifiedEpDegree> degrees;
  bool ok() const;
};

ModifiedEpReport modified_ep(const RelationAlgebra& ra, const ArrLattice& proj_lat);

/// generation(d) must vanish for every computed d > bound.
struct GenerationReport {
  int bound = 0;
  std::vector<std::size_t> generation;
  bool ok = true;
};

GenerationReport generation_check(const DegreewiseModule& mod, int bound);

/// Certified prefix of hilbert(t) * (1-t)^power: coefficient j needs
/// hilbert values through degree j only, so every returned coefficient
/// is exact. has_negative flags a witness against freeness.
struct NumeratorReport {
  std::vector<Integer> coeffs;
  int power = 0;
  bool has_negative = false;
};

NumeratorReport hilbert_numerator(const std::vector<std::size_t>& hilbert, int power);

/// Piecewise linear functions on the chamber fan: U-valued functions on
/// the zonotope vertices, congruent modulo the hyperplane's normal line
/// across each edge. Checks dim M_1 = dim Lambda - dim U against the
/// degree-1 slice of the k = 1 relation algebra, both sides computed
/// independently.
struct PiecewiseReport {
  std::size_t dim_lambda = 0;
  std::size_t dim_u = 0;
  std::size_t dim_m1 = 0;
  bool ok = false;
};

PiecewiseReport piecewise_linear_check(const Arrangement& a, const ArrLattice& L,
                                       const GradedComplex& V, const Projection& pr,
                                       std::size_t slice_cap = default_slice_cap,
                                       std::size_t face_cap = default_face_cap);

/// Vandermonde data for the braid family: minors alpha(I) over the node
/// matrix rows (t_j^0 .. t_j^k), kernel vectors E_I for the (k+2)-sets,
/// and the chamber fibration: members lists the sets nu(lambda) of
/// (k+2)-sets with positive pairing, one per chamber of the E_I inside
/// the kernel, each with its witness; edges joins members differing by
/// one set, labeled by that set's index.
struct BruhatData {
  int n = 0;
  int k = 0;
  std::vector<std::vector<int>> sets_k1;  // (k+1)-subsets of 0..n-1, lex
  std::vector<std::vector<int>> sets_k2;  // (k+2)-subsets, lex
  std::vector<Rational> alpha;            // per sets_k1 entry
  std::vector<QVec> E;                    // per sets_k2 entry, in Q^n
  std::vector<std::vector<std::size_t>> members;  // sorted sets_k2 index lists
  std::vector<QVec> witness;                      // per member, kernel coordinates
  std::vector<GraphEdge> edges;                   // label = sets_k2 index
};

BruhatData bruhat_data(int n, int k, const std::vector<Rational>& nodes,
                       std::size_t cap = default_face_cap);

/// Graphical module on the member graph over the polynomial ring with one
/// variable per (k+1)-set, edge ideals generated by the boundary form
/// of the edge's (k+2)-set.
DegreewiseModule bruhat_relation_algebra(const BruhatData& bd, int max_deg,
                                         std::size_t slice_cap = default_slice_cap);

/// Essentialized braid arrangement of the symmetric group on n letters
/// with the Vandermonde screen at the given nodes transported into the
/// essential coordinates, projected to order k.
struct BraidSetup {
  Arrangement arr;
  ArrLattice lat;
  GradedComplex complex;
  Projection proj;
};

BraidSetup braid_vandermonde(int n, int k, const std::vector<Rational>& nodes);

}  // namespace relspace
