#pragma once

#include <cstddef>
#include <map>
#include <utility>
#include <variant>
#include <vector>

#include "relspace/arrangement.hpp"
#include "relspace/lattice.hpp"
#include "relspace/qmatrix.hpp"
#include "relspace/rational.hpp"
#include "relspace/subspace.hpp"

namespace relspace {

/// Coefficient data seeding a minimal complex: one subspace of Q^dim0 per
/// lattice universe atom.
struct AtomicDatum {
  std::size_t dim0 = 0;
  std::vector<Subspace> atom_spaces;

  std::size_t size() const { return atom_spaces.size(); }
};

AtomicDatum defining_datum(const Arrangement& a);
AtomicDatum constant_datum(std::size_t n_atoms);

bool datum_essential(const AtomicDatum& d);
bool datum_nondegenerate(const AtomicDatum& d);
/// U_a and U_b meet trivially whenever the join of their atoms splits into
/// independent parts.
bool datum_orthogonal(const GeomLattice& L, const AtomicDatum& d);

/// Chain complex graded by the flats of a geometric lattice. Pieces are
/// abstract coordinate spaces; only their dimensions and the boundary
/// blocks from a flat to its lower covers are stored (absent block = zero).
struct GradedComplex {
  GeomLattice lat;
  std::vector<std::size_t> dim;                        // per flat
  std::map<std::pair<FlatId, FlatId>, QMatrix> block;  // (x, lower cover y)

  std::size_t degree_dim(int i) const;
  /// Boundary out of one flat; rows run over its lower covers in id order.
  QMatrix flat_boundary(FlatId x) const;
  /// Full boundary from degree i to i-1; flats of each rank in id order.
  QMatrix degree_boundary(int i) const;
};

GradedComplex minimal_complex(const GeomLattice& L, const AtomicDatum& d);
GradedComplex relation_complex(const Arrangement& a, const ArrLattice& L);
/// The complex restricted to the lower interval of x, on interval ids.
GradedComplex sub_complex(const GradedComplex& C, FlatId x);

struct ExactnessReport {
  bool ok = true;
  std::vector<long long> defect;  // defect[i] = dim Ker d_i - dim Im d_{i+1}
  std::vector<CheckFailure> failures;
};

ExactnessReport check_exactness(const GradedComplex& C);
/// check_exactness on every lower interval; witnesses name the flats whose
/// intervals fail.
CheckReport check_l_contractible(const GradedComplex& C);

/// Degree-zero section data: per universe atom a matrix from ambient
/// coordinates to U_a coordinates, plus the scaling constants h recorded
/// per indecomposable flat by verify_section.
struct CompatibleSection {
  AtomicDatum datum;
  std::vector<QMatrix> d0;
  std::map<FlatId, Rational> h;
};

/// Reflection-style section d0(v)_a = 2(v,u_a) u_a / (u_a,u_a), taken in
/// the arrangement's given coordinates.
CompatibleSection coxeter_section(const Arrangement& a);
/// Section for a restriction, built from the original normals: the atom
/// component sums 2(v,u) proj(u)/(u,u) over the hyperplanes of its cover.
CompatibleSection restricted_section(const Arrangement& a, const Restriction& r);
/// Rank-2 section from pairwise basis decompositions; scales by |atoms|-1
/// on atoms and by the number of pairs on top.
CompatibleSection rank2_section(const Arrangement& a);

/// Checks both section conditions (flat-wise scaling on indecomposables,
/// vanishing cross components over decomposable joins) and fills s.h.
CheckReport verify_section(const GeomLattice& L, CompatibleSection& s);

enum class HomotopySupport { indecomposables, all_covers };

/// Contracting-homotopy data: upward blocks per (flat, upper cover) and the
/// scaling constant per supported flat. Interval assemblies divide by h, so
/// the blocks themselves stay polynomial in the section data.
struct LHomotopy {
  HomotopySupport support = HomotopySupport::indecomposables;
  bool canonical = true;
  std::map<std::pair<FlatId, FlatId>, QMatrix> block;  // (x, upper cover y)
  std::map<FlatId, Rational> h;
};

/// Solves the degree-raising recursion rank by rank from the given
/// degree-zero blocks; the failure value names the unsolvable pair.
std::variant<LHomotopy, CheckFailure> run_homotopy_recursion(
    const GradedComplex& C, std::map<std::pair<FlatId, FlatId>, QMatrix> seed,
    std::map<FlatId, Rational> h, HomotopySupport support);

/// Builds the homotopy of a verified section on the minimal complex of its
/// datum and verifies the identity on every indecomposable lower interval.
std::variant<LHomotopy, CheckFailure> build_homotopy(const GradedComplex& C,
                                                     const CompatibleSection& s);

/// Checks d B + B d = id on every degree of the lower interval of z
/// (degree 0 on the image of the first boundary), assembling blocks with
/// the 1/h scaling of z's independent parts.
CheckReport verify_homotopy(const GradedComplex& C, const LHomotopy& H, FlatId z);
CheckReport verify_homotopy_all(const GradedComplex& C, const LHomotopy& H);

/// Rank <= 2 fallback: a contracting homotopy from a deterministic but
/// arbitrary section of the first boundary; canonical flag cleared.
std::variant<LHomotopy, CheckFailure> rank2_homotopy(const GradedComplex& C);

/// Runs the recursion for the constant-coefficients datum and the given
/// atom and confirms it reproduces multiplication by that atom's generator:
/// piece dimensions match the Moebius values, blocks vanish off the atom
/// join, and the identity holds on every interval above the atom.
CheckReport os_homotopy_check(const GeomLattice& L, std::size_t atom);

/// For all indecomposable x <= z, the increments h^y - h^x over the
/// indecomposable covers y of x inside z sum to h^z - h^x.
CheckReport coxeter_number_identity(const GeomLattice& L, const CompatibleSection& s);

}  // namespace relspace
