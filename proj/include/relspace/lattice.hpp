#pragma once

#include <cstdint>
#include <map>
#include <string>
#include <vector>

#include "relspace/rational.hpp"

namespace relspace {

using FlatId = std::uint32_t;

/// Set of atom indices, value-comparable. Order is lexicographic on the
/// sorted index sequence.
class AtomSet {
 public:
  AtomSet() = default;
  explicit AtomSet(std::size_t universe) : n_(universe), words_((universe + 63) / 64, 0) {}

  std::size_t universe() const { return n_; }
  void set(std::size_t i);
  void reset(std::size_t i);
  bool test(std::size_t i) const;
  std::size_t count() const;
  bool empty() const { return count() == 0; }

  AtomSet operator|(const AtomSet& o) const;
  AtomSet operator&(const AtomSet& o) const;
  bool subset_of(const AtomSet& o) const;
  bool operator==(const AtomSet& o) const = default;
  bool operator<(const AtomSet& o) const;  // lex on sorted index lists

  std::vector<std::size_t> indices() const;
  static AtomSet of(std::size_t universe, const std::vector<std::size_t>& idx);

 private:
  std::size_t n_ = 0;
  std::vector<std::uint64_t> words_;
};

/// Finite geometric lattice given extensionally. Elements are identified with
/// their closed sets of atoms; ids are dense and sorted by (rank, closed set).
struct GeomLattice {
  std::size_t n_atoms = 0;
  std::vector<AtomSet> closed;   // per flat
  std::vector<int> rank;         // per flat
  std::vector<FlatId> atoms;     // atom index -> flat id
  std::vector<std::vector<FlatId>> upper_covers;
  std::vector<std::vector<FlatId>> lower_covers;
  FlatId bottom = 0, top = 0;
  int top_rank = 0;

  std::size_t size() const { return closed.size(); }
  FlatId join(FlatId x, FlatId y) const { return join_[x * size() + y]; }
  FlatId meet(FlatId x, FlatId y) const { return meet_[x * size() + y]; }
  bool leq(FlatId x, FlatId y) const { return closed[x].subset_of(closed[y]); }
  FlatId flat_of(const AtomSet& s) const;            // throws if not closed
  std::vector<FlatId> flats_of_rank(int r) const;
  std::vector<FlatId> below(FlatId x) const;          // all y <= x, id order
  std::vector<std::size_t> atoms_below(FlatId x) const { return closed[x].indices(); }
  FlatId join_atom(FlatId x, std::size_t a) const { return join_atom_[x * n_atoms + a]; }
  FlatId join_of_atoms(const AtomSet& s) const;       // smallest flat containing s

  std::vector<FlatId> join_, meet_;   // dense tables
  std::vector<FlatId> join_atom_;     // flat x atom -> closure of closed[x] + atom
  std::map<AtomSet, FlatId> index_;
};

/// Build from the list of closed sets with ranks. Validates: distinct closed
/// sets, unique bottom, one flat per atom, meets closed under intersection.
GeomLattice make_lattice(std::vector<std::pair<AtomSet, int>> flats);

GeomLattice boolean_lattice(std::size_t n);

struct Interval {
  GeomLattice lat;
  std::vector<FlatId> to_parent;              // interval flat -> parent flat
  std::vector<FlatId> from_parent;            // parent flat -> interval flat or npos
  std::vector<std::size_t> atom_to_parent;    // interval atom index -> parent atom index
  static constexpr FlatId npos = static_cast<FlatId>(-1);
};

Interval interval_below(const GeomLattice& L, FlatId x);

/// Upper interval L_{>=x} as a geometric lattice; its atoms are the covers
/// of x, listed in id order. atom_to_parent holds the cover flat ids.
Interval interval_above(const GeomLattice& L, FlatId x);

struct Decomposition {
  std::vector<FlatId> parts;  // indecomposable parts, sorted by id
  bool indecomposable() const { return parts.size() == 1; }
};

/// Unique decomposition of x into indecomposable parts (bottom: no parts).
Decomposition decompose(const GeomLattice& L, FlatId x);

bool is_indecomposable(const GeomLattice& L, FlatId x);
std::vector<FlatId> indecomposables(const GeomLattice& L);  // rank >= 1

/// Sum of ranks strictly exceeds rank of the join.
bool dependent(const GeomLattice& L, const std::vector<FlatId>& xs);

/// Truncation data: a map L_{>=k} -> Lambda.
struct TruncationMap {
  const GeomLattice* src = nullptr;
  const GeomLattice* dst = nullptr;
  int k = 0;
  std::vector<FlatId> img;  // indexed by src flat; valid when rank >= k
};

struct CheckFailure {
  std::string what;
  std::vector<FlatId> flats;
};

/// Outcome of an exhaustive verification sweep; failures carry witnesses.
struct CheckReport {
  bool ok = true;
  std::vector<CheckFailure> failures;
};

using TruncationReport = CheckReport;

/// Verifies monotonicity, the rank shift, join compatibility when the meet
/// has rank >= k, and the disjoint lower-set decomposition of every fiber
/// {x : l(x) <= y}.
TruncationReport verify_truncation(const TruncationMap& t);

/// Moebius function mu(bottom, x) for every x.
std::vector<Integer> moebius_from_bottom(const GeomLattice& L);

bool is_semimodular(const GeomLattice& L, std::string* witness = nullptr);

}  // namespace relspace
