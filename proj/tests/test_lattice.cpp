#include <algorithm>
#include <set>

#include "doctest.h"
#include "relspace/arrangement.hpp"
#include "relspace/lattice.hpp"

using namespace relspace;

namespace {

std::vector<std::size_t> strata(const GeomLattice& L) {
  std::vector<std::size_t> out(L.top_rank + 1, 0);
  for (FlatId x = 0; x < L.size(); ++x) ++out[L.rank[x]];
  return out;
}

GeomLattice braid_lattice(int n) {
  return build_lattice(coxeter_family("A", n)).lat;
}

// Rank-2 uniform lattice on four atoms: bottom, four atoms, six pairs... the
// pairs all close to top, so the closed sets are the four singletons, the
// bottom, and the full set.
GeomLattice u24() {
  std::vector<std::pair<AtomSet, int>> flats;
  flats.push_back({AtomSet(4), 0});
  for (std::size_t a = 0; a < 4; ++a) flats.push_back({AtomSet::of(4, {a}), 1});
  flats.push_back({AtomSet::of(4, {0, 1, 2, 3}), 2});
  return make_lattice(std::move(flats));
}

}  // namespace

TEST_CASE("boolean lattice") {
  GeomLattice b = boolean_lattice(4);
  CHECK(b.size() == 16);
  CHECK(b.top_rank == 4);
  CHECK(strata(b) == std::vector<std::size_t>{1, 4, 6, 4, 1});
  CHECK(is_semimodular(b));
  auto mu = moebius_from_bottom(b);
  for (FlatId x = 0; x < b.size(); ++x)
    CHECK(mu[x] == (b.rank[x] % 2 == 0 ? Integer(1) : Integer(-1)));
  // Join and meet are set union and intersection.
  for (FlatId x = 0; x < b.size(); ++x)
    for (FlatId y = 0; y < b.size(); ++y) {
      CHECK(b.closed[b.join(x, y)] == (b.closed[x] | b.closed[y]));
      CHECK(b.closed[b.meet(x, y)] == (b.closed[x] & b.closed[y]));
    }
}

TEST_CASE("atom set basics") {
  AtomSet s = AtomSet::of(70, {0, 5, 64, 69});
  CHECK(s.count() == 4);
  CHECK(s.test(64));
  CHECK(!s.test(63));
  CHECK(s.indices() == std::vector<std::size_t>{0, 5, 64, 69});
  s.reset(5);
  CHECK(s.count() == 3);
  AtomSet t = AtomSet::of(70, {0, 1});
  CHECK((s & t).indices() == std::vector<std::size_t>{0});
  CHECK((s | t).count() == 4);
  CHECK(AtomSet::of(70, {0}).subset_of(t));
  CHECK(!t.subset_of(s));
  // Order is lexicographic on sorted index lists.
  CHECK(AtomSet::of(70, {0, 69}) < AtomSet::of(70, {1}));
}

TEST_CASE("braid lattice of the symmetric group on four letters") {
  GeomLattice L = braid_lattice(3);
  // Set partitions of a four-element set, counted by block structure.
  CHECK(L.size() == 15);
  CHECK(strata(L) == std::vector<std::size_t>{1, 6, 7, 1});
  CHECK(is_semimodular(L));
  auto mu = moebius_from_bottom(L);
  CHECK(mu[L.top] == Integer(-6));
  // Moebius values alternate in sign with the rank.
  Integer total = 0;
  for (FlatId x = 0; x < L.size(); ++x) {
    Integer expect_sign = (L.rank[x] % 2 == 0) ? 1 : -1;
    CHECK(mu[x] * expect_sign > 0);
    total += abs(mu[x]);
  }
  // Chambers of the arrangement: 4! = 24.
  CHECK(total == Integer(24));
}

TEST_CASE("chamber count of the rank four braid lattice") {
  GeomLattice L = braid_lattice(4);
  CHECK(L.size() == 52);
  CHECK(strata(L) == std::vector<std::size_t>{1, 10, 25, 15, 1});
  auto mu = moebius_from_bottom(L);
  Integer total = 0;
  for (FlatId x = 0; x < L.size(); ++x) total += abs(mu[x]);
  CHECK(total == Integer(120));
  CHECK(mu[L.top] == Integer(24));
}

TEST_CASE("uniform rank-2 lattice on four atoms") {
  GeomLattice L = u24();
  CHECK(L.size() == 6);
  CHECK(is_semimodular(L));
  auto mu = moebius_from_bottom(L);
  CHECK(mu[L.top] == Integer(3));  // 1 - 4 + mu_top = 0
  CHECK(L.join(L.atoms[0], L.atoms[1]) == L.top);
  CHECK(L.meet(L.atoms[0], L.atoms[1]) == L.bottom);
}

TEST_CASE("make_lattice validates its input") {
  // Meets not closed: two overlapping pairs without their intersection atom.
  std::vector<std::pair<AtomSet, int>> flats;
  flats.push_back({AtomSet(3), 0});
  flats.push_back({AtomSet::of(3, {0, 1}), 1});
  flats.push_back({AtomSet::of(3, {1, 2}), 1});
  CHECK_THROWS_AS(make_lattice(flats), std::invalid_argument);
  // Duplicate closed set.
  std::vector<std::pair<AtomSet, int>> dup;
  dup.push_back({AtomSet(2), 0});
  dup.push_back({AtomSet::of(2, {0}), 1});
  dup.push_back({AtomSet::of(2, {0}), 1});
  CHECK_THROWS_AS(make_lattice(dup), std::invalid_argument);
  // No bottom.
  std::vector<std::pair<AtomSet, int>> nobot;
  nobot.push_back({AtomSet::of(2, {0}), 1});
  CHECK_THROWS_AS(make_lattice(nobot), std::invalid_argument);
}

TEST_CASE("lattice navigation helpers") {
  GeomLattice L = braid_lattice(3);
  for (FlatId x = 0; x < L.size(); ++x) {
    CHECK(L.join_of_atoms(L.closed[x]) == x);
    CHECK(L.flat_of(L.closed[x]) == x);
    for (std::size_t a : L.atoms_below(x)) CHECK(L.leq(L.atoms[a], x));
    for (FlatId y : L.upper_covers[x]) {
      CHECK(L.rank[y] == L.rank[x] + 1);
      CHECK(L.leq(x, y));
      CHECK(std::count(L.lower_covers[y].begin(), L.lower_covers[y].end(), x) == 1);
    }
    // join_atom agrees with join against the atom's flat.
    for (std::size_t a = 0; a < L.n_atoms; ++a)
      CHECK(L.join_atom(x, a) == L.join(x, L.atoms[a]));
  }
  auto r2 = L.flats_of_rank(2);
  CHECK(r2.size() == 7);
  for (FlatId x : r2) CHECK(L.rank[x] == 2);
  CHECK(L.below(L.top).size() == L.size());
}

TEST_CASE("submodular rank inequality") {
  for (const GeomLattice& L : {braid_lattice(3), build_lattice(coxeter_family("B", 3)).lat}) {
    for (FlatId x = 0; x < L.size(); ++x)
      for (FlatId y = 0; y < L.size(); ++y)
        CHECK(L.rank[L.join(x, y)] + L.rank[L.meet(x, y)] <= L.rank[x] + L.rank[y]);
  }
}

TEST_CASE("decomposition into indecomposable parts") {
  GeomLattice L = braid_lattice(3);
  // Rank-2 flats: four have three atoms (one non-singleton block, join of a
  // triple), three have two atoms (two disjoint transpositions).
  int triples = 0, pairs = 0;
  for (FlatId x : L.flats_of_rank(2)) {
    Decomposition d = decompose(L, x);
    if (L.closed[x].count() == 3) {
      CHECK(d.indecomposable());
      CHECK(is_indecomposable(L, x));
      ++triples;
    } else {
      CHECK(d.parts.size() == 2);
      CHECK(!is_indecomposable(L, x));
      for (FlatId p : d.parts) CHECK(L.rank[p] == 1);
      // The parts join back to x and their atom sets partition closed[x].
      CHECK(L.join(d.parts[0], d.parts[1]) == x);
      CHECK((L.closed[d.parts[0]] | L.closed[d.parts[1]]) == L.closed[x]);
      CHECK((L.closed[d.parts[0]] & L.closed[d.parts[1]]).empty());
      ++pairs;
    }
  }
  CHECK(triples == 4);
  CHECK(pairs == 3);
  CHECK(decompose(L, L.top).indecomposable());
  CHECK(decompose(L, L.bottom).parts.empty());
  // Indecomposables of the boolean lattice are exactly the atoms.
  GeomLattice b = boolean_lattice(3);
  auto ind = indecomposables(b);
  CHECK(ind.size() == 3);
  for (FlatId x : ind) CHECK(b.rank[x] == 1);
}

TEST_CASE("dependence of flat families") {
  GeomLattice L = braid_lattice(3);
  // Three atoms joining to a rank-2 flat are dependent.
  FlatId triple = Interval::npos;
  for (FlatId x : L.flats_of_rank(2))
    if (L.closed[x].count() == 3) triple = x;
  REQUIRE(triple != Interval::npos);
  auto idx = L.atoms_below(triple);
  std::vector<FlatId> atoms;
  for (std::size_t a : idx) atoms.push_back(L.atoms[a]);
  CHECK(dependent(L, atoms));
  CHECK(!dependent(L, {atoms[0], atoms[1]}));
  CHECK(!dependent(L, {atoms[0]}));
  CHECK(dependent(L, {triple, atoms[0]}));
}

TEST_CASE("intervals are geometric lattices") {
  GeomLattice L = braid_lattice(3);
  Interval below = interval_below(L, L.top);
  CHECK(below.lat.size() == L.size());
  for (FlatId q = 0; q < below.lat.size(); ++q)
    CHECK(below.lat.rank[q] == L.rank[below.to_parent[q]]);

  for (FlatId x : L.flats_of_rank(2)) {
    Interval iv = interval_below(L, x);
    CHECK(iv.lat.top_rank == 2);
    CHECK(iv.lat.n_atoms == L.closed[x].count());
    CHECK(is_semimodular(iv.lat));
    CHECK(iv.to_parent[iv.lat.top] == x);
    CHECK(iv.from_parent[x] == iv.lat.top);
    // Atom correspondence is consistent.
    for (std::size_t a = 0; a < iv.lat.n_atoms; ++a)
      CHECK(L.closed[x].test(iv.atom_to_parent[a]));
  }

  for (std::size_t a = 0; a < L.n_atoms; ++a) {
    Interval iv = interval_above(L, L.atoms[a]);
    CHECK(iv.lat.top_rank == L.top_rank - 1);
    CHECK(iv.lat.n_atoms == L.upper_covers[L.atoms[a]].size());
    CHECK(is_semimodular(iv.lat));
    // Every interval flat maps to a parent flat above the base atom.
    for (FlatId q = 0; q < iv.lat.size(); ++q)
      CHECK(L.leq(L.atoms[a], iv.to_parent[q]));
    // Interval atoms are the covers, in id order.
    for (std::size_t c = 0; c + 1 < iv.atom_to_parent.size(); ++c)
      CHECK(iv.atom_to_parent[c] < iv.atom_to_parent[c + 1]);
  }
}

TEST_CASE("moebius of an upper interval of the braid lattice") {
  // The interval above an atom of the rank-3 braid lattice is the partition
  // lattice of a three-element set times a point structure; its top Moebius
  // value must match a direct recursion.
  GeomLattice L = braid_lattice(3);
  Interval iv = interval_above(L, L.atoms[0]);
  auto mu = moebius_from_bottom(iv.lat);
  Integer by_hand = 0;
  for (FlatId q = 0; q < iv.lat.size(); ++q)
    if (q != iv.lat.top) by_hand -= mu[q];
  CHECK(mu[iv.lat.top] == by_hand);
  CHECK(iv.lat.size() > 2);
}

TEST_CASE("make_lattice rejects non-geometric rank functions") {
  // Join of two atoms jumping straight to rank 3 is not geometric.
  std::vector<std::pair<AtomSet, int>> flats;
  flats.push_back({AtomSet(2), 0});
  flats.push_back({AtomSet::of(2, {0}), 1});
  flats.push_back({AtomSet::of(2, {1}), 1});
  flats.push_back({AtomSet::of(2, {0, 1}), 3});
  CHECK_THROWS_AS(make_lattice(std::move(flats)), std::invalid_argument);
}

TEST_CASE("semimodularity detects a violation") {
  // Hand-assembled diamond with a rank jump at the top; make_lattice would
  // refuse it, so fill the dense tables directly.
  GeomLattice L;
  L.n_atoms = 2;
  L.closed = {AtomSet(2), AtomSet::of(2, {0}), AtomSet::of(2, {1}), AtomSet::of(2, {0, 1})};
  L.rank = {0, 1, 1, 3};
  L.atoms = {1, 2};
  L.upper_covers = {{1, 2}, {3}, {3}, {}};
  L.lower_covers = {{}, {0}, {0}, {1, 2}};
  L.bottom = 0;
  L.top = 3;
  L.top_rank = 3;
  L.join_ = {0, 1, 2, 3, 1, 1, 3, 3, 2, 3, 2, 3, 3, 3, 3, 3};
  L.meet_ = {0, 0, 0, 0, 0, 1, 0, 1, 0, 0, 2, 2, 0, 1, 2, 3};
  std::string witness;
  CHECK(!is_semimodular(L, &witness));
  CHECK(!witness.empty());
}
