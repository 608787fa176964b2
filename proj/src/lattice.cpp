#include "relspace/lattice.hpp"

#include <algorithm>
#include <bit>
#include <functional>
#include <stdexcept>

namespace relspace {

void AtomSet::set(std::size_t i) {
  if (i >= n_) throw std::out_of_range("AtomSet::set");
  words_[i / 64] |= (std::uint64_t{1} << (i % 64));
}

void AtomSet::reset(std::size_t i) {
  if (i >= n_) throw std::out_of_range("AtomSet::reset");
  words_[i / 64] &= ~(std::uint64_t{1} << (i % 64));
}

bool AtomSet::test(std::size_t i) const {
  if (i >= n_) throw std::out_of_range("AtomSet::test");
  return (words_[i / 64] >> (i % 64)) & 1;
}

std::size_t AtomSet::count() const {
  std::size_t c = 0;
  for (auto w : words_) c += std::popcount(w);
  return c;
}

AtomSet AtomSet::operator|(const AtomSet& o) const {
  if (o.n_ != n_) throw std::invalid_argument("AtomSet: universe mismatch");
  AtomSet r(n_);
  for (std::size_t i = 0; i < words_.size(); ++i) r.words_[i] = words_[i] | o.words_[i];
  return r;
}

AtomSet AtomSet::operator&(const AtomSet& o) const {
  if (o.n_ != n_) throw std::invalid_argument("AtomSet: universe mismatch");
  AtomSet r(n_);
  for (std::size_t i = 0; i < words_.size(); ++i) r.words_[i] = words_[i] & o.words_[i];
  return r;
}

bool AtomSet::subset_of(const AtomSet& o) const {
  if (o.n_ != n_) throw std::invalid_argument("AtomSet: universe mismatch");
  for (std::size_t i = 0; i < words_.size(); ++i)
    if (words_[i] & ~o.words_[i]) return false;
  return true;
}

bool AtomSet::operator<(const AtomSet& o) const {
  // lexicographic on the sorted index sequences: with i the smallest
  // differing index, the set holding i comes first unless the other set
  // has no index beyond i (a proper prefix sorts first)
  if (n_ != o.n_) return n_ < o.n_;
  for (std::size_t w = 0; w < words_.size(); ++w) {
    std::uint64_t d = words_[w] ^ o.words_[w];
    if (!d) continue;
    int b = std::countr_zero(d);
    std::uint64_t above = (~std::uint64_t{0} << b) << 1;
    bool mine = (words_[w] >> b) & 1;
    const auto& rest = mine ? o.words_ : words_;
    bool rest_has_later = (rest[w] & above) != 0;
    for (std::size_t w2 = w + 1; !rest_has_later && w2 < rest.size(); ++w2)
      rest_has_later = rest[w2] != 0;
    return mine ? rest_has_later : !rest_has_later;
  }
  return false;
}

std::vector<std::size_t> AtomSet::indices() const {
  std::vector<std::size_t> r;
  for (std::size_t i = 0; i < n_; ++i)
    if (test(i)) r.push_back(i);
  return r;
}

AtomSet AtomSet::of(std::size_t universe, const std::vector<std::size_t>& idx) {
  AtomSet s(universe);
  for (auto i : idx) s.set(i);
  return s;
}

FlatId GeomLattice::flat_of(const AtomSet& s) const {
  auto it = index_.find(s);
  if (it == index_.end()) throw std::invalid_argument("flat_of: set is not closed");
  return it->second;
}

std::vector<FlatId> GeomLattice::flats_of_rank(int r) const {
  std::vector<FlatId> v;
  for (FlatId x = 0; x < size(); ++x)
    if (rank[x] == r) v.push_back(x);
  return v;
}

std::vector<FlatId> GeomLattice::below(FlatId x) const {
  std::vector<FlatId> v;
  for (FlatId y = 0; y < size(); ++y)
    if (leq(y, x)) v.push_back(y);
  return v;
}

FlatId GeomLattice::join_of_atoms(const AtomSet& s) const {
  FlatId z = bottom;
  for (auto a : s.indices()) z = join_atom(z, a);
  return z;
}

GeomLattice make_lattice(std::vector<std::pair<AtomSet, int>> flats) {
  if (flats.empty()) throw std::invalid_argument("make_lattice: empty");
  std::sort(flats.begin(), flats.end(), [](const auto& a, const auto& b) {
    if (a.second != b.second) return a.second < b.second;
    return a.first < b.first;
  });
  GeomLattice L;
  L.n_atoms = flats[0].first.universe();
  for (auto& [s, r] : flats) {
    if (s.universe() != L.n_atoms) throw std::invalid_argument("make_lattice: universe mismatch");
    if (L.index_.count(s)) throw std::invalid_argument("make_lattice: duplicate closed set");
    L.index_[s] = static_cast<FlatId>(L.closed.size());
    L.closed.push_back(s);
    L.rank.push_back(r);
  }
  std::size_t n = L.size();
  if (L.rank[0] != 0 || !L.closed[0].empty())
    throw std::invalid_argument("make_lattice: need an empty bottom of rank 0");
  L.bottom = 0;
  L.top = static_cast<FlatId>(n - 1);
  L.top_rank = L.rank[L.top];
  for (FlatId x = 0; x < n; ++x)
    if (!L.closed[x].subset_of(L.closed[L.top]))
      throw std::invalid_argument("make_lattice: no top element");

  for (FlatId x = 0; x < n; ++x)
    for (FlatId y = 0; y < n; ++y)
      if (!(x == y) && L.closed[x].subset_of(L.closed[y]) && L.rank[x] >= L.rank[y])
        throw std::invalid_argument("make_lattice: rank not strictly monotone");

  L.atoms.assign(L.n_atoms, 0);
  std::vector<bool> seen(L.n_atoms, false);
  for (FlatId x = 0; x < n; ++x) {
    if (L.rank[x] != 1) continue;
    for (auto i : L.closed[x].indices()) {
      if (seen[i]) throw std::invalid_argument("make_lattice: atom in two rank-1 flats");
      seen[i] = true;
      L.atoms[i] = x;
    }
  }
  for (std::size_t i = 0; i < L.n_atoms; ++i)
    if (!seen[i]) throw std::invalid_argument("make_lattice: atom not covered by a rank-1 flat");

  L.upper_covers.assign(n, {});
  L.lower_covers.assign(n, {});
  for (FlatId x = 0; x < n; ++x)
    for (FlatId y = 0; y < n; ++y)
      if (L.rank[y] == L.rank[x] + 1 && L.closed[x].subset_of(L.closed[y])) {
        L.upper_covers[x].push_back(y);
        L.lower_covers[y].push_back(x);
      }

  // meets: the closed sets must be closed under intersection
  L.meet_.assign(n * n, 0);
  for (FlatId x = 0; x < n; ++x)
    for (FlatId y = x; y < n; ++y) {
      auto it = L.index_.find(L.closed[x] & L.closed[y]);
      if (it == L.index_.end())
        throw std::invalid_argument("make_lattice: meet of flats is not a flat");
      L.meet_[x * n + y] = L.meet_[y * n + x] = it->second;
    }

  // closure of closed[x] + one atom: must be a cover of x (else the rank
  // function is not semimodular and this is not a geometric lattice)
  L.join_atom_.assign(n * L.n_atoms, 0);
  for (FlatId x = 0; x < n; ++x)
    for (std::size_t a = 0; a < L.n_atoms; ++a) {
      if (L.closed[x].test(a)) {
        L.join_atom_[x * L.n_atoms + a] = x;
        continue;
      }
      FlatId found = static_cast<FlatId>(-1);
      for (auto y : L.upper_covers[x])
        if (L.closed[y].test(a)) {
          if (found != static_cast<FlatId>(-1))
            throw std::invalid_argument("make_lattice: atom join is not unique");
          found = y;
        }
      if (found == static_cast<FlatId>(-1))
        throw std::invalid_argument("make_lattice: atom join does not cover; not geometric");
      L.join_atom_[x * L.n_atoms + a] = found;
    }

  // join table, one extra atom at a time: join(x,y) = (x v y') v a where
  // y = y' v a for a lower cover y' of y
  L.join_.assign(n * n, 0);
  for (FlatId y = 0; y < n; ++y) {
    if (y == L.bottom) {
      for (FlatId x = 0; x < n; ++x) L.join_[x * n + y] = x;
      continue;
    }
    if (L.lower_covers[y].empty())
      throw std::invalid_argument("make_lattice: flat has no lower cover; not graded");
    FlatId yp = L.lower_covers[y][0];
    std::size_t a = static_cast<std::size_t>(-1);
    for (auto i : L.closed[y].indices())
      if (!L.closed[yp].test(i)) {
        a = i;
        break;
      }
    if (a == static_cast<std::size_t>(-1))
      throw std::invalid_argument("make_lattice: cover adds no atom");
    for (FlatId x = 0; x < n; ++x)
      L.join_[x * n + y] = L.join_atom_[L.join_[x * n + yp] * L.n_atoms + a];
  }
  return L;
}

GeomLattice boolean_lattice(std::size_t n) {
  std::vector<std::pair<AtomSet, int>> flats;
  for (std::uint64_t mask = 0; mask < (std::uint64_t{1} << n); ++mask) {
    AtomSet s(n);
    int r = 0;
    for (std::size_t i = 0; i < n; ++i)
      if ((mask >> i) & 1) {
        s.set(i);
        ++r;
      }
    flats.emplace_back(s, r);
  }
  return make_lattice(std::move(flats));
}

Interval interval_below(const GeomLattice& L, FlatId x) {
  Interval iv;
  iv.atom_to_parent = L.closed[x].indices();
  std::size_t na = iv.atom_to_parent.size();
  std::vector<std::size_t> atom_new(L.n_atoms, static_cast<std::size_t>(-1));
  for (std::size_t i = 0; i < na; ++i) atom_new[iv.atom_to_parent[i]] = i;

  std::vector<std::pair<AtomSet, int>> flats;
  std::vector<FlatId> members;
  for (FlatId y = 0; y < L.size(); ++y) {
    if (!L.leq(y, x)) continue;
    AtomSet s(na);
    for (auto i : L.closed[y].indices()) s.set(atom_new[i]);
    flats.emplace_back(s, L.rank[y]);
    members.push_back(y);
  }
  iv.lat = make_lattice(flats);
  // make_lattice sorts by (rank, set); mirror that ordering for the id maps
  std::sort(members.begin(), members.end(), [&](FlatId a, FlatId b) {
    if (L.rank[a] != L.rank[b]) return L.rank[a] < L.rank[b];
    AtomSet sa(na), sb(na);
    for (auto i : L.closed[a].indices()) sa.set(atom_new[i]);
    for (auto i : L.closed[b].indices()) sb.set(atom_new[i]);
    return sa < sb;
  });
  iv.to_parent = members;
  iv.from_parent.assign(L.size(), Interval::npos);
  for (FlatId i = 0; i < members.size(); ++i) iv.from_parent[members[i]] = i;
  return iv;
}

Interval interval_above(const GeomLattice& L, FlatId x) {
  Interval iv;
  const auto& covers = L.upper_covers[x];
  std::size_t na = covers.size();
  iv.atom_to_parent.assign(covers.begin(), covers.end());

  std::vector<std::pair<AtomSet, int>> flats;
  std::vector<FlatId> members;
  for (FlatId y = 0; y < L.size(); ++y) {
    if (!L.leq(x, y)) continue;
    AtomSet s(na);
    for (std::size_t i = 0; i < na; ++i)
      if (L.leq(covers[i], y)) s.set(i);
    flats.emplace_back(s, L.rank[y] - L.rank[x]);
    members.push_back(y);
  }
  iv.lat = make_lattice(flats);
  std::sort(members.begin(), members.end(), [&](FlatId a, FlatId b) {
    if (L.rank[a] != L.rank[b]) return L.rank[a] < L.rank[b];
    AtomSet sa(na), sb(na);
    for (std::size_t i = 0; i < na; ++i) {
      if (L.leq(covers[i], a)) sa.set(i);
      if (L.leq(covers[i], b)) sb.set(i);
    }
    return sa < sb;
  });
  iv.to_parent = members;
  iv.from_parent.assign(L.size(), Interval::npos);
  for (FlatId i = 0; i < members.size(); ++i) iv.from_parent[members[i]] = i;
  return iv;
}

Decomposition decompose(const GeomLattice& L, FlatId x) {
  Decomposition d;
  auto atoms = L.closed[x].indices();
  if (atoms.empty()) return d;
  // Two atoms lie in the same part exactly when some circuit (minimal
  // dependent set) holds both, and the fundamental circuits of any one
  // greedy basis already generate that relation.
  std::size_t m = atoms.size();
  std::vector<std::size_t> comp(m);
  for (std::size_t i = 0; i < m; ++i) comp[i] = i;
  std::function<std::size_t(std::size_t)> find = [&](std::size_t i) {
    while (comp[i] != i) i = comp[i] = comp[comp[i]];
    return i;
  };
  std::vector<std::size_t> basis;
  std::vector<char> in_basis(m, 0);
  FlatId span = L.bottom;
  for (std::size_t i = 0; i < m; ++i) {
    FlatId grown = L.join_atom(span, atoms[i]);
    if (L.rank[grown] > L.rank[span]) {
      basis.push_back(i);
      in_basis[i] = 1;
      span = grown;
    }
  }
  for (std::size_t i = 0; i < m; ++i) {
    if (in_basis[i]) continue;
    for (std::size_t b = 0; b < basis.size(); ++b) {
      FlatId rest = L.bottom;
      for (std::size_t q = 0; q < basis.size(); ++q)
        if (q != b) rest = L.join_atom(rest, atoms[basis[q]]);
      // atoms[basis[b]] is in the fundamental circuit of atoms[i] exactly
      // when dropping it from the basis stops spanning atoms[i]
      if (!L.closed[rest].test(atoms[i])) comp[find(i)] = find(basis[b]);
    }
  }
  std::map<std::size_t, AtomSet> parts;
  for (std::size_t i = 0; i < m; ++i) {
    auto r = find(i);
    auto it = parts.find(r);
    if (it == parts.end()) it = parts.emplace(r, AtomSet(L.n_atoms)).first;
    it->second.set(atoms[i]);
  }
  for (auto& [root, s] : parts) d.parts.push_back(L.join_of_atoms(s));
  std::sort(d.parts.begin(), d.parts.end());
  return d;
}

bool is_indecomposable(const GeomLattice& L, FlatId x) {
  if (L.rank[x] == 0) return false;
  return decompose(L, x).indecomposable();
}

std::vector<FlatId> indecomposables(const GeomLattice& L) {
  std::vector<FlatId> r;
  for (FlatId x = 0; x < L.size(); ++x)
    if (is_indecomposable(L, x)) r.push_back(x);
  return r;
}

bool dependent(const GeomLattice& L, const std::vector<FlatId>& xs) {
  if (xs.empty()) return false;
  int sum = 0;
  FlatId j = L.bottom;
  for (auto x : xs) {
    sum += L.rank[x];
    j = L.join(j, x);
  }
  return sum > L.rank[j];
}

TruncationReport verify_truncation(const TruncationMap& t) {
  TruncationReport rep;
  const GeomLattice& L = *t.src;
  const GeomLattice& M = *t.dst;
  auto fail = [&](std::string what, std::vector<FlatId> fl) {
    rep.ok = false;
    rep.failures.push_back({std::move(what), std::move(fl)});
  };
  std::vector<FlatId> domain;
  for (FlatId x = 0; x < L.size(); ++x)
    if (L.rank[x] >= t.k) domain.push_back(x);

  for (auto x : domain)
    if (M.rank[t.img[x]] != L.rank[x] - t.k) fail("rank shift violated", {x});

  for (auto x : domain)
    for (auto y : domain) {
      if (L.leq(x, y) && !M.leq(t.img[x], t.img[y])) fail("not monotone", {x, y});
      if (L.rank[L.meet(x, y)] >= t.k) {
        FlatId lhs = t.img[L.join(x, y)];
        FlatId rhs = M.join(t.img[x], t.img[y]);
        if (lhs != rhs) fail("join compatibility violated", {x, y});
      }
    }

  // fiber decomposition: {x : l(x) <= yt} is the disjoint union of the
  // lower sets (within rank >= k) of its maximal elements
  for (FlatId yt = 0; yt < M.size(); ++yt) {
    std::vector<FlatId> fiber;
    for (auto x : domain)
      if (M.leq(t.img[x], yt)) fiber.push_back(x);
    std::vector<FlatId> maximal;
    for (auto x : fiber) {
      bool is_max = true;
      for (auto y : fiber)
        if (y != x && L.leq(x, y)) is_max = false;
      if (is_max) maximal.push_back(x);
    }
    for (auto x : fiber) {
      std::size_t owners = 0;
      for (auto mx : maximal)
        if (L.leq(x, mx)) ++owners;
      if (owners != 1) fail("fiber decomposition not disjoint", {yt, x});
    }
  }
  return rep;
}

std::vector<Integer> moebius_from_bottom(const GeomLattice& L) {
  std::vector<Integer> mu(L.size());
  std::vector<FlatId> order(L.size());
  for (FlatId x = 0; x < L.size(); ++x) order[x] = x;
  std::sort(order.begin(), order.end(),
            [&](FlatId a, FlatId b) { return L.rank[a] < L.rank[b]; });
  for (auto x : order) {
    if (x == L.bottom) {
      mu[x] = 1;
      continue;
    }
    Integer s = 0;
    for (FlatId y = 0; y < L.size(); ++y)
      if (y != x && L.leq(y, x)) s += mu[y];
    mu[x] = -s;
  }
  return mu;
}

bool is_semimodular(const GeomLattice& L, std::string* witness) {
  for (FlatId x = 0; x < L.size(); ++x)
    for (FlatId y = 0; y < L.size(); ++y) {
      int lhs = L.rank[L.join(x, y)] + L.rank[L.meet(x, y)];
      int rhs = L.rank[x] + L.rank[y];
      if (lhs > rhs) {
        if (witness)
          *witness = "rank inequality fails at flats " + std::to_string(x) + "," + std::to_string(y);
        return false;
      }
    }
  return true;
}

}  // namespace relspace
