#include "relspace/family_complexes.hpp"

#include <algorithm>
#include <map>
#include <stdexcept>
#include <utility>

namespace relspace {

namespace {

using Letters = std::vector<int>;

/// Chains in the signed-set vector space: an index set maps to the
/// coefficient vector over its sign classes.  The class representative fixes
/// the smallest letter to +1, so a set of size s has 2^(s-1) coordinates and
/// the coordinate index encodes the signs of the remaining letters, bit t
/// standing for a minus at position t+1.
using WChain = std::map<Letters, QVec>;

std::vector<int> eps_of(std::size_t mask, std::size_t size) {
  std::vector<int> eps(size, 1);
  for (std::size_t t = 1; t < size; ++t)
    if ((mask >> (t - 1)) & 1u) eps[t] = -1;
  return eps;
}

/// Reduces a raw sign assignment to the class representative; flipping all
/// signs on a set of size s costs a factor (-1)^(s+1).
std::pair<std::size_t, Rational> normalize(const Letters& I, std::vector<int>& eps) {
  Rational coef = 1;
  if (eps[0] < 0) {
    for (auto& e : eps) e = -e;
    if (I.size() % 2 == 0) coef = -1;
  }
  std::size_t mask = 0;
  for (std::size_t t = 1; t < eps.size(); ++t)
    if (eps[t] < 0) mask |= std::size_t(1) << (t - 1);
  return {mask, coef};
}

void chain_add(WChain& c, const Letters& I, std::size_t mask, const Rational& v) {
  if (v == 0) return;
  auto it = c.find(I);
  if (it == c.end())
    it = c.emplace(I, QVec(std::size_t(1) << (I.size() - 1), Rational(0))).first;
  it->second[mask] += v;
}

WChain chain_sum(WChain a, const WChain& b) {
  for (const auto& [I, vec] : b)
    for (std::size_t mask = 0; mask < vec.size(); ++mask) chain_add(a, I, mask, vec[mask]);
  return a;
}

WChain chain_scale(WChain a, const Rational& s) {
  for (auto& [I, vec] : a)
    for (auto& v : vec) v *= s;
  return a;
}

/// Signed boundary: drops one letter at a time with alternating sign times
/// the sign the letter carried.  Sets of size one map to zero.
WChain apply_boundary(const WChain& c) {
  WChain out;
  for (const auto& [I, vec] : c) {
    if (I.size() < 2) continue;
    for (std::size_t mask = 0; mask < vec.size(); ++mask) {
      if (vec[mask] == 0) continue;
      auto eps = eps_of(mask, I.size());
      for (std::size_t l = 0; l < I.size(); ++l) {
        Rational coef = vec[mask] * eps[l];
        if (l % 2 == 1) coef = -coef;
        Letters I2;
        std::vector<int> eps2;
        for (std::size_t t = 0; t < I.size(); ++t) {
          if (t == l) continue;
          I2.push_back(I[t]);
          eps2.push_back(eps[t]);
        }
        auto [m2, c2] = normalize(I2, eps2);
        chain_add(out, I2, m2, coef * c2);
      }
    }
  }
  return out;
}

/// Inserts the letter k with both signs, weighted a half, and signed by the
/// parity of smaller letters already present; kills sets containing k.
WChain apply_dwk(const WChain& c, int k) {
  WChain out;
  for (const auto& [I, vec] : c) {
    if (std::binary_search(I.begin(), I.end(), k)) continue;
    auto p = static_cast<std::size_t>(
        std::lower_bound(I.begin(), I.end(), k) - I.begin());
    int sign = (p % 2 == 0) ? 1 : -1;
    Letters I2 = I;
    I2.insert(I2.begin() + static_cast<std::ptrdiff_t>(p), k);
    for (std::size_t mask = 0; mask < vec.size(); ++mask) {
      if (vec[mask] == 0) continue;
      auto eps = eps_of(mask, I.size());
      for (int delta : {1, -1}) {
        std::vector<int> eps2 = eps;
        eps2.insert(eps2.begin() + static_cast<std::ptrdiff_t>(p), delta);
        auto [m2, c2] = normalize(I2, eps2);
        chain_add(out, I2, m2, vec[mask] * sign * delta * c2 / 2);
      }
    }
  }
  return out;
}

/// The contracting operator on signed chains: the average of all letter
/// insertions when no coordinate hyperplane is present, the first-letter
/// insertion otherwise.
WChain apply_contract(const WChain& c, int n, int m) {
  if (m > 0) return apply_dwk(c, 0);
  WChain out;
  for (int k = 0; k < n; ++k) out = chain_sum(std::move(out), apply_dwk(c, k));
  return chain_scale(std::move(out), Rational(1) / (n - 1));
}

/// Matrix of the collapse map on the sign classes of J: one output
/// coordinate per letter of J outside the coordinate-hyperplane range.
QMatrix collapse_matrix(const Letters& J, int m) {
  std::vector<std::size_t> rows;
  for (std::size_t t = 0; t < J.size(); ++t)
    if (J[t] >= m) rows.push_back(t);
  QMatrix ph(rows.size(), std::size_t(1) << (J.size() - 1));
  for (std::size_t mask = 0; mask < ph.cols(); ++mask) {
    auto eps = eps_of(mask, J.size());
    int prod = 1;
    for (auto e : eps) prod *= e;
    for (std::size_t r = 0; r < rows.size(); ++r) {
      std::size_t pos = rows[r];
      int bigger = static_cast<int>(J.size() - 1 - pos);
      ph.at(r, mask) = Rational(prod * ((bigger % 2) ? -1 : 1) * eps[pos]);
    }
  }
  return ph;
}

struct HyperKind {
  int type;  // 0: e_i - e_j, 1: e_i + e_j, 2: e_i
  int i = -1;
  int j = -1;
};

std::vector<HyperKind> parse_normals(const Arrangement& a) {
  std::vector<HyperKind> ks;
  ks.reserve(a.size());
  for (const auto& u : a.normals) {
    std::vector<int> nz;
    for (std::size_t i = 0; i < u.size(); ++i)
      if (u[i] != 0) nz.push_back(static_cast<int>(i));
    if (nz.size() == 1 && u[static_cast<std::size_t>(nz[0])] == 1)
      ks.push_back({2, nz[0], -1});
    else if (nz.size() == 2 && u[static_cast<std::size_t>(nz[0])] == 1 &&
             u[static_cast<std::size_t>(nz[1])] == -1)
      ks.push_back({0, nz[0], nz[1]});
    else if (nz.size() == 2 && u[static_cast<std::size_t>(nz[0])] == 1 &&
             u[static_cast<std::size_t>(nz[1])] == 1)
      ks.push_back({1, nz[0], nz[1]});
    else
      throw std::logic_error("closed form: unexpected normal shape");
  }
  return ks;
}

struct FlatShape {
  enum class Kind { bottom, block, collapsed, none } kind = Kind::none;
  Letters set;           // the non-singleton block, or the collapsed support
  std::size_t mask = 0;  // sign class of the block (signed families)
};

/// Reads a flat of a signed arrangement off its closed hyperplane set: the
/// letters split into sign-coherent components, and a component collapses
/// (its coordinate vectors lie in the flat) when it carries a coordinate
/// hyperplane or an inconsistent sign cycle.
FlatShape classify_signed(const GeomLattice& L, const std::vector<HyperKind>& ks,
                          FlatId x, int n) {
  std::vector<std::vector<std::pair<int, int>>> adj(static_cast<std::size_t>(n));
  std::vector<char> unit(static_cast<std::size_t>(n), 0);
  for (auto g : L.closed[x].indices()) {
    const auto& k = ks[g];
    if (k.type == 2) {
      unit[static_cast<std::size_t>(k.i)] = 1;
    } else {
      int tau = (k.type == 0) ? 1 : -1;
      adj[static_cast<std::size_t>(k.i)].push_back({k.j, tau});
      adj[static_cast<std::size_t>(k.j)].push_back({k.i, tau});
    }
  }
  std::vector<int> comp(static_cast<std::size_t>(n), -1),
      sgn(static_cast<std::size_t>(n), 0);
  Letters collapsed;
  std::vector<Letters> blocks;
  std::vector<std::size_t> masks;
  for (int s = 0; s < n; ++s) {
    if (comp[static_cast<std::size_t>(s)] >= 0) continue;
    std::vector<int> queue{s};
    comp[static_cast<std::size_t>(s)] = s;
    sgn[static_cast<std::size_t>(s)] = 1;
    bool bad = false, has_unit = false;
    Letters members;
    for (std::size_t qi = 0; qi < queue.size(); ++qi) {
      int v = queue[qi];
      members.push_back(v);
      has_unit = has_unit || unit[static_cast<std::size_t>(v)];
      for (auto [w, tau] : adj[static_cast<std::size_t>(v)]) {
        if (comp[static_cast<std::size_t>(w)] < 0) {
          comp[static_cast<std::size_t>(w)] = s;
          sgn[static_cast<std::size_t>(w)] = tau * sgn[static_cast<std::size_t>(v)];
          queue.push_back(w);
        } else if (sgn[static_cast<std::size_t>(w)] !=
                   tau * sgn[static_cast<std::size_t>(v)]) {
          bad = true;
        }
      }
    }
    std::sort(members.begin(), members.end());
    if (bad || has_unit) {
      collapsed.insert(collapsed.end(), members.begin(), members.end());
    } else if (members.size() >= 2) {
      std::size_t mask = 0;
      for (std::size_t t = 1; t < members.size(); ++t)
        if (sgn[static_cast<std::size_t>(members[t])] < 0)
          mask |= std::size_t(1) << (t - 1);
      blocks.push_back(std::move(members));
      masks.push_back(mask);
    }
  }
  std::sort(collapsed.begin(), collapsed.end());
  FlatShape fs;
  if (collapsed.empty() && blocks.empty()) {
    fs.kind = FlatShape::Kind::bottom;
  } else if (collapsed.empty() && blocks.size() == 1) {
    fs.kind = FlatShape::Kind::block;
    fs.set = blocks[0];
    fs.mask = masks[0];
  } else if (blocks.empty()) {
    fs.kind = FlatShape::Kind::collapsed;
    fs.set = collapsed;
  }
  return fs;
}

/// Same reading for the unsigned family: components of the difference
/// hyperplanes partition the letters.
FlatShape classify_plain(const GeomLattice& L, const std::vector<HyperKind>& ks,
                         FlatId x, int letters) {
  std::vector<std::vector<int>> adj(static_cast<std::size_t>(letters));
  for (auto g : L.closed[x].indices()) {
    adj[static_cast<std::size_t>(ks[g].i)].push_back(ks[g].j);
    adj[static_cast<std::size_t>(ks[g].j)].push_back(ks[g].i);
  }
  std::vector<char> seen(static_cast<std::size_t>(letters), 0);
  std::vector<Letters> blocks;
  for (int s = 0; s < letters; ++s) {
    if (seen[static_cast<std::size_t>(s)]) continue;
    std::vector<int> queue{s};
    seen[static_cast<std::size_t>(s)] = 1;
    Letters members;
    for (std::size_t qi = 0; qi < queue.size(); ++qi) {
      members.push_back(queue[qi]);
      for (int w : adj[static_cast<std::size_t>(queue[qi])])
        if (!seen[static_cast<std::size_t>(w)]) {
          seen[static_cast<std::size_t>(w)] = 1;
          queue.push_back(w);
        }
    }
    if (members.size() >= 2) {
      std::sort(members.begin(), members.end());
      blocks.push_back(std::move(members));
    }
  }
  FlatShape fs;
  if (blocks.empty()) fs.kind = FlatShape::Kind::bottom;
  else if (blocks.size() == 1) {
    fs.kind = FlatShape::Kind::block;
    fs.set = blocks[0];
  }
  return fs;
}

struct SignedCtx {
  const GeomLattice* L = nullptr;
  std::map<Letters, FlatId> by_support;
  std::map<std::pair<Letters, std::size_t>, FlatId> by_block;
  std::map<FlatId, QMatrix> kb;  // kernel bases on collapsed flats
  std::vector<std::size_t> dim;
};

/// Writes one column of block matrices out of flat x: the plain-set part of
/// the chain lands on block flats (singleton sets on the bottom piece), the
/// kernel part on collapsed flats in their kernel-basis coordinates.  Every
/// target must be a cover in direction dir.
void scatter_piece(const SignedCtx& sc, FlatId x, std::size_t col, int dir,
                   const WChain& kpart, const WChain& wpart,
                   std::map<FlatId, QMatrix>& acc) {
  const GeomLattice& L = *sc.L;
  auto slot = [&](FlatId y) -> QMatrix& {
    bool related = dir > 0 ? L.leq(x, y) : L.leq(y, x);
    if (L.rank[y] != L.rank[x] + dir || !related)
      throw std::logic_error("closed form: component misses a cover");
    auto it = acc.find(y);
    if (it == acc.end()) it = acc.emplace(y, QMatrix::zero(sc.dim[y], sc.dim[x])).first;
    return it->second;
  };
  for (const auto& [I, vec] : wpart) {
    if (I.size() == 1) {
      if (vec[0] == 0) continue;
      slot(L.bottom).at(static_cast<std::size_t>(I[0]), col) += vec[0];
      continue;
    }
    for (std::size_t mask = 0; mask < vec.size(); ++mask) {
      if (vec[mask] == 0) continue;
      auto it = sc.by_block.find({I, mask});
      if (it == sc.by_block.end())
        throw std::logic_error("closed form: missing signed block flat");
      slot(it->second).at(0, col) += vec[mask];
    }
  }
  for (const auto& [J, vec] : kpart) {
    bool zero = true;
    for (const auto& v : vec)
      if (v != 0) {
        zero = false;
        break;
      }
    if (zero) continue;
    auto it = sc.by_support.find(J);
    if (it == sc.by_support.end())
      throw std::logic_error("closed form: component escapes the kernel");
    QMatrix rhs(vec.size(), 1);
    for (std::size_t r = 0; r < vec.size(); ++r) rhs.at(r, 0) = vec[r];
    auto sol = solve_many(sc.kb.at(it->second).transpose(), rhs);
    if (!sol) throw std::logic_error("closed form: component escapes the kernel");
    QMatrix& b = slot(it->second);
    for (std::size_t r = 0; r < sol->rows(); ++r) b.at(r, col) += sol->at(r, 0);
  }
}

ClosedFormComplex build_plain(int n) {
  ClosedFormComplex c;
  c.family = "A";
  c.n = n;
  c.arr = coxeter_family("A", n);
  c.lattice = build_lattice(c.arr);
  const GeomLattice& L = c.lattice.lat;
  auto ks = parse_normals(c.arr);
  int letters = n + 1;

  std::vector<FlatShape> shape(L.size());
  std::map<Letters, FlatId> by_block;
  for (FlatId x = 0; x < L.size(); ++x) {
    shape[x] = classify_plain(L, ks, x, letters);
    if (shape[x].kind == FlatShape::Kind::block) by_block[shape[x].set] = x;
  }

  GradedComplex C{L, std::vector<std::size_t>(L.size(), 0), {}};
  c.formula_dim.assign(L.size(), 0);
  C.dim[L.bottom] = static_cast<std::size_t>(letters);
  c.formula_dim[L.bottom] = static_cast<std::size_t>(letters);
  for (FlatId x = 0; x < L.size(); ++x)
    if (shape[x].kind == FlatShape::Kind::block) {
      C.dim[x] = 1;
      c.formula_dim[x] = 1;
    }

  for (FlatId x = 0; x < L.size(); ++x) {
    if (shape[x].kind != FlatShape::Kind::block) continue;
    const Letters& I = shape[x].set;
    if (I.size() == 2) {
      QMatrix col = QMatrix::zero(static_cast<std::size_t>(letters), 1);
      col.at(static_cast<std::size_t>(I[1]), 0) = 1;
      col.at(static_cast<std::size_t>(I[0]), 0) = -1;
      C.block[{x, L.bottom}] = std::move(col);
      continue;
    }
    for (std::size_t l = 0; l < I.size(); ++l) {
      Letters I2;
      for (std::size_t t = 0; t < I.size(); ++t)
        if (t != l) I2.push_back(I[t]);
      QMatrix b(1, 1);
      b.at(0, 0) = (l % 2 == 0) ? 1 : -1;
      C.block[{x, by_block.at(I2)}] = std::move(b);
    }
  }
  c.complex = std::move(C);

  LHomotopy H;
  H.support = HomotopySupport::all_covers;
  H.canonical = false;
  for (FlatId x = 0; x < L.size(); ++x)
    if (L.rank[x] >= 1) H.h[x] = 1;
  for (int j = 1; j < letters; ++j) {
    QMatrix row = QMatrix::zero(1, static_cast<std::size_t>(letters));
    row.at(0, static_cast<std::size_t>(j)) = 1;
    H.block[{L.bottom, by_block.at({0, j})}] = std::move(row);
  }
  for (FlatId x = 0; x < L.size(); ++x) {
    if (shape[x].kind != FlatShape::Kind::block || shape[x].set[0] == 0) continue;
    Letters I2 = shape[x].set;
    I2.insert(I2.begin(), 0);
    QMatrix b(1, 1);
    b.at(0, 0) = 1;
    H.block[{x, by_block.at(I2)}] = std::move(b);
  }
  c.homotopy = std::move(H);
  return c;
}

ClosedFormComplex build_signed(const std::string& family, int n, int m) {
  ClosedFormComplex c;
  c.arr = coxeter_family(family, n, m);
  if (family == "B") m = n;
  if (family == "D") m = 0;
  c.family = family;
  c.n = n;
  c.m = m;
  c.lattice = build_lattice(c.arr);
  const GeomLattice& L = c.lattice.lat;
  auto ks = parse_normals(c.arr);

  std::vector<FlatShape> shape(L.size());
  SignedCtx ctx;
  ctx.L = &L;
  ctx.dim.assign(L.size(), 0);
  c.formula_dim.assign(L.size(), 0);
  ctx.dim[L.bottom] = static_cast<std::size_t>(n);
  c.formula_dim[L.bottom] = static_cast<std::size_t>(n);
  for (FlatId x = 0; x < L.size(); ++x) {
    shape[x] = classify_signed(L, ks, x, n);
    if (shape[x].kind == FlatShape::Kind::block) {
      ctx.by_block[{shape[x].set, shape[x].mask}] = x;
      ctx.dim[x] = 1;
      c.formula_dim[x] = 1;
    } else if (shape[x].kind == FlatShape::Kind::collapsed) {
      ctx.by_support[shape[x].set] = x;
      QMatrix kb = kernel(collapse_matrix(shape[x].set, m));
      ctx.dim[x] = kb.rows();
      std::size_t outside = 0;
      for (int j : shape[x].set)
        if (j >= m) ++outside;
      c.formula_dim[x] =
          (std::size_t(1) << (shape[x].set.size() - 1)) - outside;
      ctx.kb.emplace(x, std::move(kb));
    }
  }

  auto element_of = [&](FlatId x, std::size_t t, WChain& w, WChain& wp) {
    if (x == L.bottom) {
      chain_add(wp, Letters{static_cast<int>(t)}, 0, 1);
    } else if (shape[x].kind == FlatShape::Kind::block) {
      chain_add(wp, shape[x].set, shape[x].mask, 1);
    } else {
      const QMatrix& kb = ctx.kb.at(x);
      for (std::size_t q = 0; q < kb.cols(); ++q)
        chain_add(w, shape[x].set, q, kb.at(t, q));
    }
  };

  GradedComplex C{L, ctx.dim, {}};
  for (FlatId x = 0; x < L.size(); ++x) {
    if (L.rank[x] < 1 || ctx.dim[x] == 0) continue;
    std::map<FlatId, QMatrix> acc;
    for (std::size_t t = 0; t < ctx.dim[x]; ++t) {
      WChain w, wp;
      element_of(x, t, w, wp);
      WChain kout = chain_scale(apply_boundary(w), Rational(-1));
      WChain wout = chain_sum(w, apply_boundary(wp));
      scatter_piece(ctx, x, t, -1, kout, wout, acc);
    }
    for (auto& [y, b] : acc) C.block[{x, y}] = std::move(b);
  }
  c.complex = std::move(C);

  LHomotopy H;
  H.support = HomotopySupport::all_covers;
  H.canonical = false;
  for (FlatId x = 0; x < L.size(); ++x)
    if (L.rank[x] >= 1) H.h[x] = 1;
  for (FlatId x = 0; x < L.size(); ++x) {
    if (ctx.dim[x] == 0 || x == L.top) continue;
    std::map<FlatId, QMatrix> acc;
    for (std::size_t t = 0; t < ctx.dim[x]; ++t) {
      WChain w, wp;
      element_of(x, t, w, wp);
      WChain dwp = apply_contract(wp, n, m);
      WChain first = chain_sum(
          chain_scale(apply_contract(w, n, m), Rational(-1)),
          chain_sum(wp, chain_scale(
                            chain_sum(apply_boundary(dwp),
                                      apply_contract(apply_boundary(wp), n, m)),
                            Rational(-1))));
      scatter_piece(ctx, x, t, 1, first, dwp, acc);
    }
    for (auto& [y, b] : acc)
      if (!b.is_zero()) H.block[{x, y}] = std::move(b);
  }
  c.homotopy = std::move(H);
  return c;
}

}  // namespace

ClosedFormComplex closed_form_complex(const std::string& family, int n, int m) {
  if (family == "A") return build_plain(n);
  if (family == "B" || family == "D" || family == "Phi") {
    if ((family == "D" || (family == "Phi" && m == 0)) && n < 2)
      throw std::invalid_argument("closed_form_complex: need n >= 2 without coordinate hyperplanes");
    return build_signed(family, n, m);
  }
  throw std::invalid_argument("closed_form_complex: unknown family " + family);
}

CheckReport check_closed_form(const ClosedFormComplex& c) {
  CheckReport rep;
  auto fail = [&](std::string what, std::vector<FlatId> fl) {
    rep.ok = false;
    rep.failures.push_back({std::move(what), std::move(fl)});
  };
  auto ex = check_exactness(c.complex);
  if (!ex.ok) {
    rep.ok = false;
    rep.failures.insert(rep.failures.end(), ex.failures.begin(), ex.failures.end());
  }
  for (FlatId x = 0; x < c.complex.lat.size(); ++x)
    if (c.complex.dim[x] != c.formula_dim[x])
      fail("piece dimension differs from the counting formula", {x});
  GradedComplex R = relation_complex(c.arr, c.lattice);
  for (FlatId x = 0; x < c.complex.lat.size(); ++x)
    if (R.dim[x] != c.complex.dim[x])
      fail("piece dimension differs from the relation complex", {x});
  auto h = verify_homotopy(c.complex, c.homotopy, c.complex.lat.top);
  if (!h.ok) {
    rep.ok = false;
    rep.failures.insert(rep.failures.end(), h.failures.begin(), h.failures.end());
  }
  return rep;
}

}  // namespace relspace
