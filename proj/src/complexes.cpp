#include "relspace/complexes.hpp"

#include <algorithm>
#include <stdexcept>
#include <string>
#include <utility>

namespace relspace {

namespace {

Rational leading(const QVec& v) {
  for (const auto& c : v)
    if (c != 0) return c;
  return Rational(0);
}

/// Flats of one rank inside the lower interval of z, with block offsets.
struct Layer {
  std::vector<FlatId> flats;
  std::vector<std::size_t> offset;
  std::size_t total = 0;
};

Layer layer_below(const GradedComplex& C, FlatId z, int rnk) {
  Layer l;
  for (auto x : C.lat.flats_of_rank(rnk)) {
    if (!C.lat.leq(x, z)) continue;
    l.flats.push_back(x);
    l.offset.push_back(l.total);
    l.total += C.dim[x];
  }
  return l;
}

std::size_t pos_of(const Layer& l, FlatId x) {
  return static_cast<std::size_t>(
      std::lower_bound(l.flats.begin(), l.flats.end(), x) - l.flats.begin());
}

QMatrix boundary_between(const GradedComplex& C, const Layer& from, const Layer& to) {
  QMatrix m = QMatrix::zero(to.total, from.total);
  for (std::size_t i = 0; i < from.flats.size(); ++i) {
    FlatId x = from.flats[i];
    if (C.dim[x] == 0) continue;
    for (FlatId y : C.lat.lower_covers[x]) {
      auto it = C.block.find({x, y});
      if (it == C.block.end()) continue;
      m.set_block(to.offset[pos_of(to, y)], from.offset[i], it->second);
    }
  }
  return m;
}

void accumulate_block(QMatrix& m, std::size_t i0, std::size_t j0, const QMatrix& b,
                      const Rational& c) {
  for (std::size_t i = 0; i < b.rows(); ++i)
    for (std::size_t j = 0; j < b.cols(); ++j)
      m.at(i0 + i, j0 + j) += c * b.at(i, j);
}

void validate_datum(const GeomLattice& L, const AtomicDatum& d, const char* who) {
  if (d.atom_spaces.size() != L.n_atoms)
    throw std::invalid_argument(std::string(who) + ": datum size does not match the atom count");
  for (const auto& s : d.atom_spaces)
    if (s.ambient() != d.dim0)
      throw std::invalid_argument(std::string(who) + ": atom space in the wrong ambient space");
}

Subspace atom_space_of_flat(const GeomLattice& L, const AtomicDatum& d, FlatId a) {
  Subspace s(d.dim0);
  for (auto g : L.atoms_below(a)) s = s.sum(d.atom_spaces[g]);
  return s;
}

}  // namespace

AtomicDatum defining_datum(const Arrangement& a) {
  AtomicDatum d;
  d.dim0 = a.dim;
  d.atom_spaces.reserve(a.size());
  for (const auto& u : a.normals) d.atom_spaces.push_back(Subspace::span_of({u}, a.dim));
  return d;
}

AtomicDatum constant_datum(std::size_t n_atoms) {
  AtomicDatum d;
  d.dim0 = 1;
  d.atom_spaces.assign(n_atoms, Subspace::full(1));
  return d;
}

bool datum_essential(const AtomicDatum& d) {
  Subspace s(d.dim0);
  for (const auto& u : d.atom_spaces) s = s.sum(u);
  return s.dim() == d.dim0;
}

bool datum_nondegenerate(const AtomicDatum& d) {
  for (const auto& u : d.atom_spaces)
    if (u.dim() == 0) return false;
  return true;
}

bool datum_orthogonal(const GeomLattice& L, const AtomicDatum& d) {
  validate_datum(L, d, "datum_orthogonal");
  auto rank1 = L.flats_of_rank(1);
  std::vector<Subspace> ua;
  ua.reserve(rank1.size());
  for (auto a : rank1) ua.push_back(atom_space_of_flat(L, d, a));
  for (std::size_t i = 0; i < rank1.size(); ++i)
    for (std::size_t j = i + 1; j < rank1.size(); ++j) {
      if (is_indecomposable(L, L.join(rank1[i], rank1[j]))) continue;
      if (ua[i].intersect(ua[j]).dim() != 0) return false;
    }
  return true;
}

std::size_t GradedComplex::degree_dim(int i) const {
  std::size_t t = 0;
  for (auto x : lat.flats_of_rank(i)) t += dim[x];
  return t;
}

QMatrix GradedComplex::flat_boundary(FlatId x) const {
  std::size_t rows = 0;
  for (auto y : lat.lower_covers[x]) rows += dim[y];
  QMatrix m = QMatrix::zero(rows, dim[x]);
  std::size_t off = 0;
  for (auto y : lat.lower_covers[x]) {
    auto it = block.find({x, y});
    if (it != block.end()) m.set_block(off, 0, it->second);
    off += dim[y];
  }
  return m;
}

QMatrix GradedComplex::degree_boundary(int i) const {
  Layer from = layer_below(*this, lat.top, i);
  Layer to = layer_below(*this, lat.top, i - 1);
  return boundary_between(*this, from, to);
}

GradedComplex minimal_complex(const GeomLattice& L, const AtomicDatum& d) {
  validate_datum(L, d, "minimal_complex");
  GradedComplex C{L, std::vector<std::size_t>(L.size(), 0), {}};
  C.dim[L.bottom] = d.dim0;
  for (FlatId a : L.flats_of_rank(1)) {
    Subspace ua = atom_space_of_flat(L, d, a);
    C.dim[a] = ua.dim();
    if (ua.dim() > 0) C.block[{a, L.bottom}] = ua.basis().transpose();
  }
  for (int r = 2; r <= L.top_rank; ++r) {
    for (FlatId x : L.flats_of_rank(r)) {
      const auto& ys = L.lower_covers[x];
      std::vector<std::size_t> yoff(ys.size());
      std::size_t cols = 0;
      for (std::size_t i = 0; i < ys.size(); ++i) {
        yoff[i] = cols;
        cols += C.dim[ys[i]];
      }
      std::vector<FlatId> zs;
      for (auto y : ys)
        for (auto w : L.lower_covers[y]) zs.push_back(w);
      std::sort(zs.begin(), zs.end());
      zs.erase(std::unique(zs.begin(), zs.end()), zs.end());
      std::vector<std::size_t> zoff(zs.size());
      std::size_t rows = 0;
      for (std::size_t i = 0; i < zs.size(); ++i) {
        zoff[i] = rows;
        rows += C.dim[zs[i]];
      }
      QMatrix m = QMatrix::zero(rows, cols);
      for (std::size_t i = 0; i < ys.size(); ++i) {
        for (auto w : L.lower_covers[ys[i]]) {
          auto it = C.block.find({ys[i], w});
          if (it == C.block.end()) continue;
          auto zpos = static_cast<std::size_t>(
              std::lower_bound(zs.begin(), zs.end(), w) - zs.begin());
          m.set_block(zoff[zpos], yoff[i], it->second);
        }
      }
      QMatrix k = kernel(m);
      C.dim[x] = k.rows();
      if (k.rows() == 0) continue;
      for (std::size_t i = 0; i < ys.size(); ++i) {
        if (C.dim[ys[i]] == 0) continue;
        C.block[{x, ys[i]}] = k.cols_slice(yoff[i], C.dim[ys[i]]).transpose();
      }
    }
  }
  return C;
}

GradedComplex relation_complex(const Arrangement& a, const ArrLattice& L) {
  return minimal_complex(L.lat, defining_datum(a));
}

GradedComplex sub_complex(const GradedComplex& C, FlatId x) {
  Interval iv = interval_below(C.lat, x);
  GradedComplex S{std::move(iv.lat), {}, {}};
  S.dim.assign(S.lat.size(), 0);
  for (FlatId q = 0; q < S.lat.size(); ++q) S.dim[q] = C.dim[iv.to_parent[q]];
  for (FlatId q = 0; q < S.lat.size(); ++q)
    for (FlatId w : S.lat.lower_covers[q]) {
      auto it = C.block.find({iv.to_parent[q], iv.to_parent[w]});
      if (it != C.block.end()) S.block[{q, w}] = it->second;
    }
  return S;
}

ExactnessReport check_exactness(const GradedComplex& C) {
  ExactnessReport rep;
  int n = C.lat.top_rank;
  rep.defect.assign(n + 1, 0);
  std::vector<Layer> lay(n + 1);
  for (int i = 0; i <= n; ++i) lay[i] = layer_below(C, C.lat.top, i);
  std::vector<QMatrix> b(n + 1);
  for (int i = 1; i <= n; ++i) b[i] = boundary_between(C, lay[i], lay[i - 1]);
  for (int i = 2; i <= n; ++i)
    if (!b[i - 1].mul(b[i]).is_zero()) {
      rep.ok = false;
      rep.failures.push_back(
          {"composite boundary nonzero out of degree " + std::to_string(i), {}});
    }
  std::vector<std::size_t> rk(n + 2, 0);
  for (int i = 1; i <= n; ++i) rk[i] = rank_of(b[i]);
  for (int i = 1; i <= n; ++i) {
    auto ker = static_cast<long long>(lay[i].total) - static_cast<long long>(rk[i]);
    rep.defect[i] = ker - static_cast<long long>(rk[i + 1]);
    if (rep.defect[i] != 0) {
      rep.ok = false;
      rep.failures.push_back({"homology of dimension " + std::to_string(rep.defect[i]) +
                                  " at degree " + std::to_string(i),
                              {}});
    }
  }
  return rep;
}

CheckReport check_l_contractible(const GradedComplex& C) {
  CheckReport rep;
  for (FlatId x = 0; x < C.lat.size(); ++x) {
    if (C.lat.rank[x] < 1) continue;
    auto ex = check_exactness(sub_complex(C, x));
    if (!ex.ok) {
      rep.ok = false;
      rep.failures.push_back({"lower interval is not exact", {x}});
    }
  }
  return rep;
}

CompatibleSection coxeter_section(const Arrangement& a) {
  CompatibleSection s;
  s.datum = defining_datum(a);
  s.d0.reserve(a.size());
  for (const auto& u : a.normals) {
    Rational c = 2 * leading(u) / dot(u, u);
    QMatrix m(1, a.dim);
    for (std::size_t j = 0; j < a.dim; ++j) m.at(0, j) = c * u[j];
    s.d0.push_back(std::move(m));
  }
  return s;
}

CompatibleSection restricted_section(const Arrangement& a, const Restriction& r) {
  CompatibleSection s;
  s.datum = defining_datum(r.arr);
  std::size_t f = r.arr.dim;
  std::vector<QMatrix> rows(r.arr.size(), QMatrix::zero(1, f));
  for (std::size_t h = 0; h < a.size(); ++h) {
    std::size_t i = r.hyper_to_atom[h];
    if (i == Restriction::npos) continue;
    const QVec& u = a.normals[h];
    QVec cu = r.chart.apply(u);
    Rational c = 2 * r.hyper_scale[h] / dot(u, u);
    for (std::size_t j = 0; j < f; ++j) rows[i].at(0, j) += c * cu[j];
  }
  s.d0.reserve(rows.size());
  for (std::size_t i = 0; i < rows.size(); ++i)
    s.d0.push_back(rows[i].scale(leading(r.arr.normals[i])));
  return s;
}

CompatibleSection rank2_section(const Arrangement& a) {
  if (a.dim != 2) throw std::invalid_argument("rank2_section: ambient dimension must be 2");
  if (a.size() < 2) throw std::invalid_argument("rank2_section: needs at least two lines");
  CompatibleSection s;
  s.datum = defining_datum(a);
  for (std::size_t g = 0; g < a.size(); ++g) {
    const QVec& u = a.normals[g];
    QMatrix m = QMatrix::zero(1, 2);
    for (std::size_t p = 0; p < a.size(); ++p) {
      if (p == g) continue;
      const QVec& w = a.normals[p];
      Rational det2 = u[0] * w[1] - u[1] * w[0];
      if (det2 == 0) throw std::invalid_argument("rank2_section: parallel lines");
      // coefficient of v along u in the basis {u, w}
      m.at(0, 0) += w[1] / det2;
      m.at(0, 1) += -w[0] / det2;
    }
    s.d0.push_back(m.scale(leading(u)));
  }
  return s;
}

CheckReport verify_section(const GeomLattice& L, CompatibleSection& s) {
  CheckReport rep;
  auto fail = [&](std::string what, std::vector<FlatId> fl) {
    rep.ok = false;
    rep.failures.push_back({std::move(what), std::move(fl)});
  };
  if (s.datum.size() != L.n_atoms || s.d0.size() != L.n_atoms) {
    fail("section data do not match the atom count", {});
    return rep;
  }
  std::size_t n0 = s.datum.dim0;
  for (std::size_t g = 0; g < L.n_atoms; ++g)
    if (s.d0[g].rows() != s.datum.atom_spaces[g].dim() || s.d0[g].cols() != n0) {
      fail("section block has the wrong shape", {L.atoms[g]});
      return rep;
    }
  auto rank1 = L.flats_of_rank(1);
  for (std::size_t i = 0; i < rank1.size(); ++i)
    for (std::size_t j = i + 1; j < rank1.size(); ++j) {
      FlatId a = rank1[i], b = rank1[j];
      if (is_indecomposable(L, L.join(a, b))) continue;
      bool bad = false;
      for (auto g : L.atoms_below(a))
        for (auto g2 : L.atoms_below(b))
          bad = bad ||
                !s.d0[g2].mul(s.datum.atom_spaces[g].basis().transpose()).is_zero() ||
                !s.d0[g].mul(s.datum.atom_spaces[g2].basis().transpose()).is_zero();
      if (bad) fail("cross component over a decomposable join", {a, b});
    }
  for (FlatId x : indecomposables(L)) {
    QMatrix sx = QMatrix::zero(n0, n0);
    Subspace ux(n0);
    for (auto g : L.atoms_below(x)) {
      sx = sx.add(s.datum.atom_spaces[g].basis().transpose().mul(s.d0[g]));
      ux = ux.sum(s.datum.atom_spaces[g]);
    }
    if (ux.dim() == 0) continue;
    const QMatrix& w = ux.basis();
    Rational h;
    bool have = false, good = true;
    for (std::size_t i = 0; i < w.rows() && good; ++i) {
      QVec wi = w.row(i);
      QVec sw = sx.apply(wi);
      if (!have) {
        std::size_t k = 0;
        while (wi[k] == 0) ++k;
        h = sw[k] / wi[k];
        have = true;
      }
      for (std::size_t k = 0; k < wi.size(); ++k)
        if (sw[k] != h * wi[k]) {
          good = false;
          break;
        }
    }
    if (!good) {
      fail("section does not scale on the flat", {x});
      continue;
    }
    s.h[x] = h;
  }
  return rep;
}

std::variant<LHomotopy, CheckFailure> run_homotopy_recursion(
    const GradedComplex& C, std::map<std::pair<FlatId, FlatId>, QMatrix> seed,
    std::map<FlatId, Rational> h, HomotopySupport support) {
  const GeomLattice& L = C.lat;
  LHomotopy H;
  H.support = support;
  H.block = std::move(seed);
  H.h = std::move(h);
  std::vector<char> supp(L.size(), 0);
  if (support == HomotopySupport::all_covers) {
    for (FlatId y = 0; y < L.size(); ++y) supp[y] = L.rank[y] >= 1;
  } else {
    for (FlatId y : indecomposables(L)) supp[y] = 1;
  }
  for (FlatId y = 0; y < L.size(); ++y)
    if (supp[y] && !H.h.count(y)) return CheckFailure{"missing scaling constant", {y}};

  for (int r = 1; r < L.top_rank; ++r) {
    for (FlatId x : L.flats_of_rank(r)) {
      if (C.dim[x] == 0) continue;
      for (FlatId y : L.upper_covers[x]) {
        if (!supp[y]) continue;
        const auto& xs = L.lower_covers[y];
        std::vector<std::size_t> off(xs.size());
        std::size_t rows = 0, offx = 0;
        for (std::size_t i = 0; i < xs.size(); ++i) {
          off[i] = rows;
          if (xs[i] == x) offx = rows;
          rows += C.dim[xs[i]];
        }
        QMatrix rhs = QMatrix::zero(rows, C.dim[x]);
        const Rational& hy = H.h.at(y);
        for (std::size_t t = 0; t < C.dim[x]; ++t) rhs.at(offx + t, t) = hy;
        for (FlatId w : L.lower_covers[x]) {
          auto bit = C.block.find({x, w});
          if (bit == C.block.end()) continue;
          for (FlatId wp : L.upper_covers[w]) {
            if (!L.leq(wp, y)) continue;
            auto hit = H.block.find({w, wp});
            if (hit == H.block.end()) continue;
            auto p = static_cast<std::size_t>(
                std::lower_bound(xs.begin(), xs.end(), wp) - xs.begin());
            accumulate_block(rhs, off[p], 0, hit->second.mul(bit->second), Rational(-1));
          }
        }
        auto X = solve_many(C.flat_boundary(y), rhs);
        if (!X) return CheckFailure{"homotopy recursion is unsolvable", {x, y}};
        H.block[{x, y}] = std::move(*X);
      }
    }
  }
  return H;
}

std::variant<LHomotopy, CheckFailure> build_homotopy(const GradedComplex& C,
                                                     const CompatibleSection& s) {
  const GeomLattice& L = C.lat;
  validate_datum(L, s.datum, "build_homotopy");
  if (!datum_orthogonal(L, s.datum))
    throw std::invalid_argument("build_homotopy: datum is not orthogonal");
  if (C.dim[L.bottom] != s.datum.dim0)
    throw std::invalid_argument("build_homotopy: complex does not match the section datum");
  std::map<std::pair<FlatId, FlatId>, QMatrix> seed;
  for (FlatId a : L.flats_of_rank(1)) {
    Subspace ua = atom_space_of_flat(L, s.datum, a);
    if (C.dim[a] != ua.dim())
      throw std::invalid_argument("build_homotopy: complex does not match the section datum");
    QMatrix d0a = QMatrix::zero(ua.dim(), s.datum.dim0);
    for (auto g : L.atoms_below(a)) {
      auto conv = solve_many(ua.basis().transpose(), s.datum.atom_spaces[g].basis().transpose());
      if (!conv) throw std::logic_error("build_homotopy: atom space escapes its flat space");
      d0a = d0a.add(conv->mul(s.d0[g]));
    }
    seed[{L.bottom, a}] = std::move(d0a);
  }
  auto res = run_homotopy_recursion(C, std::move(seed), s.h, HomotopySupport::indecomposables);
  if (std::holds_alternative<CheckFailure>(res)) return res;
  LHomotopy H = std::get<LHomotopy>(std::move(res));
  for (FlatId z : indecomposables(L)) {
    auto rep = verify_homotopy(C, H, z);
    if (!rep.ok) return rep.failures.front();
  }
  return H;
}

CheckReport verify_homotopy(const GradedComplex& C, const LHomotopy& H, FlatId z) {
  CheckReport rep;
  auto fail = [&](std::string what, std::vector<FlatId> fl) {
    rep.ok = false;
    rep.failures.push_back({std::move(what), std::move(fl)});
  };
  const GeomLattice& L = C.lat;
  int n = L.rank[z];

  std::map<FlatId, Rational> scale;  // per cover target, mode A only
  Rational target = 1;
  if (H.support == HomotopySupport::indecomposables) {
    auto dec = decompose(L, z);
    std::vector<Rational> part_scale(dec.parts.size());
    for (std::size_t p = 0; p < dec.parts.size(); ++p) {
      auto it = H.h.find(dec.parts[p]);
      if (it == H.h.end()) {
        fail("missing scaling constant", {dec.parts[p]});
        return rep;
      }
      if (it->second == 0) {
        fail("zero scaling constant", {dec.parts[p]});
        return rep;
      }
      part_scale[p] = 1 / it->second;
    }
    for (FlatId y = 0; y < L.size(); ++y) {
      if (L.rank[y] < 1 || !L.leq(y, z)) continue;
      if (!is_indecomposable(L, y)) {
        if (C.dim[y] != 0) fail("piece at a decomposable flat", {y});
        continue;
      }
      for (std::size_t p = 0; p < dec.parts.size(); ++p)
        if (L.leq(y, dec.parts[p])) {
          scale[y] = part_scale[p];
          break;
        }
    }
    if (!rep.ok) return rep;
  } else {
    auto it = H.h.find(z);
    if (it == H.h.end()) {
      fail("missing scaling constant", {z});
      return rep;
    }
    target = it->second;
  }

  std::vector<Layer> lay(n + 1);
  for (int i = 0; i <= n; ++i) lay[i] = layer_below(C, z, i);
  std::vector<QMatrix> B(n + 1), D(n + 1);
  for (int i = 1; i <= n; ++i) B[i] = boundary_between(C, lay[i], lay[i - 1]);
  for (int i = 0; i < n; ++i) {
    QMatrix m = QMatrix::zero(lay[i + 1].total, lay[i].total);
    for (std::size_t xi = 0; xi < lay[i].flats.size(); ++xi) {
      FlatId x = lay[i].flats[xi];
      if (C.dim[x] == 0) continue;
      for (FlatId y : L.upper_covers[x]) {
        if (!L.leq(y, z)) continue;
        auto it = H.block.find({x, y});
        if (it == H.block.end()) continue;
        Rational c = 1;
        if (H.support == HomotopySupport::indecomposables) {
          auto sit = scale.find(y);
          if (sit == scale.end()) continue;
          c = sit->second;
        }
        accumulate_block(m, lay[i + 1].offset[pos_of(lay[i + 1], y)], lay[i].offset[xi],
                         it->second, c);
      }
    }
    D[i] = std::move(m);
  }
  if (n >= 1) {
    QMatrix m0 = B[1].mul(D[0]);
    for (std::size_t t = 0; t < m0.rows(); ++t) m0.at(t, t) -= target;
    if (!m0.mul(B[1]).is_zero()) fail("homotopy identity fails at degree 0", {z});
  }
  for (int i = 1; i <= n; ++i) {
    QMatrix t = D[i - 1].mul(B[i]);
    if (i < n) t = t.add(B[i + 1].mul(D[i]));
    bool good = true;
    for (std::size_t p = 0; p < lay[i].total && good; ++p)
      for (std::size_t q = 0; q < lay[i].total; ++q)
        if (t.at(p, q) != (p == q ? target : Rational(0))) {
          good = false;
          break;
        }
    if (!good) fail("homotopy identity fails at degree " + std::to_string(i), {z});
  }
  return rep;
}

CheckReport verify_homotopy_all(const GradedComplex& C, const LHomotopy& H) {
  CheckReport rep;
  for (FlatId z = 0; z < C.lat.size(); ++z) {
    if (C.lat.rank[z] < 1) continue;
    auto r = verify_homotopy(C, H, z);
    if (!r.ok) {
      rep.ok = false;
      rep.failures.insert(rep.failures.end(), r.failures.begin(), r.failures.end());
    }
  }
  return rep;
}

std::variant<LHomotopy, CheckFailure> rank2_homotopy(const GradedComplex& C) {
  const GeomLattice& L = C.lat;
  if (L.top_rank > 2) throw std::invalid_argument("rank2_homotopy: lattice rank exceeds 2");
  LHomotopy H;
  H.support = HomotopySupport::all_covers;
  H.canonical = false;
  H.h[L.top] = 1;
  if (L.top_rank == 0) return H;

  Layer l0 = layer_below(C, L.top, 0), l1 = layer_below(C, L.top, 1);
  QMatrix b1 = boundary_between(C, l1, l0);
  QMatrix d0 = QMatrix::zero(l1.total, l0.total);
  Subspace im = Subspace::span_of(b1.transpose());
  if (im.dim() > 0) {
    // section on an echelon basis of the image, zero on the complementary
    // unit coordinates
    auto x = solve_many(b1, im.basis().transpose());
    if (!x) throw std::logic_error("rank2_homotopy: image basis is not in the image");
    auto ech = rref(im.basis());
    std::vector<char> piv(l0.total, 0);
    for (auto p : ech.pivots) piv[p] = 1;
    QMatrix full = im.basis();
    for (std::size_t j = 0; j < l0.total; ++j) {
      if (piv[j]) continue;
      QMatrix e = QMatrix::zero(1, l0.total);
      e.at(0, j) = 1;
      full = full.vstack(e);
    }
    auto inv = solve_many(full.transpose(), QMatrix::identity(l0.total));
    if (!inv) throw std::logic_error("rank2_homotopy: basis completion is singular");
    d0 = x->mul(inv->rows_slice(0, im.dim()));
  }
  for (std::size_t i = 0; i < l1.flats.size(); ++i) {
    FlatId a = l1.flats[i];
    if (C.dim[a] == 0) continue;
    H.block[{L.bottom, a}] = d0.rows_slice(l1.offset[i], C.dim[a]);
  }
  if (L.top_rank == 2) {
    Layer l2 = layer_below(C, L.top, 2);
    QMatrix b2 = boundary_between(C, l2, l1);
    QMatrix rhs = d0.mul(b1).scale(Rational(-1));
    for (std::size_t t = 0; t < l1.total; ++t) rhs.at(t, t) += 1;
    auto d1 = solve_many(b2, rhs);
    if (!d1) return CheckFailure{"complex is not exact in degree 1", {L.top}};
    for (std::size_t i = 0; i < l1.flats.size(); ++i) {
      FlatId a = l1.flats[i];
      if (C.dim[a] == 0) continue;
      for (std::size_t j = 0; j < l2.flats.size(); ++j) {
        FlatId x = l2.flats[j];
        if (C.dim[x] == 0) continue;
        H.block[{a, x}] =
            d1->rows_slice(l2.offset[j], C.dim[x]).cols_slice(l1.offset[i], C.dim[a]);
      }
    }
  }
  auto rep = verify_homotopy(C, H, L.top);
  if (!rep.ok) return rep.failures.front();
  return H;
}

CheckReport os_homotopy_check(const GeomLattice& L, std::size_t atom) {
  if (atom >= L.n_atoms) throw std::invalid_argument("os_homotopy_check: atom out of range");
  CheckReport rep;
  auto fail = [&](std::string what, std::vector<FlatId> fl) {
    rep.ok = false;
    rep.failures.push_back({std::move(what), std::move(fl)});
  };
  GradedComplex C = minimal_complex(L, constant_datum(L.n_atoms));
  auto mu = moebius_from_bottom(L);
  for (FlatId x = 0; x < L.size(); ++x)
    if (Integer(C.dim[x]) != abs(mu[x]))
      fail("piece dimension differs from the Moebius value", {x});
  FlatId a = L.atoms[atom];
  std::map<std::pair<FlatId, FlatId>, QMatrix> seed;
  for (FlatId ap : L.flats_of_rank(1)) {
    QMatrix m(1, 1);
    m.at(0, 0) = (ap == a) ? 1 : 0;
    seed[{L.bottom, ap}] = std::move(m);
  }
  std::map<FlatId, Rational> h;
  for (FlatId x = 0; x < L.size(); ++x)
    if (L.rank[x] >= 1) h[x] = L.leq(a, x) ? 1 : 0;
  auto res = run_homotopy_recursion(C, std::move(seed), std::move(h),
                                    HomotopySupport::all_covers);
  if (std::holds_alternative<CheckFailure>(res)) {
    rep.ok = false;
    rep.failures.push_back(std::get<CheckFailure>(std::move(res)));
    return rep;
  }
  const LHomotopy& H = std::get<LHomotopy>(res);
  for (const auto& [key, blk] : H.block) {
    if (blk.is_zero()) continue;
    if (key.second != L.join(key.first, a))
      fail("block escapes the atom join", {key.first, key.second});
  }
  for (FlatId z = 0; z < L.size(); ++z) {
    if (L.rank[z] < 1 || !L.leq(a, z)) continue;
    auto r = verify_homotopy(C, H, z);
    if (!r.ok) {
      rep.ok = false;
      rep.failures.insert(rep.failures.end(), r.failures.begin(), r.failures.end());
    }
  }
  return rep;
}

CheckReport coxeter_number_identity(const GeomLattice& L, const CompatibleSection& s) {
  CheckReport rep;
  auto ind = indecomposables(L);
  for (FlatId x : ind)
    if (!s.h.count(x)) {
      rep.ok = false;
      rep.failures.push_back({"missing scaling constant", {x}});
    }
  if (!rep.ok) return rep;
  std::vector<char> isind(L.size(), 0);
  for (auto y : ind) isind[y] = 1;
  for (FlatId x : ind)
    for (FlatId z : ind) {
      if (!L.leq(x, z)) continue;
      Rational lhs = s.h.at(z) - s.h.at(x);
      Rational rhs = 0;
      for (FlatId y : L.upper_covers[x])
        if (isind[y] && L.leq(y, z)) rhs += s.h.at(y) - s.h.at(x);
      if (lhs != rhs) {
        rep.ok = false;
        rep.failures.push_back({"cover increments do not telescope", {x, z}});
      }
    }
  return rep;
}

}  // namespace relspace
