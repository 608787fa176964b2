#include "relspace/osalg.hpp"

#include <algorithm>
#include <functional>
#include <stdexcept>
#include <string>
#include <utility>

namespace relspace {

namespace {

Integer count_with_repeats(std::size_t n, int d) {
  if (d == 0) return 1;
  if (n == 0) return 0;
  return binomial(n + static_cast<std::size_t>(d) - 1, static_cast<std::size_t>(d));
}

void accumulate(std::map<FlatId, QVec>& acc, FlatId y, const QVec& v, const Rational& c) {
  auto it = acc.find(y);
  if (it == acc.end()) {
    QVec w(v.size(), Rational(0));
    for (std::size_t i = 0; i < v.size(); ++i) w[i] = c * v[i];
    acc.emplace(y, std::move(w));
  } else {
    for (std::size_t i = 0; i < v.size(); ++i) it->second[i] += c * v[i];
  }
}

void drop_zero_components(std::map<FlatId, QVec>& m) {
  for (auto it = m.begin(); it != m.end();) {
    if (is_zero_vec(it->second))
      it = m.erase(it);
    else
      ++it;
  }
}

}  // namespace

std::optional<std::pair<SuperMono, int>> super_product(const SuperMono& a, const SuperMono& b) {
  SuperMono out;
  out.even.resize(a.even.size() + b.even.size());
  std::merge(a.even.begin(), a.even.end(), b.even.begin(), b.even.end(), out.even.begin());
  out.odd.reserve(a.odd.size() + b.odd.size());
  int sign = 1;
  std::size_t i = 0, j = 0;
  while (i < a.odd.size() || j < b.odd.size()) {
    if (j == b.odd.size() || (i < a.odd.size() && a.odd[i] < b.odd[j])) {
      out.odd.push_back(a.odd[i++]);
    } else if (i == a.odd.size() || b.odd[j] < a.odd[i]) {
      // every remaining factor of a hops over this one
      if ((a.odd.size() - i) % 2) sign = -sign;
      out.odd.push_back(b.odd[j++]);
    } else {
      return std::nullopt;
    }
  }
  return std::make_pair(std::move(out), sign);
}

Integer SuperAlgebraSlice::estimate(const GradedComplex& V, int d) {
  std::size_t evens = 0, odds = 0;
  for (FlatId x = 0; x < V.lat.size(); ++x)
    (V.lat.rank[x] % 2 ? odds : evens) += V.dim[x];
  Integer total = 0;
  for (int s = 0; s <= d && s <= static_cast<int>(odds); ++s)
    total += binomial(odds, static_cast<std::size_t>(s)) * count_with_repeats(evens, d - s);
  return total;
}

SuperAlgebraSlice::SuperAlgebraSlice(const GradedComplex& V, int max_deg, std::size_t cap)
    : max_deg_(max_deg),
      n_flats_(V.lat.size()),
      bottom_(V.lat.bottom),
      flat_rank_(V.lat.rank) {
  if (max_deg < 0) throw std::invalid_argument("SuperAlgebraSlice: negative max degree");
  const GeomLattice& L = V.lat;

  std::vector<std::size_t> gen_base(L.size(), 0);
  for (FlatId x = 0; x < L.size(); ++x) {
    gen_base[x] = gen_flat_.size();
    for (std::size_t j = 0; j < V.dim[x]; ++j) {
      gen_flat_.push_back(x);
      gen_odd_.push_back(L.rank[x] % 2 != 0);
    }
  }
  gen_bnd_.resize(gen_flat_.size());
  for (FlatId x = 0; x < L.size(); ++x) {
    if (V.dim[x] == 0) continue;
    for (FlatId y : L.lower_covers[x]) {
      auto it = V.block.find({x, y});
      if (it == V.block.end()) continue;
      const QMatrix& B = it->second;
      for (std::size_t j = 0; j < V.dim[x]; ++j)
        for (std::size_t i = 0; i < V.dim[y]; ++i)
          if (B.at(i, j) != 0)
            gen_bnd_[gen_base[x] + j].push_back(
                {static_cast<std::uint32_t>(gen_base[y] + i), B.at(i, j)});
    }
  }

  std::vector<std::uint32_t> evens, odds;
  for (std::size_t g = 0; g < gen_flat_.size(); ++g)
    (gen_odd_[g] ? odds : evens).push_back(static_cast<std::uint32_t>(g));

  by_degree_.resize(max_deg + 1);
  lookup_.resize(max_deg + 1);
  for (int d = 0; d <= max_deg; ++d) {
    Integer est = estimate(V, d);
    if (est > Integer(cap))
      throw std::runtime_error("SuperAlgebraSlice: the degree " + std::to_string(d) +
                               " slice has " + est.str() + " monomials, over the cap " +
                               std::to_string(cap));

    std::map<FlatId, std::vector<std::pair<SuperMono, char>>> raw;
    SuperMono cur;
    std::function<void(std::size_t, int, FlatId, int)> pick_even =
        [&](std::size_t from, int left, FlatId join, int ranksum) {
          if (left == 0) {
            raw[join].push_back({cur, static_cast<char>(ranksum > L.rank[join])});
            return;
          }
          for (std::size_t i = from; i < evens.size(); ++i) {
            std::uint32_t g = evens[i];
            FlatId f = gen_flat_[g];
            cur.even.push_back(g);
            pick_even(i, left - 1, L.join(join, f), ranksum + L.rank[f]);
            cur.even.pop_back();
          }
        };
    std::function<void(std::size_t, int, FlatId, int)> pick_odd =
        [&](std::size_t from, int left, FlatId join, int ranksum) {
          pick_even(0, left, join, ranksum);
          if (left == 0) return;
          for (std::size_t i = from; i < odds.size(); ++i) {
            std::uint32_t g = odds[i];
            FlatId f = gen_flat_[g];
            cur.odd.push_back(g);
            pick_odd(i + 1, left - 1, L.join(join, f), ranksum + L.rank[f]);
            cur.odd.pop_back();
          }
        };
    pick_odd(0, d, L.bottom, 0);

    for (auto& [x, vec] : raw) {
      std::sort(vec.begin(), vec.end(),
                [](const auto& a, const auto& b) { return a.first < b.first; });
      SuperSlice s;
      s.monos.reserve(vec.size());
      s.dep.reserve(vec.size());
      for (auto& [m, f] : vec) {
        s.monos.push_back(std::move(m));
        s.dep.push_back(f);
      }
      by_degree_[d].emplace(x, std::move(s));
    }
    for (auto& [x, s] : by_degree_[d])
      for (std::size_t i = 0; i < s.monos.size(); ++i) lookup_[d][s.monos[i]] = {x, i};

    for (auto& [x, s] : by_degree_[d]) {
      std::vector<QVec> prows, irows;
      for (std::size_t i = 0; i < s.monos.size(); ++i) {
        if (!s.dep[i]) continue;
        QVec e(s.monos.size(), Rational(0));
        e[i] = 1;
        prows.push_back(std::move(e));
      }
      irows = prows;
      for (std::size_t i = 0; i < s.monos.size(); ++i) {
        if (!s.dep[i]) continue;
        auto b = boundary_of(d, x, i);
        auto it = b.find(x);
        if (it != b.end()) irows.push_back(std::move(it->second));
      }
      s.products = Subspace::span_of(prows, s.monos.size());
      s.ideal = Subspace::span_of(irows, s.monos.size());
    }
  }
}

const SuperSlice* SuperAlgebraSlice::slice(int d, FlatId x) const {
  if (d < 0 || d > max_deg_) throw std::invalid_argument("SuperAlgebraSlice: degree out of range");
  auto it = by_degree_[d].find(x);
  return it == by_degree_[d].end() ? nullptr : &it->second;
}

std::size_t SuperAlgebraSlice::slice_dim(int d, FlatId x) const {
  const SuperSlice* s = slice(d, x);
  return s ? s->monos.size() : 0;
}

std::size_t SuperAlgebraSlice::quotient_dim(int d, FlatId x) const {
  const SuperSlice* s = slice(d, x);
  return s ? s->monos.size() - s->ideal.dim() : 0;
}

std::map<FlatId, QVec> SuperAlgebraSlice::boundary_of(int d, FlatId x, std::size_t mono) const {
  const SuperSlice* sp = slice(d, x);
  if (!sp || mono >= sp->monos.size())
    throw std::invalid_argument("SuperAlgebraSlice: no such monomial");
  const SuperMono& m = sp->monos[mono];
  std::map<FlatId, QVec> out;
  auto add = [&](const SuperMono& t, const Rational& c) {
    auto [y, idx] = lookup_[d].at(t);
    auto it = out.find(y);
    if (it == out.end()) {
      QVec v(by_degree_[d].at(y).monos.size(), Rational(0));
      v[idx] = c;
      out.emplace(y, std::move(v));
    } else {
      it->second[idx] += c;
    }
  };

  for (std::size_t i = 0; i < m.even.size();) {
    std::size_t j = i;
    while (j < m.even.size() && m.even[j] == m.even[i]) ++j;
    std::uint32_t g = m.even[i];
    Rational mult(static_cast<long>(j - i));
    for (const auto& [t, c] : gen_bnd_[g]) {
      if (std::binary_search(m.odd.begin(), m.odd.end(), t)) continue;
      SuperMono nm;
      nm.even = m.even;
      nm.even.erase(nm.even.begin() + static_cast<std::ptrdiff_t>(i));
      std::size_t p = static_cast<std::size_t>(
          std::lower_bound(m.odd.begin(), m.odd.end(), t) - m.odd.begin());
      nm.odd = m.odd;
      nm.odd.insert(nm.odd.begin() + static_cast<std::ptrdiff_t>(p), t);
      Rational coef = mult * c;
      if (p % 2) coef = -coef;
      add(nm, coef);
    }
    i = j;
  }
  for (std::size_t j = 0; j < m.odd.size(); ++j) {
    std::uint32_t g = m.odd[j];
    for (const auto& [t, c] : gen_bnd_[g]) {
      SuperMono nm;
      nm.odd = m.odd;
      nm.odd.erase(nm.odd.begin() + static_cast<std::ptrdiff_t>(j));
      std::size_t p = static_cast<std::size_t>(
          std::lower_bound(m.even.begin(), m.even.end(), t) - m.even.begin());
      nm.even = m.even;
      nm.even.insert(nm.even.begin() + static_cast<std::ptrdiff_t>(p), t);
      Rational coef = c;
      if (j % 2) coef = -coef;
      add(nm, coef);
    }
  }
  drop_zero_components(out);
  return out;
}

std::map<FlatId, QVec> SuperAlgebraSlice::boundary_of_vec(int d, FlatId x, const QVec& v) const {
  std::map<FlatId, QVec> out;
  for (std::size_t i = 0; i < v.size(); ++i) {
    if (v[i] == 0) continue;
    auto b = boundary_of(d, x, i);
    for (const auto& [y, w] : b) accumulate(out, y, w, v[i]);
  }
  drop_zero_components(out);
  return out;
}

CheckReport SuperAlgebraSlice::verify_ideal_structure() const {
  CheckReport rep;
  auto fail = [&](const std::string& what, std::vector<FlatId> flats) {
    rep.ok = false;
    rep.failures.push_back({what, std::move(flats)});
  };

  for (int d = 0; d <= max_deg_; ++d) {
    for (const auto& [x, s] : by_degree_[d]) {
      for (std::size_t i = 0; i < s.monos.size(); ++i) {
        auto b = boundary_of(d, x, i);
        if (s.dep[i]) {
          for (const auto& [y, vec] : b) {
            if (y == x) continue;
            const SuperSlice& sy = by_degree_[d].at(y);
            for (std::size_t t = 0; t < vec.size(); ++t)
              if (vec[t] != 0 && !sy.dep[t]) {
                fail("boundary of a dependent product has an independent term", {x, y});
                break;
              }
          }
        }
        std::map<FlatId, QVec> acc;
        for (const auto& [y, vec] : b) {
          auto b2 = boundary_of_vec(d, y, vec);
          for (const auto& [z, w] : b2) accumulate(acc, z, w, Rational(1));
        }
        drop_zero_components(acc);
        if (!acc.empty()) fail("composite boundary nonzero on the algebra", {x});
      }
    }
    auto itb = by_degree_[d].find(bottom_);
    if (itb != by_degree_[d].end() && itb->second.ideal.dim() != 0)
      fail("ideal slice at the bottom grade is nonzero", {bottom_});
  }

  // Atom grades: the boundary image in the bottom slice must equal the
  // slice of the ideal generated by the atom piece boundary.
  std::size_t dim0 = 0;
  for (std::size_t g = 0; g < gen_flat_.size(); ++g)
    if (gen_flat_[g] == bottom_) ++dim0;
  for (int d = 1; d <= max_deg_; ++d) {
    const SuperSlice* sb = slice(d, bottom_);
    const SuperSlice* sl = slice(d - 1, bottom_);
    std::size_t bdim = sb ? sb->monos.size() : 0;
    for (FlatId a = 0; a < n_flats_; ++a) {
      if (flat_rank_[a] != 1) continue;
      const SuperSlice* sa = slice(d, a);
      std::vector<QVec> image;
      if (sa)
        for (std::size_t i = 0; i < sa->monos.size(); ++i) {
          auto b = boundary_of(d, a, i);
          auto it = b.find(bottom_);
          if (it != b.end()) image.push_back(std::move(it->second));
        }
      std::vector<QVec> generated;
      if (sl) {
        for (std::size_t g = 0; g < gen_flat_.size(); ++g) {
          if (gen_flat_[g] != a) continue;
          QVec w(dim0, Rational(0));
          for (const auto& [t, c] : gen_bnd_[g]) w[t] = c;
          for (const SuperMono& mu : sl->monos) {
            QVec row(bdim, Rational(0));
            for (std::size_t t = 0; t < dim0; ++t) {
              if (w[t] == 0) continue;
              SuperMono nm = mu;
              auto pos = std::lower_bound(nm.even.begin(), nm.even.end(),
                                          static_cast<std::uint32_t>(t));
              nm.even.insert(pos, static_cast<std::uint32_t>(t));
              row[lookup_[d].at(nm).second] += w[t];
            }
            generated.push_back(std::move(row));
          }
        }
      }
      if (Subspace::span_of(image, bdim) != Subspace::span_of(generated, bdim))
        fail("atom boundary image differs from the generated ideal", {a});
    }
  }
  return rep;
}

OsDimsReport generalized_os_dims(const GradedComplex& V, int max_deg, std::size_t cap) {
  OsDimsReport rep;
  rep.max_deg = max_deg;
  SuperAlgebraSlice S(V, max_deg, cap);
  rep.dim.assign(max_deg + 1, std::vector<std::size_t>(V.lat.size(), 0));
  for (int d = 0; d <= max_deg; ++d)
    for (FlatId x = 0; x < V.lat.size(); ++x) rep.dim[d][x] = S.quotient_dim(d, x);
  rep.checks = S.verify_ideal_structure();
  std::size_t n0 = V.dim[V.lat.bottom];
  for (int d = 0; d <= max_deg; ++d) {
    Integer want = count_with_repeats(n0, d);
    if (Integer(S.slice_dim(d, V.lat.bottom)) != want) {
      rep.checks.ok = false;
      rep.checks.failures.push_back(
          {"bottom piece differs from the symmetric power slice", {V.lat.bottom}});
    }
  }
  return rep;
}

GradedComplex atoms_only_complex(const GeomLattice& L, const AtomicDatum& d) {
  if (d.atom_spaces.size() != L.n_atoms)
    throw std::invalid_argument("atoms_only_complex: datum size does not match the atom count");
  GradedComplex C{L, std::vector<std::size_t>(L.size(), 0), {}};
  C.dim[L.bottom] = d.dim0;
  for (FlatId a : L.flats_of_rank(1)) {
    Subspace ua(d.dim0);
    for (auto g : L.atoms_below(a)) ua = ua.sum(d.atom_spaces[g]);
    C.dim[a] = ua.dim();
    if (ua.dim() > 0) C.block[{a, L.bottom}] = ua.basis().transpose();
  }
  return C;
}

TruncationMap identity_truncation(const GeomLattice& L) {
  TruncationMap t;
  t.src = &L;
  t.dst = &L;
  t.k = 0;
  t.img.resize(L.size());
  for (FlatId x = 0; x < L.size(); ++x) t.img[x] = x;
  return t;
}

GradedComplex truncate_complex(const GradedComplex& V, const TruncationMap& t) {
  if (!t.src || !t.dst) throw std::invalid_argument("truncate_complex: empty truncation");
  const GeomLattice& S = *t.src;
  const GeomLattice& D = *t.dst;
  if (S.size() != V.lat.size() || S.n_atoms != V.lat.n_atoms)
    throw std::invalid_argument("truncate_complex: truncation source does not match the complex");
  GradedComplex out{D, std::vector<std::size_t>(D.size(), 0), {}};
  std::vector<std::size_t> offset(S.size(), 0);
  for (FlatId x = 0; x < S.size(); ++x) {
    if (S.rank[x] < t.k) continue;
    FlatId q = t.img[x];
    offset[x] = out.dim[q];
    out.dim[q] += V.dim[x];
  }
  for (const auto& [key, B] : V.block) {
    auto [x, y] = key;
    if (S.rank[y] < t.k) continue;
    FlatId qx = t.img[x], qy = t.img[y];
    if (out.dim[qx] == 0 || out.dim[qy] == 0) continue;
    auto [it, fresh] = out.block.try_emplace({qx, qy}, QMatrix::zero(out.dim[qy], out.dim[qx]));
    (void)fresh;
    it->second.set_block(offset[y], offset[x], B);
  }
  return out;
}

namespace {

std::vector<DegreeSliceReport> ideal_slice_sweep(const GeomLattice& L,
                                                 const PolyDegreewise& ring,
                                                 const std::vector<Subspace>& gens, int max_deg,
                                                 CheckReport& checks) {
  std::vector<DegreeSliceReport> out;
  for (int d = 0; d <= max_deg; ++d) {
    AtomicDatum dd;
    dd.dim0 = ring.slice_dim(d);
    dd.atom_spaces.reserve(gens.size());
    for (const Subspace& g : gens) dd.atom_spaces.push_back(LinearIdeal{&ring, g}.slice(d));
    GradedComplex C = minimal_complex(L, dd);
    DegreeSliceReport r;
    r.degree = d;
    r.dim = C.dim;
    r.exactness = check_exactness(C);
    long long e = 0;
    for (FlatId x = 0; x < L.size(); ++x)
      e += (L.rank[x] % 2 ? -1 : 1) * static_cast<long long>(C.dim[x]);
    Subspace sum(dd.dim0);
    for (const Subspace& s : dd.atom_spaces) sum = sum.sum(s);
    r.euler = e;
    r.euler_expected =
        static_cast<long long>(dd.dim0) - static_cast<long long>(sum.dim());
    r.euler_ok = r.euler == r.euler_expected;
    if (!r.exactness.ok) {
      checks.ok = false;
      checks.failures.push_back({"slice complex not exact at degree " + std::to_string(d), {}});
    }
    if (!r.euler_ok) {
      checks.ok = false;
      checks.failures.push_back({"Euler count off at degree " + std::to_string(d), {}});
    }
    out.push_back(std::move(r));
  }
  return out;
}

}  // namespace

IdealComplexReport defining_ideal_complex(const Arrangement& a, const GradedComplex& V,
                                          int max_deg) {
  IdealComplexReport rep;
  rep.max_deg = max_deg;
  const GeomLattice& L = V.lat;
  if (L.n_atoms != a.size() || V.dim[L.bottom] != a.dim)
    throw std::invalid_argument("defining_ideal_complex: complex does not match the arrangement");
  PolyDegreewise ring(a.dim, max_deg);
  std::vector<Subspace> gens;
  gens.reserve(L.n_atoms);
  for (std::size_t g = 0; g < L.n_atoms; ++g) {
    FlatId x = L.atoms[g];
    auto it = V.block.find({x, L.bottom});
    if (it == V.block.end()) {
      gens.push_back(Subspace(a.dim));
      continue;
    }
    const QMatrix& B = it->second;
    std::vector<QVec> cols;
    for (std::size_t j = 0; j < B.cols(); ++j) cols.push_back(B.col(j));
    gens.push_back(Subspace::span_of(cols, a.dim));
  }
  rep.degrees = ideal_slice_sweep(L, ring, gens, max_deg, rep.checks);
  return rep;
}

std::vector<Subspace> projected_ideal_generators(const GradedComplex& V, const Projection& pr) {
  const GeomLattice& S = V.lat;
  const GeomLattice& T = pr.lat.lat;
  if (pr.hyper_flat.size() != T.n_atoms)
    throw std::invalid_argument("projected_ideal_generators: projection data inconsistent");
  auto layer = S.flats_of_rank(pr.k);
  std::vector<std::size_t> offset(S.size(), 0);
  std::size_t n = 0;
  for (FlatId y : layer) {
    offset[y] = n;
    n += V.dim[y];
  }
  std::vector<Subspace> gens;
  gens.reserve(T.n_atoms);
  for (std::size_t g = 0; g < T.n_atoms; ++g) {
    FlatId x = pr.hyper_flat[g];
    if (S.rank[x] != pr.k + 1)
      throw std::invalid_argument("projected_ideal_generators: hyperplane flat of the wrong rank");
    std::vector<QVec> cols(V.dim[x], QVec(n, Rational(0)));
    for (FlatId y : S.lower_covers[x]) {
      auto it = V.block.find({x, y});
      if (it == V.block.end()) continue;
      const QMatrix& B = it->second;
      for (std::size_t j = 0; j < V.dim[x]; ++j)
        for (std::size_t i = 0; i < V.dim[y]; ++i) cols[j][offset[y] + i] = B.at(i, j);
    }
    gens.push_back(cols.empty() ? Subspace(n) : Subspace::span_of(cols, n));
  }
  return gens;
}

std::size_t layer_dim(const GradedComplex& V, int k) {
  std::size_t n = 0;
  for (FlatId y : V.lat.flats_of_rank(k)) n += V.dim[y];
  return n;
}

IdealComplexReport projected_ideal_complex(const GradedComplex& V, const Projection& pr,
                                           int max_deg) {
  IdealComplexReport rep;
  rep.max_deg = max_deg;
  std::vector<Subspace> gens = projected_ideal_generators(V, pr);
  std::size_t n = layer_dim(V, pr.k);
  PolyDegreewise ring(n, max_deg);
  rep.degrees = ideal_slice_sweep(pr.lat.lat, ring, gens, max_deg, rep.checks);
  return rep;
}

}  // namespace relspace
