#include "relspace/zonotope.hpp"

#include <algorithm>
#include <map>
#include <set>
#include <stdexcept>
#include <string>

namespace relspace {

namespace {

int sign_of(const Rational& x) { return x > 0 ? 1 : (x < 0 ? -1 : 0); }

/// Scale a constraint row by 1/|first nonzero entry|. Positive scaling
/// keeps the strict inequality, so deduplication after this is sound.
QVec normalized_row(QVec r) {
  for (const Rational& c : r) {
    if (c != 0) {
      Rational a = c < 0 ? Rational(-c) : c;
      for (Rational& e : r) e /= a;
      break;
    }
  }
  return r;
}

void sort_unique(std::vector<QVec>& rows) {
  std::sort(rows.begin(), rows.end());
  rows.erase(std::unique(rows.begin(), rows.end()), rows.end());
}

}  // namespace

std::optional<QVec> strict_feasible(const std::vector<QVec>& rows0, std::size_t d) {
  std::vector<QVec> rows;
  rows.reserve(rows0.size());
  for (const QVec& r : rows0) {
    if (is_zero_vec(r)) return std::nullopt;
    rows.push_back(normalized_row(r));
  }
  sort_unique(rows);

  // Eliminate variables from the last down; stage v keeps the rows that
  // bound y_v for back-substitution. Rows entering stage v only involve
  // coordinates 0..v.
  struct Stage {
    std::vector<QVec> lows, highs;
  };
  std::vector<Stage> stages(d);
  for (std::size_t v = d; v-- > 0;) {
    Stage& st = stages[v];
    std::vector<QVec> next;
    for (QVec& r : rows) {
      int s = sign_of(r[v]);
      if (s > 0)
        st.lows.push_back(std::move(r));
      else if (s < 0)
        st.highs.push_back(std::move(r));
      else
        next.push_back(std::move(r));
    }
    for (const QVec& p : st.lows) {
      for (const QVec& n : st.highs) {
        QVec comb(p.size());
        for (std::size_t j = 0; j <= v; ++j) comb[j] = p[j] * (-n[v]) + n[j] * p[v];
        if (is_zero_vec(comb)) return std::nullopt;
        next.push_back(normalized_row(std::move(comb)));
      }
    }
    sort_unique(next);
    rows = std::move(next);
  }
  if (!rows.empty()) return std::nullopt;  // only all-zero rows can survive

  QVec y(d, Rational(0));
  for (std::size_t v = 0; v < d; ++v) {
    std::optional<Rational> lo, hi;
    for (const QVec& p : stages[v].lows) {
      Rational acc(0);
      for (std::size_t j = 0; j < v; ++j) acc += p[j] * y[j];
      Rational bound = -acc / p[v];
      if (!lo || bound > *lo) lo = bound;
    }
    for (const QVec& n : stages[v].highs) {
      Rational acc(0);
      for (std::size_t j = 0; j < v; ++j) acc += n[j] * y[j];
      Rational bound = -acc / n[v];
      if (!hi || bound < *hi) hi = bound;
    }
    if (lo && hi)
      y[v] = (*lo + *hi) / 2;
    else if (lo)
      y[v] = *lo + 1;
    else if (hi)
      y[v] = *hi - 1;
  }
  return y;
}

std::vector<Chamber> chamber_enumeration(const std::vector<QVec>& dirs, std::size_t d,
                                         std::size_t cap) {
  std::vector<Chamber> cur{Chamber{{}, QVec(d, Rational(0))}};
  for (std::size_t i = 0; i < dirs.size(); ++i) {
    const QVec& c = dirs[i];
    if (d == 0 || is_zero_vec(c)) {
      for (Chamber& ch : cur) ch.signs.push_back(0);
      continue;
    }
    std::vector<Chamber> next;
    for (const Chamber& ch : cur) {
      int have = sign_of(dot(ch.witness, c));
      for (int s : {1, -1}) {
        if (s == have) {
          Chamber ext = ch;
          ext.signs.push_back(s);
          next.push_back(std::move(ext));
          continue;
        }
        std::vector<QVec> rows;
        for (std::size_t j = 0; j < i; ++j)
          if (ch.signs[j] != 0) rows.push_back(scaled(dirs[j], Rational(ch.signs[j])));
        rows.push_back(scaled(c, Rational(s)));
        if (auto w = strict_feasible(rows, d)) {
          Chamber ext;
          ext.signs = ch.signs;
          ext.signs.push_back(s);
          ext.witness = std::move(*w);
          next.push_back(std::move(ext));
        }
      }
    }
    cur = std::move(next);
    if (cur.size() > cap)
      throw std::runtime_error("chamber_enumeration: over " + std::to_string(cap) +
                               " chambers after " + std::to_string(i + 1) + " directions");
  }
  std::sort(cur.begin(), cur.end(),
            [](const Chamber& a, const Chamber& b) { return a.signs < b.signs; });
  return cur;
}

std::vector<std::size_t> FaceLattice::counts() const {
  std::vector<std::size_t> c;
  for (std::size_t j = 1; j < by_dim.size(); ++j) c.push_back(by_dim[j].size());
  return c;
}

FaceLattice enumerate_faces(const Arrangement& a, const ArrLattice& L, std::size_t cap) {
  if (L.lat.top_rank != static_cast<int>(a.dim))
    throw std::invalid_argument("enumerate_faces: arrangement must be essential");

  FaceLattice z;
  z.n_hyperplanes = a.size();
  z.top_dim = static_cast<int>(a.dim);

  CovectorFace empty;
  empty.barycenter = QVec(a.dim, Rational(0));
  z.faces.push_back(std::move(empty));

  for (FlatId x = 0; x < L.lat.size(); ++x) {
    QMatrix chart = L.span[x].perp().basis();
    std::vector<QVec> dirs;
    dirs.reserve(a.size());
    for (const QVec& u : a.normals) dirs.push_back(chart.apply(u));
    std::vector<Chamber> chams = chamber_enumeration(dirs, chart.rows(), cap);
    for (Chamber& ch : chams) {
      CovectorFace f;
      f.type_flat = x;
      f.dim = L.lat.rank[x];
      f.signs = std::move(ch.signs);
      f.witness = chart.transpose().apply(ch.witness);
      f.barycenter = QVec(a.dim, Rational(0));
      for (std::size_t h = 0; h < a.size(); ++h) {
        if (f.signs[h] == 0) {
          if (!L.lat.closed[x].test(h))
            throw std::logic_error("enumerate_faces: zero set is not the flat closure");
          continue;
        }
        f.barycenter = vec_add(f.barycenter, scaled(a.normals[h], Rational(f.signs[h])));
      }
      z.faces.push_back(std::move(f));
      if (z.faces.size() > cap)
        throw std::runtime_error("enumerate_faces: over " + std::to_string(cap) + " faces");
    }
  }

  std::sort(z.faces.begin() + 1, z.faces.end(), [](const CovectorFace& a, const CovectorFace& b) {
    return a.dim != b.dim ? a.dim < b.dim : a.signs < b.signs;
  });

  z.by_dim.assign(static_cast<std::size_t>(z.top_dim) + 2, {});
  z.by_dim[0].push_back(0);
  for (std::size_t id = 1; id < z.faces.size(); ++id)
    z.by_dim[static_cast<std::size_t>(z.faces[id].dim) + 1].push_back(id);

  const std::vector<std::size_t>& verts = z.by_dim[1];
  for (std::size_t id = 1; id < z.faces.size(); ++id) {
    CovectorFace& f = z.faces[id];
    for (std::size_t v : verts) {
      const std::vector<int>& vs = z.faces[v].signs;
      bool under = true;
      for (std::size_t h = 0; h < f.signs.size() && under; ++h)
        if (f.signs[h] != 0 && vs[h] != f.signs[h]) under = false;
      if (under) f.vertices_below.push_back(v);
    }
  }

  // Facet pairs walk lower covers of the type; the orientation sign is the
  // determinant of [w | basis of sub's span] written in super's span basis,
  // w the barycenter difference.
  std::vector<std::vector<std::size_t>> of_type(L.lat.size());
  for (std::size_t id = 1; id < z.faces.size(); ++id)
    of_type[z.faces[id].type_flat].push_back(id);

  for (std::size_t id = 1; id < z.faces.size(); ++id) {
    const CovectorFace& f = z.faces[id];
    if (f.dim == 0) {
      z.facet_pairs.push_back({0, id, 1});
      continue;
    }
    FlatId x = f.type_flat;
    const Subspace& big = L.span[x];
    std::size_t r = big.dim();
    for (FlatId xs : L.lat.lower_covers[x]) {
      for (std::size_t sid : of_type[xs]) {
        const CovectorFace& g = z.faces[sid];
        bool under = true;
        for (std::size_t h = 0; h < f.signs.size() && under; ++h)
          if (f.signs[h] != 0 && g.signs[h] != f.signs[h]) under = false;
        if (!under) continue;
        QMatrix m(r, r);
        auto put = [&](std::size_t col, const QVec& v) {
          auto co = big.coords_of(v);
          if (!co) throw std::logic_error("enumerate_faces: facet direction outside the span");
          m.set_col(col, *co);
        };
        put(0, vec_sub(f.barycenter, g.barycenter));
        const QMatrix& sb = L.span[xs].basis();
        for (std::size_t j = 0; j < sb.rows(); ++j) put(j + 1, sb.row(j));
        int s = sign_of(det(m));
        if (s == 0) throw std::logic_error("enumerate_faces: degenerate facet orientation");
        z.facet_pairs.push_back({sid, id, s});
      }
    }
  }
  std::sort(z.facet_pairs.begin(), z.facet_pairs.end(), [](const FacetPair& a, const FacetPair& b) {
    return std::pair(a.super, a.sub) < std::pair(b.super, b.sub);
  });
  return z;
}

std::vector<std::size_t> faces_of_type(const FaceLattice& z, FlatId x) {
  std::vector<std::size_t> out;
  for (std::size_t id = 1; id < z.faces.size(); ++id)
    if (z.faces[id].type_flat == x) out.push_back(id);
  return out;
}

CheckReport verify_face_lattice(const FaceLattice& z, const Arrangement& a,
                                const ArrLattice& L) {
  CheckReport rep;
  auto fail = [&](std::string what, std::vector<FlatId> flats = {}) {
    rep.ok = false;
    rep.failures.push_back({std::move(what), std::move(flats)});
  };

  if (z.faces.empty() || z.faces[0].dim != -1 || !z.faces[0].signs.empty())
    fail("face id 0 is not the empty face");

  std::set<std::vector<int>> seen_vertices;
  std::set<std::pair<int, std::vector<int>>> all_signs;
  for (std::size_t id = 1; id < z.faces.size(); ++id) {
    const CovectorFace& f = z.faces[id];
    if (f.signs.size() != a.size() || f.dim != L.lat.rank[f.type_flat]) {
      fail("face " + std::to_string(id) + " has inconsistent shape", {f.type_flat});
      continue;
    }
    all_signs.insert({f.dim, f.signs});
    for (std::size_t h = 0; h < a.size(); ++h) {
      if (sign_of(dot(f.witness, a.normals[h])) != f.signs[h])
        fail("face " + std::to_string(id) + " witness does not realize its signs",
             {f.type_flat});
      if ((f.signs[h] == 0) != L.lat.closed[f.type_flat].test(h))
        fail("face " + std::to_string(id) + " zero set differs from its type closure",
             {f.type_flat});
    }
    if (f.dim == 0) {
      if (!seen_vertices.insert(f.signs).second) fail("duplicate vertex sign vector");
      for (int s : f.signs)
        if (s == 0) fail("vertex with a zero sign");
    }
    if (f.dim >= 0 && f.vertices_below.empty()) fail("face without vertices below");
    if (f.dim == 0 &&
        f.vertices_below != std::vector<std::size_t>{id})
      fail("vertex not its own unique vertex below");
  }

  for (const auto& [dim, signs] : all_signs) {
    std::vector<int> neg(signs.size());
    for (std::size_t h = 0; h < signs.size(); ++h) neg[h] = -signs[h];
    if (!all_signs.count({dim, neg})) fail("sign negation is not a face automorphism");
  }

  for (const FacetPair& p : z.facet_pairs) {
    const CovectorFace& sup = z.faces[p.super];
    if (sup.dim == 0) {
      if (p.sub != 0 || p.sign != 1) fail("vertex facet pair is not the empty face with +1");
      continue;
    }
    const CovectorFace& sub = z.faces[p.sub];
    if (sub.dim + 1 != sup.dim || !L.lat.leq(sub.type_flat, sup.type_flat))
      fail("facet pair types are not a cover", {sub.type_flat, sup.type_flat});
    for (std::size_t h = 0; h < sup.signs.size(); ++h) {
      bool flips = sup.signs[h] == 0 && sub.signs[h] != 0;
      bool between = L.lat.closed[sup.type_flat].test(h) &&
                     !L.lat.closed[sub.type_flat].test(h);
      if (flips != between)
        fail("facet pair flips the wrong hyperplanes", {sub.type_flat, sup.type_flat});
      if (sup.signs[h] != 0 && sub.signs[h] != sup.signs[h])
        fail("facet pair signs disagree off the zero set", {sub.type_flat, sup.type_flat});
    }
  }
  return rep;
}

EpComplex ep_complex(const FaceLattice& z, std::size_t coeff_dim) {
  EpComplex ep;
  ep.coeff_dim = coeff_dim;
  std::size_t levels = z.by_dim.size();
  ep.dims.resize(levels);
  std::vector<std::size_t> pos(z.faces.size(), 0);
  for (std::size_t i = 0; i < levels; ++i) {
    ep.dims[i] = coeff_dim * z.by_dim[i].size();
    for (std::size_t k = 0; k < z.by_dim[i].size(); ++k) pos[z.by_dim[i][k]] = k;
  }
  ep.delta.reserve(levels - 1);
  for (std::size_t i = 0; i + 1 < levels; ++i)
    ep.delta.push_back(QMatrix::zero(ep.dims[i], ep.dims[i + 1]));
  for (const FacetPair& p : z.facet_pairs) {
    std::size_t i = static_cast<std::size_t>(z.faces[p.super].dim);  // maps level i+1 -> i
    QMatrix& m = ep.delta[i];
    std::size_t r0 = pos[p.sub] * coeff_dim, c0 = pos[p.super] * coeff_dim;
    for (std::size_t t = 0; t < coeff_dim; ++t) m.at(r0 + t, c0 + t) = Rational(p.sign);
  }
  return ep;
}

CheckReport verify_ep(const EpComplex& ep) {
  CheckReport rep;
  auto fail = [&](std::string what) {
    rep.ok = false;
    rep.failures.push_back({std::move(what), {}});
  };
  std::size_t levels = ep.dims.size();
  std::vector<std::size_t> rk(ep.delta.size());
  for (std::size_t i = 0; i < ep.delta.size(); ++i) rk[i] = rank_of(ep.delta[i]);
  for (std::size_t i = 0; i + 1 < ep.delta.size(); ++i)
    if (!ep.delta[i].mul(ep.delta[i + 1]).is_zero())
      fail("boundary composite nonzero at level " + std::to_string(i));
  for (std::size_t i = 0; i < levels; ++i) {
    std::size_t ker = i == 0 ? ep.dims[0] : ep.dims[i] - rk[i - 1];
    std::size_t img = i < ep.delta.size() ? rk[i] : 0;
    if (ker != img) fail("not exact at level " + std::to_string(i));
  }
  return rep;
}

ProjectedFaces projected_zonotope_faces(const Arrangement& a, const ArrLattice& L, FlatId x,
                                        const FaceLattice& full, std::size_t cap) {
  if (x == L.lat.top) {
    // The restriction lives in dimension zero: a single point.
    ProjectedFaces out;
    out.faces.n_hyperplanes = 0;
    out.faces.top_dim = 0;
    out.faces.faces.resize(2);
    out.faces.faces[1].type_flat = 0;
    out.faces.faces[1].dim = 0;
    out.faces.faces[1].vertices_below = {1};
    out.faces.by_dim = {{0}, {1}};
    out.faces.facet_pairs = {{0, 1, 1}};
    std::size_t over = 0;
    for (std::size_t id = 1; id < full.faces.size(); ++id)
      if (full.faces[id].type_flat == x) ++over;
    if (over != 1) {
      out.check.ok = false;
      out.check.failures.push_back({"projected faces differ from the restriction at dimension 0", {x}});
    }
    return out;
  }
  Restriction r = restrict_to(a, L, x);
  ArrLattice Lr = build_lattice(r.arr);
  ProjectedFaces out{enumerate_faces(r.arr, Lr, cap), {}};
  auto fail = [&](std::string what) {
    out.check.ok = false;
    out.check.failures.push_back({std::move(what), {x}});
  };

  int r0 = L.lat.rank[x];
  std::map<int, std::set<std::vector<int>>> transported;
  for (std::size_t id = 1; id < full.faces.size(); ++id) {
    const CovectorFace& f = full.faces[id];
    if (!L.lat.leq(x, f.type_flat)) continue;
    std::vector<int> img(r.arr.size(), 2);  // 2 marks unset
    bool good = true;
    for (std::size_t h = 0; h < a.size(); ++h) {
      std::size_t j = r.hyper_to_atom[h];
      if (j == Restriction::npos) {
        if (f.signs[h] != 0) fail("face of type over the flat is nonzero below it");
        continue;
      }
      int s = f.signs[h] * sign_of(r.hyper_scale[h]);
      if (img[j] == 2)
        img[j] = s;
      else if (img[j] != s)
        good = false;
    }
    if (!good) {
      fail("transported signs disagree within a restriction hyperplane");
      continue;
    }
    if (!transported[f.dim - r0].insert(std::move(img)).second)
      fail("two faces over the flat transport to the same sign vector");
  }

  for (int j = 0; j <= out.faces.top_dim; ++j) {
    std::set<std::vector<int>> own;
    for (std::size_t id : out.faces.by_dim[static_cast<std::size_t>(j) + 1])
      own.insert(out.faces.faces[id].signs);
    if (own != transported[j])
      fail("projected faces differ from the restriction at dimension " + std::to_string(j));
  }
  return out;
}

nlohmann::ordered_json face_lattice_to_json(const FaceLattice& z) {
  nlohmann::ordered_json j;
  j["n_hyperplanes"] = z.n_hyperplanes;
  j["top_dim"] = z.top_dim;
  j["counts"] = z.counts();
  auto faces = nlohmann::ordered_json::array();
  for (std::size_t id = 0; id < z.faces.size(); ++id) {
    const CovectorFace& f = z.faces[id];
    nlohmann::ordered_json fj;
    fj["id"] = id;
    fj["dim"] = f.dim;
    if (f.dim >= 0) fj["type_flat"] = f.type_flat;
    std::string s;
    for (int v : f.signs) s += v > 0 ? '+' : (v < 0 ? '-' : '0');
    fj["signs"] = s;
    auto bc = nlohmann::ordered_json::array();
    for (const Rational& c : f.barycenter) bc.push_back(rational_str(c));
    fj["barycenter"] = bc;
    fj["vertices_below"] = f.vertices_below;
    faces.push_back(std::move(fj));
  }
  j["faces"] = std::move(faces);
  auto pairs = nlohmann::ordered_json::array();
  for (const FacetPair& p : z.facet_pairs)
    pairs.push_back({{"sub", p.sub}, {"super", p.super}, {"sign", p.sign}});
  j["facet_pairs"] = std::move(pairs);
  return j;
}

}  // namespace relspace
