#include "relspace/relalg.hpp"

#include <algorithm>
#include <map>
#include <set>
#include <stdexcept>
#include <string>
#include <tuple>

#include "relspace/osalg.hpp"

namespace relspace {

namespace {

struct UnionFind {
  std::vector<std::size_t> parent;
  explicit UnionFind(std::size_t n) : parent(n) {
    for (std::size_t i = 0; i < n; ++i) parent[i] = i;
  }
  std::size_t find(std::size_t x) {
    while (parent[x] != x) x = parent[x] = parent[parent[x]];
    return x;
  }
  void unite(std::size_t a, std::size_t b) { parent[find(a)] = find(b); }
};

std::vector<std::vector<int>> combinations(int n, int r) {
  std::vector<std::vector<int>> out;
  std::vector<int> cur;
  auto rec = [&](auto&& self, int from) -> void {
    if (static_cast<int>(cur.size()) == r) {
      out.push_back(cur);
      return;
    }
    for (int i = from; i <= n - (r - static_cast<int>(cur.size())); ++i) {
      cur.push_back(i);
      self(self, i + 1);
      cur.pop_back();
    }
  };
  rec(rec, 0);
  return out;
}

Rational rational_pow(const Rational& x, int e) {
  Rational r(1);
  for (int i = 0; i < e; ++i) r *= x;
  return r;
}

// Coordinates in a reduced echelon basis: read the pivot entries, then
// confirm the residual vanishes. Equivalent to coords_of but linear in the
// basis size, which the degree sweeps need.
std::optional<QVec> pivot_coords(const Subspace& s, const QVec& v) {
  const QMatrix& b = s.basis();
  QVec co(b.rows(), Rational(0));
  QVec residual = v;
  for (std::size_t r = 0; r < b.rows(); ++r) {
    std::size_t p = 0;
    while (p < b.cols() && b.at(r, p) == 0) ++p;
    if (p == b.cols()) continue;
    co[r] = residual[p] / b.at(r, p);
    if (co[r] == 0) continue;
    for (std::size_t j = p; j < b.cols(); ++j) residual[j] -= co[r] * b.at(r, j);
  }
  if (!is_zero_vec(residual)) return std::nullopt;
  return co;
}

}  // namespace

std::vector<std::size_t> vertex_classes(std::size_t n_vertices,
                                        const std::vector<GraphEdge>& edges,
                                        const std::vector<Subspace>& edge_gens) {
  UnionFind uf(n_vertices);
  for (const GraphEdge& e : edges)
    if (edge_gens[e.label].dim() == 0) uf.unite(e.v1, e.v2);
  std::vector<std::size_t> cls(n_vertices);
  std::map<std::size_t, std::size_t> dense;
  for (std::size_t v = 0; v < n_vertices; ++v) {
    std::size_t r = uf.find(v);
    auto [it, fresh] = dense.try_emplace(r, dense.size());
    (void)fresh;
    cls[v] = it->second;
  }
  return cls;
}

std::vector<GraphEdge> edges_from_faces(const FaceLattice& z) {
  std::map<std::size_t, std::size_t> vertex_index;
  for (std::size_t i = 0; i < z.by_dim[1].size(); ++i) vertex_index[z.by_dim[1][i]] = i;
  std::vector<GraphEdge> edges;
  for (std::size_t id : z.by_dim[2]) {
    const CovectorFace& f = z.faces[id];
    std::size_t label = f.signs.size();
    for (std::size_t h = 0; h < f.signs.size(); ++h)
      if (f.signs[h] == 0) {
        if (label != f.signs.size())
          throw std::logic_error("edges_from_faces: edge with two zero signs");
        label = h;
      }
    if (label == f.signs.size() || f.vertices_below.size() != 2)
      throw std::logic_error("edges_from_faces: malformed edge face");
    std::size_t a = vertex_index.at(f.vertices_below[0]);
    std::size_t b = vertex_index.at(f.vertices_below[1]);
    edges.push_back({std::min(a, b), std::max(a, b), label});
  }
  return edges;
}

DegreewiseModule graphical_module(std::size_t n_vertices, const std::vector<GraphEdge>& edges,
                                  const std::vector<Subspace>& edge_gens,
                                  const PolyDegreewise& ring, std::size_t cap) {
  for (const GraphEdge& e : edges)
    if (e.v1 >= n_vertices || e.v2 >= n_vertices || e.label >= edge_gens.size())
      throw std::invalid_argument("graphical_module: edge out of range");

  std::vector<std::size_t> cls = vertex_classes(n_vertices, edges, edge_gens);
  std::size_t n_cls = cls.empty() ? 0 : *std::max_element(cls.begin(), cls.end()) + 1;

  // Distinct congruences between classes; loops are vacuous.
  std::set<std::tuple<std::size_t, std::size_t, std::size_t>> quot;
  for (const GraphEdge& e : edges) {
    if (edge_gens[e.label].dim() == 0) continue;
    std::size_t a = cls[e.v1], b = cls[e.v2];
    if (a != b) quot.insert({std::min(a, b), std::max(a, b), e.label});
  }

  // Spanning forest; remaining congruences become constraints.
  std::vector<std::vector<std::pair<std::size_t, std::size_t>>> adj(n_cls);  // (other, label)
  std::vector<std::tuple<std::size_t, std::size_t, std::size_t>> rest;
  {
    UnionFind uf(n_cls);
    for (const auto& [a, b, label] : quot) {
      if (uf.find(a) != uf.find(b)) {
        uf.unite(a, b);
        adj[a].push_back({b, label});
        adj[b].push_back({a, label});
      } else {
        rest.push_back({a, b, label});
      }
    }
  }
  std::vector<std::size_t> parent(n_cls, static_cast<std::size_t>(-1));
  std::vector<std::size_t> parent_label(n_cls, 0);
  std::vector<std::size_t> order;  // BFS order, roots marked by parent npos
  {
    std::vector<char> seen(n_cls, 0);
    for (std::size_t r = 0; r < n_cls; ++r) {
      if (seen[r]) continue;
      seen[r] = 1;
      std::size_t head = order.size();
      order.push_back(r);
      while (head < order.size()) {
        std::size_t c = order[head++];
        for (auto [o, label] : adj[c])
          if (!seen[o]) {
            seen[o] = 1;
            parent[o] = c;
            parent_label[o] = label;
            order.push_back(o);
          }
      }
    }
  }

  DegreewiseModule mod;
  int max_deg = ring.max_deg();
  mod.slices.reserve(max_deg + 1);
  for (int d = 0; d <= max_deg; ++d) {
    std::size_t S = ring.slice_dim(d);
    if (n_vertices * S > cap)
      throw std::runtime_error("graphical_module: degree " + std::to_string(d) + " slice has " +
                               std::to_string(n_vertices * S) + " coordinates, over the cap " +
                               std::to_string(cap));

    std::map<std::size_t, Subspace> ideal_slice;  // label -> degree-d slice
    std::map<std::size_t, QMatrix> ideal_perp;    // label -> rows with kernel = slice
    auto slice_of = [&](std::size_t label) -> const Subspace& {
      auto it = ideal_slice.find(label);
      if (it == ideal_slice.end()) {
        LinearIdeal ideal{&ring, edge_gens[label]};
        it = ideal_slice.emplace(label, ideal.slice(d)).first;
        ideal_perp.emplace(label, it->second.perp().basis());
      }
      return it->second;
    };

    // Parameters: one R_d block per forest root, one ideal-slice block per
    // tree edge (the difference child - parent).
    std::vector<std::size_t> off(n_cls, 0);
    std::size_t n_par = 0;
    for (std::size_t c : order) {
      off[c] = n_par;
      n_par += parent[c] == static_cast<std::size_t>(-1) ? S : slice_of(parent_label[c]).dim();
    }
    QMatrix P(n_cls * S, n_par);
    for (std::size_t c : order) {
      if (parent[c] == static_cast<std::size_t>(-1)) {
        for (std::size_t i = 0; i < S; ++i) P.at(c * S + i, off[c] + i) = 1;
        continue;
      }
      // value at c = value at parent + ideal element of the tree edge
      std::size_t p = parent[c];
      for (std::size_t j = 0; j < n_par; ++j)
        for (std::size_t i = 0; i < S; ++i) P.at(c * S + i, j) = P.at(p * S + i, j);
      const QMatrix& B = slice_of(parent_label[c]).basis();
      for (std::size_t j = 0; j < B.rows(); ++j)
        for (std::size_t i = 0; i < S; ++i) P.at(c * S + i, off[c] + j) += B.at(j, i);
    }

    std::vector<QVec> crows;
    for (const auto& [a, b, label] : rest) {
      slice_of(label);
      const QMatrix& K = ideal_perp.at(label);
      for (std::size_t r = 0; r < K.rows(); ++r) {
        QVec row(n_par, Rational(0));
        for (std::size_t i = 0; i < S; ++i) {
          const Rational& k = K.at(r, i);
          if (k == 0) continue;
          for (std::size_t j = 0; j < n_par; ++j)
            row[j] += k * (P.at(a * S + i, j) - P.at(b * S + i, j));
        }
        crows.push_back(std::move(row));
      }
    }
    QMatrix ker = crows.empty() ? QMatrix::identity(n_par)
                                : kernel(QMatrix::from_rows(crows, n_par));

    std::vector<QVec> basis;
    basis.reserve(ker.rows());
    for (std::size_t r = 0; r < ker.rows(); ++r) {
      QVec par = ker.row(r);
      QVec cvals = P.apply(par);
      QVec full(n_vertices * S);
      for (std::size_t v = 0; v < n_vertices; ++v)
        for (std::size_t i = 0; i < S; ++i) full[v * S + i] = cvals[cls[v] * S + i];
      basis.push_back(std::move(full));
    }
    mod.slices.push_back(Subspace::span_of(basis, n_vertices * S));
    mod.hilbert.push_back(mod.slices.back().dim());
  }

  mod.generation.resize(max_deg + 1, 0);
  if (max_deg >= 0) mod.generation[0] = mod.hilbert[0];
  for (int d = 1; d <= max_deg; ++d) {
    std::size_t S0 = ring.slice_dim(d - 1), S1 = ring.slice_dim(d);
    const QMatrix& B = mod.slices[d - 1].basis();
    std::vector<QVec> lifted;
    lifted.reserve(B.rows() * ring.generators_dim());
    for (std::size_t r = 0; r < B.rows(); ++r) {
      for (std::size_t g = 0; g < ring.generators_dim(); ++g) {
        QVec full(n_vertices * S1, Rational(0));
        for (std::size_t v = 0; v < n_vertices; ++v)
          for (std::size_t i = 0; i < S0; ++i) {
            const Rational& c = B.at(r, v * S0 + i);
            if (c != 0) full[v * S1 + ring.raise(d - 1, i, g)] += c;
          }
        auto co = pivot_coords(mod.slices[d], full);
        if (!co)
          throw std::logic_error("graphical_module: module is not closed under the ring action");
        lifted.push_back(std::move(*co));
      }
    }
    std::size_t span = lifted.empty() ? 0 : rank_of(QMatrix::from_rows(lifted, mod.hilbert[d]));
    mod.generation[d] = mod.hilbert[d] - span;
  }
  return mod;
}

RelationAlgebra build_relation_algebra(const Arrangement& a, const ArrLattice& L,
                                       const GradedComplex& V, const Projection& pr,
                                       int max_deg, std::size_t slice_cap,
                                       std::size_t face_cap) {
  if (V.lat.size() != L.lat.size())
    throw std::invalid_argument("build_relation_algebra: complex and lattice disagree");
  if (pr.chart.cols() != a.dim)
    throw std::invalid_argument("build_relation_algebra: projection chart has the wrong ambient");
  RelationAlgebra ra;
  ra.faces = enumerate_faces(pr.arr, pr.lat, face_cap);
  ra.atom_gens = projected_ideal_generators(V, pr);
  ra.ring = PolyDegreewise(layer_dim(V, pr.k), max_deg);
  ra.edges = edges_from_faces(ra.faces);
  ra.mod = graphical_module(ra.faces.by_dim[1].size(), ra.edges, ra.atom_gens, ra.ring,
                            slice_cap);
  return ra;
}

bool ModifiedEpReport::ok() const {
  for (const ModifiedEpDegree& d : degrees)
    if (!d.exactness.ok || !d.euler_ok || !d.anchor_ok) return false;
  return true;
}

ModifiedEpReport modified_ep(const RelationAlgebra& ra, const ArrLattice& proj_lat) {
  ModifiedEpReport rep;
  const FaceLattice& z = ra.faces;
  const GeomLattice& T = proj_lat.lat;
  int n = z.top_dim;
  std::size_t n_verts = z.by_dim[1].size();
  std::map<std::size_t, std::size_t> vertex_index;
  for (std::size_t i = 0; i < n_verts; ++i) vertex_index[z.by_dim[1][i]] = i;
  std::vector<std::size_t> pos(z.faces.size(), 0);
  for (std::size_t lvl = 0; lvl < z.by_dim.size(); ++lvl)
    for (std::size_t i = 0; i < z.by_dim[lvl].size(); ++i) pos[z.by_dim[lvl][i]] = i;

  // Sum of the atom ideals below each type flat, shared across faces.
  std::size_t nvars = ra.ring.generators_dim();
  std::vector<Subspace> type_gens(T.size(), Subspace(nvars));
  for (FlatId x = 0; x < T.size(); ++x) {
    Subspace s(nvars);
    for (std::size_t g : T.atoms_below(x)) s = s.sum(ra.atom_gens[g]);
    type_gens[x] = s;
  }

  for (int d = 0; d <= ra.mod.max_deg(); ++d) {
    ModifiedEpDegree deg;
    deg.degree = d;
    std::size_t S = ra.ring.slice_dim(d);

    std::vector<Subspace> type_slice(T.size(), Subspace(S));
    for (FlatId x = 0; x < T.size(); ++x) {
      LinearIdeal ideal{&ra.ring, type_gens[x]};
      type_slice[x] = ideal.slice(d);
    }

    // Space 0: R_d. Space 1: the module slice. Space j+1, j >= 1: ideal
    // slices over the dim-j faces in id order.
    std::vector<std::vector<std::size_t>> face_off(z.by_dim.size());
    deg.dims.assign(n + 2, 0);
    deg.dims[0] = S;
    deg.dims[1] = ra.mod.hilbert[d];
    for (int j = 1; j <= n; ++j) {
      std::size_t acc = 0;
      for (std::size_t id : z.by_dim[j + 1]) {
        face_off[j + 1].push_back(acc);
        acc += type_slice[z.faces[id].type_flat].dim();
      }
      deg.dims[j + 1] = acc;
    }

    std::vector<QMatrix> D;
    D.reserve(n + 1);
    // Constants into the module.
    {
      QMatrix m(deg.dims[1], S);
      for (std::size_t i = 0; i < S; ++i) {
        QVec c(n_verts * S, Rational(0));
        for (std::size_t v = 0; v < n_verts; ++v) c[v * S + i] = 1;
        auto co = pivot_coords(ra.mod.slices[d], c);
        if (!co) throw std::logic_error("modified_ep: constants outside the module");
        m.set_col(i, *co);
      }
      D.push_back(std::move(m));
    }
    if (n >= 1) {
      // Module into the edge ideals by signed endpoint sums. The sum over an
      // edge's two vertices lands in its ideal slice even though the
      // individual endpoint values do not.
      QMatrix m(deg.dims[2], deg.dims[1]);
      const QMatrix& B = ra.mod.slices[d].basis();
      for (std::size_t b = 0; b < B.rows(); ++b) {
        QVec col(deg.dims[2], Rational(0));
        for (std::size_t e = 0; e < z.by_dim[2].size(); ++e) {
          std::size_t id = z.by_dim[2][e];
          QVec w(S, Rational(0));
          for (const FacetPair& p : z.facet_pairs) {
            if (p.super != id) continue;
            std::size_t v = vertex_index.at(p.sub);
            for (std::size_t i = 0; i < S; ++i) w[i] += B.at(b, v * S + i) * p.sign;
          }
          auto co = pivot_coords(type_slice[z.faces[id].type_flat], w);
          if (!co)
            throw std::logic_error("modified_ep: edge difference outside the edge ideal");
          std::size_t base = face_off[2][e];
          for (std::size_t i = 0; i < co->size(); ++i) col[base + i] += (*co)[i];
        }
        m.set_col(b, col);
      }
      D.push_back(std::move(m));
    }
    for (int j = 2; j <= n; ++j) {
      QMatrix m(deg.dims[j + 1], deg.dims[j]);
      for (const FacetPair& p : z.facet_pairs) {
        const CovectorFace& sup = z.faces[p.super];
        if (sup.dim != j) continue;
        const CovectorFace& sub = z.faces[p.sub];
        const Subspace& from = type_slice[sub.type_flat];
        const Subspace& to = type_slice[sup.type_flat];
        std::size_t r0 = face_off[j + 1][pos[p.super]];
        std::size_t c0 = face_off[j][pos[p.sub]];
        for (std::size_t r = 0; r < from.dim(); ++r) {
          auto co = pivot_coords(to, from.basis().row(r));
          if (!co) throw std::logic_error("modified_ep: ideal slices not nested along a facet");
          for (std::size_t i = 0; i < co->size(); ++i)
            m.at(r0 + i, c0 + r) += Rational(p.sign) * (*co)[i];
        }
      }
      D.push_back(std::move(m));
    }

    auto fail = [&](std::string what) {
      deg.exactness.ok = false;
      deg.exactness.failures.push_back({std::move(what), {}});
    };
    for (std::size_t j = 0; j + 1 < D.size(); ++j)
      if (!D[j + 1].mul(D[j]).is_zero())
        fail("composite nonzero at position " + std::to_string(j) + ", degree " +
             std::to_string(d));
    std::vector<std::size_t> rk(D.size());
    for (std::size_t j = 0; j < D.size(); ++j) rk[j] = rank_of(D[j]);
    for (int s = 0; s <= n + 1; ++s) {
      std::size_t ker = s < static_cast<int>(D.size()) ? deg.dims[s] - rk[s] : deg.dims[s];
      std::size_t img = s > 0 ? rk[s - 1] : 0;
      deg.exact_at.push_back(ker == img ? 1 : 0);
      if (ker != img)
        fail("not exact at position " + std::to_string(s) + ", degree " + std::to_string(d));
    }

    long long euler = 0, sgn = 1;
    for (int s = 0; s <= n + 1; ++s, sgn = -sgn) euler += sgn * static_cast<long long>(deg.dims[s]);
    deg.euler_ok = euler == 0;
    if (n >= 1) {
      std::size_t ker2 = n >= 2 ? deg.dims[2] - rk[2] : deg.dims[2];
      deg.anchor_ok = deg.dims[1] == deg.dims[0] + ker2;
    }
    rep.degrees.push_back(std::move(deg));
  }
  return rep;
}

GenerationReport generation_check(const DegreewiseModule& mod, int bound) {
  GenerationReport rep;
  rep.bound = bound;
  rep.generation = mod.generation;
  for (int d = 0; d <= mod.max_deg(); ++d)
    if (d > bound && mod.generation[d] != 0) rep.ok = false;
  return rep;
}

NumeratorReport hilbert_numerator(const std::vector<std::size_t>& hilbert, int power) {
  if (power < 0) throw std::invalid_argument("hilbert_numerator: negative power");
  NumeratorReport rep;
  rep.power = power;
  for (std::size_t j = 0; j < hilbert.size(); ++j) {
    Integer c(0);
    for (std::size_t i = 0; i <= j; ++i) {
      Integer term = binomial(power, j - i) * Integer(hilbert[i]);
      if ((j - i) % 2)
        c -= term;
      else
        c += term;
    }
    if (c < 0) rep.has_negative = true;
    rep.coeffs.push_back(std::move(c));
  }
  return rep;
}

PiecewiseReport piecewise_linear_check(const Arrangement& a, const ArrLattice& L,
                                       const GradedComplex& V, const Projection& pr,
                                       std::size_t slice_cap, std::size_t face_cap) {
  if (pr.k != 1) throw std::invalid_argument("piecewise_linear_check: projection must have k = 1");
  PiecewiseReport rep;
  FaceLattice z = enumerate_faces(a, L, face_cap);
  std::vector<GraphEdge> edges = edges_from_faces(z);
  std::vector<Subspace> gens;
  gens.reserve(a.size());
  for (const QVec& u : a.normals) gens.push_back(Subspace::span_of({u}, a.dim));
  PolyDegreewise lin(a.dim, 1);
  DegreewiseModule lambda =
      graphical_module(z.by_dim[1].size(), edges, gens, lin, slice_cap);
  rep.dim_lambda = lambda.hilbert[1];
  rep.dim_u = a.dim;
  RelationAlgebra ra = build_relation_algebra(a, L, V, pr, 1, slice_cap, face_cap);
  rep.dim_m1 = ra.mod.hilbert[1];
  rep.ok = rep.dim_m1 + rep.dim_u == rep.dim_lambda;
  return rep;
}

BruhatData bruhat_data(int n, int k, const std::vector<Rational>& nodes, std::size_t cap) {
  if (n < 2 || static_cast<int>(nodes.size()) != n)
    throw std::invalid_argument("bruhat_data: need one node per point, n >= 2");
  if (k < 0 || k > n - 2) throw std::invalid_argument("bruhat_data: order k out of range");
  for (int i = 0; i + 1 < n; ++i)
    if (!(nodes[i] < nodes[i + 1]))
      throw std::invalid_argument("bruhat_data: nodes must be strictly increasing");

  BruhatData bd;
  bd.n = n;
  bd.k = k;
  QMatrix A(k + 1, n);
  for (int i = 0; i <= k; ++i)
    for (int j = 0; j < n; ++j) A.at(i, j) = rational_pow(nodes[j], i);

  auto minor_of = [&](const std::vector<int>& cols) {
    QMatrix m(k + 1, k + 1);
    for (int i = 0; i <= k; ++i)
      for (std::size_t j = 0; j < cols.size(); ++j) m.at(i, j) = A.at(i, cols[j]);
    return det(m);
  };

  bd.sets_k1 = combinations(n, k + 1);
  bd.sets_k2 = combinations(n, k + 2);
  std::map<std::vector<int>, std::size_t> k1_index;
  for (std::size_t i = 0; i < bd.sets_k1.size(); ++i) {
    bd.alpha.push_back(minor_of(bd.sets_k1[i]));
    if (!(bd.alpha.back() > 0))
      throw std::invalid_argument("bruhat_data: vanishing minor, nodes not in general position");
    k1_index[bd.sets_k1[i]] = i;
  }
  for (const std::vector<int>& J : bd.sets_k2) {
    QVec e(n, Rational(0));
    for (std::size_t v = 0; v < J.size(); ++v) {
      std::vector<int> sub = J;
      sub.erase(sub.begin() + v);
      Rational c = bd.alpha[k1_index.at(sub)];
      e[J[v]] = v % 2 ? -c : c;
    }
    if (!is_zero_vec(A.apply(e)))
      throw std::logic_error("bruhat_data: kernel vector fails the node matrix");
    bd.E.push_back(std::move(e));
  }

  Subspace ker = Subspace::span_of(kernel(A));
  std::vector<QVec> dirs;
  dirs.reserve(bd.E.size());
  for (const QVec& e : bd.E) {
    auto co = pivot_coords(ker, e);
    if (!co) throw std::logic_error("bruhat_data: kernel vector outside the kernel");
    dirs.push_back(std::move(*co));
  }
  for (const Chamber& ch : chamber_enumeration(dirs, ker.dim(), cap)) {
    std::vector<std::size_t> member;
    for (std::size_t i = 0; i < ch.signs.size(); ++i) {
      if (ch.signs[i] == 0) throw std::logic_error("bruhat_data: chamber on a wall");
      if (ch.signs[i] > 0) member.push_back(i);
    }
    bd.members.push_back(std::move(member));
    bd.witness.push_back(ch.witness);
  }
  for (std::size_t i = 0; i < bd.members.size(); ++i)
    for (std::size_t j = 0; j < bd.members.size(); ++j) {
      if (bd.members[i].size() + 1 != bd.members[j].size()) continue;
      std::vector<std::size_t> diff;
      std::set_difference(bd.members[j].begin(), bd.members[j].end(), bd.members[i].begin(),
                          bd.members[i].end(), std::back_inserter(diff));
      if (diff.size() == 1) bd.edges.push_back({i, j, diff[0]});
    }
  return bd;
}

DegreewiseModule bruhat_relation_algebra(const BruhatData& bd, int max_deg,
                                         std::size_t slice_cap) {
  std::size_t nvars = bd.sets_k1.size();
  std::map<std::vector<int>, std::size_t> k1_index;
  for (std::size_t i = 0; i < bd.sets_k1.size(); ++i) k1_index[bd.sets_k1[i]] = i;
  std::vector<Subspace> gens;
  gens.reserve(bd.sets_k2.size());
  for (const std::vector<int>& J : bd.sets_k2) {
    QVec form(nvars, Rational(0));
    for (std::size_t v = 0; v < J.size(); ++v) {
      std::vector<int> sub = J;
      sub.erase(sub.begin() + v);
      form[k1_index.at(sub)] = v % 2 ? -1 : 1;
    }
    gens.push_back(Subspace::span_of({form}, nvars));
  }
  PolyDegreewise ring(nvars, max_deg);
  return graphical_module(bd.members.size(), bd.edges, gens, ring, slice_cap);
}

BraidSetup braid_vandermonde(int n, int k, const std::vector<Rational>& nodes) {
  if (n < 2 || static_cast<int>(nodes.size()) != n)
    throw std::invalid_argument("braid_vandermonde: need one node per point, n >= 2");
  Arrangement raw = coxeter_family("A", n - 1);
  Subspace normal_span = Subspace::span_of(raw.normals, raw.dim);

  QMatrix A(k + 1, n);
  for (int i = 0; i <= k; ++i)
    for (int j = 0; j < n; ++j) A.at(i, j) = rational_pow(nodes[j], i);
  QMatrix ker = kernel(A);

  std::vector<QVec> transported;
  for (std::size_t r = 0; r < ker.rows(); ++r) {
    auto co = normal_span.coords_of(ker.row(r));
    if (!co)
      throw std::logic_error("braid_vandermonde: kernel vector outside the root span");
    transported.push_back(std::move(*co));
  }

  BraidSetup bs;
  bs.arr = essentialize(raw);
  bs.lat = build_lattice(bs.arr);
  bs.complex = relation_complex(bs.arr, bs.lat);
  Subspace screen = Subspace::span_of(transported, bs.arr.dim);
  ProjectResult res = project(bs.arr, bs.lat, k, screen);
  if (auto* failure = std::get_if<GeneralPositionFailure>(&res))
    throw std::runtime_error("braid_vandermonde: nodes not in general position: " +
                             failure->what);
  bs.proj = std::move(std::get<Projection>(res));
  return bs;
}

}  // namespace relspace
