#include <algorithm>
#include <set>

#include "doctest.h"
#include "relspace/arrangement.hpp"
#include "relspace/zonotope.hpp"

using namespace relspace;

namespace {

QVec qv(std::initializer_list<long> xs) {
  QVec v;
  for (long x : xs) v.emplace_back(x);
  return v;
}

// Independent brute-force oracle: a sign vector sigma is a face covector
// exactly when some functional lambda satisfies dot(u_H, lambda) = 0 on the
// zeros of sigma and has the strict sign of sigma everywhere else. The
// equalities are eliminated by passing to the common kernel, the strict part
// goes to the feasibility solver.
std::set<std::vector<int>> brute_force_covectors(const Arrangement& a) {
  std::set<std::vector<int>> out;
  const std::size_t m = a.size();
  std::vector<int> sigma(m, -1);
  while (true) {
    std::vector<QVec> zero_rows;
    for (std::size_t h = 0; h < m; ++h)
      if (sigma[h] == 0) zero_rows.push_back(a.normals[h]);
    Subspace k = zero_rows.empty()
                     ? Subspace::full(a.dim)
                     : Subspace::span_of(QMatrix::from_rows(zero_rows, a.dim)).perp();
    bool feasible = k.dim() > 0 || std::all_of(sigma.begin(), sigma.end(),
                                               [](int s) { return s == 0; });
    if (feasible) {
      std::vector<QVec> strict;
      for (std::size_t h = 0; h < m; ++h) {
        if (sigma[h] == 0) continue;
        QVec row(k.dim(), Rational(0));
        for (std::size_t j = 0; j < k.dim(); ++j)
          row[j] = dot(a.normals[h], k.basis().row(j)) * sigma[h];
        strict.push_back(std::move(row));
      }
      feasible = strict_feasible(strict, k.dim()).has_value();
    }
    if (feasible) out.insert(sigma);
    // Advance to the next sign vector in {-1,0,1}^m.
    std::size_t i = 0;
    while (i < m && sigma[i] == 1) sigma[i++] = -1;
    if (i == m) break;
    ++sigma[i];
  }
  return out;
}

std::set<std::vector<int>> enumerated_covectors(const FaceLattice& z) {
  std::set<std::vector<int>> out;
  for (std::size_t i = 1; i < z.faces.size(); ++i) out.insert(z.faces[i].signs);
  return out;
}

}  // namespace

TEST_CASE("strict feasibility solver") {
  auto p = strict_feasible({qv({1, 0}), qv({0, 1})}, 2);
  REQUIRE(p.has_value());
  CHECK((*p)[0] > 0);
  CHECK((*p)[1] > 0);
  CHECK(!strict_feasible({qv({1, 0}), qv({-1, 0})}, 2).has_value());
  CHECK(strict_feasible({}, 2).has_value());
  CHECK(!strict_feasible({qv({0, 0})}, 2).has_value());
  auto q = strict_feasible({qv({1, -1}), qv({0, 1})}, 2);
  REQUIRE(q.has_value());
  CHECK((*q)[0] > (*q)[1]);
}

TEST_CASE("face enumeration matches the brute-force oracle") {
  for (const char* fam : {"A", "B"}) {
    for (int n : {2, 3}) {
      if (fam[0] == 'B' && n == 3) continue;  // 3^9 is past the point of diminishing returns
      Arrangement a = essentialize(coxeter_family(fam, n));
      ArrLattice L = build_lattice(a);
      FaceLattice z = enumerate_faces(a, L);
      INFO(fam << n);
      CHECK(enumerated_covectors(z) == brute_force_covectors(a));
    }
  }
}

TEST_CASE("face counts of small zonotopes") {
  Arrangement seg{1, {qv({1})}, "segment"};
  FaceLattice zs = enumerate_faces(seg, build_lattice(seg));
  CHECK(zs.counts() == std::vector<std::size_t>{2, 1});

  Arrangement hex = essentialize(coxeter_family("A", 2));
  ArrLattice Lh = build_lattice(hex);
  FaceLattice zh = enumerate_faces(hex, Lh);
  CHECK(zh.counts() == std::vector<std::size_t>{6, 6, 1});
  CHECK(zh.top_dim == 2);
  CHECK(verify_face_lattice(zh, hex, Lh).ok);

  Arrangement b2 = coxeter_family("B", 2);
  ArrLattice Lb = build_lattice(b2);
  FaceLattice zb = enumerate_faces(b2, Lb);
  CHECK(zb.counts() == std::vector<std::size_t>{8, 8, 1});
  CHECK(verify_face_lattice(zb, b2, Lb).ok);

  Arrangement a3 = essentialize(coxeter_family("A", 3));
  ArrLattice L3 = build_lattice(a3);
  FaceLattice z3 = enumerate_faces(a3, L3);
  CHECK(z3.counts() == std::vector<std::size_t>{24, 36, 14, 1});
  CHECK(verify_face_lattice(z3, a3, L3).ok);
}

TEST_CASE("face lattice structure of the hexagon") {
  Arrangement a = essentialize(coxeter_family("A", 2));
  ArrLattice L = build_lattice(a);
  FaceLattice z = enumerate_faces(a, L);
  CHECK(z.n_hyperplanes == 3);
  // id 0 is the empty face.
  CHECK(z.faces[0].dim == -1);
  CHECK(z.by_dim[0] == std::vector<std::size_t>{0});
  CHECK(z.by_dim[1].size() == 6);
  CHECK(z.by_dim[2].size() == 6);
  CHECK(z.by_dim[3].size() == 1);
  // Types: vertices sit over the bottom flat, edges over atoms, the whole
  // zonotope over the top.
  CHECK(faces_of_type(z, L.lat.bottom).size() == 6);
  for (std::size_t h = 0; h < a.size(); ++h)
    CHECK(faces_of_type(z, L.lat.atoms[h]).size() == 2);
  CHECK(faces_of_type(z, L.lat.top).size() == 1);
  // Covering pairs climb one dimension at a time.
  for (const FacetPair& p : z.facet_pairs)
    CHECK(z.faces[p.super].dim == z.faces[p.sub].dim + 1);
  // Edges know their two endpoints; the top face sees every vertex.
  for (std::size_t e : z.by_dim[2]) CHECK(z.faces[e].vertices_below.size() == 2);
  CHECK(z.faces[z.by_dim[3][0]].vertices_below.size() == 6);
  // Negation acts freely on nonempty faces.
  auto cov = enumerated_covectors(z);
  for (const auto& s : cov) {
    std::vector<int> neg(s.size());
    for (std::size_t i = 0; i < s.size(); ++i) neg[i] = -s[i];
    CHECK(cov.count(neg) == 1);
  }
}

TEST_CASE("face lattice verification catches corruption") {
  Arrangement a = essentialize(coxeter_family("A", 2));
  ArrLattice L = build_lattice(a);
  FaceLattice z = enumerate_faces(a, L);
  FaceLattice bad = z;
  // Flip one vertex sign: the witness no longer realizes the sign vector.
  bad.faces[bad.by_dim[1][0]].signs[0] *= -1;
  CHECK(!verify_face_lattice(bad, a, L).ok);
}

TEST_CASE("enumeration guards") {
  Arrangement a3 = coxeter_family("A", 3);
  ArrLattice L3 = build_lattice(a3);
  CHECK_THROWS_AS(enumerate_faces(a3, L3), std::invalid_argument);  // not essential
  Arrangement e = essentialize(a3);
  ArrLattice Le = build_lattice(e);
  CHECK_THROWS_AS(enumerate_faces(e, Le, 5), std::runtime_error);  // cap
}

TEST_CASE("boundary complex of the face lattice") {
  Arrangement a = essentialize(coxeter_family("A", 3));
  ArrLattice L = build_lattice(a);
  FaceLattice z = enumerate_faces(a, L);
  EpComplex ep = ep_complex(z);
  REQUIRE(ep.dims.size() == 5);
  CHECK(ep.dims == std::vector<std::size_t>{1, 24, 36, 14, 1});
  for (std::size_t i = 0; i + 1 < ep.delta.size(); ++i)
    CHECK(ep.delta[i].mul(ep.delta[i + 1]).is_zero());
  CHECK(verify_ep(ep).ok);
  // Coefficient blocks scale every dimension.
  EpComplex ep2 = ep_complex(z, 2);
  CHECK(ep2.dims == std::vector<std::size_t>{2, 48, 72, 28, 2});
  CHECK(verify_ep(ep2).ok);
}

TEST_CASE("chamber enumeration") {
  Arrangement a = essentialize(coxeter_family("A", 3));
  auto chambers = chamber_enumeration(a.normals, a.dim, default_face_cap);
  CHECK(chambers.size() == 24);  // the chambers of the braid arrangement
  for (const Chamber& c : chambers)
    for (std::size_t h = 0; h < a.size(); ++h) {
      Rational d = dot(a.normals[h], c.witness);
      CHECK((d > 0 ? 1 : d < 0 ? -1 : 0) == c.signs[h]);
    }
  CHECK(std::is_sorted(chambers.begin(), chambers.end(),
                       [](const Chamber& x, const Chamber& y) { return x.signs < y.signs; }));
  CHECK_THROWS_AS(chamber_enumeration(a.normals, a.dim, 5), std::runtime_error);
  // A zero direction gets sign zero everywhere.
  auto with_zero = chamber_enumeration({qv({1, 0}), qv({0, 0})}, 2, 100);
  for (const Chamber& c : with_zero) CHECK(c.signs[1] == 0);
}

TEST_CASE("restriction faces agree with the upper faces") {
  Arrangement a = essentialize(coxeter_family("A", 3));
  ArrLattice L = build_lattice(a);
  FaceLattice z = enumerate_faces(a, L);
  ProjectedFaces pf = projected_zonotope_faces(a, L, L.lat.atoms[0], z);
  CHECK(pf.check.ok);
  CHECK(pf.faces.top_dim == 2);
}

TEST_CASE("face lattice json") {
  Arrangement a = essentialize(coxeter_family("A", 2));
  ArrLattice L = build_lattice(a);
  FaceLattice z = enumerate_faces(a, L);
  auto j = face_lattice_to_json(z);
  CHECK(j["counts"].size() == 3);
  CHECK(j["faces"].size() == z.faces.size());
}
