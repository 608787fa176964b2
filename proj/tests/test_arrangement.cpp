#include <algorithm>
#include <set>
#include <variant>

#include "doctest.h"
#include "relspace/arrangement.hpp"

using namespace relspace;

namespace {

std::vector<std::size_t> strata(const GeomLattice& L) {
  std::vector<std::size_t> out(L.top_rank + 1, 0);
  for (FlatId x = 0; x < L.size(); ++x) ++out[L.rank[x]];
  return out;
}

QVec qv(std::initializer_list<long> xs) {
  QVec v;
  for (long x : xs) v.emplace_back(x);
  return v;
}

}  // namespace

TEST_CASE("build_lattice validates normals") {
  Arrangement zero{2, {qv({1, 0}), qv({0, 0})}, "bad"};
  CHECK_THROWS_AS(build_lattice(zero), std::invalid_argument);
  // Scalar multiples define the same hyperplane.
  Arrangement dup{2, {qv({1, 0}), qv({-3, 0})}, "dup"};
  CHECK_THROWS_AS(build_lattice(dup), std::invalid_argument);
}

TEST_CASE("coxeter family shapes") {
  Arrangement a3 = coxeter_family("A", 3);
  CHECK(a3.dim == 4);
  CHECK(a3.size() == 6);
  CHECK(!is_essential(a3));

  Arrangement b3 = coxeter_family("B", 3);
  CHECK(b3.dim == 3);
  CHECK(b3.size() == 9);  // n^2
  CHECK(is_essential(b3));

  Arrangement d4 = coxeter_family("D", 4);
  CHECK(d4.dim == 4);
  CHECK(d4.size() == 12);  // n(n-1)

  Arrangement phi32 = coxeter_family("Phi", 3, 2);
  CHECK(phi32.dim == 3);
  CHECK(phi32.size() == 8);  // n(n-1) + m

  // Phi interpolates between the two signed families.
  Arrangement phi30 = coxeter_family("Phi", 3, 0);
  CHECK(phi30.size() == coxeter_family("D", 3).size());
  Arrangement phi33 = coxeter_family("Phi", 3, 3);
  CHECK(phi33.size() == coxeter_family("B", 3).size());

  CHECK_THROWS_AS(coxeter_family("E", 6), std::invalid_argument);
  CHECK_THROWS_AS(coxeter_family("D", 1), std::invalid_argument);
  CHECK_THROWS_AS(coxeter_family("Phi", 3, 4), std::invalid_argument);
}

TEST_CASE("intersection lattices of small families") {
  ArrLattice a3 = build_lattice(coxeter_family("A", 3));
  CHECK(strata(a3.lat) == std::vector<std::size_t>{1, 6, 7, 1});
  ArrLattice b2 = build_lattice(coxeter_family("B", 2));
  CHECK(strata(b2.lat) == std::vector<std::size_t>{1, 4, 1});
  ArrLattice d3 = build_lattice(coxeter_family("D", 3));
  CHECK(d3.lat.size() == 15);  // same lattice shape as the braid family
  ArrLattice b3 = build_lattice(coxeter_family("B", 3));
  CHECK(b3.lat.size() == 24);
  // Spans grow with rank and the top span has full rank.
  for (FlatId x = 0; x < a3.lat.size(); ++x)
    CHECK(a3.span[x].dim() == static_cast<std::size_t>(a3.lat.rank[x]));
}

TEST_CASE("essentialize preserves the lattice") {
  Arrangement a = coxeter_family("A", 3);
  ArrLattice L = build_lattice(a);
  Arrangement e = essentialize(a);
  CHECK(is_essential(e));
  CHECK(e.dim == 3);
  CHECK(e.size() == a.size());
  ArrLattice Le = build_lattice(e);
  CHECK(Le.lat.size() == L.lat.size());
  // Closed atom sets agree flat by flat: linear relations are preserved.
  for (FlatId x = 0; x < L.lat.size(); ++x) CHECK(Le.lat.closed[x] == L.lat.closed[x]);
  // Essentialize of an essential arrangement keeps the normals' span shape.
  Arrangement ee = essentialize(e);
  CHECK(ee.dim == e.dim);
}

TEST_CASE("localization matches the lower interval") {
  Arrangement a = coxeter_family("A", 3);
  ArrLattice L = build_lattice(a);
  for (FlatId x = 0; x < L.lat.size(); ++x) {
    if (L.lat.rank[x] < 1) continue;
    Arrangement sub = localize(a, L, x);
    CHECK(sub.size() == L.lat.closed[x].count());
    ArrLattice subL = build_lattice(sub);
    Interval iv = interval_below(L.lat, x);
    REQUIRE(subL.lat.size() == iv.lat.size());
    // localize keeps hyperplane order, so closed sets agree verbatim.
    for (FlatId q = 0; q < subL.lat.size(); ++q)
      CHECK(subL.lat.closed[q] == iv.lat.closed[q]);
  }
}

TEST_CASE("restriction matches the upper interval") {
  Arrangement a = coxeter_family("A", 3);
  ArrLattice L = build_lattice(a);
  for (std::size_t h = 0; h < a.size(); ++h) {
    FlatId x = L.lat.atoms[h];
    Restriction r = restrict_to(a, L, x);
    CHECK(r.flat == x);
    CHECK(r.arr.size() == L.lat.upper_covers[x].size());
    CHECK(r.arr.dim == a.dim - 1);
    ArrLattice rl = build_lattice(r.arr);
    Interval iv = interval_above(L.lat, x);
    REQUIRE(rl.lat.size() == iv.lat.size());
    for (FlatId q = 0; q < rl.lat.size(); ++q)
      CHECK(rl.lat.closed[q] == iv.lat.closed[q]);
    // atom_to_cover lists the covers of x in id order.
    std::vector<FlatId> covers = L.lat.upper_covers[x];
    std::sort(covers.begin(), covers.end());
    CHECK(r.atom_to_cover == covers);
    // hyper_to_atom sends exactly the hyperplanes below x to npos.
    for (std::size_t g = 0; g < a.size(); ++g) {
      bool below = L.lat.leq(L.lat.atoms[g], x);
      CHECK((r.hyper_to_atom[g] == Restriction::npos) == below);
      if (!below) CHECK(r.hyper_scale[g] != 0);
    }
  }
}

TEST_CASE("restriction chart pulls back projected normals") {
  Arrangement a = coxeter_family("B", 3);
  ArrLattice L = build_lattice(a);
  Restriction r = restrict_to(a, L, L.lat.atoms[0]);
  // proj(u_H) = hyper_scale[H] * (chart row combination of the atom normal):
  // check via the chart: chart rows span the complement, so the projection of
  // u_H onto that span must equal scale * normal-in-chart-coordinates.
  Subspace comp = L.span[L.lat.atoms[0]].perp();
  REQUIRE(comp.dim() == r.chart.rows());
  for (std::size_t g = 0; g < a.size(); ++g) {
    if (r.hyper_to_atom[g] == Restriction::npos) continue;
    const QVec& u = a.normals[g];
    // Projection of u onto comp along span[x]: solve u = c + s, c in comp,
    // s in span[x]. comp + span[x] = Q^dim, so coordinates exist.
    QMatrix sys = r.chart.transpose().hstack(L.span[L.lat.atoms[0]].basis().transpose());
    auto sol = solve(sys, u);
    REQUIRE(sol.has_value());
    QVec chart_coords(sol->begin(), sol->begin() + r.chart.rows());
    QVec expect = scaled(r.arr.normals[r.hyper_to_atom[g]], r.hyper_scale[g]);
    CHECK(chart_coords == expect);
  }
}

TEST_CASE("projection to order one truncates the lattice") {
  Arrangement a = essentialize(coxeter_family("A", 3));
  ArrLattice L = build_lattice(a);
  auto pr = random_general_position(a, L, 1, 7);
  REQUIRE(pr.has_value());
  CHECK(pr->k == 1);
  CHECK(pr->arr.dim == 2);
  // One projected hyperplane per rank-2 flat of the source.
  CHECK(pr->arr.size() == L.lat.flats_of_rank(2).size());
  CHECK(strata(pr->lat.lat) == std::vector<std::size_t>{1, 7, 1});
  // hyper_flat enumerates the rank-2 flats in id order.
  CHECK(pr->hyper_flat == L.lat.flats_of_rank(2));
  // The truncation passes its axioms.
  TruncationMap t = pr->truncation(L.lat);
  CHECK(t.k == 1);
  CHECK(verify_truncation(t).ok);
  // Determinism in the seed.
  auto pr2 = random_general_position(a, L, 1, 7);
  REQUIRE(pr2.has_value());
  CHECK(pr2->arr.normals == pr->arr.normals);
  auto pr3 = random_general_position(a, L, 1, 8);
  REQUIRE(pr3.has_value());
  CHECK(strata(pr3->lat.lat) == strata(pr->lat.lat));
}

TEST_CASE("projection to order two") {
  Arrangement a = essentialize(coxeter_family("A", 3));
  ArrLattice L = build_lattice(a);
  auto pr = random_general_position(a, L, 2, 3);
  REQUIRE(pr.has_value());
  CHECK(pr->arr.dim == 1);
  CHECK(pr->arr.size() == 1);  // only the top flat has rank 3
  CHECK(verify_truncation(pr->truncation(L.lat)).ok);
}

TEST_CASE("corrupted truncation maps are rejected") {
  Arrangement a = essentialize(coxeter_family("A", 3));
  ArrLattice L = build_lattice(a);
  auto pr = random_general_position(a, L, 1, 7);
  REQUIRE(pr.has_value());
  TruncationMap t = pr->truncation(L.lat);
  // Sending the top to an atom breaks the rank shift.
  TruncationMap bad = t;
  bad.img[L.lat.top] = bad.img[L.lat.flats_of_rank(2)[0]];
  CHECK(!verify_truncation(bad).ok);
  // At order zero the map is a relabeling of the whole lattice; swapping two
  // rank-2 images then breaks monotonicity over the atoms below them.
  auto pr0 = random_general_position(a, L, 0, 5);
  REQUIRE(pr0.has_value());
  TruncationMap t0 = pr0->truncation(L.lat);
  CHECK(verify_truncation(t0).ok);
  auto r2 = L.lat.flats_of_rank(2);
  FlatId tri = 0, dbl = 0;
  for (FlatId x : r2) (L.lat.closed[x].count() == 3 ? tri : dbl) = x;
  TruncationMap bad0 = t0;
  std::swap(bad0.img[tri], bad0.img[dbl]);
  CHECK(!verify_truncation(bad0).ok);
}

TEST_CASE("project rejects screens meeting low flats") {
  Arrangement a = essentialize(coxeter_family("A", 3));
  ArrLattice L = build_lattice(a);
  // A screen containing a hyperplane normal meets that rank-1 span.
  Subspace screen = Subspace::span_of({a.normals[0], qv({0, 0, 1})}, 3);
  ProjectResult res = project(a, L, 1, screen);
  REQUIRE(std::holds_alternative<GeneralPositionFailure>(res));
  CHECK(!std::get<GeneralPositionFailure>(res).what.empty());
}

TEST_CASE("arrangement json round trip") {
  Arrangement a = coxeter_family("B", 2);
  a.name = "b2";
  auto j = arrangement_to_json(a);
  Arrangement back = arrangement_from_json(j);
  CHECK(back.dim == a.dim);
  CHECK(back.normals == a.normals);
  CHECK(back.name == a.name);
  // Rational normals survive the trip.
  Arrangement q{2, {qv({1, 0}), {Rational(1) / 2, Rational(-2) / 3}}, "q"};
  Arrangement qback = arrangement_from_json(arrangement_to_json(q));
  CHECK(qback.normals == q.normals);
}

TEST_CASE("arrangement json rejects malformed content") {
  CHECK_THROWS_AS(arrangement_from_json(nlohmann::ordered_json{{"normals", {{1, 0}}}}),
                  std::invalid_argument);
  CHECK_THROWS_AS(arrangement_from_json(nlohmann::ordered_json{{"dim", 2}}),
                  std::invalid_argument);
  nlohmann::ordered_json wrong = {{"dim", 2}, {"normals", {{1, 0, 0}}}};
  CHECK_THROWS_AS(arrangement_from_json(wrong), std::invalid_argument);
  nlohmann::ordered_json badentry = {{"dim", 1}, {"normals", {{"x"}}}};
  CHECK_THROWS_AS(arrangement_from_json(badentry), std::invalid_argument);
  CHECK_THROWS_AS(load_arrangement("/nonexistent/path.json"), std::runtime_error);
}
