#include <algorithm>
#include <set>

#include "doctest.h"
#include "relspace/relalg.hpp"

using namespace relspace;

namespace {

QVec qv(std::initializer_list<long> xs) {
  QVec v;
  for (long x : xs) v.emplace_back(x);
  return v;
}

std::vector<Rational> nodes(std::initializer_list<long> xs) {
  std::vector<Rational> v;
  for (long x : xs) v.emplace_back(x);
  return v;
}

// Coefficients of hilbert(t) = num(t) / (1-t)^power, expanded exactly.
std::vector<Integer> expand_series(const std::vector<long>& num, int power, int upto) {
  std::vector<Integer> out;
  for (int d = 0; d <= upto; ++d) {
    Integer c = 0;
    for (int i = 0; i <= d && i < static_cast<int>(num.size()); ++i)
      c += Integer(num[i]) * binomial(power - 1 + d - i, power - 1);
    out.push_back(c);
  }
  return out;
}

// Packet consistency: within every (k+3)-subset K of the ground set, the
// (k+2)-subsets of K in lexicographic order form a packet; a member set must
// meet each packet in a prefix or a proper suffix of that order.
bool packet_consistent(const BruhatData& bd, const std::set<std::size_t>& member) {
  int n = bd.n, k = bd.k;
  std::vector<int> ksel(n, 0);
  std::fill(ksel.begin(), ksel.begin() + k + 3, 1);
  std::sort(ksel.begin(), ksel.end());
  do {
    std::vector<int> K;
    for (int i = 0; i < n; ++i)
      if (ksel[i]) K.push_back(i);
    std::vector<std::size_t> packet;
    for (std::size_t s = 0; s < bd.sets_k2.size(); ++s)
      if (std::includes(K.begin(), K.end(), bd.sets_k2[s].begin(), bd.sets_k2[s].end()))
        packet.push_back(s);
    std::vector<char> in(packet.size());
    for (std::size_t i = 0; i < packet.size(); ++i) in[i] = member.count(packet[i]) ? 1 : 0;
    std::size_t count = std::count(in.begin(), in.end(), 1);
    bool prefix = true, suffix = true;
    for (std::size_t i = 0; i < count; ++i) prefix = prefix && in[i];
    for (std::size_t i = 0; i < count; ++i) suffix = suffix && in[packet.size() - 1 - i];
    bool proper_suffix = suffix && count < packet.size();
    if (!(prefix || proper_suffix)) return false;
  } while (std::next_permutation(ksel.begin(), ksel.end()));
  return true;
}

std::set<std::set<std::size_t>> member_sets(const BruhatData& bd) {
  std::set<std::set<std::size_t>> out;
  for (const auto& m : bd.members) out.insert(std::set<std::size_t>(m.begin(), m.end()));
  return out;
}

// Every subset of the (k+2)-sets that passes the packet test, by exhaustion.
std::set<std::set<std::size_t>> consistent_sets(const BruhatData& bd) {
  std::set<std::set<std::size_t>> out;
  std::size_t total = bd.sets_k2.size();
  for (std::size_t mask = 0; mask < (1u << total); ++mask) {
    std::set<std::size_t> sub;
    for (std::size_t i = 0; i < total; ++i)
      if (mask & (1u << i)) sub.insert(i);
    if (packet_consistent(bd, sub)) out.insert(sub);
  }
  return out;
}

}  // namespace

TEST_CASE("binomial coefficients") {
  CHECK(binomial(6, 3) == Integer(20));
  CHECK(binomial(5, 0) == Integer(1));
  CHECK(binomial(5, 5) == Integer(1));
  CHECK(binomial(4, 5) == Integer(0));
  CHECK(binomial(60, 30) == Integer("118264581564861424"));
}

TEST_CASE("polynomial degree slices") {
  PolyDegreewise ring(3, 4);
  CHECK(ring.generators_dim() == 3);
  for (int d = 0; d <= 4; ++d)
    CHECK(Integer(ring.slice_dim(d)) == binomial(3 + d - 1, d));
  // Exponent listing is deterministic and indexed consistently.
  for (int d = 0; d <= 3; ++d) {
    const auto& ex = ring.exponents(d);
    for (std::size_t m = 0; m < ex.size(); ++m) CHECK(ring.index_of(d, ex[m]) == m);
  }
  // raise multiplies by a generator.
  for (std::size_t m = 0; m < ring.slice_dim(2); ++m)
    for (std::size_t g = 0; g < 3; ++g) {
      std::vector<int> e = ring.exponents(2)[m];
      e[g] += 1;
      CHECK(ring.raise(2, m, g) == ring.index_of(3, e));
    }
}

TEST_CASE("polynomial multiplication") {
  PolyDegreewise ring(2, 3);
  // (x + y)(x - y) = x^2 - y^2 in slice coordinates.
  QVec u = {Rational(1), Rational(1)};
  QVec v = {Rational(1), Rational(-1)};
  QVec w = ring.multiply(1, u, 1, v);
  REQUIRE(w.size() == ring.slice_dim(2));
  QVec expect(3, Rational(0));
  expect[ring.index_of(2, {2, 0})] = 1;
  expect[ring.index_of(2, {0, 2})] = -1;
  CHECK(w == expect);
  // Constant multiplication is scaling.
  CHECK(ring.multiply(0, {Rational(5)}, 1, u) == scaled(u, Rational(5)));
}

TEST_CASE("linear ideal slices") {
  PolyDegreewise ring(2, 3);
  LinearIdeal ideal{&ring, Subspace::span_of({qv({1, 0})}, 2)};
  CHECK(ideal.slice(0).dim() == 0);
  CHECK(ideal.slice(1).dim() == 1);
  CHECK(ideal.slice(2).dim() == 2);  // x^2, xy
  CHECK(ideal.slice(3).dim() == 3);  // x^3, x^2 y, x y^2
  // The slice really contains x * every degree-1 monomial.
  QVec x = {Rational(1), Rational(0)};
  for (std::size_t m = 0; m < ring.slice_dim(1); ++m) {
    QVec mono(ring.slice_dim(1), Rational(0));
    mono[m] = 1;
    CHECK(ideal.slice(2).contains(ring.multiply(1, x, 1, mono)));
  }
}

TEST_CASE("graphical module on a single edge") {
  PolyDegreewise ring(1, 4);
  // Full edge ideal: values may differ from degree one on.
  DegreewiseModule seg = graphical_module(2, {{0, 1, 0}}, {Subspace::full(1)}, ring);
  CHECK(seg.hilbert == std::vector<std::size_t>{1, 2, 2, 2, 2});
  CHECK(seg.generation == std::vector<std::size_t>{1, 1, 0, 0, 0});
  // Zero edge ideal: the two vertices are identified.
  DegreewiseModule glued = graphical_module(2, {{0, 1, 0}}, {Subspace(1)}, ring);
  CHECK(glued.hilbert == std::vector<std::size_t>{1, 1, 1, 1, 1});
  CHECK(vertex_classes(2, {{0, 1, 0}}, {Subspace(1)}) == std::vector<std::size_t>{0, 0});
  CHECK(vertex_classes(2, {{0, 1, 0}}, {Subspace::full(1)}) ==
        std::vector<std::size_t>{0, 1});
  CHECK_THROWS_AS(graphical_module(2, {{0, 5, 0}}, {Subspace::full(1)}, ring),
                  std::invalid_argument);
}

TEST_CASE("module slices are closed under the ring action") {
  PolyDegreewise ring(2, 3);
  std::vector<Subspace> gens = {Subspace::span_of({qv({1, 1})}, 2)};
  DegreewiseModule mod = graphical_module(3, {{0, 1, 0}, {1, 2, 0}}, gens, ring);
  for (int d = 0; d + 1 <= mod.max_deg(); ++d) {
    const Subspace& s = mod.slices[d];
    for (std::size_t i = 0; i < s.dim(); ++i) {
      QVec f = s.basis().row(i);
      for (std::size_t g = 0; g < 2; ++g) {
        // Multiply each vertex component by generator g.
        QVec up(3 * ring.slice_dim(d + 1), Rational(0));
        for (std::size_t v = 0; v < 3; ++v)
          for (std::size_t m = 0; m < ring.slice_dim(d); ++m)
            up[v * ring.slice_dim(d + 1) + ring.raise(d, m, g)] +=
                f[v * ring.slice_dim(d) + m];
        CHECK(mod.slices[d + 1].contains(up));
      }
    }
  }
}

TEST_CASE("slice cap guards the module computation") {
  PolyDegreewise ring(3, 6);
  CHECK_THROWS_AS(
      graphical_module(4, {{0, 1, 0}}, {Subspace::full(3)}, ring, 10),
      std::runtime_error);
}

TEST_CASE("hexagon relation algebra") {
  Arrangement a = essentialize(coxeter_family("A", 2));
  ArrLattice L = build_lattice(a);
  GradedComplex V = relation_complex(a, L);
  auto pr = random_general_position(a, L, 0, 1);
  REQUIRE(pr.has_value());
  RelationAlgebra ra = build_relation_algebra(a, L, V, *pr, 4);
  CHECK(ra.ring.generators_dim() == 2);
  CHECK(ra.edges.size() == 6);
  CHECK(ra.faces.counts() == std::vector<std::size_t>{6, 6, 1});
  CHECK(ra.mod.hilbert == std::vector<std::size_t>{1, 6, 12, 18, 24});
  CHECK(ra.mod.generation == std::vector<std::size_t>{1, 4, 1, 0, 0});

  // Generator counts equal the h-vector of the hexagon, derived here
  // independently from the face counts by the (t-1)-shift.
  auto counts = ra.faces.counts();
  std::vector<long> h(3, 0);
  for (std::size_t j = 0; j < counts.size(); ++j) {
    // Add counts[j] * (t-1)^j.
    long sign = (j % 2 == 0) ? 1 : -1;
    for (std::size_t i = 0; i <= j; ++i) {
      long c = static_cast<long>(counts[j]);
      Integer term = Integer(c) * binomial(j, i);
      h[i] += static_cast<long>(term) * ((j - i) % 2 == 0 ? 1 : -1);
    }
    (void)sign;
  }
  CHECK(h == std::vector<long>{1, 4, 1});
  for (std::size_t i = 0; i < h.size(); ++i)
    CHECK(static_cast<long>(ra.mod.generation[i]) == h[i]);

  NumeratorReport num = hilbert_numerator(ra.mod.hilbert, 2);
  CHECK(num.coeffs == std::vector<Integer>{1, 4, 1, 0, 0});
  CHECK(!num.has_negative);

  GenerationReport gen = generation_check(ra.mod, 2);
  CHECK(gen.ok);
  CHECK(!generation_check(ra.mod, 1).ok);

  ModifiedEpReport ep = modified_ep(ra, pr->lat);
  REQUIRE(ep.ok());
  REQUIRE(ep.degrees.size() == 5);
  std::vector<std::vector<std::size_t>> ep_dims = {
      {1, 1, 0, 0}, {2, 6, 6, 2}, {3, 12, 12, 3}, {4, 18, 18, 4}, {5, 24, 24, 5}};
  for (int d = 0; d <= 4; ++d) {
    const ModifiedEpDegree& deg = ep.degrees[d];
    CHECK(deg.dims == ep_dims[d]);
    CHECK(deg.exact_at == std::vector<char>(4, 1));
    CHECK(deg.euler_ok);
    CHECK(deg.anchor_ok);
  }

  // Piecewise comparison is defined for first-order projections only.
  CHECK_THROWS_AS(piecewise_linear_check(a, L, V, *pr), std::invalid_argument);
}

TEST_CASE("edges from faces carry the crossing hyperplane") {
  Arrangement a = essentialize(coxeter_family("A", 2));
  ArrLattice L = build_lattice(a);
  FaceLattice z = enumerate_faces(a, L);
  auto edges = edges_from_faces(z);
  CHECK(edges.size() == 6);
  for (const GraphEdge& e : edges) {
    CHECK(e.v1 < 6);
    CHECK(e.v2 < 6);
    CHECK(e.label < 3);
    // The two endpoint sign vectors differ exactly at the label.
    const auto& s1 = z.faces[z.by_dim[1][e.v1]].signs;
    const auto& s2 = z.faces[z.by_dim[1][e.v2]].signs;
    for (std::size_t h = 0; h < 3; ++h)
      CHECK((s1[h] != s2[h]) == (h == e.label));
  }
}

TEST_CASE("braid arrangement with a degree-one screen") {
  BraidSetup bs = braid_vandermonde(4, 1, nodes({1, 2, 3, 5}));
  CHECK(bs.arr.dim == 3);
  CHECK(bs.proj.k == 1);
  CHECK(bs.proj.arr.size() == 7);
  RelationAlgebra ra = build_relation_algebra(bs.arr, bs.lat, bs.complex, bs.proj, 3);
  CHECK(ra.ring.generators_dim() == 6);
  CHECK(ra.mod.hilbert == std::vector<std::size_t>{1, 11, 54, 178});

  // The series (1 + 5t + 3t^2 - t^3) / (1-t)^6 reproduces those values.
  auto series = expand_series({1, 5, 3, -1}, 6, 3);
  for (int d = 0; d <= 3; ++d) CHECK(Integer(ra.mod.hilbert[d]) == series[d]);

  NumeratorReport num = hilbert_numerator(ra.mod.hilbert, 6);
  CHECK(num.power == 6);
  CHECK(num.coeffs == std::vector<Integer>{1, 5, 3, -1});
  CHECK(num.has_negative);  // certified witness against freeness

  CHECK(ra.mod.generation == std::vector<std::size_t>{1, 5, 3, 0});
  CHECK(generation_check(ra.mod, 2).ok);
  CHECK(!generation_check(ra.mod, 1).ok);

  ModifiedEpReport ep = modified_ep(ra, bs.proj.lat);
  CHECK(ep.ok());
  CHECK(ep.degrees[1].dims[0] == 6);
  CHECK(ep.degrees[1].dims[1] == 11);

  PiecewiseReport pw = piecewise_linear_check(bs.arr, bs.lat, bs.complex, bs.proj);
  CHECK(pw.ok);
  CHECK(pw.dim_lambda == 14);
  CHECK(pw.dim_u == 3);
  CHECK(pw.dim_m1 == 11);
  CHECK(pw.dim_m1 == ra.mod.hilbert[1]);
}

TEST_CASE("piecewise check on the hexagon fan") {
  Arrangement a = essentialize(coxeter_family("A", 2));
  ArrLattice L = build_lattice(a);
  GradedComplex V = relation_complex(a, L);
  auto pr = random_general_position(a, L, 1, 3);
  REQUIRE(pr.has_value());
  PiecewiseReport pw = piecewise_linear_check(a, L, V, *pr);
  CHECK(pw.ok);
  CHECK(pw.dim_m1 == pw.dim_lambda - pw.dim_u);
}

TEST_CASE("equally spaced nodes are degenerate at order one") {
  CHECK_THROWS_AS(braid_vandermonde(4, 1, nodes({1, 2, 3, 4})), std::runtime_error);
  CHECK_THROWS_WITH_AS(braid_vandermonde(4, 1, nodes({1, 2, 3, 4})),
                       doctest::Contains("general position"), std::runtime_error);
  // The same nodes are fine at order zero, and other spacings work at one.
  CHECK(braid_vandermonde(4, 0, nodes({1, 2, 3, 4})).proj.arr.size() == 6);
  CHECK(braid_vandermonde(4, 1, nodes({1, 2, 3, 5})).proj.arr.size() == 7);
}

TEST_CASE("node validation") {
  CHECK_THROWS_AS(bruhat_data(4, 1, nodes({1, 1, 2, 3})), std::invalid_argument);
  CHECK_THROWS_AS(bruhat_data(4, 1, nodes({1, 2, 3})), std::invalid_argument);
  CHECK_THROWS_AS(bruhat_data(4, 3, nodes({1, 2, 3, 4})), std::invalid_argument);
  CHECK_THROWS_AS(bruhat_data(1, 0, nodes({1})), std::invalid_argument);
}

TEST_CASE("chamber fibration at order zero covers the symmetric group") {
  for (int n : {3, 4, 5}) {
    BruhatData bd = bruhat_data(n, 0, [&] {
      std::vector<Rational> ns;
      for (int i = 1; i <= n; ++i) ns.emplace_back(i);
      return ns;
    }());
    Integer fact = 1;
    for (int i = 2; i <= n; ++i) fact *= i;
    CHECK(Integer(bd.members.size()) == fact);
    // Weak-order covers: each permutation has n-1 adjacent transpositions,
    // each cover counted once.
    CHECK(bd.edges.size() == bd.members.size() * (n - 1) / 2);
    for (const Rational& al : bd.alpha) CHECK(al > 0);
    // Every member passes the packet consistency test.
    for (const auto& m : bd.members)
      CHECK(packet_consistent(bd, std::set<std::size_t>(m.begin(), m.end())));
  }
}

TEST_CASE("members are exactly the packet-consistent subsets") {
  // Exhaustive converse at order zero on three and four points, and at
  // order one on four points.
  for (auto [n, k] : std::vector<std::pair<int, int>>{{3, 0}, {4, 0}, {4, 1}}) {
    std::vector<Rational> ns;
    for (int i = 1; i <= n; ++i) ns.emplace_back(i);
    BruhatData bd = bruhat_data(n, k, ns);
    INFO("n=" << n << " k=" << k);
    CHECK(member_sets(bd) == consistent_sets(bd));
  }
}

TEST_CASE("second-order data on four points") {
  BruhatData bd = bruhat_data(4, 1, nodes({1, 2, 3, 4}));
  CHECK(bd.sets_k1.size() == 6);
  CHECK(bd.sets_k2.size() == 4);
  CHECK(bd.members.size() == 8);
  CHECK(bd.edges.size() == 8);
  // Edge endpoints differ by exactly the labeled set.
  auto ms = bd.members;
  for (const GraphEdge& e : bd.edges) {
    std::set<std::size_t> s1(ms[e.v1].begin(), ms[e.v1].end());
    std::set<std::size_t> s2(ms[e.v2].begin(), ms[e.v2].end());
    std::vector<std::size_t> diff;
    std::set_symmetric_difference(s1.begin(), s1.end(), s2.begin(), s2.end(),
                                  std::back_inserter(diff));
    CHECK(diff == std::vector<std::size_t>{e.label});
  }
  // Kernel vectors pair positively with the member witnesses.
  for (std::size_t m = 0; m < bd.members.size(); ++m)
    CHECK(bd.witness[m].size() > 0);
}

TEST_CASE("combinatorial and geometric pipelines agree") {
  BruhatData bd = bruhat_data(4, 1, nodes({1, 2, 3, 4}));
  DegreewiseModule comb = bruhat_relation_algebra(bd, 2);
  BraidSetup bs = braid_vandermonde(4, 1, nodes({1, 2, 3, 5}));
  RelationAlgebra geo = build_relation_algebra(bs.arr, bs.lat, bs.complex, bs.proj, 2);
  CHECK(comb.hilbert == geo.mod.hilbert);
  CHECK(comb.hilbert == std::vector<std::size_t>{1, 11, 54});
  CHECK(comb.generation == geo.mod.generation);
}

TEST_CASE("numerator certification") {
  CHECK(hilbert_numerator({1, 2, 2, 2}, 1).coeffs == std::vector<Integer>{1, 1, 0, 0});
  CHECK(!hilbert_numerator({1, 2, 2, 2}, 1).has_negative);
  CHECK_THROWS_AS(hilbert_numerator({1, 1}, -1), std::invalid_argument);
  // Alternating signs show up verbatim.
  NumeratorReport r = hilbert_numerator({1, 0, 0}, 2);
  CHECK(r.coeffs == std::vector<Integer>{1, -2, 1});
  CHECK(r.has_negative);
}

TEST_CASE("relation algebra input validation") {
  Arrangement a = essentialize(coxeter_family("A", 2));
  ArrLattice L = build_lattice(a);
  GradedComplex V = relation_complex(a, L);
  auto pr = random_general_position(a, L, 0, 1);
  REQUIRE(pr.has_value());
  Arrangement b = coxeter_family("B", 2);
  ArrLattice Lb = build_lattice(b);
  CHECK_THROWS_AS(build_relation_algebra(b, Lb, V, *pr, 2), std::invalid_argument);
}
