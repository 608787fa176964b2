#include "relspace/arrangement.hpp"

#include <fstream>
#include <map>
#include <stdexcept>

#include "relspace/prng.hpp"

namespace relspace {

namespace {

void validate(const Arrangement& a) {
  if (a.dim == 0) throw std::invalid_argument("arrangement: ambient dimension must be positive");
  std::map<QVec, std::size_t> lines;
  for (std::size_t h = 0; h < a.size(); ++h) {
    const QVec& u = a.normals[h];
    if (u.size() != a.dim) throw std::invalid_argument("arrangement: normal has wrong length");
    if (is_zero_vec(u)) throw std::invalid_argument("arrangement: zero normal");
    auto [it, fresh] = lines.emplace(line_rep(u), h);
    if (!fresh) throw std::invalid_argument("arrangement: proportional normals");
  }
}

Subspace line_of(const QVec& u, std::size_t ambient) {
  return Subspace::span_of({u}, ambient);
}

}  // namespace

ArrLattice build_lattice(const Arrangement& a) {
  validate(a);
  std::map<AtomSet, Subspace> found;
  AtomSet empty(a.size());
  found.emplace(empty, Subspace(a.dim));
  std::vector<AtomSet> frontier{empty};
  while (!frontier.empty()) {
    std::vector<AtomSet> next;
    for (const auto& s : frontier) {
      const Subspace sp = found.at(s);
      for (std::size_t h = 0; h < a.size(); ++h) {
        if (s.test(h)) continue;
        Subspace grown = sp.sum(line_of(a.normals[h], a.dim));
        AtomSet closed(a.size());
        for (std::size_t g = 0; g < a.size(); ++g)
          if (grown.contains(a.normals[g])) closed.set(g);
        if (found.emplace(closed, grown).second) next.push_back(closed);
      }
    }
    frontier = std::move(next);
  }
  std::vector<std::pair<AtomSet, int>> flats;
  flats.reserve(found.size());
  for (const auto& [s, sp] : found) flats.emplace_back(s, static_cast<int>(sp.dim()));
  ArrLattice L;
  L.lat = make_lattice(std::move(flats));
  L.span.reserve(L.lat.size());
  for (FlatId x = 0; x < L.lat.size(); ++x) L.span.push_back(found.at(L.lat.closed[x]));
  return L;
}

bool is_essential(const Arrangement& a) {
  return Subspace::span_of(QMatrix::from_rows(a.normals, a.dim)).dim() == a.dim;
}

Arrangement essentialize(const Arrangement& a) {
  Subspace total = Subspace::span_of(QMatrix::from_rows(a.normals, a.dim));
  Arrangement e;
  e.dim = total.dim();
  e.name = a.name;
  e.normals.reserve(a.size());
  for (const QVec& u : a.normals) e.normals.push_back(*total.coords_of(u));
  return e;
}

Arrangement localize(const Arrangement& a, const ArrLattice& L, FlatId x) {
  Arrangement sub;
  sub.dim = a.dim;
  sub.name = a.name;
  for (auto h : L.lat.closed[x].indices()) sub.normals.push_back(a.normals[h]);
  return sub;
}

Restriction restrict_to(const Arrangement& a, const ArrLattice& L, FlatId x) {
  if (x >= L.lat.size()) throw std::invalid_argument("restrict_to: unknown flat");
  Restriction r;
  r.flat = x;
  Subspace flat_space = L.span[x].perp();
  r.chart = flat_space.basis();
  std::size_t f = flat_space.dim();

  const auto& covers = L.lat.upper_covers[x];
  std::map<FlatId, std::size_t> cover_index;
  for (std::size_t i = 0; i < covers.size(); ++i) cover_index[covers[i]] = i;
  r.atom_to_cover = covers;

  // orthogonal projection onto the flat, in chart coordinates:
  // proj(u) = C^T c with (C C^T) c = C u
  QMatrix gram = r.chart.mul(r.chart.transpose());

  r.hyper_to_atom.assign(a.size(), Restriction::npos);
  r.hyper_scale.assign(a.size(), Rational(0));
  std::vector<QVec> normals(covers.size());
  std::vector<bool> have(covers.size(), false);
  for (std::size_t h = 0; h < a.size(); ++h) {
    if (L.lat.closed[x].test(h)) continue;
    std::size_t ci = cover_index.at(L.lat.join_atom(x, h));
    QVec c = *solve(gram, r.chart.apply(a.normals[h]));
    r.hyper_to_atom[h] = ci;
    if (!have[ci]) {
      have[ci] = true;
      normals[ci] = c;
      r.hyper_scale[h] = 1;
    } else {
      // proportional to the representative; read the ratio off any
      // nonzero coordinate
      for (std::size_t j = 0; j < f; ++j)
        if (normals[ci][j] != 0) {
          r.hyper_scale[h] = c[j] / normals[ci][j];
          break;
        }
    }
  }
  r.arr.dim = f;
  r.arr.normals = std::move(normals);
  r.arr.name = a.name.empty() ? std::string() : a.name + "_res";
  return r;
}

TruncationMap Projection::truncation(const GeomLattice& src) const {
  return TruncationMap{&src, &lat.lat, k, trunc_img};
}

ProjectResult project(const Arrangement& a, const ArrLattice& L, int k, const Subspace& screen) {
  if (!is_essential(a)) throw std::invalid_argument("project: arrangement must be essential");
  if (k < 0 || k > L.lat.top_rank - 1) throw std::invalid_argument("project: k out of range");
  if (screen.ambient() != a.dim || screen.dim() + static_cast<std::size_t>(k) != a.dim)
    throw std::invalid_argument("project: screen must have codimension k");

  for (auto x : L.lat.flats_of_rank(k))
    if (L.span[x].intersect(screen).dim() != 0)
      return GeneralPositionFailure{"rank-k flat meets the screen", {x}};

  auto hyper_flat = L.lat.flats_of_rank(k + 1);
  std::vector<QVec> gens(hyper_flat.size());
  std::map<QVec, std::size_t> seen;
  for (std::size_t i = 0; i < hyper_flat.size(); ++i) {
    Subspace line = L.span[hyper_flat[i]].intersect(screen);
    if (line.dim() != 1)
      return GeneralPositionFailure{"flat image is not a hyperplane", {hyper_flat[i]}};
    gens[i] = line.basis().row(0);
    auto [it, fresh] = seen.emplace(line_rep(gens[i]), i);
    if (!fresh)
      return GeneralPositionFailure{"projected hyperplanes collide",
                                    {hyper_flat[it->second], hyper_flat[i]}};
  }

  Projection p;
  p.k = k;
  p.chart = screen.basis();
  p.hyper_flat = hyper_flat;
  p.arr.dim = screen.dim();
  p.arr.name = a.name.empty() ? std::string() : a.name + "_proj";
  p.arr.normals.reserve(gens.size());
  for (const auto& g : gens) p.arr.normals.push_back(*screen.coords_of(g));
  p.lat = build_lattice(p.arr);

  std::map<FlatId, std::size_t> flat_to_hyper;
  for (std::size_t i = 0; i < hyper_flat.size(); ++i) flat_to_hyper[hyper_flat[i]] = i;
  p.trunc_img.assign(L.lat.size(), 0);
  for (FlatId x = 0; x < L.lat.size(); ++x) {
    if (L.lat.rank[x] < k) continue;
    AtomSet below(hyper_flat.size());
    for (std::size_t i = 0; i < hyper_flat.size(); ++i)
      if (L.lat.leq(hyper_flat[i], x)) below.set(i);
    FlatId img = p.lat.lat.join_of_atoms(below);
    if (p.lat.lat.rank[img] != L.lat.rank[x] - k)
      throw std::logic_error("project: truncation image has wrong rank");
    // the image's span must be the screen trace of the source span
    std::vector<QVec> trace;
    Subspace cut = L.span[x].intersect(screen);
    for (std::size_t row = 0; row < cut.dim(); ++row)
      trace.push_back(*screen.coords_of(cut.basis().row(row)));
    if (!(Subspace::span_of(trace, screen.dim()) == p.lat.span[img]))
      throw std::logic_error("project: truncation image has wrong span");
    p.trunc_img[x] = img;
  }
  return p;
}

std::optional<Projection> random_general_position(const Arrangement& a, const ArrLattice& L,
                                                  int k, std::uint64_t seed, int max_tries) {
  SplitMix64 rng(seed);
  std::size_t n = a.dim;
  std::size_t p_dim = n - static_cast<std::size_t>(k);
  Integer bound = 2;
  for (int attempt = 0; attempt < max_tries; ++attempt) {
    Integer width = 2 * bound + 1;
    std::vector<QVec> rows(p_dim, QVec(n));
    for (auto& row : rows)
      for (auto& entry : row) {
        Integer draw = (Integer(rng.next()) << 64) | Integer(rng.next());
        entry = Rational(draw % width - bound);
      }
    bound *= 2;
    Subspace screen = Subspace::span_of(rows, n);
    if (screen.dim() != p_dim) continue;
    auto res = project(a, L, k, screen);
    if (std::holds_alternative<Projection>(res)) return std::get<Projection>(std::move(res));
  }
  return std::nullopt;
}

Arrangement coxeter_family(const std::string& family, int n, int m) {
  if (n < 1) throw std::invalid_argument("coxeter_family: n must be positive");
  Arrangement a;
  auto unit = [&](std::size_t i) {
    QVec v(a.dim, Rational(0));
    v[i] = 1;
    return v;
  };
  auto diff = [&](std::size_t i, std::size_t j) {
    QVec v(a.dim, Rational(0));
    v[i] = 1;
    v[j] = -1;
    return v;
  };
  auto sum2 = [&](std::size_t i, std::size_t j) {
    QVec v(a.dim, Rational(0));
    v[i] = 1;
    v[j] = 1;
    return v;
  };
  if (family == "A") {
    a.dim = static_cast<std::size_t>(n) + 1;
    for (std::size_t i = 0; i < a.dim; ++i)
      for (std::size_t j = i + 1; j < a.dim; ++j) a.normals.push_back(diff(i, j));
    a.name = "A" + std::to_string(n);
    return a;
  }
  if (family == "B" || family == "D" || family == "Phi") {
    if (family == "D" && n < 2) throw std::invalid_argument("coxeter_family: D needs n >= 2");
    if (family == "B") m = n;
    if (family == "D") m = 0;
    if (m < 0 || m > n) throw std::invalid_argument("coxeter_family: need 0 <= m <= n");
    a.dim = static_cast<std::size_t>(n);
    for (std::size_t i = 0; i < a.dim; ++i)
      for (std::size_t j = i + 1; j < a.dim; ++j) a.normals.push_back(diff(i, j));
    for (std::size_t i = 0; i < a.dim; ++i)
      for (std::size_t j = i + 1; j < a.dim; ++j) a.normals.push_back(sum2(i, j));
    for (std::size_t i = 0; i < static_cast<std::size_t>(m); ++i) a.normals.push_back(unit(i));
    a.name = family + std::to_string(n);
    if (family == "Phi") a.name += "_" + std::to_string(m);
    return a;
  }
  throw std::invalid_argument("coxeter_family: unknown family " + family);
}

Arrangement arrangement_from_json(const nlohmann::ordered_json& j) {
  if (!j.is_object()) throw std::invalid_argument("arrangement json: expected an object");
  if (!j.contains("dim") || !j["dim"].is_number_unsigned())
    throw std::invalid_argument("arrangement json: missing or bad \"dim\"");
  if (!j.contains("normals") || !j["normals"].is_array())
    throw std::invalid_argument("arrangement json: missing or bad \"normals\"");
  Arrangement a;
  a.dim = j["dim"].get<std::size_t>();
  if (j.contains("name")) {
    if (!j["name"].is_string()) throw std::invalid_argument("arrangement json: bad \"name\"");
    a.name = j["name"].get<std::string>();
  }
  for (const auto& row : j["normals"]) {
    if (!row.is_array()) throw std::invalid_argument("arrangement json: normal is not an array");
    QVec u;
    for (const auto& entry : row) {
      if (entry.is_string())
        u.push_back(parse_rational(entry.get<std::string>()));
      else if (entry.is_number_integer())
        u.push_back(Rational(entry.get<long long>()));
      else
        throw std::invalid_argument("arrangement json: entries must be integers or \"p/q\" strings");
    }
    a.normals.push_back(std::move(u));
  }
  validate(a);
  return a;
}

nlohmann::ordered_json arrangement_to_json(const Arrangement& a) {
  nlohmann::ordered_json j;
  j["dim"] = a.dim;
  j["name"] = a.name;
  auto rows = nlohmann::ordered_json::array();
  for (const auto& u : a.normals) {
    auto row = nlohmann::ordered_json::array();
    for (const auto& q : u) row.push_back(rational_str(q));
    rows.push_back(std::move(row));
  }
  j["normals"] = std::move(rows);
  return j;
}

Arrangement load_arrangement(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw std::runtime_error("cannot open " + path);
  nlohmann::ordered_json j = nlohmann::ordered_json::parse(in);
  return arrangement_from_json(j);
}

}  // namespace relspace
