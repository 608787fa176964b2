// Command line front end. Every subcommand builds the requested objects,
// runs its verification sweep, and emits one JSON report with a stable key
// order. Exit code 0 means every check passed, 1 means some check failed
// (the report is still written), 2 means the request itself was unusable.

#include <chrono>
#include <cstdlib>
#include <exception>
#include <fstream>
#include <iostream>
#include <map>
#include <optional>
#include <sstream>
#include <stdexcept>
#include <string>
#include <utility>
#include <variant>
#include <vector>

#include "CLI11.hpp"
#include "json.hpp"
#include "relspace/arrangement.hpp"
#include "relspace/complexes.hpp"
#include "relspace/family_complexes.hpp"
#include "relspace/lattice.hpp"
#include "relspace/osalg.hpp"
#include "relspace/rational.hpp"
#include "relspace/relalg.hpp"
#include "relspace/zonotope.hpp"

namespace {

using nlohmann::ordered_json;
using namespace relspace;

constexpr const char* kVersion = "0.1.0";
constexpr const char* kFaceCapVar = "RELSPACE_FACE_CAP";
constexpr const char* kSliceCapVar = "RELSPACE_SLICE_CAP";

/// Problems with the request itself (flags, files, parameters); these exit 2
/// without a report, in contrast to failed checks which exit 1 with one.
struct UsageError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

std::size_t env_cap(const char* name, std::size_t fallback) {
  const char* raw = std::getenv(name);
  if (!raw || !*raw) return fallback;
  try {
    std::string text(raw);
    std::size_t pos = 0;
    unsigned long long v = std::stoull(text, &pos);
    if (pos != text.size()) throw std::invalid_argument(text);
    return static_cast<std::size_t>(v);
  } catch (const std::exception&) {
    throw UsageError(std::string(name) + " must be a nonnegative integer");
  }
}

std::vector<Rational> parse_nodes(const std::string& s) {
  std::vector<Rational> nodes;
  std::stringstream in(s);
  std::string tok;
  while (std::getline(in, tok, ',')) {
    try {
      nodes.push_back(parse_rational(tok));
    } catch (const std::exception&) {
      throw UsageError("--nodes: cannot parse \"" + tok + "\" as a rational");
    }
  }
  if (nodes.empty()) throw UsageError("--nodes: empty list");
  return nodes;
}

ordered_json failures_json(const std::vector<CheckFailure>& fs) {
  ordered_json arr = ordered_json::array();
  for (const CheckFailure& f : fs) {
    ordered_json j;
    j["what"] = f.what;
    j["flats"] = f.flats;
    arr.push_back(std::move(j));
  }
  return arr;
}

ordered_json matrix_json(const QMatrix& m) {
  ordered_json rows = ordered_json::array();
  for (std::size_t r = 0; r < m.rows(); ++r) {
    ordered_json row = ordered_json::array();
    for (std::size_t c = 0; c < m.cols(); ++c) row.push_back(rational_str(m.at(r, c)));
    rows.push_back(std::move(row));
  }
  return rows;
}

ordered_json integers_json(const std::vector<Integer>& v) {
  ordered_json arr = ordered_json::array();
  for (const Integer& x : v) arr.push_back(x.str());
  return arr;
}

void write_json_file(const std::string& path, const ordered_json& j) {
  std::ofstream out(path);
  if (!out) throw UsageError("cannot open " + path + " for writing");
  out << j.dump(2) << "\n";
  if (!out) throw UsageError("failed while writing " + path);
}

/// Accumulates named pass/fail checks plus free-form data. Timing lives in
/// its own subobject at the end so reports from identical configurations
/// stay byte-identical everywhere else.
class Report {
 public:
  explicit Report(const std::string& command)
      : start_(std::chrono::steady_clock::now()) {
    root_["version"] = kVersion;
    root_["command"] = command;
    root_["config"] = ordered_json::object();
    root_["data"] = ordered_json::object();
    root_["checks"] = ordered_json::array();
  }

  ordered_json& config() { return root_["config"]; }
  ordered_json& data() { return root_["data"]; }

  void check(const std::string& name, bool pass, ordered_json witness = {}) {
    ordered_json c;
    c["name"] = name;
    c["pass"] = pass;
    if (!pass) c["witness"] = witness.is_null() ? ordered_json::object() : std::move(witness);
    root_["checks"].push_back(std::move(c));
    all_pass_ = all_pass_ && pass;
  }

  void check(const std::string& name, const CheckReport& r) {
    check(name, r.ok, ordered_json{{"failures", failures_json(r.failures)}});
  }

  void check(const std::string& name, const ExactnessReport& r) {
    ordered_json w;
    w["defect"] = r.defect;
    w["failures"] = failures_json(r.failures);
    check(name, r.ok, std::move(w));
  }

  bool all_pass() const { return all_pass_; }

  int finish(const std::string& path) {
    root_["ok"] = all_pass_;
    auto ms = std::chrono::duration_cast<std::chrono::milliseconds>(
                  std::chrono::steady_clock::now() - start_)
                  .count();
    root_["timing"] = ordered_json{{"total_ms", ms}};
    std::string text = root_.dump(2) + "\n";
    if (path.empty()) {
      std::cout << text;
    } else {
      std::ofstream out(path);
      if (!out) throw UsageError("cannot open " + path + " for writing");
      out << text;
      if (!out) throw UsageError("failed while writing " + path);
    }
    return all_pass_ ? 0 : 1;
  }

 private:
  ordered_json root_;
  bool all_pass_ = true;
  std::chrono::steady_clock::time_point start_;
};

struct SourceOpts {
  std::string family;
  int rank = 0;
  int m = -1;
  std::string input;
};

void add_source_options(CLI::App* cmd, SourceOpts& src) {
  cmd->add_option("--family", src.family, "Built-in family: A, B, D or Phi")
      ->check(CLI::IsMember({"A", "B", "D", "Phi"}));
  cmd->add_option("--rank,--n", src.rank, "Family parameter n");
  cmd->add_option("--m", src.m, "Number of coordinate hyperplanes (family Phi)");
  cmd->add_option("--input", src.input,
                  "Arrangement JSON file {\"dim\": d, \"normals\": [[..], ..]}");
}

Arrangement resolve_arrangement(const SourceOpts& src, ordered_json& config) {
  if (!src.family.empty() && !src.input.empty())
    throw UsageError("give either --family or --input, not both");
  if (!src.family.empty()) {
    if (src.rank < 1) throw UsageError("--family needs --rank >= 1");
    if (src.family == "Phi" && src.m < 0) throw UsageError("--family Phi needs --m");
    int m = src.m < 0 ? 0 : src.m;
    config["family"] = src.family;
    config["rank"] = src.rank;
    if (src.family == "Phi") config["m"] = m;
    try {
      return coxeter_family(src.family, src.rank, m);
    } catch (const std::invalid_argument& e) {
      throw UsageError(e.what());
    }
  }
  if (src.input.empty()) throw UsageError("one of --family or --input is required");
  config["input"] = src.input;
  try {
    return load_arrangement(src.input);
  } catch (const std::exception& e) {
    throw UsageError(e.what());
  }
}

struct SectionSetup {
  Arrangement arr;
  ArrLattice lat;
  GradedComplex complex;
  CompatibleSection section;
};

/// A, B and D take the reflection section in their defining coordinates.
/// Phi with 0 < m < n is realized as the restriction of D_{n+m} to the flat
/// collapsing the first m coordinate pairs; the section induced from the
/// ambient reflection section stays compatible there.
SectionSetup family_section_setup(const std::string& family, int n, int m) {
  SectionSetup s;
  if (family == "Phi" && m > 0 && m < n) {
    Arrangement big = coxeter_family("D", n + m);
    ArrLattice bigl = build_lattice(big);
    std::vector<std::size_t> pair_atoms;
    for (int j = 0; j < m; ++j) {
      QVec want(big.dim, Rational(0));
      want[2 * static_cast<std::size_t>(j)] = 1;
      want[2 * static_cast<std::size_t>(j) + 1] = -1;
      std::size_t h = 0;
      while (h < big.size() && big.normals[h] != want) ++h;
      if (h == big.size()) throw std::logic_error("family_section_setup: missing pair normal");
      pair_atoms.push_back(h);
    }
    FlatId x = bigl.lat.join_of_atoms(AtomSet::of(bigl.lat.n_atoms, pair_atoms));
    Restriction r = restrict_to(big, bigl, x);
    s.arr = r.arr;
    s.arr.name = "Phi" + std::to_string(n) + "_" + std::to_string(m);
    s.lat = build_lattice(s.arr);
    s.complex = relation_complex(s.arr, s.lat);
    s.section = restricted_section(big, r);
    return s;
  }
  std::string fam = family;
  if (family == "Phi") fam = m == n ? "B" : "D";
  s.arr = coxeter_family(fam, n);
  s.lat = build_lattice(s.arr);
  s.complex = relation_complex(s.arr, s.lat);
  s.section = coxeter_section(s.arr);
  return s;
}

ordered_json strata_json(const GeomLattice& L) {
  ordered_json arr = ordered_json::array();
  for (int r = 0; r <= L.top_rank; ++r) arr.push_back(L.flats_of_rank(r).size());
  return arr;
}

// ---------------------------------------------------------------- lattice

struct LatticeOpts {
  SourceOpts src;
  std::string report, dump;
};

int run_lattice(const LatticeOpts& o) {
  Report rep("lattice");
  Arrangement a = resolve_arrangement(o.src, rep.config());
  ArrLattice L = build_lattice(a);
  rep.data()["dim"] = a.dim;
  rep.data()["hyperplanes"] = a.size();
  rep.data()["essential"] = is_essential(a);
  rep.data()["flats"] = L.lat.size();
  rep.data()["top_rank"] = L.lat.top_rank;
  rep.data()["strata"] = strata_json(L.lat);
  std::vector<Integer> mu = moebius_from_bottom(L.lat);
  rep.data()["moebius"] = integers_json(mu);
  std::string witness;
  bool semi = is_semimodular(L.lat, &witness);
  rep.check("semimodular", semi, ordered_json{{"what", witness}});
  if (!o.dump.empty()) {
    ordered_json d;
    d["n_atoms"] = L.lat.n_atoms;
    ordered_json elems = ordered_json::array();
    for (FlatId x = 0; x < L.lat.size(); ++x) {
      ordered_json e;
      e["id"] = x;
      e["rank"] = L.lat.rank[x];
      e["atoms"] = L.lat.atoms_below(x);
      e["upper"] = L.lat.upper_covers[x];
      e["lower"] = L.lat.lower_covers[x];
      elems.push_back(std::move(e));
    }
    d["elements"] = std::move(elems);
    write_json_file(o.dump, d);
  }
  return rep.finish(o.report);
}

// ------------------------------------------------------- relation-complex

struct ComplexOpts {
  SourceOpts src;
  std::string report, dump;
};

bool composites_vanish(const GradedComplex& C) {
  for (int i = 2; i <= C.lat.top_rank; ++i)
    if (!C.degree_boundary(i - 1).mul(C.degree_boundary(i)).is_zero()) return false;
  return true;
}

int run_relation_complex(const ComplexOpts& o) {
  Report rep("relation-complex");
  Arrangement a = resolve_arrangement(o.src, rep.config());
  ArrLattice L = build_lattice(a);
  GradedComplex V = relation_complex(a, L);
  rep.data()["dims"] = V.dim;
  ordered_json by_rank = ordered_json::array();
  for (int i = 0; i <= L.lat.top_rank; ++i) by_rank.push_back(V.degree_dim(i));
  rep.data()["degree_dims"] = std::move(by_rank);
  rep.check("boundary-composites-zero", composites_vanish(V));
  rep.check("exact", check_exactness(V));
  if (!o.dump.empty()) {
    ordered_json d;
    d["dims"] = V.dim;
    ordered_json flats = ordered_json::array();
    for (FlatId x = 0; x < L.lat.size(); ++x) {
      ordered_json e;
      e["id"] = x;
      e["rank"] = L.lat.rank[x];
      e["dim"] = V.dim[x];
      e["lower"] = L.lat.lower_covers[x];
      ordered_json blocks = ordered_json::array();
      for (FlatId y : L.lat.lower_covers[x]) {
        auto it = V.block.find({x, y});
        if (it == V.block.end()) continue;
        ordered_json b;
        b["to"] = y;
        b["matrix"] = matrix_json(it->second);
        blocks.push_back(std::move(b));
      }
      e["boundary"] = std::move(blocks);
      flats.push_back(std::move(e));
    }
    d["flats"] = std::move(flats);
    write_json_file(o.dump, d);
  }
  return rep.finish(o.report);
}

// ------------------------------------------------------- verify-formality

int run_verify_formality(const ComplexOpts& o) {
  Report rep("verify-formality");
  Arrangement a = resolve_arrangement(o.src, rep.config());
  ArrLattice L = build_lattice(a);
  GradedComplex V = relation_complex(a, L);
  rep.data()["dims"] = V.dim;
  ordered_json hom = ordered_json::array();
  for (FlatId x = 0; x < L.lat.size(); ++x) {
    if (L.lat.rank[x] < 2) continue;
    ExactnessReport er = check_exactness(sub_complex(V, x));
    ordered_json e;
    e["flat"] = x;
    e["rank"] = L.lat.rank[x];
    e["defect"] = er.defect;
    hom.push_back(std::move(e));
  }
  rep.data()["interval_homology"] = std::move(hom);
  rep.check("boundary-composites-zero", composites_vanish(V));
  rep.check("complex-exact", check_exactness(V));
  rep.check("lower-intervals-acyclic", check_l_contractible(V));
  return rep.finish(o.report);
}

// --------------------------------------------------------------- homotopy

struct HomotopyOpts {
  SourceOpts src;
  std::string section = "reflection";
  std::string report, dump;
};

int run_homotopy(const HomotopyOpts& o) {
  Report rep("homotopy");
  SectionSetup fs;
  if (!o.src.family.empty() && o.src.input.empty()) {
    if (o.src.rank < 1) throw UsageError("--family needs --rank >= 1");
    if (o.src.family == "Phi" && o.src.m < 0) throw UsageError("--family Phi needs --m");
    try {
      fs = family_section_setup(o.src.family, o.src.rank, o.src.m < 0 ? 0 : o.src.m);
    } catch (const std::invalid_argument& e) {
      throw UsageError(e.what());
    }
    rep.config()["family"] = o.src.family;
    rep.config()["rank"] = o.src.rank;
    if (o.src.family == "Phi") rep.config()["m"] = o.src.m;
  } else {
    fs.arr = resolve_arrangement(o.src, rep.config());
    fs.lat = build_lattice(fs.arr);
    fs.complex = relation_complex(fs.arr, fs.lat);
    fs.section = o.section == "rank2" ? rank2_section(fs.arr) : coxeter_section(fs.arr);
  }
  rep.config()["section"] = o.src.family == "Phi" && o.src.m > 0 && o.src.m < o.src.rank
                                ? "restricted"
                                : o.section;
  CheckReport sec = verify_section(fs.lat.lat, fs.section);
  rep.check("section-compatible", sec);
  ordered_json h = ordered_json::object();
  for (const auto& [x, v] : fs.section.h) h[std::to_string(x)] = rational_str(v);
  rep.data()["h"] = std::move(h);
  auto built = build_homotopy(fs.complex, fs.section);
  if (const CheckFailure* f = std::get_if<CheckFailure>(&built)) {
    rep.check("homotopy-built", false,
              ordered_json{{"what", f->what}, {"flats", f->flats}});
    return rep.finish(o.report);
  }
  const LHomotopy& H = std::get<LHomotopy>(built);
  rep.check("homotopy-built", true);
  rep.check("contracts-all-intervals", verify_homotopy_all(fs.complex, H));
  if (sec.ok) rep.check("coxeter-number-identity", coxeter_number_identity(fs.lat.lat, fs.section));
  if (!o.dump.empty()) {
    ordered_json d;
    d["support"] = H.support == HomotopySupport::indecomposables ? "indecomposables" : "all_covers";
    d["canonical"] = H.canonical;
    ordered_json blocks = ordered_json::array();
    for (const auto& [key, m] : H.block) {
      ordered_json b;
      b["from"] = key.first;
      b["to"] = key.second;
      b["matrix"] = matrix_json(m);
      blocks.push_back(std::move(b));
    }
    d["blocks"] = std::move(blocks);
    ordered_json hh = ordered_json::object();
    for (const auto& [x, v] : H.h) hh[std::to_string(x)] = rational_str(v);
    d["h"] = std::move(hh);
    write_json_file(o.dump, d);
  }
  return rep.finish(o.report);
}

// ----------------------------------------------------------- appendix-check

struct AppendixOpts {
  std::string family;
  int rank = 0;
  int m = 0;
  std::string report;
};

int run_appendix(const AppendixOpts& o) {
  Report rep("appendix-check");
  if (o.family.empty() || o.rank < 1) throw UsageError("appendix-check needs --family and --rank");
  rep.config()["family"] = o.family;
  rep.config()["rank"] = o.rank;
  if (o.family == "Phi") rep.config()["m"] = o.m;
  ClosedFormComplex c;
  try {
    c = closed_form_complex(o.family, o.rank, o.m);
  } catch (const std::invalid_argument& e) {
    throw UsageError(e.what());
  }
  rep.data()["flats"] = c.lattice.lat.size();
  rep.data()["formula_dims"] = c.formula_dim;
  rep.data()["computed_dims"] = c.complex.dim;
  rep.check("closed-form", check_closed_form(c));
  return rep.finish(o.report);
}

// --------------------------------------------------------------- os-algebra

struct OsOpts {
  SourceOpts src;
  int max_deg = 3;
  int k = -1;
  std::uint64_t seed = 1;
  std::string report;
};

ordered_json degree_slices_json(const IdealComplexReport& r) {
  ordered_json arr = ordered_json::array();
  for (const DegreeSliceReport& d : r.degrees) {
    ordered_json e;
    e["degree"] = d.degree;
    e["dim"] = d.dim;
    e["exact"] = d.exactness.ok;
    e["defect"] = d.exactness.defect;
    e["euler"] = d.euler;
    e["euler_expected"] = d.euler_expected;
    arr.push_back(std::move(e));
  }
  return arr;
}

int run_os_algebra(const OsOpts& o) {
  Report rep("os-algebra");
  if (o.max_deg < 0) throw UsageError("--max-deg must be nonnegative");
  Arrangement a = resolve_arrangement(o.src, rep.config());
  rep.config()["max_deg"] = o.max_deg;
  std::size_t slice_cap = env_cap(kSliceCapVar, SuperAlgebraSlice::default_cap);
  if (o.k < 0) {
    ArrLattice L = build_lattice(a);
    GradedComplex V = relation_complex(a, L);
    IdealComplexReport r = defining_ideal_complex(a, V, o.max_deg);
    OsDimsReport os = generalized_os_dims(V, o.max_deg, slice_cap);
    rep.data()["degrees"] = degree_slices_json(r);
    rep.data()["os_dims"] = os.dim;
    rep.check("ideal-degreewise-exact", r.checks);
    rep.check("os-structure", os.checks);
    bool match = true;
    ordered_json mism = ordered_json::array();
    for (std::size_t d = 0; d < r.degrees.size() && d < os.dim.size(); ++d)
      if (os.dim[d] != r.degrees[d].dim) {
        match = false;
        mism.push_back(ordered_json{{"degree", r.degrees[d].degree},
                                    {"os", os.dim[d]},
                                    {"ideal", r.degrees[d].dim}});
      }
    rep.check("os-dims-match-ideal", match, ordered_json{{"mismatches", std::move(mism)}});
  } else {
    a = essentialize(a);
    ArrLattice L = build_lattice(a);
    GradedComplex V = relation_complex(a, L);
    rep.config()["k"] = o.k;
    rep.config()["seed"] = o.seed;
    if (o.k >= L.lat.top_rank) throw UsageError("--k must be below the arrangement rank");
    std::optional<Projection> pr = random_general_position(a, L, o.k, o.seed);
    if (!pr) throw UsageError("no general-position screen found; try another --seed");
    IdealComplexReport r = projected_ideal_complex(V, *pr, o.max_deg);
    rep.data()["projected_hyperplanes"] = pr->arr.size();
    rep.data()["degrees"] = degree_slices_json(r);
    rep.check("ideal-degreewise-exact", r.checks);
  }
  return rep.finish(o.report);
}

// ----------------------------------------------------------------- zonotope

struct ZonotopeOpts {
  SourceOpts src;
  std::string report, dump;
};

int run_zonotope(const ZonotopeOpts& o) {
  Report rep("zonotope");
  Arrangement a = essentialize(resolve_arrangement(o.src, rep.config()));
  ArrLattice L = build_lattice(a);
  std::size_t face_cap = env_cap(kFaceCapVar, default_face_cap);
  FaceLattice z = enumerate_faces(a, L, face_cap);
  rep.data()["counts"] = z.counts();
  rep.data()["top_dim"] = z.top_dim;
  rep.check("face-lattice", verify_face_lattice(z, a, L));
  rep.check("euler-poincare-exact", verify_ep(ep_complex(z)));
  if (!o.dump.empty()) write_json_file(o.dump, face_lattice_to_json(z));
  return rep.finish(o.report);
}

// ---------------------------------------------------------- relation-algebra

struct RelAlgOpts {
  SourceOpts src;
  int k = 1;
  std::string nodes;
  std::uint64_t seed = 1;
  int max_deg = -1;
  std::string report;
};

ordered_json modified_ep_json(const ModifiedEpReport& ep) {
  ordered_json arr = ordered_json::array();
  for (const ModifiedEpDegree& d : ep.degrees) {
    ordered_json e;
    e["degree"] = d.degree;
    e["dims"] = d.dims;
    ordered_json ex = ordered_json::array();
    for (char b : d.exact_at) ex.push_back(b != 0);
    e["exact_at"] = std::move(ex);
    e["euler_ok"] = d.euler_ok;
    e["anchor_ok"] = d.anchor_ok;
    arr.push_back(std::move(e));
  }
  return arr;
}

/// Shared by the relation-algebra subcommand and the suites: checks and
/// data tables for one computed relation algebra.
void report_relation_algebra(Report& rep, const std::string& tag, const Arrangement& a,
                             const ArrLattice& L, const GradedComplex& V,
                             const Projection& pr, int max_deg, std::size_t slice_cap,
                             std::size_t face_cap) {
  RelationAlgebra ra = build_relation_algebra(a, L, V, pr, max_deg, slice_cap, face_cap);
  ModifiedEpReport ep = modified_ep(ra, pr.lat);
  int bound = L.lat.top_rank - pr.k;
  GenerationReport gen = generation_check(ra.mod, bound);
  NumeratorReport num = hilbert_numerator(ra.mod.hilbert,
                                          static_cast<int>(ra.ring.generators_dim()));
  std::string p = tag.empty() ? std::string() : tag + ":";
  if (!tag.empty()) rep.data()[tag] = ordered_json::object();
  ordered_json& d = tag.empty() ? rep.data() : rep.data()[tag];
  d["hilbert"] = ra.mod.hilbert;
  d["generation"] = ra.mod.generation;
  d["generation_bound"] = bound;
  ordered_json numerator;
  numerator["power"] = num.power;
  numerator["coeffs"] = integers_json(num.coeffs);
  numerator["certified_through_degree"] = num.coeffs.empty() ? -1 : static_cast<int>(num.coeffs.size()) - 1;
  d["numerator"] = std::move(numerator);
  d["flags"] = ordered_json{{"free_witness_negative", num.has_negative}};
  d["modified_ep"] = modified_ep_json(ep);
  ordered_json ep_fail = ordered_json::array();
  for (const ModifiedEpDegree& deg : ep.degrees)
    for (const CheckFailure& f : deg.exactness.failures) ep_fail.push_back(f.what);
  rep.check(p + "modified-ep-exact", ep.ok(), ordered_json{{"failures", std::move(ep_fail)}});
  rep.check(p + "generation-vanishes-above-bound", gen.ok,
            ordered_json{{"bound", gen.bound}, {"generation", gen.generation}});
  if (pr.k == 1) {
    PiecewiseReport pw = piecewise_linear_check(a, L, V, pr, slice_cap, face_cap);
    d["piecewise"] = ordered_json{{"dim_lambda", pw.dim_lambda},
                                  {"dim_u", pw.dim_u},
                                  {"dim_m1", pw.dim_m1}};
    rep.check(p + "piecewise-degree-one", pw.ok,
              ordered_json{{"dim_lambda", pw.dim_lambda},
                           {"dim_u", pw.dim_u},
                           {"dim_m1", pw.dim_m1}});
  }
}

int run_relation_algebra(const RelAlgOpts& o) {
  Report rep("relation-algebra");
  if (o.k < 0) throw UsageError("--k must be nonnegative");
  std::size_t slice_cap = env_cap(kSliceCapVar, default_slice_cap);
  std::size_t face_cap = env_cap(kFaceCapVar, default_face_cap);
  Arrangement a;
  ArrLattice L;
  GradedComplex V;
  std::optional<Projection> pr;
  if (!o.nodes.empty()) {
    if (o.src.family != "A")
      throw UsageError("--nodes picks the Vandermonde screen and needs --family A");
    if (o.src.rank < 1) throw UsageError("--family needs --rank >= 1");
    std::vector<Rational> nodes = parse_nodes(o.nodes);
    if (nodes.size() != static_cast<std::size_t>(o.src.rank) + 1)
      throw UsageError("--nodes needs rank + 1 values");
    rep.config()["family"] = "A";
    rep.config()["rank"] = o.src.rank;
    rep.config()["nodes"] = o.nodes;
    BraidSetup bs;
    try {
      bs = braid_vandermonde(o.src.rank + 1, o.k, nodes);
    } catch (const std::runtime_error& e) {
      throw UsageError(e.what());
    }
    a = std::move(bs.arr);
    L = std::move(bs.lat);
    V = std::move(bs.complex);
    pr = std::move(bs.proj);
  } else {
    a = essentialize(resolve_arrangement(o.src, rep.config()));
    L = build_lattice(a);
    V = relation_complex(a, L);
    rep.config()["seed"] = o.seed;
    if (o.k >= L.lat.top_rank) throw UsageError("--k must be below the arrangement rank");
    pr = random_general_position(a, L, o.k, o.seed);
    if (!pr) throw UsageError("no general-position screen found; try another --seed");
  }
  rep.config()["k"] = o.k;
  int max_deg = o.max_deg >= 0 ? o.max_deg : L.lat.top_rank - o.k + 2;
  rep.config()["max_deg"] = max_deg;
  report_relation_algebra(rep, "", a, L, V, *pr, max_deg, slice_cap, face_cap);
  return rep.finish(o.report);
}

// ------------------------------------------------------------------- bruhat

struct BruhatOpts {
  int n = 0;
  int k = 0;
  std::string nodes;
  int max_deg = -1;
  std::string report;
};

int run_bruhat(const BruhatOpts& o) {
  Report rep("bruhat");
  if (o.n < 2) throw UsageError("bruhat needs --n >= 2");
  if (o.k < 0 || o.k > o.n - 2) throw UsageError("bruhat needs 0 <= k <= n - 2");
  std::vector<Rational> nodes;
  if (o.nodes.empty()) {
    for (int i = 1; i <= o.n; ++i) nodes.push_back(Rational(i));
  } else {
    nodes = parse_nodes(o.nodes);
    if (nodes.size() != static_cast<std::size_t>(o.n)) throw UsageError("--nodes needs n values");
  }
  rep.config()["n"] = o.n;
  rep.config()["k"] = o.k;
  ordered_json njson = ordered_json::array();
  for (const Rational& t : nodes) njson.push_back(rational_str(t));
  rep.config()["nodes"] = std::move(njson);
  std::size_t face_cap = env_cap(kFaceCapVar, default_face_cap);
  BruhatData bd;
  try {
    bd = bruhat_data(o.n, o.k, nodes, face_cap);
  } catch (const std::invalid_argument& e) {
    throw UsageError(e.what());
  }
  rep.data()["k1_sets"] = bd.sets_k1.size();
  rep.data()["k2_sets"] = bd.sets_k2.size();
  rep.data()["members"] = bd.members.size();
  rep.data()["edges"] = bd.edges.size();
  ordered_json members = ordered_json::array();
  for (const auto& m : bd.members) members.push_back(m);
  rep.data()["member_sets"] = std::move(members);
  bool alpha_pos = true;
  for (const Rational& v : bd.alpha) alpha_pos = alpha_pos && v > 0;
  rep.check("alpha-positive", alpha_pos);
  if (o.k == 0) {
    std::size_t fact = 1;
    for (int i = 2; i <= o.n; ++i) fact *= static_cast<std::size_t>(i);
    rep.check("weak-order-count", bd.members.size() == fact,
              ordered_json{{"members", bd.members.size()}, {"expected", fact}});
  }
  if (o.max_deg >= 0) {
    std::size_t slice_cap = env_cap(kSliceCapVar, default_slice_cap);
    rep.config()["max_deg"] = o.max_deg;
    DegreewiseModule mod = bruhat_relation_algebra(bd, o.max_deg, slice_cap);
    rep.data()["hilbert"] = mod.hilbert;
    rep.data()["generation"] = mod.generation;
  }
  return rep.finish(o.report);
}

// -------------------------------------------------------------------- suite

void suite_coxeter(Report& rep) {
  struct Item {
    const char* tag;
    const char* family;
    int n, m;
  };
  const Item items[] = {{"A2", "A", 2, 0},      {"A3", "A", 3, 0},      {"A4", "A", 4, 0},
                        {"B2", "B", 2, 0},      {"B3", "B", 3, 0},      {"D3", "D", 3, 0},
                        {"D4", "D", 4, 0},      {"Phi3_1", "Phi", 3, 1}, {"Phi3_2", "Phi", 3, 2},
                        {"Phi4_2", "Phi", 4, 2}};
  ordered_json fam = ordered_json::object();
  for (const Item& it : items) {
    SectionSetup fs = family_section_setup(it.family, it.n, it.m);
    std::string tag = it.tag;
    fam[tag] = ordered_json{{"flats", fs.lat.lat.size()},
                            {"hyperplanes", fs.arr.size()}};
    rep.check(tag + ":exact", check_exactness(fs.complex));
    rep.check(tag + ":intervals-acyclic", check_l_contractible(fs.complex));
    CheckReport sec = verify_section(fs.lat.lat, fs.section);
    rep.check(tag + ":section", sec);
    auto built = build_homotopy(fs.complex, fs.section);
    if (const CheckFailure* f = std::get_if<CheckFailure>(&built)) {
      rep.check(tag + ":homotopy", false, ordered_json{{"what", f->what}, {"flats", f->flats}});
      continue;
    }
    rep.check(tag + ":homotopy", verify_homotopy_all(fs.complex, std::get<LHomotopy>(built)));
    if (sec.ok) rep.check(tag + ":coxeter-number", coxeter_number_identity(fs.lat.lat, fs.section));
  }
  rep.data()["families"] = std::move(fam);
}

void suite_zonotope(Report& rep) {
  std::size_t face_cap = env_cap(kFaceCapVar, default_face_cap);
  struct Item {
    const char* tag;
    const char* family;
    int n;
    std::vector<std::size_t> counts;
  };
  const Item items[] = {{"hexagon", "A", 2, {6, 6, 1}},
                        {"permutahedron", "A", 3, {24, 36, 14, 1}},
                        {"square_b2", "B", 2, {8, 8, 1}}};
  for (const Item& it : items) {
    Arrangement a = essentialize(coxeter_family(it.family, it.n));
    ArrLattice L = build_lattice(a);
    FaceLattice z = enumerate_faces(a, L, face_cap);
    std::string tag = it.tag;
    rep.data()[tag] = ordered_json{{"counts", z.counts()}};
    rep.check(tag + ":counts", z.counts() == it.counts,
              ordered_json{{"counts", z.counts()}, {"expected", it.counts}});
    rep.check(tag + ":face-lattice", verify_face_lattice(z, a, L));
    rep.check(tag + ":euler-poincare", verify_ep(ep_complex(z)));
  }
}

void suite_relalg(Report& rep) {
  std::size_t slice_cap = env_cap(kSliceCapVar, default_slice_cap);
  std::size_t face_cap = env_cap(kFaceCapVar, default_face_cap);
  {
    Arrangement a = essentialize(coxeter_family("A", 2));
    ArrLattice L = build_lattice(a);
    GradedComplex V = relation_complex(a, L);
    std::optional<Projection> pr = random_general_position(a, L, 0, 1);
    if (!pr) throw std::logic_error("suite relalg: no screen for the hexagon");
    report_relation_algebra(rep, "hexagon", a, L, V, *pr, 4, slice_cap, face_cap);
    const ordered_json& h = rep.data()["hexagon"]["hilbert"];
    rep.check("hexagon:hilbert", h == ordered_json({1, 6, 12, 18, 24}),
              ordered_json{{"hilbert", h}});
    const ordered_json& g = rep.data()["hexagon"]["generation"];
    rep.check("hexagon:generation", g == ordered_json({1, 4, 1, 0, 0}),
              ordered_json{{"generation", g}});
  }
  {
    bool detected = false;
    std::string what;
    try {
      braid_vandermonde(4, 1, {Rational(1), Rational(2), Rational(3), Rational(4)});
    } catch (const std::runtime_error& e) {
      detected = true;
      what = e.what();
    }
    rep.check("braid:equispaced-nodes-degenerate", detected, ordered_json{{"what", what}});
    rep.data()["degenerate_nodes"] = ordered_json{{"nodes", "1,2,3,4"}, {"what", what}};
  }
  {
    BraidSetup bs = braid_vandermonde(4, 1, {Rational(1), Rational(2), Rational(3), Rational(5)});
    report_relation_algebra(rep, "braid_a3_k1", bs.arr, bs.lat, bs.complex, bs.proj, 3,
                            slice_cap, face_cap);
    const ordered_json& h = rep.data()["braid_a3_k1"]["hilbert"];
    rep.check("braid_a3_k1:hilbert", h == ordered_json({1, 11, 54, 178}),
              ordered_json{{"hilbert", h}});
    rep.check("braid_a3_k1:free-witness-negative",
              rep.data()["braid_a3_k1"]["flags"]["free_witness_negative"] == true);
  }
}

void suite_bruhat(Report& rep) {
  std::size_t face_cap = env_cap(kFaceCapVar, default_face_cap);
  std::size_t slice_cap = env_cap(kSliceCapVar, default_slice_cap);
  const std::size_t expect_members[] = {6, 24, 120};
  const std::size_t expect_edges[] = {6, 36, 240};
  for (int n = 3; n <= 5; ++n) {
    std::vector<Rational> nodes;
    for (int i = 1; i <= n; ++i) nodes.push_back(Rational(i));
    BruhatData bd = bruhat_data(n, 0, nodes, face_cap);
    std::string tag = "weak_order_n" + std::to_string(n);
    rep.data()[tag] = ordered_json{{"members", bd.members.size()}, {"edges", bd.edges.size()}};
    rep.check(tag + ":members", bd.members.size() == expect_members[n - 3],
              ordered_json{{"members", bd.members.size()}});
    rep.check(tag + ":edges", bd.edges.size() == expect_edges[n - 3],
              ordered_json{{"edges", bd.edges.size()}});
  }
  std::vector<Rational> nodes4 = {Rational(1), Rational(2), Rational(3), Rational(4)};
  BruhatData bd = bruhat_data(4, 1, nodes4, face_cap);
  rep.data()["n4_k1"] = ordered_json{{"members", bd.members.size()}, {"edges", bd.edges.size()}};
  rep.check("n4_k1:members", bd.members.size() == 8,
            ordered_json{{"members", bd.members.size()}});
  DegreewiseModule comb = bruhat_relation_algebra(bd, 3, slice_cap);
  BraidSetup bs = braid_vandermonde(4, 1, {Rational(1), Rational(2), Rational(3), Rational(5)});
  RelationAlgebra geo = build_relation_algebra(bs.arr, bs.lat, bs.complex, bs.proj, 3,
                                               slice_cap, face_cap);
  rep.data()["n4_k1"]["hilbert_combinatorial"] = comb.hilbert;
  rep.data()["n4_k1"]["hilbert_geometric"] = geo.mod.hilbert;
  rep.check("n4_k1:pipelines-agree", comb.hilbert == geo.mod.hilbert,
            ordered_json{{"combinatorial", comb.hilbert}, {"geometric", geo.mod.hilbert}});
}

int run_suite(const std::string& name, const std::string& report) {
  Report rep("suite");
  rep.config()["suite"] = name;
  if (name == "coxeter" || name == "all") suite_coxeter(rep);
  if (name == "zonotope" || name == "all") suite_zonotope(rep);
  if (name == "relalg" || name == "all") suite_relalg(rep);
  if (name == "bruhat" || name == "all") suite_bruhat(rep);
  return rep.finish(report);
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{
      "relspace: exact rational verification of hyperplane arrangement\n"
      "invariants (intersection lattices, relation complexes, contracting\n"
      "homotopies, ideal complexes, zonotope face data, relation algebras).\n"
      "Environment overrides: RELSPACE_FACE_CAP caps face enumeration\n"
      "(default 100000), RELSPACE_SLICE_CAP caps polynomial slice\n"
      "coordinates (default 2000000 for relation algebras, 200000 for\n"
      "algebra slices)."};
  app.set_version_flag("--version", kVersion);
  app.require_subcommand(1);

  int rc = 0;

  LatticeOpts lat_o;
  auto* lat_cmd = app.add_subcommand("lattice", "Intersection lattice summary and dump");
  add_source_options(lat_cmd, lat_o.src);
  lat_cmd->add_option("--report", lat_o.report, "Report path (default stdout)");
  lat_cmd->add_option("--dump", lat_o.dump, "Write the full lattice to this JSON file");
  lat_cmd->callback([&] { rc = run_lattice(lat_o); });

  ComplexOpts rc_o;
  auto* rc_cmd = app.add_subcommand("relation-complex", "Build and check the relation complex");
  add_source_options(rc_cmd, rc_o.src);
  rc_cmd->add_option("--report", rc_o.report, "Report path (default stdout)");
  rc_cmd->add_option("--dump", rc_o.dump, "Write the complex with boundary blocks to this file");
  rc_cmd->callback([&] { rc = run_relation_complex(rc_o); });

  ComplexOpts vf_o;
  auto* vf_cmd = app.add_subcommand("verify-formality",
                                    "Check exactness of the relation complex on every interval");
  add_source_options(vf_cmd, vf_o.src);
  vf_cmd->add_option("--report", vf_o.report, "Report path (default stdout)");
  vf_cmd->callback([&] { rc = run_verify_formality(vf_o); });

  HomotopyOpts ho_o;
  auto* ho_cmd = app.add_subcommand("homotopy", "Build a compatible section and its homotopy");
  add_source_options(ho_cmd, ho_o.src);
  ho_cmd->add_option("--section", ho_o.section, "Section for --input runs: reflection or rank2")
      ->check(CLI::IsMember({"reflection", "rank2"}));
  ho_cmd->add_option("--report", ho_o.report, "Report path (default stdout)");
  ho_cmd->add_option("--dump", ho_o.dump, "Write the homotopy blocks to this JSON file");
  ho_cmd->callback([&] { rc = run_homotopy(ho_o); });

  AppendixOpts ap_o;
  auto* ap_cmd = app.add_subcommand("appendix-check",
                                    "Check the closed-form family complexes and homotopies");
  ap_cmd->add_option("--family", ap_o.family, "A, B, D or Phi")
      ->check(CLI::IsMember({"A", "B", "D", "Phi"}));
  ap_cmd->add_option("--rank,--n", ap_o.rank, "Family parameter n");
  ap_cmd->add_option("--m", ap_o.m, "Number of coordinate hyperplanes (family Phi)");
  ap_cmd->add_option("--report", ap_o.report, "Report path (default stdout)");
  ap_cmd->callback([&] { rc = run_appendix(ap_o); });

  OsOpts os_o;
  auto* os_cmd = app.add_subcommand("os-algebra",
                                    "Degreewise ideal complexes and algebra slice dimensions");
  add_source_options(os_cmd, os_o.src);
  os_cmd->add_option("--max-deg", os_o.max_deg, "Top polynomial degree (default 3)");
  os_cmd->add_option("--k", os_o.k, "Projection order; omit for the defining ideal");
  os_cmd->add_option("--seed", os_o.seed, "Seed for the random screen (default 1)");
  os_cmd->add_option("--report", os_o.report, "Report path (default stdout)");
  os_cmd->callback([&] { rc = run_os_algebra(os_o); });

  ZonotopeOpts zo_o;
  auto* zo_cmd = app.add_subcommand("zonotope", "Dual zonotope face lattice and its complex");
  add_source_options(zo_cmd, zo_o.src);
  zo_cmd->add_option("--report", zo_o.report, "Report path (default stdout)");
  zo_cmd->add_option("--dump", zo_o.dump, "Write the face lattice to this JSON file");
  zo_cmd->callback([&] { rc = run_zonotope(zo_o); });

  RelAlgOpts ra_o;
  auto* ra_cmd = app.add_subcommand("relation-algebra",
                                    "Degreewise relation algebra of a projection");
  add_source_options(ra_cmd, ra_o.src);
  ra_cmd->add_option("--k", ra_o.k, "Projection order (default 1)");
  ra_cmd->add_option("--nodes", ra_o.nodes,
                     "Vandermonde screen nodes t_1,..,t_{n+1} (family A only)");
  ra_cmd->add_option("--seed", ra_o.seed, "Seed for the random screen (default 1)");
  ra_cmd->add_option("--max-deg", ra_o.max_deg, "Top degree (default rank - k + 2)");
  ra_cmd->add_option("--report", ra_o.report, "Report path (default stdout)");
  ra_cmd->callback([&] { rc = run_relation_algebra(ra_o); });

  BruhatOpts br_o;
  auto* br_cmd = app.add_subcommand("bruhat", "Chamber fibration of the Vandermonde kernel");
  br_cmd->add_option("--n", br_o.n, "Number of nodes")->required();
  br_cmd->add_option("--k", br_o.k, "Order (0 <= k <= n - 2)");
  br_cmd->add_option("--nodes", br_o.nodes, "Nodes t_1,..,t_n (default 1..n)");
  br_cmd->add_option("--max-deg", br_o.max_deg,
                     "Also compute the member-graph module to this degree");
  br_cmd->add_option("--report", br_o.report, "Report path (default stdout)");
  br_cmd->callback([&] { rc = run_bruhat(br_o); });

  std::string suite_name;
  std::string suite_report;
  auto* su_cmd = app.add_subcommand("suite", "Run a named verification suite");
  su_cmd->add_option("name", suite_name, "coxeter, zonotope, relalg, bruhat or all")
      ->required()
      ->check(CLI::IsMember({"coxeter", "zonotope", "relalg", "bruhat", "all"}));
  su_cmd->add_option("--report", suite_report, "Report path (default stdout)");
  su_cmd->callback([&] { rc = run_suite(suite_name, suite_report); });

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    int code = app.exit(e);
    return code == 0 ? 0 : 2;
  } catch (const UsageError& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 2;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 2;
  }
  return rc;
}
