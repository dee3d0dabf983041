#include <CLI11.hpp>

#include <algorithm>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <numeric>
#include <sstream>
#include <string>
#include <thread>
#include <vector>

#include <nlohmann/json.hpp>

#include "segalis/complexes.hpp"
#include "segalis/error.hpp"
#include "segalis/generators.hpp"
#include "segalis/orientals.hpp"
#include "segalis/parallel.hpp"
#include "segalis/segal.hpp"
#include "segalis/serialize.hpp"
#include "segalis/triangulations.hpp"

namespace {

using namespace segalis;
using nlohmann::json;

enum class Format { Text, Json, Dot };

struct Config {
  int max_n = 8;
  int max_d = 4;
  int cutoff = 1;
  std::uint64_t seed = 1;
  int threads = 0;
  std::string format;  // empty: the command's default

  Format format_or(Format fallback) const {
    if (format == "json") return Format::Json;
    if (format == "dot") return Format::Dot;
    if (format == "text") return Format::Text;
    return fallback;
  }

  void guard(int n, int d) const {
    if (n > max_n) throw Error(ErrorCode::TooLarge, "n=" + std::to_string(n) + " exceeds --max-n " + std::to_string(max_n));
    if (d > max_d) throw Error(ErrorCode::TooLarge, "d=" + std::to_string(d) + " exceeds --max-d " + std::to_string(max_d));
  }
};

// Thrown for option combinations the parser cannot rule out on its own.
struct UsageError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

void print_json(const json& j) { std::cout << j.dump(2) << '\n'; }

std::string facet_string(const std::vector<Simplex>& facets) {
  std::string out = "<";
  for (std::size_t i = 0; i < facets.size(); ++i) out += (i ? "," : "") + facets[i].to_string();
  return out + ">";
}

json facet_json(const std::vector<Simplex>& facets) {
  json a = json::array();
  for (Simplex s : facets) a.push_back(s.vertices());
  return a;
}

Side parse_side(const std::string& s) { return s == "upper" ? Side::Upper : Side::Lower; }

json read_json_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw Error(ErrorCode::BadInput, "cannot read '" + path + "'");
  try {
    return json::parse(in);
  } catch (const json::exception& e) {
    throw Error(ErrorCode::BadInput, path + ": " + e.what());
  }
}

// ------------------------------------------------------------------ boundary

struct BoundaryArgs {
  int n = 0;
  int d = 0;
  std::string side = "lower";
};

int cmd_boundary(const Config& cfg, const BoundaryArgs& a) {
  cfg.guard(a.n, a.d);
  const Side side = parse_side(a.side);
  const Complex K = boundary_complex(a.n, a.d, side);
  switch (cfg.format_or(Format::Text)) {
    case Format::Json:
      print_json({{"n", a.n}, {"d", a.d}, {"side", a.side}, {"facets", facet_json(K.facets())}});
      break;
    case Format::Dot:
      throw UsageError("boundary has no dot output");
    case Format::Text:
      std::cout << K.to_string() << '\n';
      break;
  }
  return 0;
}

// ------------------------------------------------------------ triangulations

struct TriangulationArgs {
  int n = 0;
  int d = 0;
  std::string emit = "list";
};

int cmd_triangulations(const Config& cfg, const TriangulationArgs& a) {
  cfg.guard(a.n, a.d);
  const Format fmt = cfg.format_or(Format::Text);
  std::string emit = a.emit;
  if (fmt == Format::Dot && emit == "list") emit = "dot";
  const FlipGraph g = flip_graph(a.n, a.d);
  if (emit == "count") {
    if (fmt == Format::Json)
      print_json({{"n", a.n}, {"d", a.d}, {"count", g.nodes.size()}});
    else
      std::cout << g.nodes.size() << '\n';
  } else if (emit == "dot") {
    std::cout << flip_graph_dot(g);
  } else if (emit == "hasse") {
    std::cout << hasse_dot(g, stasheff_tamari_poset(g));
  } else if (fmt == Format::Json) {
    print_json(to_json(g));
  } else {
    std::cout << "C([" << a.n << "]," << a.d << "): " << g.nodes.size() << " triangulations, " << g.edges.size()
              << " flips, " << (g.connected() ? "connected" : "disconnected") << '\n';
    for (std::size_t i = 0; i < g.nodes.size(); ++i) std::cout << "T" << i << " " << facet_string(g.nodes[i].facets) << '\n';
    for (const auto& e : g.edges) std::cout << "T" << e.from << " -> T" << e.to << " flip " << e.flip.to_string() << '\n';
  }
  return 0;
}

// ----------------------------------------------------------------- oriental

struct OrientalArgs {
  int n = 0;
  int d = -1;
  std::string emit = "list";
  bool axioms = false;
};

int cmd_oriental(const Config& cfg, const OrientalArgs& a) {
  const Format fmt = cfg.format_or(Format::Text);
  if (a.axioms) {
    cfg.guard(a.n, a.n);
    const OmegaReport r = check_omega_axioms(a.n, a.n);
    if (fmt == Format::Json) {
      json j = to_json(r);
      j["pass"] = r.ok();
      print_json(j);
    } else if (r.ok()) {
      std::cout << "all axioms verified: " << r.cells << " cells, " << r.globularity_checks << " globularity, "
                << r.unit_checks << " unit, " << r.associativity_checks << " associativity, " << r.interchange_checks
                << " interchange checks\n";
    } else {
      std::cout << r.violations.size() << " violations\n";
      for (const auto& v : r.violations) std::cout << "  " << v << '\n';
    }
    return r.ok() ? 0 : 1;
  }
  if (a.d < 0) throw UsageError("oriental needs --d or --axioms");
  cfg.guard(a.n, a.d);
  const auto cs = cells(a.n, a.d);
  if (a.emit == "count") {
    if (fmt == Format::Json)
      print_json({{"n", a.n}, {"d", a.d}, {"count", cs.size()}});
    else
      std::cout << cs.size() << '\n';
  } else if (fmt == Format::Dot || a.emit == "dot") {
    std::cout << cells_dot(cs);
  } else if (fmt == Format::Json) {
    json list = json::array();
    for (const auto& c : cs) list.push_back(to_json(c));
    print_json({{"n", a.n}, {"d", a.d}, {"count", cs.size()}, {"cells", list}});
  } else {
    std::cout << cs.size() << " cells of dimension <= " << a.d << " on C([" << a.n << "]," << a.d << ")\n";
    for (const auto& c : cs) {
      std::cout << c.dim() << " " << c.complex().to_string();
      if (c.dim() > 0) std::cout << "  " << c.lower().to_string() << " => " << c.upper().to_string();
      std::cout << '\n';
    }
  }
  return 0;
}

// ---------------------------------------------------------------------- gen

std::vector<std::vector<int>> cyclic_table(int k) {
  std::vector<std::vector<int>> t(k, std::vector<int>(k));
  for (int a = 0; a < k; ++a)
    for (int b = 0; b < k; ++b) t[a][b] = (a + b) % k;
  return t;
}

// Permutations of {0..k-1} in lexicographic order, composed as (a b)(x) = a(b(x)).
std::vector<std::vector<int>> symmetric_table(int k) {
  std::vector<std::vector<int>> perms;
  std::vector<int> p(k);
  std::iota(p.begin(), p.end(), 0);
  do perms.push_back(p);
  while (std::next_permutation(p.begin(), p.end()));
  std::vector<std::vector<int>> t(perms.size(), std::vector<int>(perms.size()));
  for (std::size_t a = 0; a < perms.size(); ++a)
    for (std::size_t b = 0; b < perms.size(); ++b) {
      std::vector<int> c(k);
      for (int x = 0; x < k; ++x) c[x] = perms[a][perms[b][x]];
      t[a][b] = static_cast<int>(std::find(perms.begin(), perms.end(), c) - perms.begin());
    }
  return t;
}

struct GenArgs {
  std::string input;
  int n = -1;
  int cyclic = 0;
  int symmetric = 0;
  int disjoint = 2;
  int m = 1;
  int max_dim = 2;
  std::string field = "Q";
  int p = 2;
};

template <Backend B>
void print_sizes(const SimplicialObject<B>& X) {
  for (int n = 0; n <= X.truncation(); ++n) std::cout << "X_" << n << ": " << B::size(X.level(n)) << '\n';
}

int emit_object(const Config& cfg, const AnySimplicialObject& X) {
  if (cfg.format_or(Format::Json) == Format::Dot) throw UsageError("gen has no dot output");
  if (cfg.format_or(Format::Json) == Format::Json) {
    print_json(to_json(X));
    return 0;
  }
  const json j = to_json(X);
  std::cout << j["backend"].get<std::string>() << " simplicial object, truncation " << j["truncation"].get<int>() << '\n';
  std::visit([](const auto& x) { print_sizes(x); }, X);
  return 0;
}

int truncation_arg(const Config& cfg, const GenArgs& a, int fallback) {
  const int n = a.n < 0 ? fallback : a.n;
  cfg.guard(n, 0);
  return n;
}

int cmd_gen_nerve(const Config& cfg, const GenArgs& a) {
  const int N = truncation_arg(cfg, a, 4);
  FiniteCategory C;
  if (!a.input.empty())
    C = category_from_json(read_json_file(a.input));
  else if (a.symmetric > 0)
    C = FiniteCategory::monoid(symmetric_table(a.symmetric));
  else
    C = FiniteCategory::monoid(cyclic_table(a.cyclic > 0 ? a.cyclic : 2));
  if (a.symmetric > 4) throw Error(ErrorCode::TooLarge, "symmetric groups are limited to k <= 4");
  return emit_object(cfg, nerve_of_category(C, N));
}

int cmd_gen_pmonoid(const Config& cfg, const GenArgs& a) {
  const int N = truncation_arg(cfg, a, 4);
  const PartialMonoid M = a.input.empty() ? PartialMonoid::disjoint_union(a.disjoint) : partial_monoid_from_json(read_json_file(a.input));
  return emit_object(cfg, partial_monoid_object(M, N));
}

int cmd_gen_doldkan(const Config& cfg, const GenArgs& a) {
  const int N = truncation_arg(cfg, a, 4);
  const ChainComplex C = a.input.empty() ? random_chain_complex(cfg.seed, a.m, a.max_dim, Field::parse(a.field))
                                         : chain_complex_from_json(read_json_file(a.input));
  return emit_object(cfg, dold_kan_inverse(C, N));
}

int cmd_gen_sdot(const Config& cfg, const GenArgs& a) {
  const int N = truncation_arg(cfg, a, 3);
  return emit_object(cfg, s_construction(a.p, N, cfg.cutoff));
}

// -------------------------------------------------------------------- check

struct CheckArgs {
  std::string input;
  std::vector<int> lower;
  std::vector<int> upper;
  std::vector<int> pathspace;
  bool independence = false;
  bool dk = false;
  bool excision = false;
  int n = -1;
  int d = -1;
  int m = -1;
  int count = 10;
  int truncation = 5;
};

struct Sample {
  std::string name;
  AnySimplicialObject object;
};

struct CheckResult {
  std::string check;
  bool pass = false;
  std::string detail;  // first witness or a summary for text output
  json report;
};

std::string first_failure(const SegalReport& r) {
  for (const auto& l : r.levels)
    if (!l.iso) return "n=" + std::to_string(l.n) + (l.witness.empty() ? "" : ": " + l.witness);
  return {};
}

template <Backend B>
std::vector<CheckResult> run_checks(const SimplicialObject<B>& X, const CheckArgs& a) {
  std::vector<CheckResult> out;
  for (const auto& [sides, side] : {std::pair{&a.lower, Side::Lower}, std::pair{&a.upper, Side::Upper}})
    for (int d : *sides) {
      const SegalReport r = segal_report(X, d, side);
      out.push_back({r.condition(), r.holds(), first_failure(r), to_json(r)});
    }
  for (int d : a.pathspace) {
    const PathSpaceReport r = pathspace_report(X, d);
    std::string detail;
    for (const auto& c : r.claims)
      if (!c.agree()) detail = "criteria disagree: " + c.sides.front().first;
    out.push_back({"path-space criteria d=" + std::to_string(d), r.holds(), detail, to_json(r)});
  }
  if (a.independence) {
    const IndependenceReport r = check_triangulation_independence(X, a.n, a.d);
    std::string detail = std::to_string(r.triangulations.size()) + " triangulations, " + std::to_string(r.steps.size()) + " flip steps";
    for (const auto& s : r.steps)
      if (!s.iso_from || !s.iso_to) {
        detail += "; fails at flip " + s.flip.to_string() + (s.witness.empty() ? "" : ": " + s.witness);
        break;
      }
    out.push_back({"triangulation independence n=" + std::to_string(a.n) + " d=" + std::to_string(a.d), r.holds(), detail, to_json(r)});
  }
  if (a.excision) {
    const HigherExcisionReport r = check_higher_excision(X, a.d);
    std::size_t cartesian = 0;
    for (const auto& c : r.cubes) cartesian += c.cartesian;
    const std::string detail = r.segal.condition() + (r.segal.holds() ? " holds, " : " fails, ") + std::to_string(cartesian) + " of " +
                               std::to_string(r.cubes.size()) + " cubes Cartesian";
    out.push_back({"higher excision d=" + std::to_string(a.d), r.agree(), detail, to_json(r)});
  }
  if (a.dk) {
    if constexpr (std::is_same_v<B, Vect>) {
      const DoldKanReport r = dk_equivalence_report(X, a.m);
      const auto yn = [](bool b) { return b ? "yes" : "no"; };
      const std::string detail = std::string("2m-Segal ") + yn(r.segal()) + ", outer horns " + yn(r.horns()) + ", chains truncated " +
                                 yn(r.truncated_chains());
      out.push_back({"Dold-Kan equivalence m=" + std::to_string(a.m), r.agree(), detail, to_json(r)});
    } else {
      throw Error(ErrorCode::BadInput, "--dk needs a vect object");
    }
  }
  return out;
}

std::vector<Sample> builtin_samples(const Config& cfg, const CheckArgs& a) {
  std::vector<Sample> out;
  if (a.dk) {
    // random complexes in degrees <= 3; roughly half vanish above m
    for (int i = 0; i < a.count; ++i) {
      const std::uint64_t seed = cfg.seed + static_cast<std::uint64_t>(i);
      const int top = (i % 2 == 0) ? std::min(a.m, 3) : 3;
      out.push_back({"doldkan(seed=" + std::to_string(seed) + ", degrees<=" + std::to_string(top) + ")",
                     dold_kan_inverse(random_chain_complex(seed, top, 2), a.truncation)});
    }
    return out;
  }
  out.push_back({"nerve(S3)", nerve_of_category(FiniteCategory::monoid(symmetric_table(3)), a.truncation)});
  out.push_back({"pmonoid(disjoint 2)", partial_monoid_object(PartialMonoid::disjoint_union(2), a.truncation)});
  out.push_back({"doldkan(seed=" + std::to_string(cfg.seed) + ", degrees<=1)",
                 dold_kan_inverse(random_chain_complex(cfg.seed, 1, 2), a.truncation)});
  // not lower 3-Segal, so the excision equivalence is tested on both sides
  if (a.excision) out.push_back({"doldkan(degree 3)", dold_kan_inverse(ChainComplex::from_dims({0, 0, 0, 1}), a.truncation)});
  return out;
}

int cmd_check(const Config& cfg, CheckArgs a) {
  if (a.lower.empty() && a.upper.empty() && a.pathspace.empty() && !a.independence && !a.dk && !a.excision)
    throw UsageError("check needs at least one of --lower, --upper, --pathspace, --independence, --excision, --dk");
  if (a.independence && (a.n < 0 || a.d < 0)) throw UsageError("--independence needs --n and --d");
  if (a.excision && a.d < 0) throw UsageError("--excision needs --d");
  if (a.dk && a.m < 0) throw UsageError("--dk needs --m");
  if (a.n >= 0) cfg.guard(a.n, std::max(a.d, 0));
  for (int d : a.lower) cfg.guard(0, d);
  for (int d : a.upper) cfg.guard(0, d);
  if (a.d >= 0) cfg.guard(0, a.d);
  cfg.guard(a.truncation, 0);
  if (a.independence) a.truncation = std::max(a.truncation, a.n);
  if (a.excision) a.truncation = std::max(a.truncation, 2 * a.d);
  if (a.dk) a.truncation = std::max(a.truncation, 2 * a.m + 1);
  cfg.guard(a.truncation, 0);

  std::vector<Sample> samples;
  if (!a.input.empty())
    samples.push_back({std::filesystem::path(a.input).filename().string(), simplicial_object_from_json(read_json_file(a.input))});
  else
    samples = builtin_samples(cfg, a);

  bool all = true;
  json objects = json::array();
  std::ostringstream text;
  for (const auto& s : samples) {
    const auto results = std::visit([&](const auto& x) { return run_checks(x, a); }, s.object);
    json checks = json::array();
    text << s.name << " [" << backend_tag(s.object) << ", truncation " << truncation_of(s.object) << "]\n";
    for (const auto& r : results) {
      all = all && r.pass;
      checks.push_back({{"check", r.check}, {"pass", r.pass}, {"report", r.report}});
      text << "  " << r.check << ": " << (r.pass ? "pass" : "FAIL");
      if (!r.detail.empty()) text << " (" << r.detail << ")";
      text << '\n';
    }
    objects.push_back({{"name", s.name},
                       {"backend", std::string(backend_tag(s.object))},
                       {"truncation", truncation_of(s.object)},
                       {"checks", checks}});
  }
  switch (cfg.format_or(Format::Json)) {
    case Format::Json:
      print_json({{"objects", objects}, {"pass", all}});
      break;
    case Format::Dot:
      throw UsageError("check has no dot output");
    case Format::Text:
      std::cout << text.str() << "result: " << (all ? "pass" : "FAIL") << '\n';
      break;
  }
  return all ? 0 : 1;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Segal conditions on simplicial objects: boundaries, triangulations, orientals and checks"};
  app.require_subcommand(1);
  app.fallthrough();
  Config cfg;
  app.add_option("--format", cfg.format, "Output format")->check(CLI::IsMember({"json", "dot", "text"}));
  app.add_option("--seed", cfg.seed, "Seed for random instances")->capture_default_str();
  app.add_option("--max-n", cfg.max_n, "Largest n accepted")->check(CLI::PositiveNumber)->capture_default_str();
  app.add_option("--max-d", cfg.max_d, "Largest d accepted")->check(CLI::PositiveNumber)->capture_default_str();
  app.add_option("--cutoff", cfg.cutoff, "Ambient dimension for the S-construction")->check(CLI::PositiveNumber)->capture_default_str();
  app.add_option("--threads", cfg.threads, "Worker threads (0: hardware concurrency)")->check(CLI::NonNegativeNumber);

  BoundaryArgs ba;
  auto* boundary = app.add_subcommand("boundary", "Lower or upper boundary of the cyclic polytope C([n],d)");
  boundary->add_option("--n", ba.n)->required()->check(CLI::NonNegativeNumber);
  boundary->add_option("--d", ba.d)->required()->check(CLI::NonNegativeNumber);
  boundary->add_option("--side", ba.side)->check(CLI::IsMember({"lower", "upper"}))->capture_default_str();

  TriangulationArgs ta;
  auto* triangs = app.add_subcommand("triangulations", "Triangulations of C([n],d) and their flip graph");
  triangs->add_option("--n", ta.n)->required()->check(CLI::NonNegativeNumber);
  triangs->add_option("--d", ta.d)->required()->check(CLI::PositiveNumber);
  triangs->add_option("--emit", ta.emit)->check(CLI::IsMember({"list", "count", "dot", "hasse"}))->capture_default_str();

  OrientalArgs oa;
  auto* oriental = app.add_subcommand("oriental", "Cells of the oriental and its axioms");
  oriental->add_option("--n", oa.n)->required()->check(CLI::NonNegativeNumber);
  oriental->add_option("--d", oa.d)->check(CLI::NonNegativeNumber);
  oriental->add_option("--emit", oa.emit)->check(CLI::IsMember({"list", "count", "dot"}))->capture_default_str();
  oriental->add_flag("--axioms", oa.axioms, "Verify the omega-category axioms up to dimension n");

  GenArgs ga;
  auto* gen = app.add_subcommand("gen", "Generate a simplicial object as JSON");
  gen->require_subcommand(1);
  gen->fallthrough();
  auto* nerve = gen->add_subcommand("nerve", "Nerve of a finite category (default: cyclic group of order 2)");
  nerve->add_option("--input", ga.input, "Category JSON");
  nerve->add_option("--cyclic", ga.cyclic, "Cyclic group of this order")->check(CLI::Range(1, 12));
  nerve->add_option("--symmetric", ga.symmetric, "Symmetric group on this many letters")->check(CLI::Range(1, 4));
  auto* pmonoid = gen->add_subcommand("pmonoid", "Partial monoid object (default: disjoint union on {1,2})");
  pmonoid->add_option("--input", ga.input, "Partial monoid JSON");
  pmonoid->add_option("--disjoint", ga.disjoint, "Disjoint union on this many generators")->capture_default_str();
  auto* doldkan = gen->add_subcommand("doldkan", "Dold-Kan inverse of a chain complex (default: random)");
  doldkan->add_option("--input", ga.input, "Chain complex JSON");
  doldkan->add_option("--m", ga.m, "Top degree of the random complex")->check(CLI::Range(0, 3))->capture_default_str();
  doldkan->add_option("--max-dim", ga.max_dim, "Largest chain group")->check(CLI::Range(0, 3))->capture_default_str();
  doldkan->add_option("--field", ga.field, "Q or F<p>")->capture_default_str();
  auto* sdot = gen->add_subcommand("sdot", "Waldhausen S-construction of F_p-vector spaces of dimension <= cutoff");
  sdot->add_option("--p", ga.p)->capture_default_str();
  for (auto* sub : {nerve, pmonoid, doldkan, sdot}) {
    sub->add_option("--n", ga.n, "Truncation level")->check(CLI::NonNegativeNumber);
    sub->fallthrough();
  }

  CheckArgs ca;
  auto* check = app.add_subcommand("check", "Check Segal conditions and the equivalences between them");
  check->add_option("--input", ca.input, "Simplicial object JSON (default: built-in samples)");
  check->add_option("--lower", ca.lower, "Lower d-Segal for each given d");
  check->add_option("--upper", ca.upper, "Upper d-Segal for each given d");
  check->add_option("--pathspace", ca.pathspace, "Path-space criteria for each given d");
  check->add_flag("--independence", ca.independence, "X_n against every triangulation of C([n],d)");
  check->add_flag("--excision", ca.excision, "Lower (2d-1)-Segal against strongly biCartesian (d+1)-cubes");
  check->add_flag("--dk", ca.dk, "Dold-Kan: 2m-Segal, outer horns above m and chains vanishing above m");
  check->add_option("--n", ca.n)->check(CLI::NonNegativeNumber);
  check->add_option("--d", ca.d)->check(CLI::NonNegativeNumber);
  check->add_option("--m", ca.m)->check(CLI::NonNegativeNumber);
  check->add_option("--count", ca.count, "Random complexes for --dk without --input")->check(CLI::Range(1, 1000))->capture_default_str();
  check->add_option("--truncation", ca.truncation, "Truncation of built-in samples")->check(CLI::NonNegativeNumber)->capture_default_str();

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);
  } catch (const CLI::CallForAllHelp& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    app.exit(e);
    return 2;
  }

  set_thread_count(cfg.threads > 0 ? cfg.threads : static_cast<int>(std::max(1U, std::thread::hardware_concurrency())));
  try {
    if (*boundary) return cmd_boundary(cfg, ba);
    if (*triangs) return cmd_triangulations(cfg, ta);
    if (*oriental) return cmd_oriental(cfg, oa);
    if (*nerve) return cmd_gen_nerve(cfg, ga);
    if (*pmonoid) return cmd_gen_pmonoid(cfg, ga);
    if (*doldkan) return cmd_gen_doldkan(cfg, ga);
    if (*sdot) return cmd_gen_sdot(cfg, ga);
    if (*check) return cmd_check(cfg, ca);
  } catch (const Error& e) {
    std::cerr << "error: " << e.what() << '\n';
    return 2;
  } catch (const UsageError& e) {
    std::cerr << "usage: " << e.what() << '\n';
    return 2;
  }
  return 2;
}
