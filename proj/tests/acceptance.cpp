// Acceptance run: one PASS/FAIL line per criterion, each decided against an
// oracle that does not share code with the library path it checks.

#include <CLI11.hpp>

#include <algorithm>
#include <bit>
#include <chrono>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <functional>
#include <iomanip>
#include <iostream>
#include <map>
#include <mutex>
#include <regex>
#include <set>
#include <sstream>
#include <thread>

#include <sys/wait.h>

#include "segalis/complexes.hpp"
#include "segalis/generators.hpp"
#include "segalis/geometry.hpp"
#include "segalis/orientals.hpp"
#include "segalis/parallel.hpp"
#include "segalis/segal.hpp"
#include "segalis/triangulations.hpp"

using namespace segalis;

namespace {

struct Outcome {
  bool pass = true;
  std::string summary;
  std::vector<std::string> failures;

  void fail(std::string what) {
    std::lock_guard lock(mutex);
    pass = false;
    if (failures.size() < 5) failures.push_back(std::move(what));
  }
  std::mutex mutex;
};

std::string set_string(const std::vector<Simplex>& s) {
  std::vector<Simplex> sorted = s;
  std::sort(sorted.begin(), sorted.end());
  std::string out = "{";
  for (std::size_t i = 0; i < sorted.size(); ++i) out += (i ? "," : "") + sorted[i].to_string();
  return out + "}";
}

std::vector<Simplex> simplices(std::initializer_list<std::initializer_list<int>> xs) {
  std::vector<Simplex> out;
  for (auto x : xs) out.emplace_back(x);
  std::sort(out.begin(), out.end());
  return out;
}

std::vector<Simplex> sorted(std::vector<Simplex> s) {
  std::sort(s.begin(), s.end());
  return s;
}

// ------------------------------------------------------------------ 1 Gale

// nu(j) lies above the hyperplane through nu(I) iff j^d exceeds the value at j
// of the polynomial of degree < d interpolating t^d on I. Solved by exact
// Gaussian elimination on the Vandermonde system.
bool above_by_interpolation(const std::vector<int>& I, int j, int d) {
  std::vector<std::vector<Rational>> a(d, std::vector<Rational>(d + 1));
  for (int r = 0; r < d; ++r) {
    Rational power = 1;
    for (int c = 0; c < d; ++c) {
      a[r][c] = power;
      power *= I[r];
    }
    a[r][d] = power;
  }
  for (int c = 0; c < d; ++c) {
    int p = c;
    while (a[p][c] == 0) ++p;
    std::swap(a[p], a[c]);
    for (int r = 0; r < d; ++r) {
      if (r == c || a[r][c] == 0) continue;
      const Rational f = a[r][c] / a[c][c];
      for (int k = c; k <= d; ++k) a[r][k] -= f * a[c][k];
    }
  }
  Rational value = 0, power = 1, top = 1;
  for (int c = 0; c < d; ++c) {
    value += a[c][d] / a[c][c] * power;
    power *= j;
  }
  for (int c = 0; c < d; ++c) top *= j;
  return top > value;
}

void criterion_gale(Outcome& out) {
  long checked = 0;
  for (int d = 1; d <= 4; ++d)
    for (int n = d; n <= 8; ++n)
      for (Simplex I : subsets_of_size(n, d))
        for (int j = 0; j <= n; ++j) {
          if (I.contains(j)) continue;
          ++checked;
          const bool parity = gap_parity(I, j) == Parity::Even;
          const bool oracle = above_by_interpolation(I.vertices(), j, d);
          const bool geometric = side_of_hyperplane(I, moment_point(j, d)) == SideVerdict::Above;
          if (parity != oracle || parity != geometric)
            out.fail("I=" + I.to_string() + " j=" + std::to_string(j) + " d=" + std::to_string(d));
        }
  out.summary = std::to_string(checked) + " (I, gap) pairs for n <= 8, d <= 4";
}

// -------------------------------------------------------- 2 reference fixtures

void criterion_fixtures(Outcome& out) {
  int compared = 0;
  auto expect = [&](const std::vector<Simplex>& got, const std::vector<Simplex>& want, const std::string& what) {
    ++compared;
    if (sorted(got) != sorted(want)) out.fail(what + ": got " + set_string(got) + ", want " + set_string(want));
  };
  expect(segal_complex(4, 3, Side::Lower).facets(), simplices({{0, 1, 2, 3}, {1, 2, 3, 4}, {0, 1, 3, 4}}), "L([4],3)");
  expect(segal_complex(4, 3, Side::Upper).facets(), simplices({{0, 2, 3, 4}, {0, 1, 2, 4}}), "U([4],3)");
  for (int n = 2; n <= 8; ++n) {
    std::vector<Simplex> edges, fans;
    for (int i = 0; i < n; ++i) edges.push_back(Simplex{i, i + 1});
    for (int i = 1; i < n; ++i) fans.push_back(Simplex{0, i, i + 1});
    expect(segal_complex(n, 1, Side::Lower).facets(), edges, "L([" + std::to_string(n) + "],1)");
    expect(segal_complex(n, 1, Side::Upper).facets(), {Simplex{0, n}}, "U([" + std::to_string(n) + "],1)");
    if (n >= 3) expect(segal_complex(n, 2, Side::Lower).facets(), fans, "L([" + std::to_string(n) + "],2)");
  }
  out.summary = std::to_string(compared) + " facet lists matched exactly";
}

// ------------------------------------------------------------ 3 Rambau

void criterion_rambau(Outcome& out) {
  long relations = 0;
  for (int d = 1; d <= 4; ++d)
    for (int n = d + 1; n <= 8; ++n) {
      const auto all = subsets_of_size(n, d + 1);
      const std::size_t k = all.size();
      std::vector<std::vector<std::size_t>> succ(k);
      std::vector<int> indegree(k, 0);
      for (std::size_t a = 0; a < k; ++a)
        for (std::size_t b = 0; b < k; ++b)
          if (rambau_less(all[a], all[b], d)) {
            ++relations;
            succ[a].push_back(b);
            ++indegree[b];
            if (!epsilon_less(all[a], all[b], n))
              out.fail(all[a].to_string() + " < " + all[b].to_string() + " not extended (n=" + std::to_string(n) + ")");
          }
      // Kahn's algorithm consumes every vertex iff the digraph is acyclic
      std::vector<std::size_t> ready;
      for (std::size_t a = 0; a < k; ++a)
        if (indegree[a] == 0) ready.push_back(a);
      std::size_t seen = 0;
      while (!ready.empty()) {
        const std::size_t a = ready.back();
        ready.pop_back();
        ++seen;
        for (std::size_t b : succ[a])
          if (--indegree[b] == 0) ready.push_back(b);
      }
      if (seen != k) out.fail("cycle in the stacking order for n=" + std::to_string(n) + " d=" + std::to_string(d));
    }
  out.summary = std::to_string(relations) + " stacking relations for n <= 8, d <= 4; no cycles";
}

// ------------------------------------------------- 4 triangulation counts

std::size_t catalan(int k) {
  std::vector<std::size_t> c(k + 1, 0);
  c[0] = 1;
  for (int m = 1; m <= k; ++m)
    for (int i = 0; i < m; ++i) c[m] += c[i] * c[m - 1 - i];
  return c[k];
}

void criterion_triangulations(Outcome& out) {
  std::ostringstream counts;
  int graphs = 0;
  auto graph = [&](int n, int d) {
    FlipGraph g = flip_graph(n, d);
    ++graphs;
    if (!g.connected()) out.fail("flip graph of C([" + std::to_string(n) + "]," + std::to_string(d) + ") is disconnected");
    return g;
  };
  for (int n = 4; n <= 8; ++n) {
    const auto g = graph(n, 2);
    counts << (n > 4 ? ", " : "") << g.nodes.size();
    if (g.nodes.size() != catalan(n - 1))
      out.fail("C([" + std::to_string(n) + "],2): " + std::to_string(g.nodes.size()) + " != Catalan(" + std::to_string(n - 1) + ")");
  }
  for (int n = 2; n <= 8; ++n) {
    const auto g = graph(n, n - 1);
    if (g.nodes.size() != 2) out.fail("C([" + std::to_string(n) + "]," + std::to_string(n - 1) + ") has " + std::to_string(g.nodes.size()));
  }
  for (int n = 2; n <= 8; ++n) graph(n, 1);
  for (int n = 4; n <= 7; ++n) graph(n, 3);
  for (int n = 5; n <= 7; ++n) graph(n, 4);
  out.summary = "C([n],2) for n=4..8: " + counts.str() + "; " + std::to_string(graphs) + " flip graphs connected";
}

// ---------------------------------------------------------- 5 orientals

// Every nonempty downward-closed family of nonempty subsets of [n].
std::vector<Complex> all_subcomplexes(int n) {
  std::vector<std::uint32_t> subsets;
  for (std::uint32_t m = 1; m < (1U << (n + 1)); ++m) subsets.push_back(m);
  std::stable_sort(subsets.begin(), subsets.end(),
                   [](std::uint32_t a, std::uint32_t b) { return std::popcount(a) < std::popcount(b); });
  std::vector<Complex> out;
  std::set<std::uint32_t> chosen;
  std::function<void(std::size_t)> rec = [&](std::size_t i) {
    if (i == subsets.size()) {
      if (chosen.empty()) return;
      std::vector<Simplex> s;
      for (auto m : chosen) s.push_back(Simplex::from_mask(m));
      out.push_back(Complex::from_closed(s, n));
      return;
    }
    rec(i + 1);
    const std::uint32_t m = subsets[i];
    bool closed = true;
    if (std::popcount(m) > 1)
      for (std::uint32_t r = m; r && closed; r &= r - 1) closed = chosen.count(m & ~(r & -r)) > 0;
    if (closed) {
      chosen.insert(m);
      rec(i + 1);
      chosen.erase(m);
    }
  };
  rec(0);
  return out;
}

void criterion_orientals(Outcome& out) {
  std::size_t filtered = 0;
  for (int n = 0; n <= 4; ++n) {
    const auto all = all_subcomplexes(n);
    for (int d = 0; d <= n; ++d) {
      std::set<Complex> brute, generated;
      for (const auto& K : all)
        if (is_admissible(K, d)) brute.insert(K);
      for (const auto& c : cells(n, d)) generated.insert(c.complex());
      filtered += brute.size();
      if (brute != generated) out.fail("enumeration differs from filter for n=" + std::to_string(n) + " d=" + std::to_string(d));
    }
  }
  std::size_t axiom_checks = 0;
  for (int n = 1; n <= 4; ++n) {
    const OmegaReport r = check_omega_axioms(n, n);
    axiom_checks += r.globularity_checks + r.unit_checks + r.associativity_checks + r.interchange_checks;
    for (const auto& v : r.violations) out.fail("n=" + std::to_string(n) + ": " + v);
  }
  std::size_t round_trips = 0;
  for (int n = 1; n <= 5; ++n)
    for (int d = 1; d <= n; ++d)
      for (const auto& K : cells(n, d)) {
        ++round_trips;
        AdmissibleCell cur = K;
        while (cur.top_simplex_count() > 0) {
          const Excision ex = excise_top(cur);
          const auto [lower, upper] = hemisphere_facets(ex.top);
          bool ok = ex.rest.complex().unite(Complex::simplex(ex.top, n)) == cur.complex() && ex.rest.lower() == cur.lower();
          for (Simplex f : lower) ok = ok && ex.rest.upper().contains(f);
          if (!ok) out.fail("excision of " + ex.top.to_string() + " from " + cur.complex().to_string());
          cur = ex.rest;
        }
        const auto atoms = atomic_decomposition(K);
        if (atoms.size() != static_cast<std::size_t>(K.top_simplex_count())) out.fail("atom count of " + K.complex().to_string());
        if (atoms.empty()) continue;
        AdmissibleCell acc = atoms[0];
        for (std::size_t i = 1; i < atoms.size(); ++i) acc = compose(atoms[i], acc, d - 1);
        if (!(acc == K)) out.fail("decomposition of " + K.complex().to_string() + " does not recompose");
      }
  out.summary = std::to_string(filtered) + " admissible complexes (n <= 4) match the filter; " + std::to_string(axiom_checks) +
                " axiom instances (n <= 4); " + std::to_string(round_trips) + " cells round-trip";
}

// --------------------------------------------------------- instance pool

struct Instance {
  std::string name;
  SimplicialObject<Vect> X;
  ChainComplex C;
};

struct FinInstance {
  std::string name;
  SimplicialObject<FinSet> X;
};

constexpr int kPoolSize = 100;
constexpr int kPoolTruncation = 6;

std::vector<Instance> build_pool() {
  std::vector<Instance> pool;
  for (int i = 0; i < kPoolSize; ++i) {
    // top degrees cycle through 0..3 so every m sees both outcomes
    const auto seed = static_cast<std::uint64_t>(2000 + i);
    ChainComplex C = random_chain_complex(seed, i % 4, 3);
    pool.push_back({"doldkan(seed=" + std::to_string(seed) + ")", dold_kan_inverse(C, kPoolTruncation), std::move(C)});
  }
  return pool;
}

std::vector<std::vector<int>> symmetric_group_3() {
  std::vector<std::vector<int>> perms;
  std::vector<int> p{0, 1, 2};
  do perms.push_back(p);
  while (std::next_permutation(p.begin(), p.end()));
  std::vector<std::vector<int>> t(6, std::vector<int>(6));
  for (int a = 0; a < 6; ++a)
    for (int b = 0; b < 6; ++b) {
      std::vector<int> c(3);
      for (int x = 0; x < 3; ++x) c[x] = perms[a][perms[b][x]];
      t[a][b] = static_cast<int>(std::find(perms.begin(), perms.end(), c) - perms.begin());
    }
  return t;
}

std::vector<FinInstance> finite_fixtures() {
  return {
      {"nerve(S3)", nerve_of_category(FiniteCategory::monoid(symmetric_group_3()), 5)},
      {"nerve(0<1<2)", nerve_of_category(FiniteCategory::poset({{1, 1, 1}, {0, 1, 1}, {0, 0, 1}}), 5)},
      {"pmonoid(disjoint 2)", partial_monoid_object(PartialMonoid::disjoint_union(2), 5)},
      {"pmonoid(disjoint 3)", partial_monoid_object(PartialMonoid::disjoint_union(3), 4)},
  };
}

// Runs body on every pool instance and fixture, in parallel over instances.
template <class Body>
void for_all_instances(const std::vector<Instance>& pool, const std::vector<FinInstance>& fixtures, Body&& body) {
  parallel_for(pool.size() + fixtures.size(), [&](std::size_t i) {
    if (i < pool.size())
      body(pool[i].name, pool[i].X);
    else
      body(fixtures[i - pool.size()].name, fixtures[i - pool.size()].X);
  });
}

// ---------------------------------------------------------- 6 Dold-Kan

void criterion_dold_kan(Outcome& out, const std::vector<Instance>& pool) {
  std::atomic<int> reports{0}, positive{0};
  parallel_for(pool.size(), [&](std::size_t i) {
    const Instance& in = pool[i];
    const int top = in.C.max_nonzero_degree();
    // the normalized complex must recover C up to isomorphism
    const ChainComplex N = normalized_chains(in.X);
    if (!N.isomorphic(in.C)) out.fail(in.name + ": normalized chains differ from the generating complex");
    for (int m = 0; 2 * m + 1 <= kPoolTruncation; ++m) {
      const DoldKanReport r = dk_equivalence_report(in.X, m);
      ++reports;
      const bool truncated = top <= m;
      positive += truncated;
      if (!r.agree() || r.truncated_chains() != truncated || r.segal() != truncated)
        out.fail(in.name + " m=" + std::to_string(m) + ": segal " + std::to_string(r.segal()) + ", horns " +
                 std::to_string(r.horns()) + ", chains " + std::to_string(r.truncated_chains()) + ", top degree " + std::to_string(top));
    }
  });
  out.summary = std::to_string(pool.size()) + " complexes over Q (degrees <= 3, dims <= 3, truncation " + std::to_string(kPoolTruncation) +
                "); " + std::to_string(reports.load()) + " reports for m = 0..2, " + std::to_string(positive.load()) + " truncated";
}

// ---------------------------------------------------------- 7 interplay

template <Backend B>
struct SegalTable {
  const SimplicialObject<B>& X;
  std::map<std::pair<int, Side>, bool> memo;

  bool holds(int d, Side side) {
    auto key = std::pair{d, side};
    auto it = memo.find(key);
    if (it == memo.end()) it = memo.emplace(key, segal_report(X, d, side).holds()).first;
    return it->second;
  }
  bool both(int d) { return holds(d, Side::Lower) && holds(d, Side::Upper); }
};

void criterion_interplay(Outcome& out, const std::vector<Instance>& pool, const std::vector<FinInstance>& fixtures) {
  std::atomic<int> implications{0}, premises{0};
  for_all_instances(pool, fixtures, [&](const std::string& name, const auto& X) {
    using B = std::conditional_t<std::is_same_v<std::decay_t<decltype(X)>, SimplicialObject<Vect>>, Vect, FinSet>;
    SegalTable<B> t{X, {}};
    const int N = X.truncation();
    auto claim = [&](bool premise, bool conclusion, const std::string& what) {
      ++implications;
      premises += premise;
      if (premise && !conclusion) out.fail(name + ": " + what);
    };
    for (int d = 1; d + 1 <= N; ++d)
      claim(t.holds(d - 1, Side::Lower), t.both(d), "lower " + std::to_string(d - 1) + "-Segal but not " + std::to_string(d) + "-Segal");
    for (int d = 0; d <= 4; ++d)
      for (int k = d + 1; k <= std::min(5, N - 1); ++k)
        for (Side s : {Side::Lower, Side::Upper})
          claim(t.holds(d, s), t.both(k),
                std::string(s == Side::Lower ? "lower " : "upper ") + std::to_string(d) + "-Segal but not " + std::to_string(k) + "-Segal");
    for (int d = 1; d <= 3; ++d)
      for (int n = d + 1; n <= std::min(5, N); ++n) {
        const bool premise = t.both(d);
        claim(premise, premise && check_triangulation_independence(X, n, d).holds(),
              std::to_string(d) + "-Segal but X_" + std::to_string(n) + " differs from some X_T");
      }
  });
  out.summary = std::to_string(pool.size() + fixtures.size()) + " instances, " + std::to_string(implications.load()) +
                " implications, " + std::to_string(premises.load()) + " with true premise";
}

// ---------------------------------------------------------- 8 path spaces

void criterion_path_spaces(Outcome& out, const std::vector<Instance>& pool, const std::vector<FinInstance>& fixtures) {
  std::atomic<int> claims{0};
  for_all_instances(pool, fixtures, [&](const std::string& name, const auto& X) {
    for (int d = 1; d + 2 <= X.truncation(); ++d) {
      const PathSpaceReport r = pathspace_report(X, d);
      for (const auto& c : r.claims) {
        ++claims;
        if (!c.agree()) {
          std::string sides;
          for (const auto& [statement, verdict] : c.sides) sides += " " + statement + "=" + std::to_string(verdict);
          out.fail(name + " d=" + std::to_string(d) + ":" + sides);
        }
      }
    }
  });
  out.summary = std::to_string(claims.load()) + " equivalence claims on " + std::to_string(pool.size() + fixtures.size()) + " instances";
}

// ------------------------------------------------------- 9 higher excision

void criterion_higher_excision(Outcome& out, const std::vector<Instance>& pool, const std::vector<FinInstance>& fixtures) {
  const CubeInDelta reference{3,
                          {Simplex{1, 3}, Simplex{0, 1, 3}, Simplex{1, 2, 3}, Simplex{0, 1, 2, 3}, Simplex{1, 3, 4},
                           Simplex{0, 1, 3, 4}, Simplex{1, 2, 3, 4}, Simplex{0, 1, 2, 3, 4}}};
  const auto cubes3 = enumerate_strongly_bicartesian_cubes(3, 6);
  if (std::find(cubes3.begin(), cubes3.end(), reference) == cubes3.end()) out.fail("the 8-vertex cube is not enumerated");
  const std::size_t squares = enumerate_strongly_bicartesian_cubes(2, 5).size();
  std::atomic<int> segal_sides[2] = {0, 0};
  for_all_instances(pool, fixtures, [&](const std::string& name, const auto& X) {
    for (int d = 1; d <= 2; ++d) {
      const CubeGuards guards{3, d == 1 ? 5 : 6};
      const HigherExcisionReport r = check_higher_excision(X, d, guards);
      segal_sides[d - 1] += r.segal.holds();
      if (!r.agree()) out.fail(name + " d=" + std::to_string(d) + ": " + r.segal.condition() + "=" + std::to_string(r.segal.holds()));
    }
  });
  out.summary = std::to_string(squares) + " squares (n <= 5) and " + std::to_string(cubes3.size()) + " 3-cubes (n <= 6); " +
                std::to_string(pool.size() + fixtures.size()) + " instances, lower 1-/3-Segal on " + std::to_string(segal_sides[0].load()) +
                "/" + std::to_string(segal_sides[1].load()) + "; reference cube present";
}

// ------------------------------------------------------------ 10 thinness

void criterion_thinness(Outcome& out, const std::vector<Instance>& pool, const std::vector<FinInstance>& fixtures) {
  std::atomic<int> compared{0}, thin{0};
  for_all_instances(pool, fixtures, [&](const std::string& name, const auto& X) {
    using B = std::conditional_t<std::is_same_v<std::decay_t<decltype(X)>, SimplicialObject<Vect>>, Vect, FinSet>;
    for (int n = 1; n <= std::min(5, X.truncation()); ++n) {
      const Thinness t = thinness<B>(lambda_pullback_simplex(X, n), n);
      const bool lower = B::is_iso(segal_map(X, n, n - 1, Side::Lower)).iso;
      const bool upper = B::is_iso(segal_map(X, n, n - 1, Side::Upper)).iso;
      compared += 2;
      thin += t.lower_thin + t.upper_thin;
      if (t.lower_thin != lower || t.upper_thin != upper) out.fail(name + " n=" + std::to_string(n));
    }
  });
  out.summary = std::to_string(compared.load()) + " thinness verdicts, " + std::to_string(thin.load()) + " thin, all equal to the Segal maps";
}

// ------------------------------------------------------- 11 S-construction

void criterion_s_construction(Outcome& out) {
  const auto S = s_construction(2, 3, 1);
  std::string sizes;
  for (int n = 0; n <= 3; ++n) sizes += (n ? "," : "") + std::to_string(S.level(n).object_count());
  for (Side side : {Side::Lower, Side::Upper}) {
    const SegalReport r = segal_report(S, 2, side);
    if (!r.holds()) out.fail(r.condition() + " fails");
  }
  for (PathSide p : {PathSide::Initial, PathSide::Final}) {
    const SegalReport r = is_lower_d_segal(path_space(S, p), 1);
    if (!r.holds()) out.fail(std::string(p == PathSide::Initial ? "initial" : "final") + " path space is not lower 1-Segal");
  }
  out.summary = "F_2, D=1, n <= 3 (objects per level " + sizes + "): lower and upper 2-Segal; both path spaces lower 1-Segal";
}

// -------------------------------------------------------- 12 determinism

struct GoldenCase {
  std::string name;
  int rc = 0;
  std::string golden;
  std::string args;
};

std::vector<GoldenCase> read_cases(const std::string& path, const std::string& golden_dir, const std::string& fixture_dir) {
  std::ifstream in(path);
  if (!in) throw std::runtime_error("cannot read " + path);
  const std::regex line(R"(segalis_golden\((\S+) (\d+) (\S+) \"([^\"]*)\"\))");
  std::vector<GoldenCase> out;
  for (std::string s; std::getline(in, s);) {
    std::smatch m;
    if (!std::regex_search(s, m, line)) continue;
    std::string golden = std::regex_replace(m[3].str(), std::regex(R"(\$\{GOLDEN_DIR\})"), golden_dir);
    golden = std::regex_replace(golden, std::regex(R"(\$\{FIXTURE_DIR\})"), fixture_dir);
    out.push_back({m[1].str(), std::stoi(m[2].str()), golden, m[4].str()});
  }
  return out;
}

std::pair<int, std::string> run_command(const std::string& command) {
  FILE* p = popen(command.c_str(), "r");
  if (!p) throw std::runtime_error("cannot run " + command);
  std::string output;
  char buffer[4096];
  for (std::size_t got; (got = fread(buffer, 1, sizeof buffer, p)) > 0;) output.append(buffer, got);
  const int status = pclose(p);
  return {WIFEXITED(status) ? WEXITSTATUS(status) : -1, output};
}

void criterion_determinism(Outcome& out, const std::string& cli, const std::string& cases_file, const std::string& golden_dir,
                           const std::string& fixture_dir) {
  if (cli.empty()) {
    out.fail("no --cli given");
    return;
  }
  const auto cases = read_cases(cases_file, golden_dir, fixture_dir);
  if (cases.empty()) out.fail("no golden cases in " + cases_file);
  int runs = 0;
  for (const auto& c : cases) {
    std::ifstream g(c.golden, std::ios::binary);
    const std::string golden((std::istreambuf_iterator<char>(g)), std::istreambuf_iterator<char>());
    for (int threads : {1, 4, 1, 4}) {
      const auto [rc, output] =
          run_command("cd '" + fixture_dir + "' && '" + cli + "' " + c.args + " --threads " + std::to_string(threads) + " 2>/dev/null");
      ++runs;
      if (rc != c.rc || output != golden) out.fail(c.name + " with " + std::to_string(threads) + " threads");
    }
  }
  out.summary = std::to_string(cases.size()) + " golden files, " + std::to_string(runs) + " runs (threads 1 and 4, twice each)";
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Acceptance criteria"};
  std::string cli, cases, golden_dir, fixture_dir;
  std::vector<int> only;
  int threads = static_cast<int>(std::max(1U, std::thread::hardware_concurrency()));
  app.add_option("--cli", cli, "segalis binary for the determinism criterion");
  app.add_option("--cases", cases, "golden_cases.cmake");
  app.add_option("--golden-dir", golden_dir);
  app.add_option("--fixture-dir", fixture_dir);
  app.add_option("--only", only, "Run only these criteria");
  app.add_option("--threads", threads)->check(CLI::PositiveNumber);
  CLI11_PARSE(app, argc, argv);
  set_thread_count(threads);

  auto wanted = [&](int k) { return only.empty() || std::find(only.begin(), only.end(), k) != only.end(); };
  std::vector<Instance> pool;
  std::vector<FinInstance> fixtures;
  if (wanted(6) || wanted(7) || wanted(8) || wanted(9) || wanted(10)) {
    pool = build_pool();
    fixtures = finite_fixtures();
  }

  const std::vector<std::pair<std::string, std::function<void(Outcome&)>>> criteria = {
      {"Gale agreement", criterion_gale},
      {"reference fixtures", criterion_fixtures},
      {"Rambau's lemma", criterion_rambau},
      {"triangulation counts", criterion_triangulations},
      {"oriental soundness", criterion_orientals},
      {"Dold-Kan triple equivalence", [&](Outcome& o) { criterion_dold_kan(o, pool); }},
      {"interplay theorems", [&](Outcome& o) { criterion_interplay(o, pool, fixtures); }},
      {"path-space criteria", [&](Outcome& o) { criterion_path_spaces(o, pool, fixtures); }},
      {"higher excision", [&](Outcome& o) { criterion_higher_excision(o, pool, fixtures); }},
      {"thinness dictionary", [&](Outcome& o) { criterion_thinness(o, pool, fixtures); }},
      {"S-construction", criterion_s_construction},
      {"determinism", [&](Outcome& o) { criterion_determinism(o, cli, cases, golden_dir, fixture_dir); }},
  };

  bool all = true;
  for (std::size_t k = 0; k < criteria.size(); ++k) {
    const int id = static_cast<int>(k) + 1;
    if (!wanted(id)) continue;
    Outcome out;
    const auto start = std::chrono::steady_clock::now();
    try {
      criteria[k].second(out);
    } catch (const std::exception& e) {
      out.fail(std::string("exception: ") + e.what());
    }
    const double seconds = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
    all = all && out.pass;
    char timing[32];
    std::snprintf(timing, sizeof timing, "%.1f s", seconds);
    std::cout << (out.pass ? "PASS " : "FAIL ") << std::setw(2) << id << " " << criteria[k].first << ": " << out.summary << " ["
              << timing << "]\n";
    for (const auto& f : out.failures) std::cout << "        " << f << '\n';
    std::cout.flush();
  }
  return all ? 0 : 1;
}
