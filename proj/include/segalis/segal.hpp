#pragma once

#include <algorithm>
#include <bit>
#include <map>
#include <string>
#include <vector>

#include <nlohmann/json_fwd.hpp>

#include "segalis/backends.hpp"
#include "segalis/complexes.hpp"
#include "segalis/error.hpp"
#include "segalis/orientals.hpp"
#include "segalis/parallel.hpp"
#include "segalis/simplicial.hpp"
#include "segalis/triangulations.hpp"

namespace segalis {

struct LevelVerdict {
  int n = 0;
  bool iso = false;
  std::string witness;
};

/// Verdicts of the lower or upper d-Segal maps at every level d < n <= truncation.
struct SegalReport {
  Side side = Side::Lower;
  int d = 0;
  int truncation = 0;
  std::vector<LevelVerdict> levels;
  std::vector<std::string> notes;

  bool holds() const;
  /// "lower 2-Segal" and the like.
  std::string condition() const;
};

/// 𝓛([n],d) or 𝒰([n],d) as a complex on [n]. For d = 0 this is the vertex 0
/// (lower) or n (upper); for d = n the full simplex.
Complex segal_complex(int n, int d, Side side);

/// Canonical map X_n -> X_{𝓛([n],d)} (or 𝒰).
template <Backend B>
typename B::Morphism segal_map(const SimplicialObject<B>& X, int n, int d, Side side) {
  return X.limit_over(segal_complex(n, d, side))->canonical;
}

/// d >= 0; needs truncation >= d+1 (TruncationTooLow). Levels are checked in
/// parallel and reported in increasing n.
template <Backend B>
SegalReport segal_report(const SimplicialObject<B>& X, int d, Side side) {
  if (d < 0) throw Error(ErrorCode::BadInput, "Segal conditions need d >= 0");
  const int N = X.truncation();
  if (N < d + 1)
    throw Error(ErrorCode::TruncationTooLow,
                "checking d=" + std::to_string(d) + " needs truncation " + std::to_string(d + 1) + ", have " + std::to_string(N));
  SegalReport r{side, d, N, std::vector<LevelVerdict>(static_cast<std::size_t>(N - d)), {}};
  parallel_for(r.levels.size(), [&](std::size_t k) {
    const int n = d + 1 + static_cast<int>(k);
    const IsoVerdict v = B::is_iso(segal_map(X, n, d, side));
    r.levels[k] = {n, v.iso, v.witness};
  });
  return r;
}

template <Backend B>
SegalReport is_lower_d_segal(const SimplicialObject<B>& X, int d) {
  return segal_report(X, d, Side::Lower);
}
template <Backend B>
SegalReport is_upper_d_segal(const SimplicialObject<B>& X, int d) {
  return segal_report(X, d, Side::Upper);
}

/// Every face and degeneracy in range is an isomorphism (equivalence).
template <Backend B>
bool is_essentially_constant(const SimplicialObject<B>& X) {
  for (int n = 1; n <= X.truncation(); ++n)
    for (int i = 0; i <= n; ++i)
      if (!B::is_iso(X.face(n, i)).iso) return false;
  for (int n = 0; n < X.truncation(); ++n)
    for (int i = 0; i <= n; ++i)
      if (!B::is_iso(X.degeneracy(n, i)).iso) return false;
  return true;
}

// ------------------------------------------------ triangulation independence

struct TriangulationVerdict {
  std::vector<Simplex> facets;
  bool iso = false;
  std::string witness;
};

/// Along a flip edge T -> T' through I: both X_{T u I} -> X_T and
/// X_{T u I} -> X_{T'} must be isomorphisms.
struct FlipStepVerdict {
  std::size_t from = 0;
  std::size_t to = 0;
  Simplex flip;
  bool iso_from = false;
  bool iso_to = false;
  std::string witness;
};

struct IndependenceReport {
  int n = 0;
  int d = 0;
  std::vector<TriangulationVerdict> triangulations;  // flip-graph node order
  std::vector<FlipStepVerdict> steps;                // flip-graph edge order

  bool holds() const;
};

template <Backend B>
IndependenceReport check_triangulation_independence(const SimplicialObject<B>& X, int n, int d, const FlipGuards& guards = {}) {
  if (n > X.truncation()) throw Error(ErrorCode::TruncationTooLow, "triangulations of C([" + std::to_string(n) + "]," + std::to_string(d) + ") need level " + std::to_string(n));
  const FlipGraph g = flip_graph(n, d, guards);
  IndependenceReport r{n, d, std::vector<TriangulationVerdict>(g.nodes.size()), std::vector<FlipStepVerdict>(g.edges.size())};
  parallel_for(g.nodes.size(), [&](std::size_t t) {
    const auto& facets = g.nodes[t].facets;
    const IsoVerdict v = B::is_iso(X.limit_over(Complex::generated(facets, n))->canonical);
    r.triangulations[t] = {facets, v.iso, v.witness};
  });
  parallel_for(g.edges.size(), [&](std::size_t e) {
    const FlipEdge& edge = g.edges[e];
    const Complex from = Complex::generated(g.nodes[edge.from].facets, n);
    const Complex to = Complex::generated(g.nodes[edge.to].facets, n);
    const Complex both = from.unite(Complex::simplex(edge.flip, n));
    const IsoVerdict a = B::is_iso(limit_restriction(X, both, from));
    const IsoVerdict b = B::is_iso(limit_restriction(X, both, to));
    r.steps[e] = {edge.from, edge.to, edge.flip, a.iso, b.iso, a.iso ? b.witness : a.witness};
  });
  return r;
}

// --------------------------------------------------------------- excision

/// K = L u Δ^I with L ∩ Δ^I the lower hemisphere of I, I a top simplex of K
/// missing from L. Throws NotAnExcision otherwise.
void validate_excision(const AdmissibleCell& K, const AdmissibleCell& L, Simplex I);

struct ExcisionVerdict {
  Simplex top;
  bool iso = false;
  std::string witness;
};

/// Decides whether X_K -> X_L is an isomorphism by computing both limits.
template <Backend B>
ExcisionVerdict check_excision_step(const SimplicialObject<B>& X, const AdmissibleCell& K, const AdmissibleCell& L, Simplex I) {
  validate_excision(K, L, I);
  const IsoVerdict v = B::is_iso(limit_restriction(X, K.complex(), L.complex()));
  return {I, v.iso, v.witness};
}

/// Excises top simplices one at a time until a flat cell remains; one
/// verdict per step, in removal order.
template <Backend B>
std::vector<ExcisionVerdict> excision_chain(const SimplicialObject<B>& X, const AdmissibleCell& K) {
  std::vector<ExcisionVerdict> out;
  AdmissibleCell current = K;
  while (current.top_simplex_count() > 0) {
    Excision e = excise_top(current);
    out.push_back(check_excision_step(X, current, e.rest, e.top));
    current = std::move(e.rest);
  }
  return out;
}

// ------------------------------------------------------------ path spaces

struct PathSpaceClaim {
  std::vector<std::pair<std::string, bool>> sides;  // statement, verdict
  bool agree() const;
};

struct PathSpaceReport {
  int d = 0;
  std::vector<PathSpaceClaim> claims;
  bool holds() const;
};

/// Even d: lower d <=> initial path space lower (d-1), and upper d <=> final
/// path space lower (d-1). Odd d: upper d <=> initial upper (d-1) <=> final
/// lower (d-1). Needs d >= 1 and truncation >= d+2.
template <Backend B>
PathSpaceReport pathspace_report(const SimplicialObject<B>& X, int d) {
  if (d < 1) throw Error(ErrorCode::BadInput, "path-space criteria need d >= 1");
  if (X.truncation() < d + 2)
    throw Error(ErrorCode::TruncationTooLow, "path-space criteria for d=" + std::to_string(d) + " need truncation " + std::to_string(d + 2));
  const auto initial = path_space(X, PathSide::Initial);
  const auto final = path_space(X, PathSide::Final);
  const std::string dd = std::to_string(d), d1 = std::to_string(d - 1);
  PathSpaceReport r{d, {}};
  if (d % 2 == 0) {
    r.claims.push_back({{{"lower " + dd + "-Segal", is_lower_d_segal(X, d).holds()},
                         {"initial path space lower " + d1 + "-Segal", is_lower_d_segal(initial, d - 1).holds()}}});
    r.claims.push_back({{{"upper " + dd + "-Segal", is_upper_d_segal(X, d).holds()},
                         {"final path space lower " + d1 + "-Segal", is_lower_d_segal(final, d - 1).holds()}}});
  } else {
    r.claims.push_back({{{"upper " + dd + "-Segal", is_upper_d_segal(X, d).holds()},
                         {"initial path space upper " + d1 + "-Segal", is_upper_d_segal(initial, d - 1).holds()},
                         {"final path space lower " + d1 + "-Segal", is_lower_d_segal(final, d - 1).holds()}}});
  }
  return r;
}

// ------------------------------------------------------- outer horns, Dold-Kan

/// Λ_0^n (end = 0) or Λ_n^n (end = n): facets of Δ^n containing that vertex.
Complex outer_horn(int n, int end);

template <Backend B>
typename B::Morphism outer_horn_map(const SimplicialObject<B>& X, int n, int end) {
  if (n < 1) throw Error(ErrorCode::BadInput, "outer horns need n >= 1");
  return X.limit_over(outer_horn(n, end))->canonical;
}

struct DoldKanReport {
  int m = 0;
  int truncation = 0;
  SegalReport lower;
  SegalReport upper;
  std::vector<LevelVerdict> initial_horns;  // n = m+1..truncation
  std::vector<LevelVerdict> final_horns;
  std::vector<int> chain_dims;

  bool segal() const { return lower.holds() && upper.holds(); }
  bool horns() const;
  bool truncated_chains() const;
  bool agree() const { return segal() == horns() && horns() == truncated_chains(); }
};

/// (a) 2m-Segal, lower and upper; (b) outer horn maps iso for m < n <= N;
/// (c) normalized chains vanish above degree m.
DoldKanReport dk_equivalence_report(const SimplicialObject<Vect>& X, int m);

// ---------------------------------------------------------------- thinness

/// Nonempty subsets of [n] ordered by bit mask; the element order used by
/// `lambda_pullback_simplex` and `thinness`.
std::vector<Simplex> simplex_poset(int n);

/// The diagram I -> X_I over the nonempty subsets of [n], with a map X_I -> X_J
/// for each J ⊂ I.
template <Backend B>
PosetDiagram<B> lambda_pullback_simplex(const SimplicialObject<B>& X, int n) {
  if (n > X.truncation()) throw Error(ErrorCode::TruncationTooLow, "level " + std::to_string(n) + " is above the truncation");
  const auto el = simplex_poset(n);
  const int m = static_cast<int>(el.size());
  PosetDiagram<B> D;
  D.leq.assign(m, std::vector<char>(m, 0));
  for (int a = 0; a < m; ++a) {
    D.labels.push_back(el[a].to_string());
    D.values.push_back(X.on_subset(el[a]));
    for (int b = 0; b < m; ++b) D.leq[a][b] = el[a].is_subset_of(el[b]);
  }
  for (int a = 0; a < m; ++a)
    for (int b = 0; b < m; ++b)
      if (a != b && D.leq[a][b] && el[b].size() == el[a].size() + 1) D.maps.emplace(std::pair{a, b}, X.restriction(el[b], el[a]));
  return D;
}

struct Thinness {
  bool lower_thin = false;
  bool upper_thin = false;
  std::string lower_witness;
  std::string upper_witness;
};

namespace detail {
void check_simplex_poset(const std::vector<std::vector<char>>& leq, int n);
}

/// Tests the two legs x_[n] -> lim x|𝓛([n],n-1) and x_[n] -> lim x|𝒰([n],n-1).
template <Backend B>
Thinness thinness(const PosetDiagram<B>& x, int n) {
  if (n < 1) throw Error(ErrorCode::BadInput, "thinness needs n >= 1");
  detail::check_simplex_poset(x.leq, n);
  check_coherent<B>(x);
  const auto el = simplex_poset(n);
  const int top = static_cast<int>(el.size()) - 1;
  Along<B> along(x);
  auto leg = [&](Side side) {
    const Complex K = segal_complex(n, n - 1, side);
    std::vector<int> keep;
    for (int a = 0; a < top; ++a)
      if (K.contains(el[a])) keep.push_back(a);
    const auto sub = subdiagram<B>(x, keep);
    const auto lim = poset_limit<B>(sub, false);
    std::vector<typename B::Morphism> legs;
    for (int a : keep) legs.push_back(along(a, top));
    return B::is_iso(B::induced(lim, x.values[top], legs));
  };
  const IsoVerdict lo = leg(Side::Lower), up = leg(Side::Upper);
  return {lo.iso, up.iso, lo.witness, up.witness};
}

// ------------------------------------------------------------------ cubes

/// A cube of injections in Δ: vertex T (a subset of the k directions, as a
/// bit mask) carries the subset S_T of [m], S_full = [m], and the map
/// S_T -> S_T' for T ⊂ T' is the inclusion.
struct CubeInDelta {
  int k = 0;
  std::vector<Simplex> vertices;

  int top() const { return vertices.back().max(); }
  std::string to_string() const;
  bool operator==(const CubeInDelta&) const = default;
};

struct CubeGuards {
  int max_k = 3;
  int max_bound = 6;
};

/// Pullback of the inclusions a ⊂ top ⊃ b in Δ: base = a ∩ b, nonempty.
bool is_pullback_square(Simplex base, Simplex a, Simplex b, Simplex top);
/// Universal property against [m] for m <= test_bound: every pair of monotone
/// maps on a and b agreeing on base extends uniquely to top.
bool is_pushout_square(Simplex base, Simplex a, Simplex b, Simplex top, int test_bound);

/// All k-cubes of inclusions with non-identity directions, top [m] for
/// m <= n_bound, all of whose 2-faces are pullbacks and pushouts. Directions
/// are ordered by the masks of their increments, so each cube appears once.
/// Pushouts are tested against ordinals up to n_bound + 1.
std::vector<CubeInDelta> enumerate_strongly_bicartesian_cubes(int k, int n_bound, const CubeGuards& guards = {});

/// X(S_full) -> lim over the punctured cube of X(S_T).
template <Backend B>
IsoVerdict cube_is_cartesian(const SimplicialObject<B>& X, const CubeInDelta& c) {
  const int full = static_cast<int>(c.vertices.size()) - 1;
  PosetDiagram<B> D;
  D.leq.assign(full, std::vector<char>(full, 0));
  for (int a = 0; a < full; ++a) {
    D.labels.push_back(c.vertices[a].to_string());
    D.values.push_back(X.on_subset(c.vertices[a]));
    for (int b = 0; b < full; ++b) D.leq[a][b] = (a & ~b) == 0;
  }
  for (int a = 0; a < full; ++a)
    for (int b = 0; b < full; ++b)
      if ((a & ~b) == 0 && std::popcount(static_cast<unsigned>(b & ~a)) == 1)
        D.maps.emplace(std::pair{a, b}, X.restriction(c.vertices[b], c.vertices[a]));
  const auto lim = poset_limit<B>(D, false);
  std::vector<typename B::Morphism> legs;
  for (int a = 0; a < full; ++a) legs.push_back(X.restriction(c.vertices[full], c.vertices[a]));
  return B::is_iso(B::induced(lim, X.on_subset(c.vertices[full]), legs));
}

struct CubeVerdict {
  CubeInDelta cube;
  bool cartesian = false;
  std::string witness;
};

struct HigherExcisionReport {
  int d = 0;
  int bound = 0;
  SegalReport segal;  // lower (2d-1)-Segal
  std::vector<CubeVerdict> cubes;

  bool all_cartesian() const;
  bool agree() const { return segal.holds() == all_cartesian(); }
};

/// (a) lower (2d-1)-Segal against (b) every strongly biCartesian (d+1)-cube
/// with top at most min(truncation, 6) maps to a Cartesian cube.
template <Backend B>
HigherExcisionReport check_higher_excision(const SimplicialObject<B>& X, int d, const CubeGuards& guards = {}) {
  if (d < 1) throw Error(ErrorCode::BadInput, "higher excision needs d >= 1");
  const int bound = std::min(X.truncation(), guards.max_bound);
  HigherExcisionReport r{d, bound, segal_report(X, 2 * d - 1, Side::Lower), {}};
  const auto cubes = enumerate_strongly_bicartesian_cubes(d + 1, bound, guards);
  r.cubes.resize(cubes.size());
  parallel_for(cubes.size(), [&](std::size_t i) {
    const IsoVerdict v = cube_is_cartesian(X, cubes[i]);
    r.cubes[i] = {cubes[i], v.iso, v.witness};
  });
  return r;
}

// ------------------------------------------------------------------- json

nlohmann::json to_json(const SegalReport& r);
nlohmann::json to_json(const IndependenceReport& r);
nlohmann::json to_json(const ExcisionVerdict& v);
nlohmann::json to_json(const PathSpaceReport& r);
nlohmann::json to_json(const DoldKanReport& r);
nlohmann::json to_json(const Thinness& t);
nlohmann::json to_json(const CubeInDelta& c);
nlohmann::json to_json(const HigherExcisionReport& r);

}  // namespace segalis
