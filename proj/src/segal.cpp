#include "segalis/segal.hpp"

#include <algorithm>
#include <bit>
#include <functional>
#include <map>
#include <tuple>

#include <nlohmann/json.hpp>

#include "segalis/generators.hpp"

namespace segalis {

bool SegalReport::holds() const {
  return std::all_of(levels.begin(), levels.end(), [](const LevelVerdict& v) { return v.iso; });
}

std::string SegalReport::condition() const {
  return std::string(side == Side::Lower ? "lower " : "upper ") + std::to_string(d) + "-Segal";
}

Complex segal_complex(int n, int d, Side side) {
  if (d < 0 || d > n) throw Error(ErrorCode::BadInput, "Segal complex needs 0 <= d <= n");
  return Complex::generated(boundary_generators(n, d, side), n);
}

bool IndependenceReport::holds() const {
  return std::all_of(triangulations.begin(), triangulations.end(), [](const auto& t) { return t.iso; }) &&
         std::all_of(steps.begin(), steps.end(), [](const auto& s) { return s.iso_from && s.iso_to; });
}

void validate_excision(const AdmissibleCell& K, const AdmissibleCell& L, Simplex I) {
  auto bad = [](const std::string& what) { throw Error(ErrorCode::NotAnExcision, what); };
  const int n = K.ambient_n();
  if (L.ambient_n() != n || L.dim() != K.dim()) bad("cells live in different orientals");
  if (I.size() != K.dim() + 1 || I.empty() || I.max() > n) bad(I.to_string() + " is not a top simplex size");
  if (!K.complex().contains(I)) bad(I.to_string() + " is not in K");
  if (L.complex().contains(I)) bad(I.to_string() + " is already in L");
  const Complex cell = Complex::simplex(I, n);
  if (!(L.complex().unite(cell) == K.complex())) bad("K is not L with " + I.to_string() + " attached");
  const Complex lower = simplex_hemispheres(I, n).lower;
  if (!(L.complex().intersect(cell) == lower)) bad(I.to_string() + " does not meet L in its lower hemisphere");
}

bool PathSpaceClaim::agree() const {
  return std::all_of(sides.begin(), sides.end(), [&](const auto& s) { return s.second == sides.front().second; });
}

bool PathSpaceReport::holds() const {
  return std::all_of(claims.begin(), claims.end(), [](const auto& c) { return c.agree(); });
}

Complex outer_horn(int n, int end) {
  if (n < 1) throw Error(ErrorCode::BadInput, "outer horns need n >= 1");
  if (end != 0 && end != n) throw Error(ErrorCode::BadInput, "an outer horn is at vertex 0 or n");
  std::vector<Simplex> gens;
  for (int v = 0; v <= n; ++v)
    if (v != end) gens.push_back(Simplex::full(n).without(v));
  return Complex::generated(gens, n);
}

bool DoldKanReport::horns() const {
  auto ok = [](const std::vector<LevelVerdict>& v) { return std::all_of(v.begin(), v.end(), [](const auto& l) { return l.iso; }); };
  return ok(initial_horns) && ok(final_horns);
}

bool DoldKanReport::truncated_chains() const {
  for (int k = m + 1; k < static_cast<int>(chain_dims.size()); ++k)
    if (chain_dims[k] != 0) return false;
  return true;
}

DoldKanReport dk_equivalence_report(const SimplicialObject<Vect>& X, int m) {
  if (m < 0) throw Error(ErrorCode::BadInput, "m must be nonnegative");
  const int N = X.truncation();
  DoldKanReport r;
  r.m = m;
  r.truncation = N;
  if (N >= 2 * m + 1) {
    r.lower = segal_report(X, 2 * m, Side::Lower);
    r.upper = segal_report(X, 2 * m, Side::Upper);
  } else {
    // no level above 2m is stored, so the conditions are vacuous
    r.lower = {Side::Lower, 2 * m, N, {}, {"vacuous: truncation below 2m+1"}};
    r.upper = {Side::Upper, 2 * m, N, {}, {"vacuous: truncation below 2m+1"}};
  }
  const int count = std::max(0, N - m);
  r.initial_horns.resize(count);
  r.final_horns.resize(count);
  parallel_for(static_cast<std::size_t>(count) * 2, [&](std::size_t i) {
    const int n = m + 1 + static_cast<int>(i / 2);
    const bool initial = i % 2 == 0;
    const IsoVerdict v = Vect::is_iso(outer_horn_map(X, n, initial ? 0 : n));
    (initial ? r.initial_horns : r.final_horns)[i / 2] = {n, v.iso, v.witness};
  });
  r.chain_dims = normalized_chains(X).dims;
  return r;
}

std::vector<Simplex> simplex_poset(int n) {
  if (n < 0 || n > kMaxVertex) throw Error(ErrorCode::BadInput, "simplex poset needs 0 <= n <= " + std::to_string(kMaxVertex));
  std::vector<Simplex> out;
  for (std::uint32_t mask = 1; mask < (1U << (n + 1)); ++mask) out.push_back(Simplex::from_mask(mask));
  return out;
}

namespace detail {

void check_simplex_poset(const std::vector<std::vector<char>>& leq, int n) {
  const auto el = simplex_poset(n);
  if (leq.size() != el.size()) throw Error(ErrorCode::NotADiagram, "diagram is not indexed by the nonempty subsets of [" + std::to_string(n) + "]");
  for (std::size_t a = 0; a < el.size(); ++a)
    for (std::size_t b = 0; b < el.size(); ++b)
      if (static_cast<bool>(leq[a].at(b)) != el[a].is_subset_of(el[b]))
        throw Error(ErrorCode::NotADiagram, "order is not inclusion of subsets at " + el[a].to_string() + ", " + el[b].to_string());
}

}  // namespace detail

bool HigherExcisionReport::all_cartesian() const {
  return std::all_of(cubes.begin(), cubes.end(), [](const CubeVerdict& c) { return c.cartesian; });
}

// ------------------------------------------------------------------ cubes

std::string CubeInDelta::to_string() const {
  std::string s;
  for (std::size_t t = 0; t < vertices.size(); ++t) s += (t ? " " : "") + vertices[t].to_string();
  return s;
}

bool is_pullback_square(Simplex base, Simplex a, Simplex b, Simplex top) {
  if (!base.is_subset_of(a) || !base.is_subset_of(b) || !a.is_subset_of(top) || !b.is_subset_of(top))
    throw Error(ErrorCode::BadInput, "square of inclusions expected");
  return !base.empty() && (a & b) == base;
}

namespace {

// Monotone maps from top to [m] extending f on a and g on b, capped at 2.
int count_extensions(const std::vector<int>& top, const std::map<int, int>& fixed, int m) {
  std::vector<long> ways(m + 1, 0);
  bool first = true;
  for (int t : top) {
    std::vector<long> next(m + 1, 0);
    auto it = fixed.find(t);
    for (int v = 0; v <= m; ++v) {
      if (it != fixed.end() && it->second != v) continue;
      long w = 0;
      if (first) {
        w = 1;
      } else {
        for (int u = 0; u <= v; ++u) w += ways[u];
      }
      next[v] = std::min(w, 2L);
    }
    ways = std::move(next);
    first = false;
  }
  long total = 0;
  for (long w : ways) total += w;
  return static_cast<int>(std::min(total, 2L));
}

// Calls visit(values) for every monotone map on `elements` into [m] that
// agrees with `fixed`; stops when visit returns false.
bool each_monotone(const std::vector<int>& elements, const std::map<int, int>& fixed, int m,
                   const std::function<bool(const std::map<int, int>&)>& visit) {
  std::map<int, int> values = fixed;
  std::function<bool(std::size_t, int)> rec = [&](std::size_t i, int low) -> bool {
    if (i == elements.size()) return visit(values);
    const int e = elements[i];
    if (auto it = fixed.find(e); it != fixed.end()) return it->second < low || rec(i + 1, it->second);
    for (int v = low; v <= m; ++v) {
      values[e] = v;
      if (!rec(i + 1, v)) return false;
    }
    values.erase(e);
    return true;
  };
  return rec(0, 0);
}

}  // namespace

bool is_pushout_square(Simplex base, Simplex a, Simplex b, Simplex top, int test_bound) {
  if (!base.is_subset_of(a) || !base.is_subset_of(b) || !a.is_subset_of(top) || !b.is_subset_of(top))
    throw Error(ErrorCode::BadInput, "square of inclusions expected");
  if (base.empty()) return false;
  const auto av = a.vertices(), bv = b.vertices(), tv = top.vertices();
  for (int m = 0; m <= test_bound; ++m) {
    const bool ok = each_monotone(av, {}, m, [&](const std::map<int, int>& f) {
      std::map<int, int> on_base;
      for (int x : base.vertices()) on_base[x] = f.at(x);
      return each_monotone(bv, on_base, m, [&](const std::map<int, int>& g) {
        std::map<int, int> both = f;
        both.insert(g.begin(), g.end());
        return count_extensions(tv, both, m) == 1;
      });
    });
    if (!ok) return false;
  }
  return true;
}

std::vector<CubeInDelta> enumerate_strongly_bicartesian_cubes(int k, int n_bound, const CubeGuards& guards) {
  if (k < 1 || n_bound < 0) throw Error(ErrorCode::BadInput, "cubes need k >= 1 and a nonnegative bound");
  if (k > guards.max_k) throw Error(ErrorCode::TooLarge, "cube dimension " + std::to_string(k) + " exceeds the guard");
  if (n_bound > guards.max_bound) throw Error(ErrorCode::TooLarge, "ordinal bound " + std::to_string(n_bound) + " exceeds the guard");
  const int test_bound = n_bound + 1;
  std::map<std::tuple<std::uint32_t, std::uint32_t, std::uint32_t>, bool> pushout_memo;
  auto face_ok = [&](Simplex base, Simplex a, Simplex b, Simplex top) {
    if (!is_pullback_square(base, a, b, top)) return false;
    // pushouts only depend on the relative position of the four sets
    const auto key = std::tuple{base.mask(), a.mask(), b.mask()};
    auto it = pushout_memo.find(key);
    if (it == pushout_memo.end()) it = pushout_memo.emplace(key, is_pushout_square(base, a, b, top, test_bound)).first;
    return it->second;
  };
  std::vector<CubeInDelta> out;
  const int corners = 1 << k;
  for (int m = 0; m <= n_bound; ++m) {
    // label[x] = 0 puts x in S_empty, label i puts it in the increment of direction i
    std::vector<int> label(m + 1, 0);
    while (true) {
      std::vector<std::uint32_t> inc(k + 1, 0);
      for (int x = 0; x <= m; ++x) inc[label[x]] |= 1U << x;
      bool canonical = inc[0] != 0;
      for (int i = 1; i <= k && canonical; ++i) canonical = inc[i] != 0 && (i == 1 || inc[i - 1] < inc[i]);
      if (canonical) {
        CubeInDelta c{k, std::vector<Simplex>(corners)};
        for (int T = 0; T < corners; ++T) {
          std::uint32_t s = inc[0];
          for (int i = 0; i < k; ++i)
            if (T >> i & 1) s |= inc[i + 1];
          c.vertices[T] = Simplex::from_mask(s);
        }
        bool ok = true;
        for (int T = 0; T < corners && ok; ++T)
          for (int i = 0; i < k && ok; ++i)
            for (int j = i + 1; j < k && ok; ++j) {
              if ((T >> i & 1) || (T >> j & 1)) continue;
              const int Ti = T | 1 << i, Tj = T | 1 << j;
              ok = face_ok(c.vertices[T], c.vertices[Ti], c.vertices[Tj], c.vertices[Ti | Tj]);
            }
        if (ok) out.push_back(std::move(c));
      }
      int x = m;
      while (x >= 0 && ++label[x] == k + 1) label[x--] = 0;
      if (x < 0) break;
    }
  }
  return out;
}

// ------------------------------------------------------------------- json

namespace {

nlohmann::json levels_json(const std::vector<LevelVerdict>& levels) {
  nlohmann::json out = nlohmann::json::array();
  for (const auto& v : levels) {
    nlohmann::json j{{"n", v.n}, {"iso", v.iso}};
    if (!v.witness.empty()) j["witness"] = v.witness;
    out.push_back(j);
  }
  return out;
}

nlohmann::json simplex_json(Simplex s) { return s.vertices(); }

}  // namespace

nlohmann::json to_json(const SegalReport& r) {
  nlohmann::json j{{"condition", r.condition()}, {"side", r.side == Side::Lower ? "lower" : "upper"}, {"d", r.d},
                   {"truncation", r.truncation}, {"holds", r.holds()}, {"levels", levels_json(r.levels)}};
  if (!r.notes.empty()) j["notes"] = r.notes;
  return j;
}

nlohmann::json to_json(const IndependenceReport& r) {
  nlohmann::json ts = nlohmann::json::array();
  for (const auto& t : r.triangulations) {
    nlohmann::json facets = nlohmann::json::array();
    for (Simplex s : t.facets) facets.push_back(simplex_json(s));
    nlohmann::json j{{"facets", facets}, {"iso", t.iso}};
    if (!t.witness.empty()) j["witness"] = t.witness;
    ts.push_back(j);
  }
  nlohmann::json steps = nlohmann::json::array();
  for (const auto& s : r.steps) {
    nlohmann::json j{{"from", s.from}, {"to", s.to}, {"flip", simplex_json(s.flip)}, {"iso_from", s.iso_from}, {"iso_to", s.iso_to}};
    if (!s.witness.empty() && !(s.iso_from && s.iso_to)) j["witness"] = s.witness;
    steps.push_back(j);
  }
  return {{"n", r.n}, {"d", r.d}, {"holds", r.holds()}, {"triangulations", ts}, {"flip_steps", steps}};
}

nlohmann::json to_json(const ExcisionVerdict& v) {
  nlohmann::json j{{"top", simplex_json(v.top)}, {"iso", v.iso}};
  if (!v.witness.empty()) j["witness"] = v.witness;
  return j;
}

nlohmann::json to_json(const PathSpaceReport& r) {
  nlohmann::json claims = nlohmann::json::array();
  for (const auto& c : r.claims) {
    nlohmann::json sides = nlohmann::json::array();
    for (const auto& [what, verdict] : c.sides) sides.push_back({{"statement", what}, {"holds", verdict}});
    claims.push_back({{"sides", sides}, {"agree", c.agree()}});
  }
  return {{"d", r.d}, {"agree", r.holds()}, {"claims", claims}};
}

nlohmann::json to_json(const DoldKanReport& r) {
  return {{"m", r.m},
          {"truncation", r.truncation},
          {"segal", r.segal()},
          {"outer_horns", r.horns()},
          {"chains_truncated", r.truncated_chains()},
          {"agree", r.agree()},
          {"lower", to_json(r.lower)},
          {"upper", to_json(r.upper)},
          {"initial_horns", levels_json(r.initial_horns)},
          {"final_horns", levels_json(r.final_horns)},
          {"chain_dims", r.chain_dims}};
}

nlohmann::json to_json(const Thinness& t) {
  nlohmann::json j{{"lower_thin", t.lower_thin}, {"upper_thin", t.upper_thin}};
  if (!t.lower_witness.empty()) j["lower_witness"] = t.lower_witness;
  if (!t.upper_witness.empty()) j["upper_witness"] = t.upper_witness;
  return j;
}

nlohmann::json to_json(const CubeInDelta& c) {
  nlohmann::json v = nlohmann::json::array();
  for (Simplex s : c.vertices) v.push_back(simplex_json(s));
  return {{"k", c.k}, {"vertices", v}};
}

nlohmann::json to_json(const HigherExcisionReport& r) {
  nlohmann::json cubes = nlohmann::json::array();
  for (const auto& c : r.cubes) {
    nlohmann::json j = to_json(c.cube);
    j["cartesian"] = c.cartesian;
    if (!c.witness.empty()) j["witness"] = c.witness;
    cubes.push_back(j);
  }
  return {{"d", r.d},
          {"bound", r.bound},
          {"segal", to_json(r.segal)},
          {"all_cartesian", r.all_cartesian()},
          {"agree", r.agree()},
          {"cubes", cubes}};
}

}  // namespace segalis
