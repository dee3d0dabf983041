#include "segalis/orientals.hpp"

#include <algorithm>
#include <map>
#include <mutex>
#include <optional>
#include <shared_mutex>
#include <sstream>
#include <unordered_map>
#include <unordered_set>

#include <nlohmann/json.hpp>

#include "segalis/error.hpp"
#include "segalis/geometry.hpp"
#include "segalis/parallel.hpp"
#include "segalis/triangulations.hpp"

namespace segalis {

namespace {

struct KeyHash {
  std::size_t operator()(const std::pair<Complex, int>& k) const noexcept {
    return ComplexHash{}(k.first) * 31 + static_cast<std::size_t>(k.second);
  }
};

template <typename V>
class ConcurrentCache {
 public:
  template <typename F>
  V get(const std::pair<Complex, int>& key, F&& compute) {
    {
      std::shared_lock lock(mutex_);
      if (auto it = map_.find(key); it != map_.end()) return it->second;
    }
    V value = compute();
    std::unique_lock lock(mutex_);
    return map_.emplace(key, std::move(value)).first->second;
  }

 private:
  std::shared_mutex mutex_;
  std::unordered_map<std::pair<Complex, int>, V, KeyHash> map_;
};

ConcurrentCache<SurfaceAnalysis>& analysis_cache() {
  static ConcurrentCache<SurfaceAnalysis> cache;
  return cache;
}

ConcurrentCache<bool>& admissible_cache() {
  static ConcurrentCache<bool> cache;
  return cache;
}

// Vertices whose removal from I gives a facet of the requested hemisphere.
std::uint32_t hemisphere_vertices(Simplex I, Side side) {
  std::uint32_t m = 0;
  for (int v : I.vertices()) {
    bool lower = gap_parity(I.without(v), v) == Parity::Even;
    if (lower == (side == Side::Lower)) m |= 1U << v;
  }
  return m;
}

// Faces F with core <= F <= I.
std::vector<Simplex> faces_containing(Simplex I, std::uint32_t core) {
  std::vector<Simplex> out;
  const std::uint32_t free = I.mask() & ~core;
  for (std::uint32_t s = free;; s = (s - 1) & free) {
    out.push_back(Simplex::from_mask(core | s));
    if (s == 0) break;
  }
  return out;
}

bool embeds(const Complex& B, int e, std::string& reason) {
  if (e == 0) {
    if (B.size() != 1) {
      reason = "flat part " + B.to_string() + " is not a single vertex";
      return false;
    }
    return true;
  }
  const auto& fs = B.facets();
  for (std::size_t a = 0; a < fs.size(); ++a)
    for (std::size_t b = a + 1; b < fs.size(); ++b)
      if (!proper_intersection(fs[a], fs[b], e)) {
        reason = "surface simplices " + fs[a].to_string() + " and " + fs[b].to_string() + " overlap in R^" +
                 std::to_string(e);
        return false;
      }
  return true;
}

SurfaceAnalysis compute_analysis(const Complex& K, int d) {
  SurfaceAnalysis out;
  if (K.empty()) {
    out.reason = "empty complex";
    return out;
  }
  for (Simplex f : K.facets())
    if (f.size() > d + 1) {
      out.reason = "simplex " + f.to_string() + " too large for dimension " + std::to_string(d);
      return out;
    }
  if (d == 0) {
    if (K.size() != 1) {
      out.reason = "0-cell must be a single vertex";
      return out;
    }
    out.admissible = true;
    out.lower = out.upper = K;
    return out;
  }
  const auto& fs = K.facets();
  for (std::size_t a = 0; a < fs.size(); ++a)
    for (std::size_t b = a + 1; b < fs.size(); ++b)
      if (!proper_intersection(fs[a], fs[b], d)) {
        out.reason = "simplices " + fs[a].to_string() + " and " + fs[b].to_string() + " intersect improperly";
        return out;
      }

  const int n = K.ambient_n();
  auto tops = K.simplices_of_size(d + 1);
  std::sort(tops.begin(), tops.end(), [n](Simplex a, Simplex b) { return epsilon_less(b, a, n); });
  Complex rest = K;
  for (Simplex I : tops) {
    const std::uint32_t core = hemisphere_vertices(I, Side::Lower);
    for (Simplex G : rest.facets())
      if (G != I && (core & ~G.mask()) == 0) {
        out.reason = "top simplex " + I.to_string() + " is covered by " + G.to_string();
        return out;
      }
    rest = rest.remove(faces_containing(I, core));
  }
  if (!embeds(rest, d - 1, out.reason)) return out;

  Complex upper = rest;
  std::reverse(tops.begin(), tops.end());
  for (Simplex I : tops) {
    auto [lower_facets, upper_facets] = hemisphere_facets(I);
    for (Simplex f : lower_facets)
      if (!upper.contains(f)) {
        out.reason = "simplex " + I.to_string() + " does not rest on the surface below";
        return out;
      }
    const std::uint32_t core = hemisphere_vertices(I, Side::Upper);
    for (Simplex G : upper.facets())
      if (!G.is_subset_of(I) && (core & ~G.mask()) == 0) {
        out.reason = "surface below " + I.to_string() + " is not a graph";
        return out;
      }
    upper = upper.remove(faces_containing(I, core)).unite(Complex::generated(upper_facets, n));
  }
  out.admissible = true;
  out.lower = std::move(rest);
  out.upper = std::move(upper);
  out.stacking = std::move(tops);
  return out;
}

}  // namespace

SurfaceAnalysis analyze_surfaces(const Complex& K, int d) {
  return analysis_cache().get({K, d}, [&] { return compute_analysis(K, d); });
}

bool is_d_admissible(const Complex& K, int d) { return analyze_surfaces(K, d).admissible; }

bool is_admissible(const Complex& K, int d) {
  return admissible_cache().get({K, d}, [&] {
    auto a = analyze_surfaces(K, d);
    if (!a.admissible) return false;
    if (d == 0) return true;
    return is_admissible(a.lower, d - 1) && is_admissible(a.upper, d - 1);
  });
}

Surfaces surfaces(const Complex& K, int d) {
  auto a = analyze_surfaces(K, d);
  if (!a.admissible) throw Error(ErrorCode::NotAdmissible, K.to_string() + ": " + a.reason);
  return {a.lower, a.upper};
}

std::vector<Simplex> upper_interior_faces(Simplex I) {
  auto v = faces_containing(I, hemisphere_vertices(I, Side::Lower));
  std::sort(v.begin(), v.end());
  return v;
}

std::vector<Simplex> lower_interior_faces(Simplex I) {
  auto v = faces_containing(I, hemisphere_vertices(I, Side::Upper));
  std::sort(v.begin(), v.end());
  return v;
}

// ---------------------------------------------------------------------------
// Cells

AdmissibleCell::AdmissibleCell(Complex K, int dim) : complex_(std::move(K)), dim_(dim) {
  if (dim < 0) throw Error(ErrorCode::BadInput, "negative cell dimension");
  if (!is_admissible(complex_, dim)) {
    auto a = analyze_surfaces(complex_, dim);
    throw Error(ErrorCode::NotAdmissible,
                complex_.to_string() + " in dimension " + std::to_string(dim) + (a.admissible ? "" : ": " + a.reason));
  }
  sources_.resize(dim);
  targets_.resize(dim);
  if (dim == 0) return;
  auto a = analyze_surfaces(complex_, dim);
  sources_[dim - 1] = a.lower;
  targets_[dim - 1] = a.upper;
  for (int k = dim - 2; k >= 0; --k) {
    sources_[k] = analyze_surfaces(sources_[k + 1], k + 1).lower;
    targets_[k] = analyze_surfaces(targets_[k + 1], k + 1).upper;
  }
}

const Complex& AdmissibleCell::source(int k) const {
  if (k < 0) throw Error(ErrorCode::BadInput, "negative level");
  return k >= dim_ ? complex_ : sources_[k];
}

const Complex& AdmissibleCell::target(int k) const {
  if (k < 0) throw Error(ErrorCode::BadInput, "negative level");
  return k >= dim_ ? complex_ : targets_[k];
}

AdmissibleCell AdmissibleCell::promoted(int new_dim) const {
  if (new_dim == dim_) return *this;
  return AdmissibleCell(complex_, new_dim);
}

int AdmissibleCell::top_simplex_count() const {
  return static_cast<int>(complex_.simplices_of_size(dim_ + 1).size());
}

AdmissibleCell compose(const AdmissibleCell& K, const AdmissibleCell& L, int level) {
  const int D = std::max(K.dim(), L.dim());
  if (level < 0) throw Error(ErrorCode::BadInput, "negative level");
  if (K.source(level) != L.target(level))
    throw Error(ErrorCode::NotComposable, "source " + K.source(level).to_string() + " of " + K.complex().to_string() +
                                              " differs from target " + L.target(level).to_string() + " of " +
                                              L.complex().to_string() + " at level " + std::to_string(level));
  if (level >= D) return K.promoted(D);
  return AdmissibleCell(K.complex().unite(L.complex()), D);
}

Excision excise_top(const AdmissibleCell& K) {
  const int d = K.dim();
  auto tops = K.complex().simplices_of_size(d + 1);
  if (d == 0 || tops.empty()) throw Error(ErrorCode::FlatCell, K.complex().to_string());
  const int n = K.ambient_n();
  Simplex I = *std::max_element(tops.begin(), tops.end(), [n](Simplex a, Simplex b) { return epsilon_less(a, b, n); });
  AdmissibleCell rest(K.complex().remove(upper_interior_faces(I)), d);
  return {std::move(rest), I};
}

std::vector<AdmissibleCell> atomic_decomposition(const AdmissibleCell& K) {
  std::vector<AdmissibleCell> atoms;
  const int d = K.dim();
  if (d == 0) return atoms;
  auto a = analyze_surfaces(K.complex(), d);
  Complex surface = a.lower;
  for (Simplex I : a.stacking) {
    atoms.emplace_back(surface.unite(Complex::simplex(I, K.ambient_n())), d);
    surface = atoms.back().upper();
  }
  return atoms;
}

// ---------------------------------------------------------------------------
// Enumeration

namespace {

std::mutex g_cells_mutex;
std::map<std::pair<int, int>, std::vector<AdmissibleCell>> g_cells;

std::vector<AdmissibleCell> enumerate_cells(int n, int d, const OrientalGuards& guards) {
  std::vector<AdmissibleCell> out;
  if (d == 0) {
    for (int v = 0; v <= n; ++v) out.emplace_back(Complex::simplex(Simplex{v}, n), 0);
    return out;
  }
  const auto prev = cells(n, d - 1, guards);
  std::unordered_set<Complex, ComplexHash> prev_set, seen;
  for (const auto& c : prev) prev_set.insert(c.complex());

  std::vector<Complex> frontier;
  for (const auto& c : prev) {
    out.emplace_back(c.complex(), d);
    seen.insert(c.complex());
    frontier.push_back(c.complex());
  }
  const auto candidates = subsets_of_size(n, d + 1);
  while (!frontier.empty()) {
    std::vector<std::vector<Complex>> grown(frontier.size());
    parallel_for(frontier.size(), [&](std::size_t i) {
      const Complex& L = frontier[i];
      const Complex& top = analyze_surfaces(L, d).upper;
      for (Simplex I : candidates) {
        if (L.contains(I)) continue;
        auto [lower_facets, upper_facets] = hemisphere_facets(I);
        bool rests = std::all_of(lower_facets.begin(), lower_facets.end(), [&](Simplex f) { return top.contains(f); });
        if (!rests) continue;
        Complex K = L.unite(Complex::simplex(I, n));
        auto a = analyze_surfaces(K, d);
        if (a.admissible && prev_set.count(a.upper)) grown[i].push_back(std::move(K));
      }
    });
    std::vector<Complex> next;
    for (auto& batch : grown)
      for (auto& K : batch)
        if (seen.insert(K).second) next.push_back(std::move(K));
    std::sort(next.begin(), next.end());
    for (const auto& K : next) out.emplace_back(K, d);
    frontier = std::move(next);
  }
  std::sort(out.begin(), out.end());
  return out;
}

}  // namespace

std::vector<AdmissibleCell> cells(int n, int d, const OrientalGuards& guards) {
  if (d < 0 || d > n) throw Error(ErrorCode::BadInput, "cells need 0 <= d <= n");
  if (n > guards.max_n) throw Error(ErrorCode::TooLarge, "oriental enumeration guard n <= " + std::to_string(guards.max_n));
  {
    std::lock_guard lock(g_cells_mutex);
    if (auto it = g_cells.find({n, d}); it != g_cells.end()) return it->second;
  }
  auto out = enumerate_cells(n, d, guards);
  std::lock_guard lock(g_cells_mutex);
  return g_cells.emplace(std::pair(n, d), std::move(out)).first->second;
}

// ---------------------------------------------------------------------------
// Axioms

namespace {

struct ComplexIndex {
  std::unordered_map<Complex, std::vector<std::size_t>, ComplexHash> by;
  const std::vector<std::size_t>& operator[](const Complex& c) const {
    static const std::vector<std::size_t> none;
    auto it = by.find(c);
    return it == by.end() ? none : it->second;
  }
};

}  // namespace

OmegaReport check_omega_axioms(int n, int max_dim) {
  if (n > 4) throw Error(ErrorCode::TooLarge, "axiom check guard n <= 4");
  OmegaReport report;
  report.n = n;
  report.max_dim = std::min(max_dim, n);
  const int m = report.max_dim;
  const auto all = cells(n, m);
  report.cells = all.size();
  std::mutex report_mutex;
  auto violation = [&](std::string what) {
    std::lock_guard lock(report_mutex);
    report.violations.push_back(std::move(what));
  };
  auto name = [](const AdmissibleCell& c) { return c.complex().to_string(); };

  // Globularity and units.
  for (const auto& K : all) {
    for (int k = 0; k + 1 < m; ++k) {
      auto below_source = analyze_surfaces(K.source(k + 1), k + 1);
      auto below_target = analyze_surfaces(K.target(k + 1), k + 1);
      if (below_source.lower != K.source(k) || below_target.lower != K.source(k))
        violation("globularity (source) fails for " + name(K) + " at level " + std::to_string(k));
      if (below_source.upper != K.target(k) || below_target.upper != K.target(k))
        violation("globularity (target) fails for " + name(K) + " at level " + std::to_string(k));
      report.globularity_checks += 2;
    }
    for (int j = 0; j < m; ++j) {
      try {
        AdmissibleCell src(K.source(j), m), tgt(K.target(j), m);
        if (!(compose(K, src, j) == K)) violation("right unit fails for " + name(K));
        if (!(compose(tgt, K, j) == K)) violation("left unit fails for " + name(K));
      } catch (const Error& e) {
        violation("unit law raised " + std::string(e.what()));
      }
      report.unit_checks += 2;
    }
  }

  // Composable pairs per level, with source/target laws on each composite.
  std::vector<std::map<std::pair<std::size_t, std::size_t>, Complex>> composites(m);
  for (int j = 0; j < m; ++j) {
    ComplexIndex by_target;
    for (std::size_t b = 0; b < all.size(); ++b) by_target.by[all[b].target(j)].push_back(b);
    std::vector<std::pair<std::size_t, std::size_t>> pairs;
    for (std::size_t a = 0; a < all.size(); ++a)
      for (std::size_t b : by_target[all[a].source(j)]) pairs.emplace_back(a, b);
    std::vector<std::optional<Complex>> results(pairs.size());
    parallel_for(pairs.size(), [&](std::size_t p) {
      const auto& A = all[pairs[p].first];
      const auto& B = all[pairs[p].second];
      try {
        AdmissibleCell AB = compose(A, B, j);
        bool laws = AB.source(j) == B.source(j) && AB.target(j) == A.target(j);
        for (int i = 0; i < j; ++i) laws = laws && AB.source(i) == A.source(i) && AB.target(i) == A.target(i);
        for (int i = j + 1; i < m; ++i)
          laws = laws && AB.source(i) == A.source(i).unite(B.source(i)) && AB.target(i) == A.target(i).unite(B.target(i));
        if (!laws) violation("source/target law fails for " + name(A) + " *" + std::to_string(j) + " " + name(B));
        results[p] = AB.complex();
      } catch (const Error& e) {
        violation("composite " + name(A) + " *" + std::to_string(j) + " " + name(B) + " failed: " + e.what());
      }
    });
    for (std::size_t p = 0; p < pairs.size(); ++p)
      if (results[p]) composites[j].emplace(pairs[p], *results[p]);
  }

  // Associativity: (A*B)*C = A*(B*C) for composable triples.
  std::unordered_map<Complex, std::size_t, ComplexHash> position;
  for (std::size_t i = 0; i < all.size(); ++i) position.emplace(all[i].complex(), i);
  for (int j = 0; j < m; ++j) {
    std::map<std::size_t, std::vector<std::size_t>> right_of;
    for (const auto& [ab, c] : composites[j]) right_of[ab.first].push_back(ab.second);
    for (const auto& [ab, AB] : composites[j]) {
      auto [a, b] = ab;
      for (std::size_t c : right_of[b]) {
        auto bc_it = composites[j].find({b, c});
        auto ab_pos = position.find(AB);
        auto bc_pos = position.find(bc_it->second);
        if (ab_pos == position.end() || bc_pos == position.end()) {
          violation("composite missing from enumeration at level " + std::to_string(j));
          continue;
        }
        auto left = composites[j].find({ab_pos->second, c});
        auto right = composites[j].find({a, bc_pos->second});
        ++report.associativity_checks;
        if (left == composites[j].end() || right == composites[j].end() || left->second != right->second)
          violation("associativity fails for " + name(all[a]) + ", " + name(all[b]) + ", " + name(all[c]));
      }
    }
  }

  // Interchange: (A *j B) *k (C *j D) = (A *k C) *j (B *k D) for k < j.
  for (int j = 1; j < m; ++j)
    for (int k = 0; k < j; ++k)
      for (const auto& [ab, AB] : composites[j]) {
        auto ab_pos = position.find(AB);
        if (ab_pos == position.end()) continue;
        for (const auto& [cd, CD] : composites[j]) {
          auto cd_pos = position.find(CD);
          if (cd_pos == position.end()) continue;
          auto lhs = composites[k].find({ab_pos->second, cd_pos->second});
          if (lhs == composites[k].end()) continue;
          ++report.interchange_checks;
          auto ac = composites[k].find({ab.first, cd.first});
          auto bd = composites[k].find({ab.second, cd.second});
          if (ac == composites[k].end() || bd == composites[k].end()) {
            violation("interchange: row composites undefined");
            continue;
          }
          auto rhs = composites[j].find({position.at(ac->second), position.at(bd->second)});
          if (rhs == composites[j].end() || rhs->second != lhs->second) violation("interchange fails");
        }
      }
  std::sort(report.violations.begin(), report.violations.end());
  return report;
}

// ---------------------------------------------------------------------------
// Export

namespace {

nlohmann::json facet_list(const Complex& c) {
  nlohmann::json out = nlohmann::json::array();
  for (Simplex f : c.facets()) out.push_back(f.vertices());
  return out;
}

}  // namespace

nlohmann::json to_json(const AdmissibleCell& cell) {
  return {{"n", cell.ambient_n()},
          {"d", cell.dim()},
          {"facets", facet_list(cell.complex())},
          {"lower", cell.dim() == 0 ? facet_list(cell.complex()) : facet_list(cell.lower())},
          {"upper", cell.dim() == 0 ? facet_list(cell.complex()) : facet_list(cell.upper())}};
}

nlohmann::json to_json(const OmegaReport& r) {
  return {{"n", r.n},
          {"max_dim", r.max_dim},
          {"cells", r.cells},
          {"globularity_checks", r.globularity_checks},
          {"unit_checks", r.unit_checks},
          {"associativity_checks", r.associativity_checks},
          {"interchange_checks", r.interchange_checks},
          {"violations", r.violations},
          {"ok", r.ok()}};
}

std::string cells_dot(const std::vector<AdmissibleCell>& all) {
  std::unordered_map<Complex, std::size_t, ComplexHash> index;
  for (std::size_t i = 0; i < all.size(); ++i) index.emplace(all[i].complex(), i);
  std::ostringstream os;
  os << "digraph oriental {\n";
  for (std::size_t i = 0; i < all.size(); ++i) os << "  c" << i << " [label=\"" << all[i].complex().to_string() << "\"];\n";
  for (std::size_t i = 0; i < all.size(); ++i) {
    if (all[i].dim() == 0 || all[i].top_simplex_count() == 0) continue;
    auto ex = excise_top(all[i]);
    auto it = index.find(ex.rest.complex());
    if (it != index.end()) os << "  c" << it->second << " -> c" << i << " [label=\"" << ex.top.to_string() << "\"];\n";
  }
  os << "}\n";
  return os.str();
}

}  // namespace segalis
