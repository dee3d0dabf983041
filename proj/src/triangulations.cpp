#include "segalis/triangulations.hpp"

#include <algorithm>
#include <deque>
#include <map>
#include <set>
#include <sstream>

#include <nlohmann/json.hpp>

#include "segalis/error.hpp"
#include "segalis/geometry.hpp"

namespace segalis {

bool rambau_less(Simplex I, Simplex J, int d) {
  if (I.size() != d + 1 || J.size() != d + 1) throw Error(ErrorCode::BadArity, "rambau_less needs (d+1)-subsets");
  if ((I | J).size() != d + 2) return false;
  Simplex meet = I & J;
  int dropped_from_I = I.minus(meet).min();
  int dropped_from_J = J.minus(meet).min();
  // meet = I \ {a} is an upper facet of I iff the gap a has odd parity in meet.
  return gap_parity(meet, dropped_from_I) == Parity::Odd && gap_parity(meet, dropped_from_J) == Parity::Even;
}

namespace {

// Letter ranks in the order o < * < e.
int letter_rank(Simplex I, int k) {
  if (I.contains(k)) return 1;
  return gap_parity(I, k) == Parity::Even ? 2 : 0;
}

}  // namespace

std::string epsilon_word(Simplex I, int n) {
  std::string w;
  for (int k = 0; k <= n; ++k) w += "o*e"[letter_rank(I, k)];
  return w;
}

bool epsilon_less(Simplex I, Simplex J, int n) {
  for (int k = 0; k <= n; ++k) {
    int a = letter_rank(I, k), b = letter_rank(J, k);
    if (a != b) return a < b;
  }
  return false;
}

Triangulation::Triangulation(int n_, int d_, std::vector<Simplex> facets_) : n(n_), d(d_), facets(std::move(facets_)) {
  std::sort(facets.begin(), facets.end());
  facets.erase(std::unique(facets.begin(), facets.end()), facets.end());
}

namespace {

std::vector<Simplex> epsilon_sorted(std::vector<Simplex> v, int n) {
  std::sort(v.begin(), v.end(), [n](Simplex a, Simplex b) { return epsilon_less(a, b, n); });
  return v;
}

}  // namespace

bool triangulation_less(const Triangulation& a, const Triangulation& b) {
  if (a.n != b.n || a.d != b.d) return std::pair(a.n, a.d) < std::pair(b.n, b.d);
  auto x = epsilon_sorted(a.facets, a.n), y = epsilon_sorted(b.facets, b.n);
  const int n = a.n;
  return std::lexicographical_compare(x.begin(), x.end(), y.begin(), y.end(),
                                      [n](Simplex p, Simplex q) { return epsilon_less(p, q, n); });
}

Triangulation lower_triangulation(int n, int d) { return {n, d, boundary_generators(n, d, Side::Lower)}; }
Triangulation upper_triangulation(int n, int d) { return {n, d, boundary_generators(n, d, Side::Upper)}; }

bool is_triangulation(const std::vector<Simplex>& facets, int n, int d) {
  if (d < 1 || n < d) return false;
  for (Simplex s : facets)
    if (s.size() != d + 1 || s.max() > n) return false;
  for (std::size_t a = 0; a < facets.size(); ++a)
    for (std::size_t b = a + 1; b < facets.size(); ++b) {
      if (facets[a] == facets[b]) return false;
      if (!proper_intersection(facets[a], facets[b], d)) return false;
    }
  Rational total = 0, expected = 0;
  for (Simplex s : facets) total += simplex_volume(s, d);
  for (Simplex s : boundary_generators(n, d, Side::Lower)) expected += simplex_volume(s, d);
  return total == expected;
}

AvailableFlips available_flips(const Triangulation& T) {
  AvailableFlips out;
  std::set<Simplex> have(T.facets.begin(), T.facets.end());
  auto all_in = [&](const std::vector<Simplex>& fs) {
    return std::all_of(fs.begin(), fs.end(), [&](Simplex f) { return have.count(f) > 0; });
  };
  for (Simplex I : subsets_of_size(T.n, T.d + 2)) {
    auto [lower, upper] = hemisphere_facets(I);
    if (all_in(lower)) out.up.push_back(I);
    if (all_in(upper)) out.down.push_back(I);
  }
  return out;
}

Triangulation flip(const Triangulation& T, Simplex I) {
  if (I.size() != T.d + 2) throw Error(ErrorCode::FlipNotAvailable, I.to_string() + " has wrong size");
  auto [lower, upper] = hemisphere_facets(I);
  std::set<Simplex> have(T.facets.begin(), T.facets.end());
  auto all_in = [&](const std::vector<Simplex>& fs) {
    return std::all_of(fs.begin(), fs.end(), [&](Simplex f) { return have.count(f) > 0; });
  };
  const std::vector<Simplex>* out = nullptr;
  const std::vector<Simplex>* in = nullptr;
  if (all_in(lower)) {
    out = &lower;
    in = &upper;
  } else if (all_in(upper)) {
    out = &upper;
    in = &lower;
  } else {
    throw Error(ErrorCode::FlipNotAvailable, I.to_string());
  }
  for (Simplex f : *out) have.erase(f);
  for (Simplex f : *in) have.insert(f);
  return {T.n, T.d, std::vector<Simplex>(have.begin(), have.end())};
}

bool FlipGraph::connected() const {
  if (nodes.empty()) return true;
  std::vector<std::vector<std::size_t>> adj(nodes.size());
  for (const auto& e : edges) {
    adj[e.from].push_back(e.to);
    adj[e.to].push_back(e.from);
  }
  std::vector<bool> seen(nodes.size(), false);
  std::deque<std::size_t> queue{0};
  seen[0] = true;
  std::size_t count = 1;
  while (!queue.empty()) {
    auto v = queue.front();
    queue.pop_front();
    for (auto w : adj[v])
      if (!seen[w]) {
        seen[w] = true;
        ++count;
        queue.push_back(w);
      }
  }
  return count == nodes.size();
}

FlipGraph flip_graph(int n, int d, const FlipGuards& guards) {
  if (d < 1 || n < d) throw Error(ErrorCode::BadInput, "flip graph needs n >= d >= 1");
  int limit = d == 2 ? guards.max_n_d2 : (d == 3 ? guards.max_n_d3 : guards.max_n_other);
  if (n > limit)
    throw Error(ErrorCode::TooLarge, "flip graph (" + std::to_string(n) + "," + std::to_string(d) + ") exceeds guard n <= " +
                                         std::to_string(limit));
  std::map<std::vector<Simplex>, std::size_t> index;
  std::vector<Triangulation> found;
  std::set<std::tuple<std::size_t, std::size_t, std::uint32_t>> raw_edges;
  auto intern = [&](const Triangulation& T) {
    auto [it, fresh] = index.emplace(T.facets, found.size());
    if (fresh) found.push_back(T);
    return std::pair(it->second, fresh);
  };
  std::deque<std::size_t> queue{intern(lower_triangulation(n, d)).first};
  while (!queue.empty()) {
    auto v = queue.front();
    queue.pop_front();
    const Triangulation T = found[v];
    auto flips = available_flips(T);
    for (Simplex I : flips.up) {
      auto [w, fresh] = intern(flip(T, I));
      raw_edges.emplace(v, w, I.mask());
      if (fresh) queue.push_back(w);
    }
    for (Simplex I : flips.down) {
      auto [w, fresh] = intern(flip(T, I));
      raw_edges.emplace(w, v, I.mask());
      if (fresh) queue.push_back(w);
    }
  }

  std::vector<std::size_t> order(found.size());
  for (std::size_t i = 0; i < order.size(); ++i) order[i] = i;
  std::sort(order.begin(), order.end(),
            [&](std::size_t a, std::size_t b) { return triangulation_less(found[a], found[b]); });
  std::vector<std::size_t> rank(found.size());
  FlipGraph g;
  g.n = n;
  g.d = d;
  for (std::size_t i = 0; i < order.size(); ++i) {
    rank[order[i]] = i;
    g.nodes.push_back(found[order[i]]);
  }
  for (auto [a, b, m] : raw_edges) g.edges.push_back({rank[a], rank[b], Simplex::from_mask(m)});
  std::sort(g.edges.begin(), g.edges.end(), [](const FlipEdge& x, const FlipEdge& y) {
    return std::tie(x.from, x.to, x.flip) < std::tie(y.from, y.to, y.flip);
  });
  g.edges.erase(std::unique(g.edges.begin(), g.edges.end()), g.edges.end());
  return g;
}

StasheffTamari stasheff_tamari_poset(const FlipGraph& g) {
  const std::size_t N = g.nodes.size();
  const std::size_t words = (N + 63) / 64;
  std::vector<std::vector<std::size_t>> succ(N);
  std::vector<std::size_t> indegree(N, 0);
  for (const auto& e : g.edges) {
    succ[e.from].push_back(e.to);
    ++indegree[e.to];
  }
  // Kahn's algorithm; a leftover node means an up-flip cycle.
  std::vector<std::size_t> topo;
  std::deque<std::size_t> ready;
  auto indeg = indegree;
  for (std::size_t v = 0; v < N; ++v)
    if (indeg[v] == 0) ready.push_back(v);
  while (!ready.empty()) {
    auto v = ready.front();
    ready.pop_front();
    topo.push_back(v);
    for (auto w : succ[v])
      if (--indeg[w] == 0) ready.push_back(w);
  }
  if (topo.size() != N) throw Error(ErrorCode::Internal, "up-flip relation has a cycle");

  std::vector<std::vector<std::uint64_t>> reach(N, std::vector<std::uint64_t>(words, 0));
  for (auto it = topo.rbegin(); it != topo.rend(); ++it) {
    auto v = *it;
    reach[v][v / 64] |= 1ULL << (v % 64);
    for (auto w : succ[v])
      for (std::size_t k = 0; k < words; ++k) reach[v][k] |= reach[w][k];
  }
  StasheffTamari P;
  P.leq.assign(N, std::vector<bool>(N, false));
  for (std::size_t a = 0; a < N; ++a)
    for (std::size_t b = 0; b < N; ++b) P.leq[a][b] = (reach[a][b / 64] >> (b % 64)) & 1ULL;

  // Covers are among the generating edges: a < b with nothing strictly between.
  std::set<std::pair<std::size_t, std::size_t>> covers;
  for (const auto& e : g.edges) {
    bool cover = true;
    for (auto c : succ[e.from])
      if (c != e.to && P.leq[c][e.to]) {
        cover = false;
        break;
      }
    if (cover) covers.emplace(e.from, e.to);
  }
  P.hasse.assign(covers.begin(), covers.end());
  for (std::size_t v = 0; v < N; ++v) {
    if (indegree[v] == 0) P.minima.push_back(v);
    if (succ[v].empty()) P.maxima.push_back(v);
  }
  return P;
}

nlohmann::json to_json(const Triangulation& T) {
  nlohmann::json facets = nlohmann::json::array();
  for (Simplex f : T.facets) facets.push_back(f.vertices());
  return {{"n", T.n}, {"d", T.d}, {"facets", facets}};
}

nlohmann::json to_json(const FlipGraph& g) {
  nlohmann::json nodes = nlohmann::json::array(), edges = nlohmann::json::array();
  for (const auto& T : g.nodes) {
    nlohmann::json facets = nlohmann::json::array();
    for (Simplex f : T.facets) facets.push_back(f.vertices());
    nodes.push_back(facets);
  }
  for (const auto& e : g.edges) edges.push_back({{"from", e.from}, {"to", e.to}, {"flip", e.flip.vertices()}});
  return {{"n", g.n}, {"d", g.d}, {"count", g.nodes.size()}, {"triangulations", nodes}, {"flips", edges}};
}

namespace {

std::string node_label(const Triangulation& T) {
  std::string s;
  for (std::size_t i = 0; i < T.facets.size(); ++i) s += (i ? " " : "") + T.facets[i].to_string();
  return s;
}

}  // namespace

std::string flip_graph_dot(const FlipGraph& g) {
  std::ostringstream os;
  os << "digraph flips_" << g.n << "_" << g.d << " {\n";
  for (std::size_t i = 0; i < g.nodes.size(); ++i) os << "  t" << i << " [label=\"" << node_label(g.nodes[i]) << "\"];\n";
  for (const auto& e : g.edges) os << "  t" << e.from << " -> t" << e.to << " [label=\"" << e.flip.to_string() << "\"];\n";
  os << "}\n";
  return os.str();
}

std::string hasse_dot(const FlipGraph& g, const StasheffTamari& poset) {
  std::ostringstream os;
  os << "digraph tamari_" << g.n << "_" << g.d << " {\n  rankdir=BT;\n";
  for (std::size_t i = 0; i < g.nodes.size(); ++i) os << "  t" << i << " [label=\"" << node_label(g.nodes[i]) << "\"];\n";
  for (auto [a, b] : poset.hasse) os << "  t" << a << " -> t" << b << ";\n";
  os << "}\n";
  return os.str();
}

}  // namespace segalis
