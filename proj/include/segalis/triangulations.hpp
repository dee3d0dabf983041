#pragma once

#include <cstddef>
#include <string>
#include <vector>

#include <nlohmann/json_fwd.hpp>

#include "segalis/complexes.hpp"

namespace segalis {

/// I < J in the stacking order: |I u J| = d+2 and I n J is an upper facet of
/// I and a lower facet of J. Both must have d+1 elements.
bool rambau_less(Simplex I, Simplex J, int d);

/// Word of length n+1: '*' on I, 'e'/'o' on even/odd gaps.
std::string epsilon_word(Simplex I, int n);
/// Lexicographic comparison of epsilon words with o < * < e.
bool epsilon_less(Simplex I, Simplex J, int n);

struct Triangulation {
  int n = 0;
  int d = 0;
  std::vector<Simplex> facets;  // lexicographic

  Triangulation() = default;
  Triangulation(int n_, int d_, std::vector<Simplex> facets_);
  bool operator==(const Triangulation&) const = default;
};

/// Canonical node order: facet lists sorted and compared in epsilon order.
bool triangulation_less(const Triangulation& a, const Triangulation& b);

bool is_triangulation(const std::vector<Simplex>& facets, int n, int d);
/// The two canonical triangulations 𝓛([n],d) and 𝒰([n],d) (n >= d).
Triangulation lower_triangulation(int n, int d);
Triangulation upper_triangulation(int n, int d);

struct AvailableFlips {
  std::vector<Simplex> up;    // lower hemisphere present
  std::vector<Simplex> down;  // upper hemisphere present
};
AvailableFlips available_flips(const Triangulation& T);

/// Swaps the lower hemisphere of I for the upper one (or back).
Triangulation flip(const Triangulation& T, Simplex I);

struct FlipEdge {
  std::size_t from;  // up-flip goes from -> to
  std::size_t to;
  Simplex flip;
  bool operator==(const FlipEdge&) const = default;
};

struct FlipGraph {
  int n = 0;
  int d = 0;
  std::vector<Triangulation> nodes;  // canonical order
  std::vector<FlipEdge> edges;       // sorted by (from, to)
  bool connected() const;
};

struct FlipGuards {
  int max_n_d2 = 9;
  int max_n_d3 = 7;
  int max_n_other = 8;
};

FlipGraph flip_graph(int n, int d, const FlipGuards& guards = {});

/// Reflexive-transitive closure of up-flips on the nodes of a flip graph.
struct StasheffTamari {
  std::vector<std::vector<bool>> leq;     // leq[a][b]: a below b
  std::vector<std::pair<std::size_t, std::size_t>> hasse;  // covering pairs
  std::vector<std::size_t> minima;
  std::vector<std::size_t> maxima;
};

StasheffTamari stasheff_tamari_poset(const FlipGraph& g);

nlohmann::json to_json(const Triangulation& T);
nlohmann::json to_json(const FlipGraph& g);
std::string flip_graph_dot(const FlipGraph& g);
std::string hasse_dot(const FlipGraph& g, const StasheffTamari& poset);

}  // namespace segalis
