#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include <nlohmann/json_fwd.hpp>

#include "segalis/backends.hpp"
#include "segalis/linalg.hpp"
#include "segalis/simplicial.hpp"

namespace segalis {

/// A finite category: morphisms 0..m-1 with source/target objects, an
/// identity per object and compose[g][f] = g.f (-1 when not composable).
struct FiniteCategory {
  int objects = 0;
  std::vector<int> source;
  std::vector<int> target;
  std::vector<int> identity;
  std::vector<std::vector<int>> compose;

  /// Throws BadInput unless the data is a category.
  void validate() const;
  int morphisms() const { return static_cast<int>(source.size()); }

  /// One object; `table[a][b]` = a.b with unit 0. Chains read left to right,
  /// so the chain (a, b) composes to a.b.
  static FiniteCategory monoid(const std::vector<std::vector<int>>& table);
  /// Objects 0..n-1 with a unique arrow i -> j iff leq[i][j].
  static FiniteCategory poset(const std::vector<std::vector<char>>& leq);
};

/// X_n = composable chains x_0 -> ... -> x_n, X_0 = objects.
SimplicialObject<FinSet> nerve_of_category(const FiniteCategory& C, int N);

/// A partial monoid: product[a][b] = a.b or -1.
struct PartialMonoid {
  int unit = 0;
  std::vector<std::vector<int>> product;
  std::vector<std::string> names;

  int size() const { return static_cast<int>(product.size()); }
  /// Throws NotPartialMonoid on a unit or associativity failure.
  void validate() const;
  /// Subsets of {1..k} under disjoint union.
  static PartialMonoid disjoint_union(int k);
};

/// X_n = arrays (m_ij), i < j in [n], with m_ik = m_ij.m_jk for all i<j<k;
/// equivalently words a_1..a_n all of whose infix products are defined.
SimplicialObject<FinSet> partial_monoid_object(const PartialMonoid& M, int N);

/// A bounded chain complex over a field in degrees 0..top(); d[k]: C_k -> C_{k-1}.
struct ChainComplex {
  Field field;
  std::vector<int> dims;
  std::vector<Matrix> d;  // d[0] is the zero map C_0 -> 0

  /// Checks shapes and d.d = 0 (BadInput).
  void validate() const;
  int top() const { return static_cast<int>(dims.size()) - 1; }
  int rank_of(int k) const;
  std::vector<int> homology_dims() const;
  /// Zero entries above the last nonzero degree are ignored.
  int max_nonzero_degree() const;
  /// Over a field, complexes are isomorphic iff dimensions and ranks agree.
  bool isomorphic(const ChainComplex& o) const;

  static ChainComplex from_dims(const std::vector<int>& dims, Field field = {});
};

/// Seeded random complex with degrees <= max_degree and dimensions <= max_dim.
ChainComplex random_chain_complex(std::uint64_t seed, int max_degree, int max_dim, Field field = {});

/// Monotone surjections [n] -> [k] as value lists, ordered by k then lexicographically.
std::vector<std::vector<int>> surjections(int n, int k);

/// The simplicial vector space with X_n = sum over surjections [n] -> [k] of C_k.
SimplicialObject<Vect> dold_kan_inverse(const ChainComplex& C, int N);

/// N_n = intersection of ker d_i for i >= 1, with differential d_0.
ChainComplex normalized_chains(const SimplicialObject<Vect>& X);

struct SConstructionGuards {
  int max_n = 3;
  int max_cutoff = 2;
  int max_prime = 3;
};

/// The S-construction of F_p-vector spaces of dimension <= cutoff, as a
/// simplicial groupoid. S_n is modeled by the arrays whose entries carry the
/// standard coordinates of a flag 0 = V_0 <= V_1 <= ... <= V_n (one object per
/// dimension vector); every array is isomorphic to exactly one of these.
/// Morphisms are the flag-preserving automorphisms.
SimplicialObject<Groupoid> s_construction(int p, int n_max, int cutoff, const SConstructionGuards& guards = {});

/// Invertible matrices of F_p^k preserving the coordinate flag with the given
/// jumps, identity first.
std::vector<Matrix> flag_automorphisms(int p, const std::vector<int>& flag);

nlohmann::json to_json(const ChainComplex& C);
ChainComplex chain_complex_from_json(const nlohmann::json& j);
nlohmann::json to_json(const FiniteCategory& C);
FiniteCategory category_from_json(const nlohmann::json& j);
nlohmann::json to_json(const PartialMonoid& M);
PartialMonoid partial_monoid_from_json(const nlohmann::json& j);

}  // namespace segalis
