#pragma once

#include <compare>
#include <cstdint>
#include <functional>
#include <initializer_list>
#include <string>
#include <utility>
#include <vector>

#include <nlohmann/json_fwd.hpp>

namespace segalis {

/// Largest admissible vertex label; vertex sets are stored as 32-bit masks.
inline constexpr int kMaxVertex = 31;

/// A nonempty, strictly increasing set of vertex labels.
///
/// Stored as a bitmask. Ordering is lexicographic on the increasing vertex
/// list, so sorted containers of simplices come out in canonical order.
class Simplex {
 public:
  Simplex() = default;
  Simplex(std::initializer_list<int> vertices);
  explicit Simplex(const std::vector<int>& vertices);

  static Simplex from_mask(std::uint32_t mask);
  /// {0, 1, ..., n}
  static Simplex full(int n);

  std::uint32_t mask() const noexcept { return mask_; }
  int size() const noexcept;
  bool empty() const noexcept { return mask_ == 0; }
  bool contains(int v) const noexcept { return v >= 0 && v <= kMaxVertex && (mask_ >> v) & 1U; }
  bool is_subset_of(Simplex other) const noexcept { return (mask_ & ~other.mask_) == 0; }
  int min() const noexcept;
  int max() const noexcept;
  std::vector<int> vertices() const;
  /// k-th smallest vertex.
  int at(int k) const;
  /// Position of v inside the simplex (number of smaller vertices).
  int rank_of(int v) const noexcept;

  Simplex without(int v) const noexcept { return from_mask(mask_ & ~(1U << v)); }
  Simplex with(int v) const noexcept { return from_mask(mask_ | (1U << v)); }
  Simplex operator|(Simplex o) const noexcept { return from_mask(mask_ | o.mask_); }
  Simplex operator&(Simplex o) const noexcept { return from_mask(mask_ & o.mask_); }
  Simplex minus(Simplex o) const noexcept { return from_mask(mask_ & ~o.mask_); }

  bool operator==(const Simplex&) const = default;
  std::strong_ordering operator<=>(const Simplex& other) const noexcept;

  /// "0123" for single-digit labels, "0.1.12" otherwise.
  std::string to_string() const;

 private:
  std::uint32_t mask_ = 0;
};

struct SimplexMaskLess {
  bool operator()(Simplex a, Simplex b) const noexcept { return a.mask() < b.mask(); }
};

enum class Parity { Even, Odd };
enum class Side { Lower, Upper };

/// An abstract simplicial complex on [n], stored downward closed.
///
/// `simplices()` is sorted by mask for membership tests; `facets()` is the
/// cached set of maximal simplices in lexicographic order.
class Complex {
 public:
  Complex() = default;

  /// Downward closure of the generators.
  static Complex generated(const std::vector<Simplex>& generators, int ambient_n);
  /// Wraps an already downward-closed set (sorted or not). Throws if not closed.
  static Complex from_closed(std::vector<Simplex> simplices, int ambient_n);
  static Complex simplex(Simplex s, int ambient_n) { return generated({s}, ambient_n); }

  int ambient_n() const noexcept { return n_; }
  const std::vector<Simplex>& simplices() const noexcept { return simplices_; }
  const std::vector<Simplex>& facets() const noexcept { return facets_; }
  std::size_t size() const noexcept { return simplices_.size(); }
  bool empty() const noexcept { return simplices_.empty(); }
  bool contains(Simplex s) const;
  bool contains_complex(const Complex& other) const;
  /// Largest simplex cardinality minus one; -1 when empty.
  int dimension() const noexcept;
  std::vector<Simplex> simplices_of_size(int k) const;
  Simplex vertex_set() const;

  Complex unite(const Complex& other) const;
  Complex intersect(const Complex& other) const;
  /// Removes the listed simplices; the caller guarantees the result is closed.
  Complex remove(const std::vector<Simplex>& drop) const;

  bool operator==(const Complex& other) const { return n_ == other.n_ && simplices_ == other.simplices_; }
  bool operator<(const Complex& other) const;

  std::string to_string() const;

 private:
  void rebuild_facets();

  int n_ = 0;
  std::vector<Simplex> simplices_;  // sorted by mask
  std::vector<Simplex> facets_;     // lexicographic
};

struct ComplexHash {
  std::size_t operator()(const Complex& c) const noexcept;
};

/// Parity of the gap j relative to I: even iff #{i in I : i > j} is even.
Parity gap_parity(Simplex I, int j);

bool is_even_subset(Simplex I, int n);
bool is_odd_subset(Simplex I, int n);

/// Lower (even) or upper (odd) boundary complex generated by subsets of
/// cardinality dim+1 of [n]. Requires 0 <= dim < n.
Complex boundary_complex(int n, int dim, Side side);

/// Generators of the boundary complex, without the closure. Allows dim == n,
/// where the single generator is [n] itself.
std::vector<Simplex> boundary_generators(int n, int dim, Side side);

struct Hemispheres {
  Complex lower;
  Complex upper;
};

/// Even and odd facets of the simplex on I, as complexes on [ambient_n].
Hemispheres simplex_hemispheres(Simplex I, int ambient_n);
/// Facets of I split by parity without forming closures.
std::pair<std::vector<Simplex>, std::vector<Simplex>> hemisphere_facets(Simplex I);

/// All subsets of [n] of the given cardinality, lexicographically ordered.
std::vector<Simplex> subsets_of_size(int n, int k);

nlohmann::json to_json(const Complex& c);
Complex complex_from_json(const nlohmann::json& j);

}  // namespace segalis

template <>
struct std::hash<segalis::Simplex> {
  std::size_t operator()(segalis::Simplex s) const noexcept { return std::hash<std::uint32_t>{}(s.mask()); }
};
