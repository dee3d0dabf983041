#include "segalis/complexes.hpp"

#include <algorithm>
#include <bit>
#include <sstream>

#include <nlohmann/json.hpp>

#include "segalis/error.hpp"

namespace segalis {

std::string_view to_string(ErrorCode code) {
  switch (code) {
    case ErrorCode::EmptyComplex: return "EmptyComplex";
    case ErrorCode::BadVertex: return "BadVertex";
    case ErrorCode::NotAGap: return "NotAGap";
    case ErrorCode::DimensionTooLarge: return "DimensionTooLarge";
    case ErrorCode::NoBoundary: return "NoBoundary";
    case ErrorCode::ZeroDimension: return "ZeroDimension";
    case ErrorCode::TooManyVertices: return "TooManyVertices";
    case ErrorCode::NotFullDimensional: return "NotFullDimensional";
    case ErrorCode::NotAdmissible: return "NotAdmissible";
    case ErrorCode::NotComposable: return "NotComposable";
    case ErrorCode::FlatCell: return "FlatCell";
    case ErrorCode::TooLarge: return "TooLarge";
    case ErrorCode::BadArity: return "BadArity";
    case ErrorCode::FlipNotAvailable: return "FlipNotAvailable";
    case ErrorCode::NotADiagram: return "NotADiagram";
    case ErrorCode::TruncationTooLow: return "TruncationTooLow";
    case ErrorCode::NoPaths: return "NoPaths";
    case ErrorCode::NotPartialMonoid: return "NotPartialMonoid";
    case ErrorCode::NotAnExcision: return "NotAnExcision";
    case ErrorCode::NotSimplicial: return "NotSimplicial";
    case ErrorCode::BadInput: return "BadInput";
    case ErrorCode::Internal: return "Internal";
  }
  return "Unknown";
}

// ---------------------------------------------------------------------------
// Simplex

Simplex::Simplex(std::initializer_list<int> vertices) : Simplex(std::vector<int>(vertices)) {}

Simplex::Simplex(const std::vector<int>& vertices) {
  int prev = -1;
  for (int v : vertices) {
    if (v < 0 || v > kMaxVertex) throw Error(ErrorCode::BadVertex, "vertex " + std::to_string(v));
    if (v <= prev) throw Error(ErrorCode::BadVertex, "vertex list not strictly increasing");
    prev = v;
    mask_ |= 1U << v;
  }
}

Simplex Simplex::from_mask(std::uint32_t mask) {
  Simplex s;
  s.mask_ = mask;
  return s;
}

Simplex Simplex::full(int n) {
  if (n < 0 || n > kMaxVertex) throw Error(ErrorCode::BadVertex, "n=" + std::to_string(n));
  return from_mask(n == 31 ? 0xFFFFFFFFU : ((1U << (n + 1)) - 1));
}

int Simplex::size() const noexcept { return std::popcount(mask_); }
int Simplex::min() const noexcept { return mask_ ? std::countr_zero(mask_) : -1; }
int Simplex::max() const noexcept { return mask_ ? 31 - std::countl_zero(mask_) : -1; }

std::vector<int> Simplex::vertices() const {
  std::vector<int> out;
  out.reserve(size());
  for (std::uint32_t m = mask_; m; m &= m - 1) out.push_back(std::countr_zero(m));
  return out;
}

int Simplex::at(int k) const {
  std::uint32_t m = mask_;
  for (int i = 0; i < k && m; ++i) m &= m - 1;
  if (!m) throw Error(ErrorCode::BadVertex, "index out of range");
  return std::countr_zero(m);
}

int Simplex::rank_of(int v) const noexcept { return std::popcount(mask_ & ((1U << v) - 1)); }

std::strong_ordering Simplex::operator<=>(const Simplex& other) const noexcept {
  // Lexicographic on increasing vertex lists: compare the lowest differing
  // vertex; a proper prefix sorts first.
  std::uint32_t a = mask_, b = other.mask_;
  while (a && b) {
    int x = std::countr_zero(a), y = std::countr_zero(b);
    if (x != y) return x < y ? std::strong_ordering::less : std::strong_ordering::greater;
    a &= a - 1;
    b &= b - 1;
  }
  if (!a && !b) return std::strong_ordering::equal;
  return a ? std::strong_ordering::greater : std::strong_ordering::less;
}

std::string Simplex::to_string() const {
  auto vs = vertices();
  bool small = max() < 10;
  std::string out;
  for (std::size_t i = 0; i < vs.size(); ++i) {
    if (!small && i) out += '.';
    out += std::to_string(vs[i]);
  }
  return out;
}

// ---------------------------------------------------------------------------
// Complex

namespace {

void sort_unique_by_mask(std::vector<Simplex>& v) {
  std::sort(v.begin(), v.end(), SimplexMaskLess{});
  v.erase(std::unique(v.begin(), v.end()), v.end());
}

void check_range(Simplex s, int n) {
  if (s.empty()) throw Error(ErrorCode::EmptyComplex, "empty simplex");
  if (s.max() > n) throw Error(ErrorCode::BadVertex, "simplex " + s.to_string() + " outside [" + std::to_string(n) + "]");
}

}  // namespace

Complex Complex::generated(const std::vector<Simplex>& generators, int ambient_n) {
  if (generators.empty()) throw Error(ErrorCode::EmptyComplex, "no generators");
  if (ambient_n < 0 || ambient_n > kMaxVertex) throw Error(ErrorCode::BadVertex, "ambient n out of range");
  std::vector<Simplex> out;
  for (Simplex g : generators) {
    check_range(g, ambient_n);
    // Enumerate nonempty submasks.
    std::uint32_t m = g.mask();
    for (std::uint32_t sub = m; sub; sub = (sub - 1) & m) out.push_back(Simplex::from_mask(sub));
  }
  sort_unique_by_mask(out);
  Complex c;
  c.n_ = ambient_n;
  c.simplices_ = std::move(out);
  c.rebuild_facets();
  return c;
}

Complex Complex::from_closed(std::vector<Simplex> simplices, int ambient_n) {
  sort_unique_by_mask(simplices);
  Complex c;
  c.n_ = ambient_n;
  c.simplices_ = std::move(simplices);
  for (Simplex s : c.simplices_) {
    check_range(s, ambient_n);
    for (int v : s.vertices()) {
      Simplex f = s.without(v);
      if (!f.empty() && !c.contains(f)) throw Error(ErrorCode::BadInput, "set not downward closed at " + s.to_string());
    }
  }
  c.rebuild_facets();
  return c;
}

void Complex::rebuild_facets() {
  facets_.clear();
  // A simplex is a facet iff no one-vertex extension is present.
  for (Simplex s : simplices_) {
    bool maximal = true;
    for (int v = 0; v <= n_ && maximal; ++v)
      if (!s.contains(v) && contains(s.with(v))) maximal = false;
    if (maximal) facets_.push_back(s);
  }
  std::sort(facets_.begin(), facets_.end());
}

bool Complex::contains(Simplex s) const {
  return std::binary_search(simplices_.begin(), simplices_.end(), s, SimplexMaskLess{});
}

bool Complex::contains_complex(const Complex& other) const {
  return std::includes(simplices_.begin(), simplices_.end(), other.simplices_.begin(), other.simplices_.end(),
                       SimplexMaskLess{});
}

int Complex::dimension() const noexcept {
  int d = -1;
  for (Simplex f : facets_) d = std::max(d, f.size() - 1);
  return d;
}

std::vector<Simplex> Complex::simplices_of_size(int k) const {
  std::vector<Simplex> out;
  for (Simplex s : simplices_)
    if (s.size() == k) out.push_back(s);
  std::sort(out.begin(), out.end());
  return out;
}

Simplex Complex::vertex_set() const {
  std::uint32_t m = 0;
  for (Simplex f : facets_) m |= f.mask();
  return Simplex::from_mask(m);
}

Complex Complex::unite(const Complex& other) const {
  Complex c;
  c.n_ = std::max(n_, other.n_);
  std::set_union(simplices_.begin(), simplices_.end(), other.simplices_.begin(), other.simplices_.end(),
                 std::back_inserter(c.simplices_), SimplexMaskLess{});
  c.rebuild_facets();
  return c;
}

Complex Complex::intersect(const Complex& other) const {
  Complex c;
  c.n_ = std::max(n_, other.n_);
  std::set_intersection(simplices_.begin(), simplices_.end(), other.simplices_.begin(), other.simplices_.end(),
                        std::back_inserter(c.simplices_), SimplexMaskLess{});
  c.rebuild_facets();
  return c;
}

Complex Complex::remove(const std::vector<Simplex>& drop) const {
  std::vector<Simplex> sorted_drop = drop;
  sort_unique_by_mask(sorted_drop);
  Complex c;
  c.n_ = n_;
  std::set_difference(simplices_.begin(), simplices_.end(), sorted_drop.begin(), sorted_drop.end(),
                      std::back_inserter(c.simplices_), SimplexMaskLess{});
  c.rebuild_facets();
  return c;
}

bool Complex::operator<(const Complex& other) const {
  if (n_ != other.n_) return n_ < other.n_;
  return std::lexicographical_compare(facets_.begin(), facets_.end(), other.facets_.begin(), other.facets_.end());
}

std::string Complex::to_string() const {
  std::ostringstream os;
  os << '<';
  for (std::size_t i = 0; i < facets_.size(); ++i) os << (i ? "," : "") << facets_[i].to_string();
  os << '>';
  return os.str();
}

std::size_t ComplexHash::operator()(const Complex& c) const noexcept {
  std::size_t h = static_cast<std::size_t>(c.ambient_n()) * 0x9E3779B97F4A7C15ULL;
  for (Simplex s : c.simplices()) h = (h ^ s.mask()) * 0x100000001B3ULL + (h >> 29);
  return h;
}

// ---------------------------------------------------------------------------
// Gale parity and boundaries

Parity gap_parity(Simplex I, int j) {
  if (I.contains(j)) throw Error(ErrorCode::NotAGap, std::to_string(j) + " in " + I.to_string());
  if (j < 0 || j > kMaxVertex) throw Error(ErrorCode::BadVertex, "gap " + std::to_string(j));
  std::uint32_t above = j == 31 ? 0 : (I.mask() >> (j + 1));
  return std::popcount(above) % 2 == 0 ? Parity::Even : Parity::Odd;
}

namespace {

bool all_gaps(Simplex I, int n, Parity want) {
  for (int j = 0; j <= n; ++j)
    if (!I.contains(j) && gap_parity(I, j) != want) return false;
  return true;
}

}  // namespace

bool is_even_subset(Simplex I, int n) { return all_gaps(I, n, Parity::Even); }
bool is_odd_subset(Simplex I, int n) { return all_gaps(I, n, Parity::Odd); }

std::vector<Simplex> subsets_of_size(int n, int k) {
  std::vector<Simplex> out;
  if (k < 1 || k > n + 1) return out;
  std::uint32_t limit = 1U << (n + 1);
  for (std::uint32_t m = 1; m < limit; ++m)
    if (std::popcount(m) == k) out.push_back(Simplex::from_mask(m));
  std::sort(out.begin(), out.end());
  return out;
}

std::vector<Simplex> boundary_generators(int n, int dim, Side side) {
  std::vector<Simplex> gens;
  for (Simplex s : subsets_of_size(n, dim + 1))
    if (side == Side::Lower ? is_even_subset(s, n) : is_odd_subset(s, n)) gens.push_back(s);
  return gens;
}

Complex boundary_complex(int n, int dim, Side side) {
  if (dim < 0 || dim >= n)
    throw Error(ErrorCode::DimensionTooLarge, "dim=" + std::to_string(dim) + " n=" + std::to_string(n));
  return Complex::generated(boundary_generators(n, dim, side), n);
}

std::pair<std::vector<Simplex>, std::vector<Simplex>> hemisphere_facets(Simplex I) {
  std::vector<Simplex> lower, upper;
  for (int v : I.vertices()) {
    Simplex facet = I.without(v);
    (gap_parity(facet, v) == Parity::Even ? lower : upper).push_back(facet);
  }
  std::sort(lower.begin(), lower.end());
  std::sort(upper.begin(), upper.end());
  return {lower, upper};
}

Hemispheres simplex_hemispheres(Simplex I, int ambient_n) {
  if (I.size() < 2) throw Error(ErrorCode::NoBoundary, I.to_string());
  auto [lower, upper] = hemisphere_facets(I);
  return {Complex::generated(lower, ambient_n), Complex::generated(upper, ambient_n)};
}

// ---------------------------------------------------------------------------
// JSON

nlohmann::json to_json(const Complex& c) {
  nlohmann::json facets = nlohmann::json::array();
  for (Simplex f : c.facets()) facets.push_back(f.vertices());
  return {{"n", c.ambient_n()}, {"facets", facets}};
}

Complex complex_from_json(const nlohmann::json& j) {
  try {
    int n = j.at("n").get<int>();
    std::vector<Simplex> gens;
    for (const auto& f : j.at("facets")) gens.emplace_back(f.get<std::vector<int>>());
    return Complex::generated(gens, n);
  } catch (const nlohmann::json::exception& e) {
    throw Error(ErrorCode::BadInput, e.what());
  }
}

}  // namespace segalis
