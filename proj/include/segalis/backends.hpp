#pragma once

#include <concepts>
#include <map>
#include <memory>
#include <optional>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

#include <nlohmann/json_fwd.hpp>

#include "segalis/error.hpp"
#include "segalis/linalg.hpp"

namespace segalis {

/// Outcome of an isomorphism (or equivalence) test; `witness` describes a
/// concrete obstruction when the test fails.
struct IsoVerdict {
  bool iso = false;
  std::string witness;
};

// ---------------------------------------------------------------- finite sets

struct FinSetObj {
  int size = 0;
  bool operator==(const FinSetObj&) const = default;
};

/// A total function {0..source-1} -> {0..target-1}.
struct FinSetMap {
  FinSetObj source;
  FinSetObj target;
  std::vector<int> image;

  /// Throws BadInput if some image is out of range.
  static FinSetMap make(int target_size, std::vector<int> image);
  bool operator==(const FinSetMap&) const = default;
};

// ----------------------------------------------------------- vector spaces

struct VectObj {
  int dim = 0;
  Field field;
  bool operator==(const VectObj&) const = default;
};

/// A linear map given by its matrix, target.dim x source.dim.
struct VectMap {
  Matrix matrix;
  VectObj source() const { return {matrix.cols(), matrix.field()}; }
  VectObj target() const { return {matrix.rows(), matrix.field()}; }
  bool operator==(const VectMap&) const = default;
};

// ---------------------------------------------------------------- groupoids

/// A finite group given by its multiplication table; element 0 is the unit.
class FiniteGroup {
 public:
  FiniteGroup() : FiniteGroup(std::vector<std::vector<int>>{{0}}) {}
  /// Throws BadInput unless the table is a group with unit 0.
  explicit FiniteGroup(const std::vector<std::vector<int>>& table);

  int order() const noexcept { return order_; }
  int mul(int a, int b) const { return mul_[static_cast<std::size_t>(a) * order_ + b]; }
  int inverse(int a) const { return inv_[a]; }
  std::vector<std::vector<int>> table() const;
  bool operator==(const FiniteGroup&) const = default;

 private:
  int order_ = 1;
  std::vector<int> mul_;
  std::vector<int> inv_;
};

/// A morphism of a GroupoidObj: in the component holding `source`, the arrow
/// t_target * g * t_source^-1 where g = `element` is an automorphism of the
/// component's base object and t_x is the chosen arrow from the base to x.
struct Arrow {
  int source = 0;
  int target = 0;
  int element = 0;
  auto operator<=>(const Arrow&) const = default;
};

/// A finite groupoid presented per connected component as the product of the
/// pair groupoid on the component's objects with its automorphism group.
/// Every finite groupoid has such a presentation once a base object and
/// arrows from it are chosen in each component.
class GroupoidObj {
 public:
  struct Component {
    FiniteGroup group;
    std::vector<int> objects;  // first entry is the base
  };

  GroupoidObj();
  /// Components must partition 0..object_count-1. Throws BadInput otherwise.
  explicit GroupoidObj(std::vector<Component> components, std::vector<std::string> labels = {});

  int object_count() const noexcept;
  int component_count() const noexcept;
  const Component& component(int c) const;
  int component_of(int object) const;
  int base_of(int object) const { return component(component_of(object)).objects.front(); }
  const std::string& label(int object) const;
  std::size_t morphism_count() const;

  Arrow identity(int object) const { return {object, object, 0}; }
  /// g after f; throws BadInput when f's target is not g's source.
  Arrow compose(const Arrow& g, const Arrow& f) const;
  Arrow inverse(const Arrow& f) const;
  bool valid(const Arrow& f) const;
  /// All arrows a -> b, ordered by group element.
  std::vector<Arrow> hom(int a, int b) const;

  bool operator==(const GroupoidObj& o) const;

 private:
  struct Data {
    std::vector<Component> components;
    std::vector<int> component_of;
    std::vector<std::string> labels;
  };
  std::shared_ptr<const Data> d_;
};

/// A functor, stored on generators: the object map, the images of each source
/// component's group, and the images of the chosen arrows t_x.
class GroupoidFunctor {
 public:
  GroupoidFunctor() = default;
  /// Throws BadInput if the data is not a functor.
  GroupoidFunctor(GroupoidObj source, GroupoidObj target, std::vector<int> objects,
                  std::vector<std::vector<Arrow>> groups, std::vector<Arrow> connecting);
  /// Builds a functor from its values on every morphism, checking functoriality.
  template <typename F>
  static GroupoidFunctor from_arrow_map(const GroupoidObj& source, const GroupoidObj& target, F&& on_arrow);

  const GroupoidObj& source() const noexcept { return source_; }
  const GroupoidObj& target() const noexcept { return target_; }
  int on_object(int x) const { return objects_.at(x); }
  Arrow operator()(const Arrow& f) const;
  const std::vector<int>& object_map() const noexcept { return objects_; }
  const std::vector<std::vector<Arrow>>& group_images() const noexcept { return groups_; }
  const std::vector<Arrow>& connecting_images() const noexcept { return connecting_; }

  bool operator==(const GroupoidFunctor&) const = default;

 private:
  GroupoidObj source_;
  GroupoidObj target_;
  std::vector<int> objects_;
  std::vector<std::vector<Arrow>> groups_;
  std::vector<Arrow> connecting_;
};

template <typename F>
GroupoidFunctor GroupoidFunctor::from_arrow_map(const GroupoidObj& source, const GroupoidObj& target, F&& on_arrow) {
  std::vector<int> objects(source.object_count());
  std::vector<std::vector<Arrow>> groups(source.component_count());
  std::vector<Arrow> connecting(source.object_count());
  for (int x = 0; x < source.object_count(); ++x) objects[x] = on_arrow(source.identity(x)).source;
  for (int c = 0; c < source.component_count(); ++c) {
    const auto& comp = source.component(c);
    const int base = comp.objects.front();
    for (int g = 0; g < comp.group.order(); ++g) groups[c].push_back(on_arrow(Arrow{base, base, g}));
    for (int x : comp.objects) connecting[x] = on_arrow(Arrow{base, x, 0});
  }
  GroupoidFunctor f(source, target, std::move(objects), std::move(groups), std::move(connecting));
  for (int c = 0; c < source.component_count(); ++c) {
    const auto& objs = source.component(c).objects;
    for (int a : objs)
      for (int b : objs)
        for (const Arrow& h : source.hom(a, b))
          if (f(h) != on_arrow(h)) throw Error(ErrorCode::BadInput, "arrow map is not functorial");
  }
  return f;
}

/// Essentially surjective and fully faithful.
IsoVerdict is_equivalence(const GroupoidFunctor& f);
/// Bijective on objects and morphisms.
bool is_isomorphism(const GroupoidFunctor& f);

// --------------------------------------------------------- poset diagrams

/// A functor P^op -> C on a finite poset P: for a <= b there is a map
/// values[b] -> values[a]. Only covering pairs carry explicit maps.
template <typename Mor, typename Obj>
struct BasicPosetDiagram {
  std::vector<std::string> labels;
  std::vector<std::vector<char>> leq;  // leq[a][b] iff a <= b
  std::vector<Obj> values;
  std::map<std::pair<int, int>, Mor> maps;  // covering a < b: values[b] -> values[a]

  int size() const noexcept { return static_cast<int>(values.size()); }
};

/// Limit cone: apex with one projection per diagram element, plus whatever the
/// backend needs to induce maps into the apex.
template <typename B>
struct Limit {
  typename B::Object apex;
  std::vector<typename B::Morphism> projections;
  typename B::LimitInfo info;
};

template <typename B>
concept Backend = requires(const typename B::Object& o, const typename B::Morphism& f) {
  { B::identity(o) } -> std::same_as<typename B::Morphism>;
  { B::compose(f, f) } -> std::same_as<typename B::Morphism>;
  { B::source(f) } -> std::convertible_to<typename B::Object>;
  { B::target(f) } -> std::convertible_to<typename B::Object>;
  { B::is_iso(f) } -> std::same_as<IsoVerdict>;
  { B::size(o) } -> std::convertible_to<std::size_t>;
  { B::tag } -> std::convertible_to<std::string_view>;
};

template <typename B>
using PosetDiagram = BasicPosetDiagram<typename B::Morphism, typename B::Object>;

/// Maps values[b] -> values[a] for every a <= b, composed lazily from covers.
template <typename B>
class Along {
 public:
  explicit Along(const PosetDiagram<B>& d);
  const typename B::Morphism& operator()(int a, int b);
  const std::vector<std::pair<int, int>>& covers() const noexcept { return covers_; }
  /// Elements with nothing above them, in increasing order.
  const std::vector<int>& maximal() const noexcept { return maximal_; }
  /// Covers c < b, for each b.
  const std::vector<int>& lower_covers(int b) const { return below_[b]; }

 private:
  const PosetDiagram<B>& d_;
  std::vector<std::pair<int, int>> covers_;
  std::vector<std::vector<int>> below_;
  std::vector<int> maximal_;
  std::map<std::pair<int, int>, typename B::Morphism> memo_;
};

template <typename B>
Along<B>::Along(const PosetDiagram<B>& d) : d_(d), below_(d.size()) {
  const int n = d.size();
  if (static_cast<int>(d.leq.size()) != n) throw Error(ErrorCode::NotADiagram, "order relation has wrong size");
  for (int a = 0; a < n; ++a) {
    if (static_cast<int>(d.leq[a].size()) != n || !d.leq[a][a])
      throw Error(ErrorCode::NotADiagram, "order relation is not reflexive");
    for (int b = 0; b < n; ++b) {
      if (a != b && d.leq[a][b] && d.leq[b][a]) throw Error(ErrorCode::NotADiagram, "order relation is not antisymmetric");
      for (int c = 0; c < n; ++c)
        if (d.leq[a][b] && d.leq[b][c] && !d.leq[a][c]) throw Error(ErrorCode::NotADiagram, "order relation is not transitive");
    }
  }
  for (int a = 0; a < n; ++a)
    for (int b = 0; b < n; ++b) {
      if (a == b || !d.leq[a][b]) continue;
      bool cover = true;
      for (int c = 0; c < n && cover; ++c) cover = c == a || c == b || !(d.leq[a][c] && d.leq[c][b]);
      if (!cover) continue;
      auto it = d.maps.find({a, b});
      if (it == d.maps.end())
        throw Error(ErrorCode::NotADiagram, "missing map for " + std::to_string(a) + " < " + std::to_string(b));
      if (!(B::source(it->second) == d.values[b]) || !(B::target(it->second) == d.values[a]))
        throw Error(ErrorCode::NotADiagram, "map for " + std::to_string(a) + " < " + std::to_string(b) + " has wrong ends");
      covers_.emplace_back(a, b);
      below_[b].push_back(a);
    }
  if (covers_.size() != d.maps.size()) throw Error(ErrorCode::NotADiagram, "maps given for non-covering pairs");
  for (int a = 0; a < n; ++a) {
    bool top = true;
    for (int b = 0; b < n && top; ++b) top = a == b || !d.leq[a][b];
    if (top) maximal_.push_back(a);
  }
}

template <typename B>
const typename B::Morphism& Along<B>::operator()(int a, int b) {
  if (!d_.leq[a][b]) throw Error(ErrorCode::Internal, "along() on incomparable elements");
  auto key = std::pair{a, b};
  if (auto it = memo_.find(key); it != memo_.end()) return it->second;
  typename B::Morphism m = B::identity(d_.values[b]);
  if (a != b) {
    for (int c : below_[b])
      if (d_.leq[a][c]) {
        m = B::compose((*this)(a, c), d_.maps.at({c, b}));
        break;
      }
  }
  return memo_.emplace(key, std::move(m)).first->second;
}

/// Throws NotADiagram if two chains from b down to a compose differently.
template <typename B>
void check_coherent(const PosetDiagram<B>& d) {
  Along<B> along(d);
  for (int b = 0; b < d.size(); ++b)
    for (int a = 0; a < d.size(); ++a) {
      if (a == b || !d.leq[a][b]) continue;
      const auto& ref = along(a, b);
      for (int c : along.lower_covers(b))
        if (d.leq[a][c] && !(B::compose(along(a, c), d.maps.at({c, b})) == ref))
          throw Error(ErrorCode::NotADiagram, "diagram does not commute between " + std::to_string(a) + " and " + std::to_string(b));
    }
}

/// Restriction of a diagram to the elements flagged in `keep`, in order.
template <typename B>
PosetDiagram<B> subdiagram(const PosetDiagram<B>& d, const std::vector<int>& keep) {
  Along<B> along(d);
  PosetDiagram<B> s;
  const int k = static_cast<int>(keep.size());
  s.leq.assign(k, std::vector<char>(k, 0));
  for (int i = 0; i < k; ++i) {
    s.values.push_back(d.values[keep[i]]);
    if (!d.labels.empty()) s.labels.push_back(d.labels[keep[i]]);
    for (int j = 0; j < k; ++j) s.leq[i][j] = d.leq[keep[i]][keep[j]];
  }
  for (int i = 0; i < k; ++i)
    for (int j = 0; j < k; ++j) {
      if (i == j || !s.leq[i][j]) continue;
      bool cover = true;
      for (int c = 0; c < k && cover; ++c) cover = c == i || c == j || !(s.leq[i][c] && s.leq[c][j]);
      if (cover) s.maps.emplace(std::pair{i, j}, along(keep[i], keep[j]));
    }
  return s;
}

// ------------------------------------------------------------- backend tags

struct FinSet {
  using Object = FinSetObj;
  using Morphism = FinSetMap;
  struct LimitInfo {
    std::vector<int> maximal;
    std::map<std::vector<int>, int> index;  // tuple over `maximal` -> apex element
  };
  static constexpr std::string_view tag = "finset";

  static Morphism identity(const Object& o);
  static Morphism compose(const Morphism& g, const Morphism& f);
  static Object source(const Morphism& f) { return f.source; }
  static Object target(const Morphism& f) { return f.target; }
  static IsoVerdict is_iso(const Morphism& f);
  static std::size_t size(const Object& o) { return static_cast<std::size_t>(o.size); }

  /// Compatible families over the maximal elements, in lexicographic order.
  static Limit<FinSet> limit(const PosetDiagram<FinSet>& d, Along<FinSet>& along);
  /// The map into the apex induced by a cone with one leg per element.
  static Morphism induced(const Limit<FinSet>& lim, const Object& source, const std::vector<Morphism>& legs);
};

struct Vect {
  using Object = VectObj;
  using Morphism = VectMap;
  struct LimitInfo {
    std::vector<int> maximal;
    std::vector<int> offsets;      // start of each maximal element's block in the product
    std::vector<int> coordinates;  // rows of the product read as apex coordinates
  };
  static constexpr std::string_view tag = "vect";

  static Morphism identity(const Object& o) { return {Matrix::identity(o.dim, o.field)}; }
  static Morphism compose(const Morphism& g, const Morphism& f) { return {g.matrix * f.matrix}; }
  static Object source(const Morphism& f) { return f.source(); }
  static Object target(const Morphism& f) { return f.target(); }
  static IsoVerdict is_iso(const Morphism& f);
  static std::size_t size(const Object& o) { return static_cast<std::size_t>(o.dim); }

  /// Kernel of the difference map from the product over the maximal
  /// elements to their maximal common lower bounds.
  static Limit<Vect> limit(const PosetDiagram<Vect>& d, Along<Vect>& along);
  static Morphism induced(const Limit<Vect>& lim, const Object& source, const std::vector<Morphism>& legs);
};

struct Groupoid {
  using Object = GroupoidObj;
  using Morphism = GroupoidFunctor;
  /// Objects of the pseudo-limit are normalized families: a value at each
  /// maximal element plus coherence isomorphisms. `families` and
  /// `connecting` let cones be converted to arrows of the apex.
  struct LimitInfo {
    std::vector<int> maximal;
    std::vector<int> home;  // chosen maximal element above each element
    std::map<std::vector<int>, int> objects;  // object key -> apex object
    std::vector<std::vector<Arrow>> connecting;  // apex object -> family from its base
    std::vector<std::map<std::vector<Arrow>, int>> group_index;  // per component: base automorphism family -> element
  };
  static constexpr std::string_view tag = "groupoid";

  static Morphism identity(const Object& o);
  static Morphism compose(const Morphism& g, const Morphism& f);
  static Object source(const Morphism& f) { return f.source(); }
  static Object target(const Morphism& f) { return f.target(); }
  /// Equivalence of groupoids.
  static IsoVerdict is_iso(const Morphism& f) { return is_equivalence(f); }
  static std::size_t size(const Object& o) { return static_cast<std::size_t>(o.object_count()); }

  /// Pseudo-limit, up to equivalence: objects are families with chosen
  /// coherence isomorphisms, normalized so the value at each non-maximal
  /// element is the image of its home maximal element.
  static Limit<Groupoid> limit(const PosetDiagram<Groupoid>& d, Along<Groupoid>& along);
  /// The functor into the apex induced by a strictly commuting cone.
  static Morphism induced(const Limit<Groupoid>& lim, const Object& source, const std::vector<Morphism>& legs);
};

static_assert(Backend<FinSet> && Backend<Vect> && Backend<Groupoid>);

/// Limit of a diagram. With `check` set, coherence is verified first
/// (NotADiagram on failure).
template <Backend B>
Limit<B> poset_limit(const PosetDiagram<B>& d, bool check = true) {
  if (check) check_coherent<B>(d);
  Along<B> along(d);
  return B::limit(d, along);
}

/// Apex dimension computed by successive equalizers over the maximal
/// elements; an independent route to the dimension of a Vect limit.
int limit_dimension_by_equalizers(const PosetDiagram<Vect>& d);

nlohmann::json to_json(const FinSetMap& f);
nlohmann::json to_json(const VectMap& f);
nlohmann::json to_json(const GroupoidObj& g);
nlohmann::json to_json(const GroupoidFunctor& f);
FinSetMap finset_map_from_json(const nlohmann::json& j, int source_size, int target_size);
VectMap vect_map_from_json(const nlohmann::json& j, int source_dim, int target_dim, Field field);
GroupoidObj groupoid_from_json(const nlohmann::json& j);
GroupoidFunctor groupoid_functor_from_json(const nlohmann::json& j, const GroupoidObj& source, const GroupoidObj& target);

}  // namespace segalis
