#include "segalis/backends.hpp"

#include <algorithm>
#include <functional>
#include <set>

#include <nlohmann/json.hpp>

namespace segalis {

// ---------------------------------------------------------------- finite sets

FinSetMap FinSetMap::make(int target_size, std::vector<int> image) {
  for (int y : image)
    if (y < 0 || y >= target_size)
      throw Error(ErrorCode::BadInput, "map value " + std::to_string(y) + " outside a set of size " + std::to_string(target_size));
  FinSetMap f;
  f.source = {static_cast<int>(image.size())};
  f.target = {target_size};
  f.image = std::move(image);
  return f;
}

FinSetMap FinSet::identity(const FinSetObj& o) {
  std::vector<int> v(o.size);
  for (int i = 0; i < o.size; ++i) v[i] = i;
  return FinSetMap::make(o.size, std::move(v));
}

FinSetMap FinSet::compose(const FinSetMap& g, const FinSetMap& f) {
  if (!(f.target == g.source)) throw Error(ErrorCode::BadInput, "composing maps with mismatched ends");
  std::vector<int> v(f.image.size());
  for (std::size_t i = 0; i < v.size(); ++i) v[i] = g.image[f.image[i]];
  return FinSetMap::make(g.target.size, std::move(v));
}

IsoVerdict FinSet::is_iso(const FinSetMap& f) {
  if (f.source.size != f.target.size)
    return {false, std::to_string(f.source.size) + " elements map to " + std::to_string(f.target.size)};
  std::vector<int> pre(f.target.size, -1);
  for (int x = 0; x < f.source.size; ++x) {
    int y = f.image[x];
    if (pre[y] >= 0)
      return {false, "elements " + std::to_string(pre[y]) + " and " + std::to_string(x) + " both map to " + std::to_string(y)};
    pre[y] = x;
  }
  return {true, {}};
}

Limit<FinSet> FinSet::limit(const PosetDiagram<FinSet>& d, Along<FinSet>& along) {
  const auto& M = along.maximal();
  const int k = static_cast<int>(M.size());
  // For each maximal M[j], the constraints (i < j, c) with c maximal among the
  // common lower bounds of M[i] and M[j].
  std::vector<std::vector<std::pair<int, int>>> checks(k);
  for (int j = 0; j < k; ++j)
    for (int i = 0; i < j; ++i) {
      std::vector<int> common;
      for (int c = 0; c < d.size(); ++c)
        if (d.leq[c][M[i]] && d.leq[c][M[j]]) common.push_back(c);
      for (int c : common) {
        bool top = true;
        for (int e : common) top = top && (e == c || !d.leq[c][e]);
        if (top) checks[j].emplace_back(i, c);
      }
    }
  Limit<FinSet> lim;
  lim.info.maximal = M;
  std::vector<std::vector<int>> tuples;
  std::vector<int> cur(k);
  std::function<void(int)> rec = [&](int j) {
    if (j == k) {
      tuples.push_back(cur);
      return;
    }
    for (int x = 0; x < d.values[M[j]].size; ++x) {
      bool ok = true;
      for (auto [i, c] : checks[j]) {
        if (along(c, M[i]).image[cur[i]] != along(c, M[j]).image[x]) {
          ok = false;
          break;
        }
      }
      if (!ok) continue;
      cur[j] = x;
      rec(j + 1);
    }
  };
  rec(0);
  lim.apex = {static_cast<int>(tuples.size())};
  for (std::size_t t = 0; t < tuples.size(); ++t) lim.info.index.emplace(tuples[t], static_cast<int>(t));
  for (int a = 0; a < d.size(); ++a) {
    int slot = 0;
    while (!d.leq[a][M[slot]]) ++slot;
    const auto& down = along(a, M[slot]);
    std::vector<int> img(tuples.size());
    for (std::size_t t = 0; t < tuples.size(); ++t) img[t] = down.image[tuples[t][slot]];
    lim.projections.push_back(FinSetMap::make(d.values[a].size, std::move(img)));
  }
  return lim;
}

FinSetMap FinSet::induced(const Limit<FinSet>& lim, const FinSetObj& source, const std::vector<FinSetMap>& legs) {
  std::vector<int> img(source.size);
  std::vector<int> tuple(lim.info.maximal.size());
  for (int x = 0; x < source.size; ++x) {
    for (std::size_t j = 0; j < tuple.size(); ++j) tuple[j] = legs[lim.info.maximal[j]].image[x];
    auto it = lim.info.index.find(tuple);
    if (it == lim.info.index.end()) throw Error(ErrorCode::NotADiagram, "cone does not land in the limit");
    img[x] = it->second;
  }
  return FinSetMap::make(lim.apex.size, std::move(img));
}

// ----------------------------------------------------------- vector spaces

IsoVerdict Vect::is_iso(const VectMap& f) {
  const int r = rank(f.matrix);
  if (f.matrix.rows() == f.matrix.cols() && r == f.matrix.rows()) return {true, {}};
  return {false, "dimension " + std::to_string(f.matrix.cols()) + " -> " + std::to_string(f.matrix.rows()) +
                     ", rank " + std::to_string(r)};
}

Limit<Vect> Vect::limit(const PosetDiagram<Vect>& d, Along<Vect>& along) {
  const Field field = d.values.empty() ? Field() : d.values.front().field;
  const auto& M = along.maximal();
  Limit<Vect> lim;
  lim.info.maximal = M;
  int cols = 0;
  for (int m : M) {
    lim.info.offsets.push_back(cols);
    cols += d.values[m].dim;
  }
  // A family on the maximal elements is compatible iff every two of them
  // agree on their maximal common lower bounds.
  std::vector<Matrix> blocks;
  for (std::size_t i = 0; i < M.size(); ++i)
    for (std::size_t j = i + 1; j < M.size(); ++j) {
      std::vector<int> common;
      for (int c = 0; c < d.size(); ++c)
        if (d.leq[c][M[i]] && d.leq[c][M[j]]) common.push_back(c);
      for (int c : common) {
        bool top = true;
        for (int e : common) top = top && (e == c || !d.leq[c][e]);
        if (!top || d.values[c].dim == 0) continue;
        Matrix block(d.values[c].dim, cols, field);
        block.paste(along(c, M[i]).matrix, 0, lim.info.offsets[i]);
        const Matrix& right = along(c, M[j]).matrix;
        for (int r = 0; r < right.rows(); ++r)
          for (int k = 0; k < right.cols(); ++k) block(r, lim.info.offsets[j] + k) = field.sub(0, right(r, k));
        blocks.push_back(std::move(block));
      }
    }
  const Matrix diff = Matrix::vstack(blocks, cols, field);
  const Matrix basis = kernel(diff);
  lim.info.coordinates = free_columns(diff);
  lim.apex = {basis.cols(), field};
  std::vector<Matrix> on_maximal;
  for (std::size_t k = 0; k < M.size(); ++k) on_maximal.push_back(basis.row_block(lim.info.offsets[k], d.values[M[k]].dim));
  for (int a = 0; a < d.size(); ++a) {
    std::size_t k = 0;
    while (!d.leq[a][M[k]]) ++k;
    lim.projections.push_back({a == M[k] ? on_maximal[k] : along(a, M[k]).matrix * on_maximal[k]});
  }
  return lim;
}

VectMap Vect::induced(const Limit<Vect>& lim, const VectObj& source, const std::vector<VectMap>& legs) {
  Matrix y(lim.apex.dim, source.dim, source.field);
  for (int i = 0; i < lim.apex.dim; ++i) {
    const int row = lim.info.coordinates[i];
    auto it = std::upper_bound(lim.info.offsets.begin(), lim.info.offsets.end(), row);
    // Skip zero-dimensional elements sharing the same offset.
    const auto k = static_cast<std::size_t>(it - lim.info.offsets.begin()) - 1;
    const Matrix& leg = legs[lim.info.maximal[k]].matrix;
    for (int j = 0; j < source.dim; ++j) y(i, j) = leg(row - lim.info.offsets[k], j);
  }
  return {std::move(y)};
}

int limit_dimension_by_equalizers(const PosetDiagram<Vect>& d) {
  Along<Vect> along(d);
  const auto& M = along.maximal();
  if (M.empty()) return 0;
  const Field field = d.values.front().field;
  // basis[i]: the block of the current family basis living at M[i].
  std::vector<Matrix> basis{Matrix::identity(d.values[M[0]].dim, field)};
  int current = d.values[M[0]].dim;
  for (std::size_t j = 1; j < M.size(); ++j) {
    const int xdim = d.values[M[j]].dim;
    std::vector<Matrix> rows;
    for (std::size_t i = 0; i < j; ++i)
      for (int c = 0; c < d.size(); ++c) {
        if (!d.leq[c][M[i]] || !d.leq[c][M[j]]) continue;
        Matrix left = along(c, M[i]).matrix * basis[i];
        Matrix right = along(c, M[j]).matrix;
        Matrix block(left.rows(), current + xdim, field);
        block.paste(left, 0, 0);
        for (int r = 0; r < right.rows(); ++r)
          for (int s = 0; s < xdim; ++s) block(r, current + s) = field.sub(0, right(r, s));
        rows.push_back(std::move(block));
      }
    Matrix constraint = Matrix::vstack(rows, current + xdim, field);
    Matrix ker = kernel(constraint);
    for (auto& b : basis) b = b * ker.row_block(0, current);
    basis.push_back(ker.row_block(current, xdim));
    current = ker.cols();
  }
  return current;
}

// ---------------------------------------------------------------- groupoids

FiniteGroup::FiniteGroup(const std::vector<std::vector<int>>& table) : order_(static_cast<int>(table.size())) {
  if (order_ == 0) throw Error(ErrorCode::BadInput, "a group needs a unit");
  for (const auto& row : table) {
    if (static_cast<int>(row.size()) != order_) throw Error(ErrorCode::BadInput, "group table is not square");
    for (int x : row)
      if (x < 0 || x >= order_) throw Error(ErrorCode::BadInput, "group table entry out of range");
    mul_.insert(mul_.end(), row.begin(), row.end());
  }
  inv_.assign(order_, -1);
  for (int a = 0; a < order_; ++a) {
    if (mul(0, a) != a || mul(a, 0) != a) throw Error(ErrorCode::BadInput, "element 0 is not a unit");
    for (int b = 0; b < order_; ++b)
      if (mul(a, b) == 0) inv_[a] = b;
    if (inv_[a] < 0 || mul(inv_[a], a) != 0) throw Error(ErrorCode::BadInput, "element without inverse");
  }
  for (int a = 0; a < order_; ++a)
    for (int b = 0; b < order_; ++b)
      for (int c = 0; c < order_; ++c)
        if (mul(mul(a, b), c) != mul(a, mul(b, c))) throw Error(ErrorCode::BadInput, "group table is not associative");
}

std::vector<std::vector<int>> FiniteGroup::table() const {
  std::vector<std::vector<int>> t(order_);
  for (int a = 0; a < order_; ++a)
    for (int b = 0; b < order_; ++b) t[a].push_back(mul(a, b));
  return t;
}

GroupoidObj::GroupoidObj() : d_(std::make_shared<Data>()) {}

GroupoidObj::GroupoidObj(std::vector<Component> components, std::vector<std::string> labels) {
  auto d = std::make_shared<Data>();
  int count = 0;
  for (const auto& c : components) {
    if (c.objects.empty()) throw Error(ErrorCode::BadInput, "empty groupoid component");
    count += static_cast<int>(c.objects.size());
  }
  d->component_of.assign(count, -1);
  for (std::size_t c = 0; c < components.size(); ++c)
    for (int x : components[c].objects) {
      if (x < 0 || x >= count || d->component_of[x] >= 0)
        throw Error(ErrorCode::BadInput, "components do not partition the objects");
      d->component_of[x] = static_cast<int>(c);
    }
  if (!labels.empty() && static_cast<int>(labels.size()) != count) throw Error(ErrorCode::BadInput, "one label per object");
  if (labels.empty())
    for (int x = 0; x < count; ++x) labels.push_back(std::to_string(x));
  d->components = std::move(components);
  d->labels = std::move(labels);
  d_ = std::move(d);
}

int GroupoidObj::object_count() const noexcept { return static_cast<int>(d_->component_of.size()); }
int GroupoidObj::component_count() const noexcept { return static_cast<int>(d_->components.size()); }
const GroupoidObj::Component& GroupoidObj::component(int c) const { return d_->components.at(c); }
int GroupoidObj::component_of(int object) const { return d_->component_of.at(object); }
const std::string& GroupoidObj::label(int object) const { return d_->labels.at(object); }

std::size_t GroupoidObj::morphism_count() const {
  std::size_t n = 0;
  for (const auto& c : d_->components) n += c.objects.size() * c.objects.size() * static_cast<std::size_t>(c.group.order());
  return n;
}

bool GroupoidObj::valid(const Arrow& f) const {
  if (f.source < 0 || f.target < 0 || f.source >= object_count() || f.target >= object_count()) return false;
  const int c = component_of(f.source);
  return component_of(f.target) == c && f.element >= 0 && f.element < component(c).group.order();
}

Arrow GroupoidObj::compose(const Arrow& g, const Arrow& f) const {
  if (!valid(f) || !valid(g) || f.target != g.source) throw Error(ErrorCode::BadInput, "arrows are not composable");
  return {f.source, g.target, component(component_of(f.source)).group.mul(g.element, f.element)};
}

Arrow GroupoidObj::inverse(const Arrow& f) const {
  if (!valid(f)) throw Error(ErrorCode::BadInput, "invalid arrow");
  return {f.target, f.source, component(component_of(f.source)).group.inverse(f.element)};
}

std::vector<Arrow> GroupoidObj::hom(int a, int b) const {
  std::vector<Arrow> out;
  if (component_of(a) != component_of(b)) return out;
  for (int g = 0; g < component(component_of(a)).group.order(); ++g) out.push_back({a, b, g});
  return out;
}

bool GroupoidObj::operator==(const GroupoidObj& o) const {
  if (d_ == o.d_) return true;
  if (d_->component_of != o.d_->component_of || d_->components.size() != o.d_->components.size()) return false;
  for (std::size_t c = 0; c < d_->components.size(); ++c)
    if (!(d_->components[c].group == o.d_->components[c].group) || d_->components[c].objects != o.d_->components[c].objects)
      return false;
  return true;
}

GroupoidFunctor::GroupoidFunctor(GroupoidObj source, GroupoidObj target, std::vector<int> objects,
                                 std::vector<std::vector<Arrow>> groups, std::vector<Arrow> connecting)
    : source_(std::move(source)),
      target_(std::move(target)),
      objects_(std::move(objects)),
      groups_(std::move(groups)),
      connecting_(std::move(connecting)) {
  const int n = source_.object_count();
  if (static_cast<int>(objects_.size()) != n || static_cast<int>(connecting_.size()) != n ||
      static_cast<int>(groups_.size()) != source_.component_count())
    throw Error(ErrorCode::BadInput, "functor data has the wrong shape");
  for (int x : objects_)
    if (x < 0 || x >= target_.object_count()) throw Error(ErrorCode::BadInput, "functor object out of range");
  for (int c = 0; c < source_.component_count(); ++c) {
    const auto& comp = source_.component(c);
    const int fb = objects_[comp.objects.front()];
    const auto& img = groups_[c];
    if (static_cast<int>(img.size()) != comp.group.order()) throw Error(ErrorCode::BadInput, "group image has the wrong size");
    for (const Arrow& a : img)
      if (!target_.valid(a) || a.source != fb || a.target != fb) throw Error(ErrorCode::BadInput, "group image is not an automorphism");
    if (img[0] != target_.identity(fb)) throw Error(ErrorCode::BadInput, "unit not sent to an identity");
    for (int g = 0; g < comp.group.order(); ++g)
      for (int h = 0; h < comp.group.order(); ++h)
        if (img[comp.group.mul(g, h)] != target_.compose(img[g], img[h]))
          throw Error(ErrorCode::BadInput, "group image is not a homomorphism");
    for (int x : comp.objects) {
      const Arrow& t = connecting_[x];
      if (!target_.valid(t) || t.source != fb || t.target != objects_[x])
        throw Error(ErrorCode::BadInput, "connecting arrow has the wrong ends");
    }
    if (connecting_[comp.objects.front()] != target_.identity(fb))
      throw Error(ErrorCode::BadInput, "base arrow not sent to an identity");
  }
}

Arrow GroupoidFunctor::operator()(const Arrow& f) const {
  if (!source_.valid(f)) throw Error(ErrorCode::BadInput, "arrow outside the functor's source");
  const int c = source_.component_of(f.source);
  return target_.compose(connecting_[f.target],
                         target_.compose(groups_[c][f.element], target_.inverse(connecting_[f.source])));
}

IsoVerdict is_equivalence(const GroupoidFunctor& f) {
  const GroupoidObj& s = f.source();
  const GroupoidObj& t = f.target();
  std::vector<int> hit(t.component_count(), -1);
  for (int c = 0; c < s.component_count(); ++c) {
    const auto& comp = s.component(c);
    const int fb = f.on_object(comp.objects.front());
    const int tc = t.component_of(fb);
    if (hit[tc] >= 0)
      return {false, "objects " + s.label(s.component(hit[tc]).objects.front()) + " and " + s.label(comp.objects.front()) +
                         " are not isomorphic but their images are"};
    hit[tc] = c;
    std::set<int> image;
    for (const Arrow& a : f.group_images()[c]) image.insert(a.element);
    if (static_cast<int>(image.size()) != comp.group.order())
      return {false, "not faithful on automorphisms of " + s.label(comp.objects.front())};
    if (static_cast<int>(image.size()) != t.component(tc).group.order())
      return {false, "not full on automorphisms of " + s.label(comp.objects.front()) + ": " + std::to_string(image.size()) +
                         " of " + std::to_string(t.component(tc).group.order())};
  }
  for (int tc = 0; tc < t.component_count(); ++tc)
    if (hit[tc] < 0) return {false, "object " + t.label(t.component(tc).objects.front()) + " is not in the essential image"};
  return {true, {}};
}

bool is_isomorphism(const GroupoidFunctor& f) {
  if (f.source().object_count() != f.target().object_count()) return false;
  std::vector<char> seen(f.target().object_count(), 0);
  for (int x : f.object_map()) {
    if (seen[x]) return false;
    seen[x] = 1;
  }
  return is_equivalence(f).iso;
}

GroupoidFunctor Groupoid::identity(const GroupoidObj& o) {
  std::vector<int> objects(o.object_count());
  std::vector<std::vector<Arrow>> groups(o.component_count());
  std::vector<Arrow> connecting(o.object_count());
  for (int x = 0; x < o.object_count(); ++x) objects[x] = x;
  for (int c = 0; c < o.component_count(); ++c) {
    const auto& comp = o.component(c);
    const int base = comp.objects.front();
    for (int g = 0; g < comp.group.order(); ++g) groups[c].push_back({base, base, g});
    for (int x : comp.objects) connecting[x] = {base, x, 0};
  }
  return GroupoidFunctor(o, o, std::move(objects), std::move(groups), std::move(connecting));
}

GroupoidFunctor Groupoid::compose(const GroupoidFunctor& g, const GroupoidFunctor& f) {
  if (!(f.target() == g.source())) throw Error(ErrorCode::BadInput, "composing functors with mismatched ends");
  std::vector<int> objects;
  for (int x : f.object_map()) objects.push_back(g.on_object(x));
  std::vector<std::vector<Arrow>> groups;
  for (const auto& img : f.group_images()) {
    groups.emplace_back();
    for (const Arrow& a : img) groups.back().push_back(g(a));
  }
  std::vector<Arrow> connecting;
  for (const Arrow& a : f.connecting_images()) connecting.push_back(g(a));
  return GroupoidFunctor(f.source(), g.target(), std::move(objects), std::move(groups), std::move(connecting));
}

namespace {

// Normalized pseudo-limit data. Each non-maximal element s gets a home
// maximal element h(s); a family is (x_m) at the maximal elements plus, for
// each s and each other maximal m above s, an arrow
//   psi(s,m): F_{s,m} x_m -> F_{s,h(s)} x_{h(s)}   in X_s,
// subject to psi(r,m) = psi(r,h(s)) . F_{r,s}(psi(s,m)) for r < s <= m.
struct PseudoLimit {
  const PosetDiagram<Groupoid>& d;
  Along<Groupoid>& along;
  std::vector<int> M;     // maximal elements
  std::vector<int> slot;  // element -> index in M, or -1
  std::vector<int> home;  // element -> index in M
  std::vector<int> order;  // non-maximal elements, larger ones first
  std::vector<std::vector<int>> extra;  // per element: indices in M above it other than home
  std::vector<std::vector<int>> var;    // per element, per extra entry: position in the key

  struct Family {
    std::vector<int> x;       // per maximal
    std::vector<Arrow> psi;   // flattened by var
  };

  PseudoLimit(const PosetDiagram<Groupoid>& diagram, Along<Groupoid>& al) : d(diagram), along(al) {
    M = along.maximal();
    const int n = d.size();
    slot.assign(n, -1);
    home.assign(n, -1);
    extra.assign(n, {});
    var.assign(n, {});
    for (std::size_t j = 0; j < M.size(); ++j) slot[M[j]] = static_cast<int>(j);
    int count = 0;
    for (int a = 0; a < n; ++a) {
      for (std::size_t j = 0; j < M.size(); ++j) {
        if (!d.leq[a][M[j]]) continue;
        if (home[a] < 0)
          home[a] = static_cast<int>(j);
        else if (slot[a] < 0)
          extra[a].push_back(static_cast<int>(j));
      }
      if (slot[a] < 0) order.push_back(a);
    }
    // Larger elements first: sort by number of elements above, ascending.
    std::stable_sort(order.begin(), order.end(), [&](int a, int b) {
      int ua = 0, ub = 0;
      for (int c = 0; c < n; ++c) {
        ua += d.leq[a][c];
        ub += d.leq[b][c];
      }
      return ua < ub;
    });
    for (int a : order)
      for (std::size_t e = 0; e < extra[a].size(); ++e) var[a].push_back(count++);
  }

  int variables() const {
    int n = 0;
    for (const auto& v : var) n += static_cast<int>(v.size());
    return n;
  }

  // psi(s, j) for any maximal index j above s (identity at home).
  Arrow psi_at(const Family& f, int s, int j) const {
    if (j == home[s]) return d.values[s].identity(along_obj(f, s, j));
    for (std::size_t e = 0; e < extra[s].size(); ++e)
      if (extra[s][e] == j) return f.psi[var[s][e]];
    throw Error(ErrorCode::Internal, "no coherence arrow");
  }

  int along_obj(const Family& f, int s, int j) const { return along(s, M[j]).on_object(f.x[j]); }

  // All constraints for element r that only involve r and larger elements.
  bool consistent_at(const Family& f, int r) const {
    for (int s : order) {
      if (s == r || !d.leq[r][s]) continue;
      const auto& F = along(r, s);
      for (std::size_t j = 0; j < M.size(); ++j) {
        if (!d.leq[s][M[j]]) continue;
        Arrow lhs = psi_at(f, r, static_cast<int>(j));
        Arrow rhs = d.values[r].compose(psi_at(f, r, home[s]), F(psi_at(f, s, static_cast<int>(j))));
        if (lhs != rhs) return false;
      }
    }
    return true;
  }

  std::vector<Family> enumerate() const {
    std::vector<Family> out;
    Family f;
    f.x.assign(M.size(), 0);
    f.psi.assign(variables(), Arrow{});
    std::function<void(std::size_t)> choose_psi = [&](std::size_t k) {
      if (k == order.size()) {
        out.push_back(f);
        return;
      }
      const int s = order[k];
      std::function<void(std::size_t)> rec = [&](std::size_t e) {
        if (e == extra[s].size()) {
          if (consistent_at(f, s)) choose_psi(k + 1);
          return;
        }
        const int j = extra[s][e];
        const int src = along_obj(f, s, j), tgt = along_obj(f, s, home[s]);
        for (const Arrow& a : d.values[s].hom(src, tgt)) {
          f.psi[var[s][e]] = a;
          rec(e + 1);
        }
      };
      rec(0);
    };
    std::function<void(std::size_t)> choose_x = [&](std::size_t j) {
      if (j == M.size()) {
        choose_psi(0);
        return;
      }
      for (int x = 0; x < d.values[M[j]].object_count(); ++x) {
        f.x[j] = x;
        choose_x(j + 1);
      }
    };
    choose_x(0);
    return out;
  }

  // Families g_m: x_m -> y_m satisfying the morphism equations; stops at the
  // first one unless `all`.
  std::vector<std::vector<Arrow>> morphisms(const Family& x, const Family& y, bool all) const {
    std::vector<std::vector<Arrow>> out;
    std::vector<Arrow> g(M.size());
    std::function<bool(std::size_t)> rec = [&](std::size_t j) {
      if (j == M.size()) {
        out.push_back(g);
        return !all;
      }
      for (const Arrow& a : d.values[M[j]].hom(x.x[j], y.x[j])) {
        g[j] = a;
        bool ok = true;
        for (int s : order) {
          for (std::size_t e = 0; e < extra[s].size() && ok; ++e) {
            const int m = extra[s][e], h = home[s];
            if (std::max(m, h) != static_cast<int>(j)) continue;
            const auto& X = d.values[s];
            Arrow lhs = X.compose(along(s, M[h])(g[h]), x.psi[var[s][e]]);
            Arrow rhs = X.compose(y.psi[var[s][e]], along(s, M[m])(g[m]));
            ok = lhs == rhs;
          }
          if (!ok) break;
        }
        if (ok && rec(j + 1)) return true;
      }
      return false;
    };
    rec(0);
    return out;
  }

  std::vector<Arrow> compose(const std::vector<Arrow>& g, const std::vector<Arrow>& f) const {
    std::vector<Arrow> r(M.size());
    for (std::size_t j = 0; j < M.size(); ++j) r[j] = d.values[M[j]].compose(g[j], f[j]);
    return r;
  }

  std::vector<Arrow> inverse(const std::vector<Arrow>& f) const {
    std::vector<Arrow> r(M.size());
    for (std::size_t j = 0; j < M.size(); ++j) r[j] = d.values[M[j]].inverse(f[j]);
    return r;
  }

  static std::vector<int> key(const Family& f) {
    std::vector<int> k = f.x;
    for (const Arrow& a : f.psi) k.push_back(a.element);
    return k;
  }
};

}  // namespace

Limit<Groupoid> Groupoid::limit(const PosetDiagram<Groupoid>& d, Along<Groupoid>& along) {
  PseudoLimit pl(d, along);
  auto families = pl.enumerate();
  Limit<Groupoid> lim;
  lim.info.maximal = pl.M;
  lim.info.home.resize(d.size());
  for (int a = 0; a < d.size(); ++a) lim.info.home[a] = pl.M[pl.home[a]];
  for (std::size_t i = 0; i < families.size(); ++i) lim.info.objects.emplace(PseudoLimit::key(families[i]), static_cast<int>(i));

  // Components: greedy over objects in order; an object joins the first
  // component whose base it is isomorphic to.
  std::vector<GroupoidObj::Component> comps;
  std::vector<std::vector<std::vector<Arrow>>> elements;  // per component: automorphism families
  lim.info.connecting.assign(families.size(), {});
  std::vector<int> comp_of(families.size(), -1);
  auto signature = [&](const PseudoLimit::Family& f) {
    std::vector<int> s;
    for (std::size_t j = 0; j < pl.M.size(); ++j) s.push_back(d.values[pl.M[j]].component_of(f.x[j]));
    return s;
  };
  std::map<std::vector<int>, std::vector<int>> by_signature;  // signature -> components
  for (std::size_t i = 0; i < families.size(); ++i) {
    auto sig = signature(families[i]);
    auto& candidates = by_signature[sig];
    for (int c : candidates) {
      const int base = comps[c].objects.front();
      auto iso = pl.morphisms(families[base], families[i], false);
      if (!iso.empty()) {
        comps[c].objects.push_back(static_cast<int>(i));
        comp_of[i] = c;
        lim.info.connecting[i] = iso.front();
        break;
      }
    }
    if (comp_of[i] >= 0) continue;
    const int c = static_cast<int>(comps.size());
    auto autos = pl.morphisms(families[i], families[i], true);
    std::map<std::vector<Arrow>, int> index;
    for (std::size_t g = 0; g < autos.size(); ++g) index.emplace(autos[g], static_cast<int>(g));
    std::vector<std::vector<int>> table(autos.size(), std::vector<int>(autos.size()));
    for (std::size_t g = 0; g < autos.size(); ++g)
      for (std::size_t h = 0; h < autos.size(); ++h) table[g][h] = index.at(pl.compose(autos[g], autos[h]));
    comps.push_back({FiniteGroup(table), {static_cast<int>(i)}});
    lim.info.group_index.push_back(std::move(index));
    elements.push_back(std::move(autos));
    comp_of[i] = c;
    lim.info.connecting[i] = elements[c].front();
    candidates.push_back(c);
  }
  lim.apex = GroupoidObj(std::move(comps));

  for (int a = 0; a < d.size(); ++a) {
    const int j = pl.home[a];
    const auto& down = along(a, pl.M[j]);
    std::vector<int> objects;
    for (const auto& f : families) objects.push_back(down.on_object(f.x[j]));
    std::vector<std::vector<Arrow>> groups;
    for (const auto& fams : elements) {
      groups.emplace_back();
      for (const auto& g : fams) groups.back().push_back(down(g[j]));
    }
    std::vector<Arrow> connecting;
    for (const auto& t : lim.info.connecting) connecting.push_back(down(t[j]));
    lim.projections.emplace_back(lim.apex, d.values[a], std::move(objects), std::move(groups), std::move(connecting));
  }
  return lim;
}

GroupoidFunctor Groupoid::induced(const Limit<Groupoid>& lim, const GroupoidObj& source,
                                  const std::vector<GroupoidFunctor>& legs) {
  const auto& M = lim.info.maximal;
  // Keys of strict cones carry identity coherence arrows, i.e. element 0.
  const std::size_t extra = lim.info.objects.empty() ? 0 : lim.info.objects.begin()->first.size() - M.size();
  const GroupoidObj& apex = lim.apex;
  std::vector<int> objects(source.object_count());
  for (int x = 0; x < source.object_count(); ++x) {
    std::vector<int> key;
    for (int m : M) key.push_back(legs[m].on_object(x));
    key.resize(M.size() + extra, 0);
    auto it = lim.info.objects.find(key);
    if (it == lim.info.objects.end()) throw Error(ErrorCode::NotADiagram, "cone does not land in the limit");
    objects[x] = it->second;
  }
  auto to_arrow = [&](const Arrow& f) {
    const int o1 = objects[f.source], o2 = objects[f.target];
    const int c = apex.component_of(o1);
    std::vector<Arrow> fam;
    for (std::size_t j = 0; j < M.size(); ++j) {
      const GroupoidObj& X = legs[M[j]].target();
      Arrow h = legs[M[j]](f);
      Arrow e = X.compose(X.inverse(lim.info.connecting[o2][j]), X.compose(h, lim.info.connecting[o1][j]));
      fam.push_back(e);
    }
    return Arrow{o1, o2, lim.info.group_index[c].at(fam)};
  };
  std::vector<std::vector<Arrow>> groups(source.component_count());
  std::vector<Arrow> connecting(source.object_count());
  for (int c = 0; c < source.component_count(); ++c) {
    const auto& comp = source.component(c);
    const int base = comp.objects.front();
    for (int g = 0; g < comp.group.order(); ++g) groups[c].push_back(to_arrow({base, base, g}));
    for (int x : comp.objects) connecting[x] = to_arrow({base, x, 0});
  }
  return GroupoidFunctor(source, apex, std::move(objects), std::move(groups), std::move(connecting));
}

// ----------------------------------------------------------------- json

nlohmann::json to_json(const FinSetMap& f) { return f.image; }

nlohmann::json to_json(const VectMap& f) { return to_strings(f.matrix); }

nlohmann::json to_json(const GroupoidObj& g) {
  nlohmann::json comps = nlohmann::json::array();
  for (int c = 0; c < g.component_count(); ++c)
    comps.push_back({{"objects", g.component(c).objects}, {"group", g.component(c).group.table()}});
  std::vector<std::string> labels;
  for (int x = 0; x < g.object_count(); ++x) labels.push_back(g.label(x));
  return {{"components", comps}, {"labels", labels}};
}

namespace {

nlohmann::json arrow_json(const Arrow& a) { return {a.source, a.target, a.element}; }

Arrow arrow_from_json(const nlohmann::json& j) {
  if (!j.is_array() || j.size() != 3) throw Error(ErrorCode::BadInput, "an arrow is [source, target, element]");
  return {j[0].get<int>(), j[1].get<int>(), j[2].get<int>()};
}

}  // namespace

nlohmann::json to_json(const GroupoidFunctor& f) {
  nlohmann::json groups = nlohmann::json::array();
  for (const auto& img : f.group_images()) {
    nlohmann::json g = nlohmann::json::array();
    for (const Arrow& a : img) g.push_back(arrow_json(a));
    groups.push_back(g);
  }
  nlohmann::json connecting = nlohmann::json::array();
  for (const Arrow& a : f.connecting_images()) connecting.push_back(arrow_json(a));
  return {{"objects", f.object_map()}, {"groups", groups}, {"connecting", connecting}};
}

FinSetMap finset_map_from_json(const nlohmann::json& j, int source_size, int target_size) {
  try {
    auto image = j.get<std::vector<int>>();
    if (static_cast<int>(image.size()) != source_size) throw Error(ErrorCode::BadInput, "map has the wrong number of values");
    return FinSetMap::make(target_size, std::move(image));
  } catch (const nlohmann::json::exception& e) {
    throw Error(ErrorCode::BadInput, e.what());
  }
}

VectMap vect_map_from_json(const nlohmann::json& j, int source_dim, int target_dim, Field field) {
  if (!j.is_array() || static_cast<int>(j.size()) != target_dim) throw Error(ErrorCode::BadInput, "matrix has the wrong number of rows");
  Matrix m(target_dim, source_dim, field);
  for (int i = 0; i < target_dim; ++i) {
    if (!j[i].is_array() || static_cast<int>(j[i].size()) != source_dim)
      throw Error(ErrorCode::BadInput, "matrix row has the wrong length");
    for (int k = 0; k < source_dim; ++k) {
      const auto& e = j[i][k];
      try {
        m.set(i, k, e.is_string() ? Rational(e.get<std::string>()) : Rational(e.get<long>()));
      } catch (const std::invalid_argument&) {
        throw Error(ErrorCode::BadInput, "bad matrix entry");
      }
    }
  }
  return {std::move(m)};
}

GroupoidObj groupoid_from_json(const nlohmann::json& j) {
  try {
    std::vector<GroupoidObj::Component> comps;
    for (const auto& c : j.at("components"))
      comps.push_back({FiniteGroup(c.at("group").get<std::vector<std::vector<int>>>()), c.at("objects").get<std::vector<int>>()});
    std::vector<std::string> labels;
    if (j.contains("labels")) labels = j.at("labels").get<std::vector<std::string>>();
    return GroupoidObj(std::move(comps), std::move(labels));
  } catch (const nlohmann::json::exception& e) {
    throw Error(ErrorCode::BadInput, e.what());
  }
}

GroupoidFunctor groupoid_functor_from_json(const nlohmann::json& j, const GroupoidObj& source, const GroupoidObj& target) {
  try {
    std::vector<std::vector<Arrow>> groups;
    for (const auto& g : j.at("groups")) {
      groups.emplace_back();
      for (const auto& a : g) groups.back().push_back(arrow_from_json(a));
    }
    std::vector<Arrow> connecting;
    for (const auto& a : j.at("connecting")) connecting.push_back(arrow_from_json(a));
    return GroupoidFunctor(source, target, j.at("objects").get<std::vector<int>>(), std::move(groups), std::move(connecting));
  } catch (const nlohmann::json::exception& e) {
    throw Error(ErrorCode::BadInput, e.what());
  }
}

}  // namespace segalis
