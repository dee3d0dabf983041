#pragma once

#include <algorithm>
#include <map>
#include <memory>
#include <mutex>
#include <set>
#include <string>
#include <utility>
#include <vector>

#include "segalis/backends.hpp"
#include "segalis/complexes.hpp"
#include "segalis/error.hpp"

namespace segalis {

template <Backend B>
struct ComplexLimit {
  std::vector<Simplex> elements;  // diagram elements, in simplex order
  PosetDiagram<B> diagram;
  Limit<B> limit;
  typename B::Morphism canonical;  // X_n -> X_K
};

/// A simplicial object truncated at level N: objects X_0..X_N, faces
/// d_i: X_n -> X_{n-1} and degeneracies s_i: X_n -> X_{n+1} within range.
/// Immutable; restriction maps and limits are memoized and shared by copies.
template <Backend B>
class SimplicialObject {
 public:
  using Object = typename B::Object;
  using Morphism = typename B::Morphism;

  /// faces[n] holds d_0..d_n on X_n (faces[0] is empty); degeneracies[n]
  /// holds s_0..s_n on X_n for n < N. Throws NotSimplicial if a simplicial
  /// identity fails or a map has the wrong ends.
  SimplicialObject(std::vector<Object> levels, std::vector<std::vector<Morphism>> faces,
                   std::vector<std::vector<Morphism>> degeneracies);

  int truncation() const noexcept { return static_cast<int>(levels_.size()) - 1; }
  const Object& level(int n) const { return levels_.at(n); }
  const Morphism& face(int n, int i) const { return faces_.at(n).at(i); }
  const Morphism& degeneracy(int n, int i) const { return degeneracies_.at(n).at(i); }

  /// X_I := X_{|I|-1}. Throws TruncationTooLow.
  const Object& on_subset(Simplex I) const;
  /// The map X_I -> X_J for J inside I: faces deleting the positions of I\J.
  Morphism restriction(Simplex I, Simplex J) const;
  /// theta^*: X_n -> X_m for a monotone theta: [m] -> [n] given by its values.
  Morphism induced(const std::vector<int>& theta, int n) const;

  /// Limit of X over the face poset of K (a complex on [n], n <= N), with the
  /// canonical map from X_n. With `reduced` only facets and their
  /// intersections index the diagram, which has the same limit.
  std::shared_ptr<const ComplexLimit<B>> limit_over(const Complex& K, bool reduced = true) const;

 private:
  struct Cache {
    std::mutex mutex;
    std::map<std::pair<int, std::uint32_t>, Morphism> restrictions;
    std::map<std::pair<Complex, bool>, std::shared_ptr<const ComplexLimit<B>>> limits;
  };

  void check_identities() const;

  std::vector<Object> levels_;
  std::vector<std::vector<Morphism>> faces_;
  std::vector<std::vector<Morphism>> degeneracies_;
  std::shared_ptr<Cache> cache_ = std::make_shared<Cache>();
};

template <Backend B>
SimplicialObject<B>::SimplicialObject(std::vector<Object> levels, std::vector<std::vector<Morphism>> faces,
                                      std::vector<std::vector<Morphism>> degeneracies)
    : levels_(std::move(levels)), faces_(std::move(faces)), degeneracies_(std::move(degeneracies)) {
  const int N = truncation();
  if (N < 0) throw Error(ErrorCode::NotSimplicial, "no levels");
  if (static_cast<int>(faces_.size()) != N + 1 || static_cast<int>(degeneracies_.size()) != N)
    throw Error(ErrorCode::NotSimplicial, "wrong number of face or degeneracy families");
  for (int n = 0; n <= N; ++n) {
    if (static_cast<int>(faces_[n].size()) != (n == 0 ? 0 : n + 1))
      throw Error(ErrorCode::NotSimplicial, "level " + std::to_string(n) + " needs " + std::to_string(n + 1) + " faces");
    for (const auto& f : faces_[n])
      if (!(B::source(f) == levels_[n]) || !(B::target(f) == levels_[n - 1]))
        throw Error(ErrorCode::NotSimplicial, "face on level " + std::to_string(n) + " has the wrong ends");
  }
  for (int n = 0; n < N; ++n) {
    if (static_cast<int>(degeneracies_[n].size()) != n + 1)
      throw Error(ErrorCode::NotSimplicial, "level " + std::to_string(n) + " needs " + std::to_string(n + 1) + " degeneracies");
    for (const auto& s : degeneracies_[n])
      if (!(B::source(s) == levels_[n]) || !(B::target(s) == levels_[n + 1]))
        throw Error(ErrorCode::NotSimplicial, "degeneracy on level " + std::to_string(n) + " has the wrong ends");
  }
  check_identities();
}

template <Backend B>
void SimplicialObject<B>::check_identities() const {
  const int N = truncation();
  auto fail = [](const std::string& what) { throw Error(ErrorCode::NotSimplicial, what + " fails"); };
  auto tag = [](const char* rel, int n, int i, int j) {
    return std::string(rel) + " on X_" + std::to_string(n) + " (i=" + std::to_string(i) + ", j=" + std::to_string(j) + ")";
  };
  for (int n = 2; n <= N; ++n)
    for (int j = 1; j <= n; ++j)
      for (int i = 0; i < j; ++i)
        if (!(B::compose(face(n - 1, i), face(n, j)) == B::compose(face(n - 1, j - 1), face(n, i))))
          fail(tag("d_i d_j = d_{j-1} d_i", n, i, j));
  for (int n = 0; n + 2 <= N; ++n)
    for (int j = 0; j <= n; ++j)
      for (int i = 0; i <= j; ++i)
        if (!(B::compose(degeneracy(n + 1, i), degeneracy(n, j)) == B::compose(degeneracy(n + 1, j + 1), degeneracy(n, i))))
          fail(tag("s_i s_j = s_{j+1} s_i", n, i, j));
  for (int n = 0; n + 1 <= N; ++n)
    for (int j = 0; j <= n; ++j)
      for (int i = 0; i <= n + 1; ++i) {
        auto lhs = B::compose(face(n + 1, i), degeneracy(n, j));
        if (i == j || i == j + 1) {
          if (!(lhs == B::identity(levels_[n]))) fail(tag("d_i s_j = id", n, i, j));
        } else if (i < j) {
          if (!(lhs == B::compose(degeneracy(n - 1, j - 1), face(n, i)))) fail(tag("d_i s_j = s_{j-1} d_i", n, i, j));
        } else if (!(lhs == B::compose(degeneracy(n - 1, j), face(n, i - 1)))) {
          fail(tag("d_i s_j = s_j d_{i-1}", n, i, j));
        }
      }
}

template <Backend B>
const typename B::Object& SimplicialObject<B>::on_subset(Simplex I) const {
  if (I.empty()) throw Error(ErrorCode::BadInput, "X_I needs a nonempty I");
  if (I.size() - 1 > truncation())
    throw Error(ErrorCode::TruncationTooLow, "X_" + I.to_string() + " needs level " + std::to_string(I.size() - 1));
  return levels_[I.size() - 1];
}

template <Backend B>
typename B::Morphism SimplicialObject<B>::restriction(Simplex I, Simplex J) const {
  on_subset(I);
  if (J.empty() || !J.is_subset_of(I)) throw Error(ErrorCode::BadInput, J.to_string() + " is not a face of " + I.to_string());
  const int k = I.size() - 1;
  std::uint32_t kept = 0;
  std::vector<int> dropped;
  const auto iv = I.vertices();
  for (int p = 0; p <= k; ++p) {
    if (J.contains(iv[p]))
      kept |= 1U << p;
    else
      dropped.push_back(p);
  }
  const auto key = std::pair{k, kept};
  {
    std::lock_guard lock(cache_->mutex);
    if (auto it = cache_->restrictions.find(key); it != cache_->restrictions.end()) return it->second;
  }
  Morphism m = B::identity(levels_[k]);
  int level = k;
  for (auto p = dropped.rbegin(); p != dropped.rend(); ++p) m = B::compose(face(level--, *p), m);
  std::lock_guard lock(cache_->mutex);
  return cache_->restrictions.emplace(key, std::move(m)).first->second;
}

template <Backend B>
typename B::Morphism SimplicialObject<B>::induced(const std::vector<int>& theta, int n) const {
  if (theta.empty()) throw Error(ErrorCode::BadInput, "theta needs a domain");
  for (std::size_t a = 0; a < theta.size(); ++a)
    if (theta[a] < 0 || theta[a] > n || (a > 0 && theta[a] < theta[a - 1]))
      throw Error(ErrorCode::BadInput, "theta is not a monotone map into [" + std::to_string(n) + "]");
  std::vector<int> image;
  std::vector<int> repeats;  // positions a with theta(a) = theta(a+1)
  for (std::size_t a = 0; a < theta.size(); ++a) {
    if (a == 0 || theta[a] != theta[a - 1])
      image.push_back(theta[a]);
    else
      repeats.push_back(static_cast<int>(a) - 1);
  }
  Morphism m = restriction(Simplex::full(n), Simplex(image));
  int level = static_cast<int>(image.size()) - 1;
  // theta = (image inclusion) . s^{r_1} ... s^{r_k}; apply s_{r_1} first.
  for (int r : repeats) m = B::compose(degeneracy(level++, r), m);
  return m;
}

template <Backend B>
std::shared_ptr<const ComplexLimit<B>> SimplicialObject<B>::limit_over(const Complex& K, bool reduced) const {
  const int n = K.ambient_n();
  if (n > truncation())
    throw Error(ErrorCode::TruncationTooLow, "X_K for K on [" + std::to_string(n) + "] needs level " + std::to_string(n));
  if (K.empty()) throw Error(ErrorCode::EmptyComplex, "limit over the empty complex");
  const auto key = std::pair{K, reduced};
  {
    std::lock_guard lock(cache_->mutex);
    if (auto it = cache_->limits.find(key); it != cache_->limits.end()) return it->second;
  }
  auto out = std::make_shared<ComplexLimit<B>>();
  if (reduced) {
    std::set<Simplex> closed(K.facets().begin(), K.facets().end());
    for (bool grew = true; grew;) {
      grew = false;
      std::vector<Simplex> now(closed.begin(), closed.end());
      for (std::size_t a = 0; a < now.size(); ++a)
        for (std::size_t b = a + 1; b < now.size(); ++b) {
          Simplex c = now[a] & now[b];
          if (!c.empty() && closed.insert(c).second) grew = true;
        }
    }
    out->elements.assign(closed.begin(), closed.end());
  } else {
    out->elements = K.simplices();
    std::sort(out->elements.begin(), out->elements.end());
  }
  const auto& el = out->elements;
  const int m = static_cast<int>(el.size());
  auto& D = out->diagram;
  D.leq.assign(m, std::vector<char>(m, 0));
  for (int a = 0; a < m; ++a) {
    D.labels.push_back(el[a].to_string());
    D.values.push_back(on_subset(el[a]));
    for (int b = 0; b < m; ++b) D.leq[a][b] = el[a].is_subset_of(el[b]);
  }
  for (int a = 0; a < m; ++a)
    for (int b = 0; b < m; ++b) {
      if (a == b || !D.leq[a][b]) continue;
      bool cover = true;
      for (int c = 0; c < m && cover; ++c) cover = c == a || c == b || !(D.leq[a][c] && D.leq[c][b]);
      if (cover) D.maps.emplace(std::pair{a, b}, restriction(el[b], el[a]));
    }
  Along<B> along(D);
  out->limit = B::limit(D, along);
  std::vector<Morphism> legs;
  for (const auto& s : el) legs.push_back(restriction(Simplex::full(n), s));
  out->canonical = B::induced(out->limit, levels_[n], legs);
  std::lock_guard lock(cache_->mutex);
  return cache_->limits.emplace(key, std::move(out)).first->second;
}

/// X_I with the conventions of `SimplicialObject::on_subset`.
template <Backend B>
const typename B::Object& evaluate_on_subset(const SimplicialObject<B>& X, Simplex I) {
  return X.on_subset(I);
}

/// The map X_K -> X_L induced by L inside K (both complexes on the same [n]).
template <Backend B>
typename B::Morphism limit_restriction(const SimplicialObject<B>& X, const Complex& K, const Complex& L) {
  if (K.ambient_n() != L.ambient_n()) throw Error(ErrorCode::BadInput, "complexes on different vertex sets");
  for (Simplex f : L.facets())
    if (!K.contains(f)) throw Error(ErrorCode::BadInput, L.to_string() + " is not inside " + K.to_string());
  auto lk = X.limit_over(K);
  auto ll = X.limit_over(L);
  std::vector<typename B::Morphism> legs;
  for (Simplex s : ll->elements) {
    std::size_t t = 0;
    while (!s.is_subset_of(lk->elements[t])) ++t;
    legs.push_back(B::compose(X.restriction(lk->elements[t], s), lk->limit.projections[t]));
  }
  return B::induced(ll->limit, lk->limit.apex, legs);
}

enum class PathSide { Initial, Final };

/// Pullback along [n] -> [0]*[n] (Initial) or [n] -> [n]*[0] (Final).
/// Throws NoPaths when X has truncation 0.
template <Backend B>
SimplicialObject<B> path_space(const SimplicialObject<B>& X, PathSide side) {
  const int N = X.truncation();
  if (N < 1) throw Error(ErrorCode::NoPaths, "path spaces need truncation at least 1");
  const int shift = side == PathSide::Initial ? 1 : 0;
  std::vector<typename B::Object> levels;
  std::vector<std::vector<typename B::Morphism>> faces(N), degs(N - 1);
  for (int n = 0; n < N; ++n) {
    levels.push_back(X.level(n + 1));
    if (n > 0)
      for (int i = 0; i <= n; ++i) faces[n].push_back(X.face(n + 1, i + shift));
    if (n + 1 < N)
      for (int i = 0; i <= n; ++i) degs[n].push_back(X.degeneracy(n + 1, i + shift));
  }
  return SimplicialObject<B>(std::move(levels), std::move(faces), std::move(degs));
}

/// The constant simplicial object on `value`.
template <Backend B>
SimplicialObject<B> constant_object(const typename B::Object& value, int N) {
  std::vector<typename B::Object> levels(N + 1, value);
  std::vector<std::vector<typename B::Morphism>> faces(N + 1), degs(N);
  const auto id = B::identity(value);
  for (int n = 1; n <= N; ++n) faces[n].assign(n + 1, id);
  for (int n = 0; n < N; ++n) degs[n].assign(n + 1, id);
  return SimplicialObject<B>(std::move(levels), std::move(faces), std::move(degs));
}

}  // namespace segalis
