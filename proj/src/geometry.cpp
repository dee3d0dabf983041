#include "segalis/geometry.hpp"

#include <algorithm>
#include <bit>
#include <optional>
#include <random>
#include <set>

#include "segalis/error.hpp"

namespace segalis {

RationalPoint moment_point(long t, int d) {
  if (d < 1) throw Error(ErrorCode::ZeroDimension, "moment point needs d >= 1");
  RationalPoint p;
  p.reserve(d);
  Rational power = 1;
  for (int k = 0; k < d; ++k) {
    power *= t;
    p.push_back(power);
  }
  return p;
}

SideVerdict side_of_hyperplane(Simplex I, const RationalPoint& y) {
  const int d = static_cast<int>(y.size());
  if (I.size() != d) throw Error(ErrorCode::BadArity, "hyperplane needs |I| = d");
  std::vector<std::vector<Rational>> m;
  for (int v : I.vertices()) {
    std::vector<Rational> row{1};
    for (auto& c : moment_point(v, d)) row.push_back(c);
    m.push_back(std::move(row));
  }
  std::vector<Rational> last{1};
  last.insert(last.end(), y.begin(), y.end());
  m.push_back(std::move(last));
  int s = sgn(determinant(std::move(m)));
  return s > 0 ? SideVerdict::Above : (s < 0 ? SideVerdict::Below : SideVerdict::On);
}

namespace {

void check_arity(Simplex I, int d) {
  if (d < 1) throw Error(ErrorCode::ZeroDimension, "d must be positive");
  if (I.size() > d + 1) throw Error(ErrorCode::TooManyVertices, I.to_string() + " in R^" + std::to_string(d));
}

}  // namespace

bool proper_intersection(Simplex I, Simplex J, int d) {
  check_arity(I, d);
  check_arity(J, d);
  // Circuits of points on the moment curve are the (d+2)-subsets split into
  // alternate positions. An improper meeting is a circuit whose two halves
  // sit in I and J.
  const std::uint32_t u = (I | J).mask();
  if (std::popcount(u) < d + 2) return true;
  for (std::uint32_t z = u; z; z = (z - 1) & u) {
    if (std::popcount(z) != d + 2) continue;
    std::uint32_t even = 0, odd = 0;
    int k = 0;
    for (std::uint32_t m = z; m; m &= m - 1, ++k) (k % 2 ? odd : even) |= m & -m;
    auto in = [](std::uint32_t a, Simplex s) { return (a & ~s.mask()) == 0; };
    if ((in(even, I) && in(odd, J)) || (in(odd, I) && in(even, J))) return false;
  }
  return true;
}

namespace {

// Maximizes the weight lambda puts outside J over common points of the two
// convex hulls. Returns the optimal point of R^d, or nothing when the simplices
// meet properly.
std::optional<RationalPoint> improper_point(Simplex I, Simplex J, int d) {
  const auto iv = I.vertices(), jv = J.vertices();
  const std::size_t n = iv.size() + jv.size();
  std::vector<std::vector<Rational>> A(d + 2, std::vector<Rational>(n));
  std::vector<Rational> b(d + 2, 0), c(n, 0);
  for (std::size_t a = 0; a < iv.size(); ++a) {
    auto p = moment_point(iv[a], d);
    for (int k = 0; k < d; ++k) A[k][a] = p[k];
    A[d][a] = 1;
    if (!J.contains(iv[a])) c[a] = 1;
  }
  for (std::size_t a = 0; a < jv.size(); ++a) {
    auto p = moment_point(jv[a], d);
    for (int k = 0; k < d; ++k) A[k][iv.size() + a] = -p[k];
    A[d + 1][iv.size() + a] = 1;
  }
  b[d] = 1;
  b[d + 1] = 1;
  LpResult r = lp_maximize(A, b, c);
  if (r.status != LpResult::Status::Optimal || sgn(r.value) == 0) return std::nullopt;
  RationalPoint x(d, 0);
  for (std::size_t a = 0; a < iv.size(); ++a) {
    auto p = moment_point(iv[a], d);
    for (int k = 0; k < d; ++k) x[k] += r.x[a] * p[k];
  }
  return x;
}

std::vector<RationalPoint> projected_overlap_points(Simplex I, Simplex J, int e) {
  std::vector<RationalPoint> out;
  auto p = improper_point(I, J, e);
  auto q = improper_point(J, I, e);
  if (p) out.push_back(*p);
  if (q) out.push_back(*q);
  if (p && q) {
    RationalPoint mid(e);
    for (int k = 0; k < e; ++k) mid[k] = ((*p)[k] + (*q)[k]) / 2;
    out.push_back(mid);
  }
  return out;
}

}  // namespace

bool proper_intersection_lp(Simplex I, Simplex J, int d) {
  check_arity(I, d);
  check_arity(J, d);
  return !improper_point(I, J, d).has_value();
}

namespace {

// Range of the last coordinate of |nu_d(S)| over the vertical line at x.
std::optional<Interval> simplex_fiber(Simplex S, int d, const RationalPoint& x) {
  const auto vs = S.vertices();
  const std::size_t n = vs.size();
  std::vector<std::vector<Rational>> A(d, std::vector<Rational>(n));
  std::vector<Rational> b(d), up(n), down(n);
  for (std::size_t a = 0; a < n; ++a) {
    auto p = moment_point(vs[a], d);
    for (int k = 0; k + 1 < d; ++k) A[k][a] = p[k];
    A[d - 1][a] = 1;
    up[a] = p[d - 1];
    down[a] = -p[d - 1];
  }
  for (int k = 0; k + 1 < d; ++k) b[k] = x[k];
  b[d - 1] = 1;
  LpResult hi = lp_maximize(A, b, up);
  if (hi.status != LpResult::Status::Optimal) return std::nullopt;
  LpResult lo = lp_maximize(A, b, down);
  return Interval{-lo.value, hi.value};
}

}  // namespace

std::vector<Interval> fiber_profile(const Complex& K, int d, const RationalPoint& x) {
  if (d < 1) throw Error(ErrorCode::ZeroDimension, "fiber needs d >= 1");
  if (static_cast<int>(x.size()) != d - 1) throw Error(ErrorCode::BadArity, "fiber base point has wrong dimension");
  std::vector<Interval> pieces;
  for (Simplex f : K.facets()) {
    check_arity(f, d);
    if (auto iv = simplex_fiber(f, d, x)) pieces.push_back(*iv);
  }
  std::sort(pieces.begin(), pieces.end(), [](const Interval& a, const Interval& b) { return a.lo < b.lo; });
  std::vector<Interval> merged;
  for (auto& p : pieces) {
    if (!merged.empty() && p.lo <= merged.back().hi) {
      if (p.hi > merged.back().hi) merged.back().hi = p.hi;
    } else {
      merged.push_back(p);
    }
  }
  return merged;
}

AdmissibilityProbe oracle_check_admissible(const Complex& K, int d, int sample_budget, std::uint64_t seed) {
  AdmissibilityProbe probe;
  if (K.empty()) return probe;
  auto try_point = [&](const RationalPoint& x) {
    ++probe.samples;
    auto fiber = fiber_profile(K, d, x);
    if (fiber.size() >= 2) {
      probe.refuted = true;
      probe.witness = x;
      probe.fiber = std::move(fiber);
    }
    return probe.refuted;
  };
  auto project = [d](int v) {
    return d == 1 ? RationalPoint{} : moment_point(v, d - 1);
  };
  auto combine = [&](const std::vector<int>& vs, const std::vector<long>& w) {
    RationalPoint x(d - 1, 0);
    long total = 0;
    for (std::size_t a = 0; a < vs.size(); ++a) {
      auto p = project(vs[a]);
      for (int k = 0; k + 1 < d; ++k) x[k] += w[a] * p[k];
      total += w[a];
    }
    for (auto& c : x) c /= total;
    return x;
  };

  const auto& facets = K.facets();
  std::set<std::uint32_t> seen;
  for (std::size_t a = 0; a < facets.size(); ++a) {
    for (std::size_t b = a; b < facets.size(); ++b) {
      const std::uint32_t u = (facets[a] | facets[b]).mask();
      for (std::uint32_t s = u; s; s = (s - 1) & u) {
        if (!seen.insert(s).second) continue;
        auto vs = Simplex::from_mask(s).vertices();
        if (try_point(combine(vs, std::vector<long>(vs.size(), 1)))) return probe;
      }
    }
  }
  // Points where the projections of two facets overlap outside their common
  // face; a pair stacked without anything in between shows up here.
  if (d >= 2) {
    for (std::size_t a = 0; a < facets.size(); ++a)
      for (std::size_t b = a + 1; b < facets.size(); ++b)
        for (const auto& x : projected_overlap_points(facets[a], facets[b], d - 1))
          if (try_point(x)) return probe;
  }
  std::mt19937_64 rng(seed);
  std::uniform_int_distribution<long> weight(1, 64);
  for (int i = 0; i < sample_budget; ++i) {
    Simplex f = facets[rng() % facets.size()];
    Simplex g = facets[rng() % facets.size()];
    auto vs = (f | g).vertices();
    std::vector<long> w(vs.size());
    for (auto& x : w) x = weight(rng);
    if (try_point(combine(vs, w))) return probe;
  }
  return probe;
}

Rational simplex_volume(Simplex I, int d) {
  if (d < 1 || I.size() != d + 1) throw Error(ErrorCode::NotFullDimensional, I.to_string() + " in R^" + std::to_string(d));
  std::vector<std::vector<Rational>> m;
  for (int v : I.vertices()) {
    std::vector<Rational> row{1};
    for (auto& c : moment_point(v, d)) row.push_back(c);
    m.push_back(std::move(row));
  }
  Rational vol = determinant(std::move(m));
  for (int k = 2; k <= d; ++k) vol /= k;
  return vol;
}

}  // namespace segalis
