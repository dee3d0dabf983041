#include <doctest.h>

#include <random>
#include <set>

#include <nlohmann/json.hpp>

#include "segalis/backends.hpp"
#include "segalis/error.hpp"

using namespace segalis;

namespace {

Matrix random_matrix(std::mt19937_64& rng, int r, int c, Field F, int spread = 3) {
  std::uniform_int_distribution<int> e(-spread, spread);
  Matrix m(r, c, F);
  for (int i = 0; i < r; ++i)
    for (int j = 0; j < c; ++j) m.set(i, j, e(rng));
  return m;
}

// Rank from the definition: largest k with a nonzero k x k minor.
int rank_by_minors(const Matrix& m) {
  int best = 0;
  const int r = m.rows(), c = m.cols();
  for (std::uint32_t rs = 1; rs < (1U << r); ++rs)
    for (std::uint32_t cs = 1; cs < (1U << c); ++cs) {
      const int k = std::popcount(rs);
      if (k != std::popcount(cs) || k <= best) continue;
      std::vector<std::vector<Rational>> sub;
      for (int i = 0; i < r; ++i) {
        if (!((rs >> i) & 1U)) continue;
        sub.emplace_back();
        for (int j = 0; j < c; ++j)
          if ((cs >> j) & 1U) sub.back().push_back(m(i, j));
      }
      if (sgn(determinant(sub)) != 0) best = k;
    }
  return best;
}

// Z/k as a table.
FiniteGroup cyclic(int k) {
  std::vector<std::vector<int>> t(k, std::vector<int>(k));
  for (int a = 0; a < k; ++a)
    for (int b = 0; b < k; ++b) t[a][b] = (a + b) % k;
  return FiniteGroup(t);
}

// S_3 as permutations of {0,1,2}, identity first.
FiniteGroup symmetric3() {
  std::vector<std::array<int, 3>> perms{{0, 1, 2}, {1, 0, 2}, {0, 2, 1}, {2, 1, 0}, {1, 2, 0}, {2, 0, 1}};
  std::vector<std::vector<int>> t(6, std::vector<int>(6));
  for (int a = 0; a < 6; ++a)
    for (int b = 0; b < 6; ++b) {
      std::array<int, 3> ab{perms[a][perms[b][0]], perms[a][perms[b][1]], perms[a][perms[b][2]]};
      for (int c = 0; c < 6; ++c)
        if (perms[c] == ab) t[a][b] = c;
    }
  return FiniteGroup(t);
}

GroupoidObj point() { return GroupoidObj({{FiniteGroup(), {0}}}); }
GroupoidObj delooping(const FiniteGroup& g) { return GroupoidObj({{g, {0}}}); }

GroupoidFunctor point_into(const GroupoidObj& target, int object) {
  return GroupoidFunctor(point(), target, {object}, {{target.identity(object)}}, {target.identity(object)});
}

// The cospan a -> c <- b as a diagram on {a, b, c} with c below a and b.
template <typename B>
PosetDiagram<B> cospan(typename B::Object a, typename B::Object b, typename B::Object c, typename B::Morphism f,
                       typename B::Morphism g) {
  PosetDiagram<B> d;
  d.labels = {"a", "b", "c"};
  d.values = {a, b, c};
  d.leq = {{1, 0, 0}, {0, 1, 0}, {1, 1, 1}};
  d.maps.emplace(std::pair{2, 0}, f);
  d.maps.emplace(std::pair{2, 1}, g);
  return d;
}

}  // namespace

TEST_CASE("fields") {
  Field F5 = Field::prime(5);
  CHECK(F5.reduce(Rational(7)) == 2);
  CHECK(F5.reduce(Rational(-1)) == 4);
  CHECK(F5.reduce(Rational(1, 2)) == 3);
  CHECK(F5.mul(F5.inv(3), 3) == 1);
  CHECK_THROWS_AS(Field::prime(6), Error);
  CHECK(Field::parse("F7").characteristic() == 7);
  CHECK(Field::parse("Q").is_rational());
  CHECK_THROWS_AS(Field::parse("R"), Error);
}

TEST_CASE("rank, kernel and solve agree with independent computations") {
  std::mt19937_64 rng(5);
  for (Field F : {Field::rationals(), Field::prime(2), Field::prime(3)}) {
    for (int t = 0; t < 60; ++t) {
      const int r = 1 + static_cast<int>(rng() % 4), c = 1 + static_cast<int>(rng() % 4);
      Matrix m = random_matrix(rng, r, c, F, 2);
      const int rk = rank(m);
      if (F.is_rational()) CHECK(rk == rank_by_minors(m));
      Matrix k = kernel(m);
      CHECK(k.cols() == c - rk);
      CHECK((m * k).is_zero());
      CHECK(rank(k) == k.cols());
      Matrix x = random_matrix(rng, c, 2, F);
      auto sol = solve(m, m * x);
      REQUIRE(sol);
      CHECK(m * *sol == m * x);
    }
    Matrix sq = Matrix::from_rows({{2, 1}, {1, 1}}, 2, F);
    CHECK(sq * inverse(sq) == Matrix::identity(2, F));
  }
  CHECK_THROWS_AS(inverse(Matrix::from_rows({{1, 2}, {2, 4}}, 2)), Error);
}

TEST_CASE("isomorphism tests") {
  CHECK(FinSet::is_iso(FinSet::identity({4})).iso);
  CHECK(Vect::is_iso(Vect::identity({3, Field()})).iso);
  CHECK_FALSE(Vect::is_iso({Matrix(3, 2)}).iso);
  auto collide = FinSet::is_iso(FinSetMap::make(3, {0, 0, 1}));
  CHECK_FALSE(collide.iso);
  CHECK(collide.witness.find("both map to 0") != std::string::npos);

  // Inverse pairs compose to isomorphisms.
  std::mt19937_64 rng(9);
  for (int t = 0; t < 40; ++t) {
    const int n = 1 + static_cast<int>(rng() % 6);
    std::vector<int> p(n);
    for (int i = 0; i < n; ++i) p[i] = i;
    std::shuffle(p.begin(), p.end(), rng);
    std::vector<int> q(n);
    for (int i = 0; i < n; ++i) q[p[i]] = i;
    auto f = FinSetMap::make(n, p), g = FinSetMap::make(n, q);
    CHECK(FinSet::compose(g, f) == FinSet::identity({n}));
    CHECK(FinSet::is_iso(FinSet::compose(f, g)).iso);

    Matrix a = random_matrix(rng, 3, 3, Field());
    if (rank(a) == 3) CHECK(Vect::is_iso(Vect::compose({a}, {inverse(a)})).iso);
  }
}

TEST_CASE("groupoids and equivalences") {
  // Two isomorphic objects with automorphism group Z/3, and its skeleton.
  GroupoidObj G({{cyclic(3), {0, 1}}}, {"x", "y"});
  GroupoidObj S = delooping(cyclic(3));
  CHECK(G.morphism_count() == 12);
  Arrow f{0, 1, 2};
  CHECK(G.compose(G.inverse(f), f) == G.identity(0));
  auto include = GroupoidFunctor::from_arrow_map(S, G, [](const Arrow& a) { return Arrow{0, 0, a.element}; });
  CHECK(is_equivalence(include).iso);
  CHECK_FALSE(is_isomorphism(include));
  auto collapse = GroupoidFunctor::from_arrow_map(G, S, [](const Arrow& a) { return Arrow{0, 0, a.element}; });
  CHECK(is_equivalence(collapse).iso);
  CHECK(is_isomorphism(Groupoid::identity(G)));

  // Not full: the trivial group into Z/3.
  auto pt = point_into(S, 0);
  auto v = is_equivalence(pt);
  CHECK_FALSE(v.iso);
  CHECK(v.witness.find("not full") != std::string::npos);
  // Not essentially surjective.
  GroupoidObj two({{FiniteGroup(), {0}}, {FiniteGroup(), {1}}});
  CHECK_FALSE(is_equivalence(point_into(two, 1)).iso);

  CHECK_THROWS_AS(GroupoidFunctor(S, S, {0}, {{Arrow{0, 0, 1}, Arrow{0, 0, 1}, Arrow{0, 0, 1}}}, {Arrow{0, 0, 0}}), Error);
  CHECK_THROWS_AS(FiniteGroup({{0, 1}, {1, 1}}), Error);

  auto j = to_json(G);
  CHECK(groupoid_from_json(j) == G);
  CHECK(groupoid_functor_from_json(to_json(include), S, G) == include);
}

TEST_CASE("finite set limits") {
  // Cospan {0..3} -> {0,1} <- {0..2}: fiber product by brute force.
  auto f = FinSetMap::make(2, {0, 1, 1, 0});
  auto g = FinSetMap::make(2, {1, 1, 0});
  auto d = cospan<FinSet>({4}, {3}, {2}, f, g);
  auto lim = poset_limit<FinSet>(d);
  std::set<std::pair<int, int>> brute;
  for (int a = 0; a < 4; ++a)
    for (int b = 0; b < 3; ++b)
      if (f.image[a] == g.image[b]) brute.insert({a, b});
  CHECK(lim.apex.size == static_cast<int>(brute.size()));
  std::set<std::pair<int, int>> got;
  for (int t = 0; t < lim.apex.size; ++t) got.insert({lim.projections[0].image[t], lim.projections[1].image[t]});
  CHECK(got == brute);

  // A poset with a maximum: the limit is the value there.
  PosetDiagram<FinSet> chain;
  chain.values = {{2}, {3}};
  chain.leq = {{1, 1}, {0, 1}};
  chain.maps.emplace(std::pair{0, 1}, FinSetMap::make(2, {0, 1, 1}));
  auto top = poset_limit<FinSet>(chain);
  CHECK(FinSet::is_iso(top.projections[1]).iso);
  CHECK(top.apex.size == 3);
}

TEST_CASE("vector space limits") {
  // Discrete two-element poset: direct sum.
  PosetDiagram<Vect> discrete;
  discrete.values = {{2, Field()}, {3, Field()}};
  discrete.leq = {{1, 0}, {0, 1}};
  CHECK(poset_limit<Vect>(discrete).apex.dim == 5);
  CHECK(limit_dimension_by_equalizers(discrete) == 5);

  // Random cospans: kernel of the difference map vs successive equalizers vs
  // the direct formula dim A + dim B - rank [f | -g] over the pair.
  std::mt19937_64 rng(21);
  for (Field F : {Field::rationals(), Field::prime(2)}) {
    for (int t = 0; t < 50; ++t) {
      const int a = static_cast<int>(rng() % 4), b = static_cast<int>(rng() % 4), c = static_cast<int>(rng() % 4);
      Matrix f = random_matrix(rng, c, a, F, 1), g = random_matrix(rng, c, b, F, 1);
      auto d = cospan<Vect>({a, F}, {b, F}, {c, F}, {f}, {g});
      auto lim = poset_limit<Vect>(d);
      Matrix joint = Matrix::hstack({f, Matrix(c, b, F) - g}, c, F);
      CHECK(lim.apex.dim == a + b - rank(joint));
      CHECK(lim.apex.dim == limit_dimension_by_equalizers(d));
      // Projections form a cone.
      CHECK(f * lim.projections[0].matrix == g * lim.projections[1].matrix);
      // The induced map of the limit cone itself is the identity.
      auto self = Vect::induced(lim, lim.apex, lim.projections);
      CHECK(self.matrix == Matrix::identity(lim.apex.dim, F));
    }
  }
}

TEST_CASE("diagram validation") {
  PosetDiagram<FinSet> bad;
  bad.values = {{2}, {2}};
  bad.leq = {{1, 1}, {0, 1}};
  CHECK_THROWS_AS(poset_limit<FinSet>(bad), Error);  // missing map
  bad.maps.emplace(std::pair{0, 1}, FinSetMap::make(3, {0, 1}));
  CHECK_THROWS_AS(poset_limit<FinSet>(bad), Error);  // wrong ends

  // A square whose two composites differ.
  PosetDiagram<FinSet> sq;
  sq.values = {{2}, {2}, {2}, {2}};
  sq.leq = {{1, 1, 1, 1}, {0, 1, 0, 1}, {0, 0, 1, 1}, {0, 0, 0, 1}};
  auto id = FinSet::identity({2});
  auto swap = FinSetMap::make(2, {1, 0});
  sq.maps.emplace(std::pair{0, 1}, id);
  sq.maps.emplace(std::pair{0, 2}, id);
  sq.maps.emplace(std::pair{1, 3}, id);
  sq.maps.emplace(std::pair{2, 3}, swap);
  try {
    poset_limit<FinSet>(sq);
    FAIL("expected NotADiagram");
  } catch (const Error& e) {
    CHECK(e.code() == ErrorCode::NotADiagram);
  }
}

TEST_CASE("groupoid pseudo-limits") {
  // * -> BG <- * : the pseudo-pullback is the discrete set G.
  for (const FiniteGroup& g : {cyclic(2), cyclic(3), symmetric3()}) {
    GroupoidObj BG = delooping(g);
    auto d = cospan<Groupoid>(point(), point(), BG, point_into(BG, 0), point_into(BG, 0));
    auto lim = poset_limit<Groupoid>(d);
    CHECK(lim.apex.component_count() == g.order());
    for (int c = 0; c < lim.apex.component_count(); ++c) CHECK(lim.apex.component(c).group.order() == 1);
  }

  // BG -> BG <- BG along identities is equivalent to BG.
  GroupoidObj B3 = delooping(symmetric3());
  auto id = Groupoid::identity(B3);
  auto lim = poset_limit<Groupoid>(cospan<Groupoid>(B3, B3, B3, id, id));
  CHECK(lim.apex.component_count() == 1);
  CHECK(lim.apex.component(0).group.order() == 6);
  CHECK(is_equivalence(lim.projections[0]).iso);

  // A chain of equivalences: the limit is equivalent to either end.
  GroupoidObj G({{cyclic(3), {0, 1}}});
  GroupoidObj S = delooping(cyclic(3));
  auto collapse = GroupoidFunctor::from_arrow_map(G, S, [](const Arrow& a) { return Arrow{0, 0, a.element}; });
  PosetDiagram<Groupoid> chain;
  chain.values = {S, G};
  chain.leq = {{1, 1}, {0, 1}};
  chain.maps.emplace(std::pair{0, 1}, collapse);
  auto cl = poset_limit<Groupoid>(chain);
  CHECK(is_equivalence(cl.projections[0]).iso);
  CHECK(is_equivalence(cl.projections[1]).iso);

  // Induced functor from a strict cone.
  auto cone = Groupoid::induced(lim, B3, {id, id, id});
  CHECK(is_equivalence(cone).iso);

  // Pullback of Z/2 -> Z/2 <- 1 style: BZ/2 -> B(Z/2) <- * is a point.
  GroupoidObj B2 = delooping(cyclic(2));
  auto pl = poset_limit<Groupoid>(cospan<Groupoid>(B2, point(), B2, Groupoid::identity(B2), point_into(B2, 0)));
  CHECK(pl.apex.component_count() == 1);
  CHECK(pl.apex.component(0).group.order() == 1);
}
