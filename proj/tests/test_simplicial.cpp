#include <doctest.h>

#include <algorithm>
#include <array>
#include <map>
#include <numeric>
#include <set>
#include <tuple>

#include <nlohmann/json.hpp>

#include "segalis/error.hpp"
#include "segalis/generators.hpp"
#include "segalis/serialize.hpp"

using namespace segalis;

namespace {

// Re-asserts the simplicial identities with the backend's own composition.
template <Backend B>
void check_identities(const SimplicialObject<B>& X) {
  const int N = X.truncation();
  for (int n = 2; n <= N; ++n)
    for (int j = 1; j <= n; ++j)
      for (int i = 0; i < j; ++i)
        CHECK(B::compose(X.face(n - 1, i), X.face(n, j)) == B::compose(X.face(n - 1, j - 1), X.face(n, i)));
  for (int n = 0; n + 1 <= N; ++n)
    for (int i = 0; i <= n; ++i) {
      CHECK(B::compose(X.face(n + 1, i), X.degeneracy(n, i)) == B::identity(X.level(n)));
      CHECK(B::compose(X.face(n + 1, i + 1), X.degeneracy(n, i)) == B::identity(X.level(n)));
    }
  for (int n = 0; n + 2 <= N; ++n)
    for (int j = 0; j <= n; ++j)
      for (int i = 0; i <= j; ++i)
        CHECK(B::compose(X.degeneracy(n + 1, i), X.degeneracy(n, j)) ==
              B::compose(X.degeneracy(n + 1, j + 1), X.degeneracy(n, i)));
}

long binomial(int n, int k) {
  if (k < 0 || k > n) return 0;
  long r = 1;
  for (int i = 1; i <= k; ++i) r = r * (n - k + i) / i;
  return r;
}

std::vector<std::vector<int>> cyclic_group(int m) {
  std::vector<std::vector<int>> t(m, std::vector<int>(m));
  for (int a = 0; a < m; ++a)
    for (int b = 0; b < m; ++b) t[a][b] = (a + b) % m;
  return t;
}

// S_3 as permutations of {0,1,2}, identity first; product is composition a after b.
std::vector<std::vector<int>> symmetric_group_3() {
  std::vector<std::array<int, 3>> perms;
  std::array<int, 3> p{0, 1, 2};
  do perms.push_back(p);
  while (std::next_permutation(p.begin(), p.end()));
  std::vector<std::vector<int>> t(6, std::vector<int>(6));
  for (int a = 0; a < 6; ++a)
    for (int b = 0; b < 6; ++b) {
      std::array<int, 3> c{};
      for (int x = 0; x < 3; ++x) c[x] = perms[a][perms[b][x]];
      t[a][b] = static_cast<int>(std::find(perms.begin(), perms.end(), c) - perms.begin());
    }
  return t;
}

// Arrays (m_ij)_{i<j} over M with m_ik = m_ij m_jk for all i<j<k.
long count_arrays(const PartialMonoid& M, int n) {
  std::vector<std::pair<int, int>> pairs;
  for (int i = 0; i <= n; ++i)
    for (int j = i + 1; j <= n; ++j) pairs.emplace_back(i, j);
  std::vector<int> v(pairs.size(), 0);
  long count = 0;
  while (true) {
    std::map<std::pair<int, int>, int> m;
    for (std::size_t s = 0; s < pairs.size(); ++s) m[pairs[s]] = v[s];
    bool ok = true;
    for (int i = 0; i <= n && ok; ++i)
      for (int j = i + 1; j <= n && ok; ++j)
        for (int k = j + 1; k <= n && ok; ++k) ok = M.product[m[{i, j}]][m[{j, k}]] == m[{i, k}];
    count += ok;
    std::size_t s = 0;
    while (s < v.size() && ++v[s] == M.size()) v[s++] = 0;
    if (s == v.size()) break;
  }
  return count;
}

std::vector<Matrix> all_matrices(int rows, int cols, int p) {
  const Field F = Field::prime(p);
  std::vector<Matrix> out;
  std::vector<int> v(static_cast<std::size_t>(rows * cols), 0);
  while (true) {
    Matrix m(rows, cols, F);
    for (int i = 0; i < rows; ++i)
      for (int j = 0; j < cols; ++j) m.set(i, j, Rational(v[static_cast<std::size_t>(i * cols + j)]));
    out.push_back(m);
    std::size_t s = 0;
    while (s < v.size() && ++v[s] == p) v[s++] = 0;
    if (s == v.size()) break;
  }
  return out;
}

std::vector<Matrix> general_linear(int k, int p) {
  std::vector<Matrix> out;
  for (auto& m : all_matrices(k, k, p))
    if (rank(m) == k) out.push_back(m);
  return out;
}

}  // namespace

TEST_CASE("nerves of categories") {
  SUBCASE("trivial monoid is a point") {
    auto X = nerve_of_category(FiniteCategory::monoid({{0}}), 4);
    for (int n = 0; n <= 4; ++n) CHECK(X.level(n).size == 1);
  }
  SUBCASE("poset 0 < 1") {
    auto X = nerve_of_category(FiniteCategory::poset({{1, 1}, {0, 1}}), 5);
    CHECK(X.level(0).size == 2);
    CHECK(X.level(1).size == 3);
    // monotone words of length n+1 in {0,1}
    for (int n = 0; n <= 5; ++n) CHECK(X.level(n).size == n + 2);
    check_identities(X);
  }
  SUBCASE("groups have |G|^n chains") {
    for (const auto& table : {cyclic_group(3), symmetric_group_3()}) {
      auto X = nerve_of_category(FiniteCategory::monoid(table), 3);
      long expected = 1;
      for (int n = 0; n <= 3; ++n, expected *= static_cast<long>(table.size())) CHECK(X.level(n).size == expected);
      check_identities(X);
    }
  }
  SUBCASE("inner face composes") {
    const auto t = symmetric_group_3();
    auto X = nerve_of_category(FiniteCategory::monoid(t), 2);
    // words are sorted lexicographically, so (a,b) sits at 6a+b
    for (int a = 0; a < 6; ++a)
      for (int b = 0; b < 6; ++b) {
        CHECK(X.face(2, 1).image[6 * a + b] == t[a][b]);
        CHECK(X.face(2, 0).image[6 * a + b] == b);
        CHECK(X.face(2, 2).image[6 * a + b] == a);
      }
  }
  SUBCASE("non-categories are rejected") {
    FiniteCategory C = FiniteCategory::monoid(cyclic_group(2));
    C.compose[1][0] = 0;
    CHECK_THROWS_AS(C.validate(), Error);
    CHECK_THROWS_AS(FiniteCategory::poset({{1, 1, 0}, {0, 1, 1}, {0, 0, 1}}), Error);
  }
}

TEST_CASE("partial monoids") {
  SUBCASE("disjoint union on {1,2} against exhaustive arrays") {
    const auto M = PartialMonoid::disjoint_union(2);
    auto X = partial_monoid_object(M, 3);
    for (int n = 0; n <= 3; ++n) CHECK(X.level(n).size == count_arrays(M, n));
    // each of the 2 letters sits in one of the n slots or in none
    for (int n = 0; n <= 3; ++n) CHECK(X.level(n).size == (n + 1) * (n + 1));
    CHECK(X.level(1).size == 4);
    CHECK(X.level(2).size == 9);
    check_identities(X);
  }
  SUBCASE("total monoid agrees with the nerve") {
    const auto t = symmetric_group_3();
    PartialMonoid M{0, t, {}};
    auto X = partial_monoid_object(M, 3);
    auto Y = nerve_of_category(FiniteCategory::monoid(t), 3);
    for (int n = 0; n <= 3; ++n) {
      CHECK(X.level(n) == Y.level(n));
      for (int i = 0; n > 0 && i <= n; ++i) CHECK(X.face(n, i) == Y.face(n, i));
      for (int i = 0; n < 3 && i <= n; ++i) CHECK(X.degeneracy(n, i) == Y.degeneracy(n, i));
    }
  }
  SUBCASE("inconsistent multiplication") {
    PartialMonoid M = PartialMonoid::disjoint_union(2);
    M.product[1][2] = -1;  // {1}{2} undefined but {2}{1} still defined
    CHECK_NOTHROW(M.validate());
    M.product[3][0] = 1;
    try {
      M.validate();
      FAIL("expected NotPartialMonoid");
    } catch (const Error& e) {
      CHECK(e.code() == ErrorCode::NotPartialMonoid);
    }
    PartialMonoid bad = PartialMonoid::disjoint_union(1);
    bad.product[1][0] = 0;
    CHECK_THROWS_AS(bad.validate(), Error);
  }
  SUBCASE("associativity failure is detected") {
    // a.a = b, b.a defined but a.b not
    PartialMonoid M{0, {{0, 1, 2}, {1, 2, -1}, {2, -1, -1}}, {}};
    CHECK_NOTHROW(M.validate());
    M.product[2][1] = 2;
    CHECK_THROWS_AS(M.validate(), Error);
  }
}

TEST_CASE("subsets, restrictions and path spaces") {
  const auto t = symmetric_group_3();
  auto X = nerve_of_category(FiniteCategory::monoid(t), 4);

  SUBCASE("X_I for I = {1,3} in [4]") {
    CHECK(evaluate_on_subset(X, Simplex{1, 3}) == X.level(1));
    CHECK(evaluate_on_subset(X, Simplex{2}) == X.level(0));
    CHECK(X.restriction(Simplex::full(4), Simplex::full(4)) == FinSet::identity(X.level(4)));
    const auto r = X.restriction(Simplex::full(4), Simplex{1, 3});
    std::vector<int> del{0, 2, 4};
    do {
      // delete in this order, tracking positions inside the shrinking simplex
      FinSetMap m = FinSet::identity(X.level(4));
      std::vector<int> alive{0, 1, 2, 3, 4};
      for (int v : del) {
        const int pos = static_cast<int>(std::find(alive.begin(), alive.end(), v) - alive.begin());
        m = FinSet::compose(X.face(static_cast<int>(alive.size()) - 1, pos), m);
        alive.erase(alive.begin() + pos);
      }
      CHECK(m == r);
    } while (std::next_permutation(del.begin(), del.end()));
    CHECK_THROWS_AS(evaluate_on_subset(X, Simplex{0, 1, 2, 3, 4, 5}), Error);
  }
  SUBCASE("initial path space reindexes by {0} * (I+1)") {
    auto P = path_space(X, PathSide::Initial);
    CHECK(P.truncation() == 3);
    for (int n = 0; n <= 3; ++n) CHECK(P.level(n) == X.level(n + 1));
    for (std::uint32_t mask = 1; mask < 16; ++mask) {
      Simplex I = Simplex::from_mask(mask);
      Simplex J = Simplex::from_mask(mask << 1).with(0);
      CHECK(P.restriction(Simplex::full(3), I) == X.restriction(Simplex::full(4), J));
    }
    check_identities(P);
  }
  SUBCASE("final path space reindexes by I * {n+1}") {
    auto P = path_space(X, PathSide::Final);
    for (std::uint32_t mask = 1; mask < 16; ++mask) {
      Simplex I = Simplex::from_mask(mask);
      CHECK(P.restriction(Simplex::full(3), I) == X.restriction(Simplex::full(4), I.with(4)));
    }
  }
  SUBCASE("constant objects") {
    auto C = constant_object<FinSet>(FinSetObj{3}, 3);
    auto P = path_space(C, PathSide::Initial);
    for (int n = 0; n <= 2; ++n) CHECK(P.level(n).size == 3);
    CHECK(P.face(2, 1) == FinSet::identity(FinSetObj{3}));
    try {
      path_space(constant_object<FinSet>(FinSetObj{3}, 0), PathSide::Final);
      FAIL("expected NoPaths");
    } catch (const Error& e) {
      CHECK(e.code() == ErrorCode::NoPaths);
    }
  }
  SUBCASE("broken identities are rejected") {
    auto faces = std::vector<std::vector<FinSetMap>>{{}, {FinSetMap::make(2, {0, 1}), FinSetMap::make(2, {1, 0})}};
    auto degs = std::vector<std::vector<FinSetMap>>{{FinSetMap::make(2, {0, 1})}};
    try {
      SimplicialObject<FinSet>({{2}, {2}}, faces, degs);
      FAIL("expected NotSimplicial");
    } catch (const Error& e) {
      CHECK(e.code() == ErrorCode::NotSimplicial);
    }
  }
}

TEST_CASE("Dold-Kan") {
  SUBCASE("surjection counts") {
    for (int n = 0; n <= 6; ++n)
      for (int k = 0; k <= n; ++k) CHECK(static_cast<long>(surjections(n, k).size()) == binomial(n, k));
    CHECK(surjections(3, 2) == std::vector<std::vector<int>>{{0, 0, 1, 2}, {0, 1, 1, 2}, {0, 1, 2, 2}});
  }
  SUBCASE("dimensions") {
    auto X0 = dold_kan_inverse(ChainComplex::from_dims({1}), 4);
    for (int n = 0; n <= 4; ++n) CHECK(X0.level(n).dim == 1);
    auto X1 = dold_kan_inverse(ChainComplex::from_dims({1, 1}), 5);
    for (int n = 0; n <= 5; ++n) CHECK(X1.level(n).dim == 1 + n);
    const std::vector<int> dims{2, 0, 1, 3};
    auto X = dold_kan_inverse(ChainComplex::from_dims(dims), 5);
    for (int n = 0; n <= 5; ++n) {
      long expected = 0;
      for (int k = 0; k < 4; ++k) expected += binomial(n, k) * dims[k];
      CHECK(X.level(n).dim == expected);
    }
    check_identities(X);
  }
  SUBCASE("degree 2 round trip") {
    auto C = normalized_chains(dold_kan_inverse(ChainComplex::from_dims({0, 0, 1}), 4));
    CHECK(C.dims == std::vector<int>{0, 0, 1, 0, 0});
    auto K = normalized_chains(constant_object<Vect>(VectObj{2, Field::rationals()}, 3));
    CHECK(K.dims == std::vector<int>{2, 0, 0, 0});
  }
  SUBCASE("random round trips") {
    for (std::uint64_t seed = 1; seed <= 40; ++seed) {
      const Field F = seed % 4 == 0 ? Field::prime(2) : seed % 4 == 1 ? Field::prime(3) : Field::rationals();
      const ChainComplex C = random_chain_complex(seed, 3, 3, F);
      auto X = dold_kan_inverse(C, 4);
      if (seed <= 5) check_identities(X);
      const ChainComplex D = normalized_chains(X);
      CHECK(D.isomorphic(C));
      CHECK(D.homology_dims().size() == 5);
      auto H = D.homology_dims();
      auto G = C.homology_dims();
      for (int k = 0; k <= C.top(); ++k) CHECK(H[k] == G[k]);
      // and back again
      CHECK(normalized_chains(dold_kan_inverse(D, 4)).isomorphic(C));
    }
  }
  SUBCASE("seeded complexes are reproducible and nontrivial") {
    int nonzero = 0;
    for (std::uint64_t seed = 1; seed <= 40; ++seed) {
      auto C = random_chain_complex(seed, 3, 3);
      CHECK(to_json(C) == to_json(random_chain_complex(seed, 3, 3)));
      for (int k = 1; k <= C.top(); ++k) nonzero += C.rank_of(k) > 0;
      CHECK(chain_complex_from_json(to_json(C)).isomorphic(C));
    }
    CHECK(nonzero > 10);
  }
  SUBCASE("d.d must vanish") {
    ChainComplex C = ChainComplex::from_dims({1, 1, 1});
    C.d[1].set(0, 0, 1);
    C.d[2].set(0, 0, 1);
    CHECK_THROWS_AS(C.validate(), Error);
  }
}

TEST_CASE("S-construction") {
  SUBCASE("low levels") {
    auto S = s_construction(2, 3, 2);
    CHECK(S.level(0).object_count() == 1);
    CHECK(S.level(0).morphism_count() == 1);
    // S_1: one object per dimension, automorphisms GL_k(F_2)
    CHECK(S.level(1).object_count() == 3);
    for (int k = 0; k <= 2; ++k)
      CHECK(S.level(1).component(S.level(1).component_of(k)).group.order() == static_cast<int>(general_linear(k, 2).size()));
    check_identities(S);
  }
  SUBCASE("S_2 against exhaustive short exact sequences") {
    for (auto [p, D] : {std::pair{2, 1}, std::pair{2, 2}, std::pair{3, 1}}) {
      const Field F = Field::prime(p);
      // multiset of (dim A, dim B, |Aut|) over iso classes
      std::multiset<std::tuple<int, int, long>> oracle;
      for (int b = 0; b <= D; ++b)
        for (int a = 0; a <= b; ++a) {
          const int c = b - a;
          std::vector<std::pair<Matrix, Matrix>> seqs;
          for (auto& i : all_matrices(b, a, p))
            for (auto& q : all_matrices(c, b, p))
              if (rank(i) == a && rank(q) == c && (q * i).is_zero()) seqs.emplace_back(i, q);
          const auto ga = general_linear(a, p), gb = general_linear(b, p), gc = general_linear(c, p);
          const long order = static_cast<long>(ga.size() * gb.size() * gc.size());
          std::vector<char> seen(seqs.size(), 0);
          for (std::size_t s = 0; s < seqs.size(); ++s) {
            if (seen[s]) continue;
            long orbit = 0;
            std::set<std::size_t> members;
            for (auto& al : ga)
              for (auto& be : gb)
                for (auto& ga2 : gc) {
                  Matrix i2 = be * seqs[s].first * inverse(al);
                  Matrix q2 = ga2 * seqs[s].second * inverse(be);
                  for (std::size_t t = 0; t < seqs.size(); ++t)
                    if (seqs[t].first == i2 && seqs[t].second == q2) members.insert(t);
                }
            for (auto t : members) seen[t] = 1;
            orbit = static_cast<long>(members.size());
            oracle.emplace(a, b, order / orbit);
          }
        }
      auto S = s_construction(p, 2, D);
      std::multiset<std::tuple<int, int, long>> model;
      const auto& G = S.level(2);
      for (int c = 0; c < G.component_count(); ++c) {
        const int x = G.component(c).objects.front();
        const std::string& label = G.label(x);  // "0,a,b"
        const int a = label[2] - '0', b = label[4] - '0';
        model.emplace(a, b, G.component(c).group.order());
      }
      CHECK(model == oracle);
      if (p == 2 && D == 1) CHECK(G.component_count() == 3);
      (void)F;
    }
  }
  SUBCASE("faces on flags") {
    auto S = s_construction(2, 3, 2);
    const auto& G = S.level(2);
    const auto& H = S.level(1);
    for (int x = 0; x < G.object_count(); ++x) {
      const std::string& l = G.label(x);
      const int a = l[2] - '0', b = l[4] - '0';
      CHECK(H.label(S.face(2, 0).on_object(x)) == "0," + std::to_string(b - a));
      CHECK(H.label(S.face(2, 1).on_object(x)) == "0," + std::to_string(b));
      CHECK(H.label(S.face(2, 2).on_object(x)) == "0," + std::to_string(a));
    }
  }
  SUBCASE("guards") {
    auto code = [](auto&& f) {
      try {
        f();
      } catch (const Error& e) {
        return e.code();
      }
      return ErrorCode::Internal;
    };
    CHECK(code([] { s_construction(2, 4, 1); }) == ErrorCode::TooLarge);
    CHECK(code([] { s_construction(2, 2, 3); }) == ErrorCode::TooLarge);
    CHECK(code([] { s_construction(5, 2, 1); }) == ErrorCode::TooLarge);
    CHECK(code([] { s_construction(4, 2, 1); }) == ErrorCode::BadInput);
  }
}

TEST_CASE("simplicial object JSON") {
  auto round_trip = [](const AnySimplicialObject& X) {
    const auto j = to_json(X);
    const auto Y = simplicial_object_from_json(nlohmann::json::parse(j.dump()));
    CHECK(Y.index() == X.index());
    CHECK(to_json(Y) == j);
    return Y;
  };
  SUBCASE("finite sets") {
    const auto X = nerve_of_category(FiniteCategory::monoid(symmetric_group_3()), 3);
    const auto Y = std::get<SimplicialObject<FinSet>>(round_trip(X));
    for (int n = 1; n <= 3; ++n)
      for (int i = 0; i <= n; ++i) CHECK(Y.face(n, i) == X.face(n, i));
    CHECK(to_json(AnySimplicialObject(X))["backend"] == "finset");
    CHECK(to_json(AnySimplicialObject(X))["objects"][1] == 6);
  }
  SUBCASE("vector spaces") {
    for (const Field f : {Field::rationals(), Field::prime(2), Field::prime(3)}) {
      const auto X = dold_kan_inverse(random_chain_complex(7, 2, 2, f), 4);
      const auto Y = std::get<SimplicialObject<Vect>>(round_trip(X));
      CHECK(Y.level(4) == X.level(4));
      CHECK(to_json(Y)["field"] == f.name());
    }
  }
  SUBCASE("groupoids") {
    const auto X = s_construction(2, 2, 1);
    const auto Y = std::get<SimplicialObject<Groupoid>>(round_trip(X));
    CHECK(Y.level(2) == X.level(2));
    CHECK(backend_tag(Y) == "groupoid");
    CHECK(truncation_of(Y) == 2);
  }
  SUBCASE("malformed input") {
    auto j = to_json(AnySimplicialObject(nerve_of_category(FiniteCategory::monoid(cyclic_group(2)), 2)));
    auto bad = j;
    bad["backend"] = "sets";
    CHECK_THROWS_AS(simplicial_object_from_json(bad), Error);
    bad = j;
    bad["faces"][2].erase(0);
    CHECK_THROWS_AS(simplicial_object_from_json(bad), Error);
    bad = j;
    bad.erase("truncation");
    CHECK_THROWS_AS(simplicial_object_from_json(bad), Error);
    // composing in the wrong order breaks the face identities
    bad = j;
    std::swap(bad["faces"][2][0], bad["faces"][2][2]);
    try {
      simplicial_object_from_json(bad);
      FAIL("accepted a non-simplicial object");
    } catch (const Error& e) {
      CHECK(e.code() == ErrorCode::NotSimplicial);
    }
  }
}
