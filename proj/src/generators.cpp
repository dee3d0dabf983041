#include "segalis/generators.hpp"

#include <algorithm>
#include <map>
#include <random>

#include <nlohmann/json.hpp>

#include "segalis/error.hpp"

namespace segalis {

// ----------------------------------------------------------- categories

void FiniteCategory::validate() const {
  const int m = morphisms();
  auto bad = [](const std::string& what) { throw Error(ErrorCode::BadInput, "not a category: " + what); };
  if (objects < 0) bad("negative object count");
  if (static_cast<int>(target.size()) != m || static_cast<int>(compose.size()) != m) bad("morphism tables disagree in size");
  if (static_cast<int>(identity.size()) != objects) bad("one identity per object is needed");
  for (int f = 0; f < m; ++f) {
    if (source[f] < 0 || source[f] >= objects || target[f] < 0 || target[f] >= objects) bad("morphism end out of range");
    if (static_cast<int>(compose[f].size()) != m) bad("composition table is not square");
  }
  for (int x = 0; x < objects; ++x) {
    const int e = identity[x];
    if (e < 0 || e >= m || source[e] != x || target[e] != x) bad("identity of object " + std::to_string(x));
  }
  for (int g = 0; g < m; ++g)
    for (int f = 0; f < m; ++f) {
      const int h = compose[g][f];
      if ((h >= 0) != (target[f] == source[g])) bad("composition defined off composable pairs");
      if (h >= m) bad("composite out of range");
      if (h >= 0 && (source[h] != source[f] || target[h] != target[g])) bad("composite has wrong ends");
    }
  for (int f = 0; f < m; ++f)
    if (compose[identity[target[f]]][f] != f || compose[f][identity[source[f]]] != f) bad("unit law for morphism " + std::to_string(f));
  for (int h = 0; h < m; ++h)
    for (int g = 0; g < m; ++g) {
      if (compose[h][g] < 0) continue;
      for (int f = 0; f < m; ++f)
        if (compose[g][f] >= 0 && compose[compose[h][g]][f] != compose[h][compose[g][f]]) bad("associativity");
    }
}

FiniteCategory FiniteCategory::monoid(const std::vector<std::vector<int>>& table) {
  FiniteCategory C;
  const int m = static_cast<int>(table.size());
  C.objects = 1;
  C.source.assign(m, 0);
  C.target.assign(m, 0);
  C.identity = {0};
  C.compose.assign(m, std::vector<int>(m, -1));
  for (int a = 0; a < m; ++a) {
    if (static_cast<int>(table[a].size()) != m) throw Error(ErrorCode::BadInput, "monoid table is not square");
    for (int b = 0; b < m; ++b) C.compose[b][a] = table[a][b];
  }
  C.validate();
  return C;
}

FiniteCategory FiniteCategory::poset(const std::vector<std::vector<char>>& leq) {
  FiniteCategory C;
  const int n = static_cast<int>(leq.size());
  C.objects = n;
  std::map<std::pair<int, int>, int> id;
  for (int i = 0; i < n; ++i)
    for (int j = 0; j < n; ++j)
      if (leq.at(i).at(j)) {
        id[{i, j}] = static_cast<int>(C.source.size());
        C.source.push_back(i);
        C.target.push_back(j);
      }
  for (int i = 0; i < n; ++i) {
    auto it = id.find({i, i});
    if (it == id.end()) throw Error(ErrorCode::BadInput, "order relation is not reflexive");
    C.identity.push_back(it->second);
  }
  const int m = C.morphisms();
  C.compose.assign(m, std::vector<int>(m, -1));
  for (int g = 0; g < m; ++g)
    for (int f = 0; f < m; ++f) {
      if (C.target[f] != C.source[g]) continue;
      auto it = id.find({C.source[f], C.target[g]});
      if (it == id.end()) throw Error(ErrorCode::BadInput, "order relation is not transitive");
      C.compose[g][f] = it->second;
    }
  C.validate();
  return C;
}

namespace {

using Word = std::vector<int>;

// Levels given as sorted word lists; builds the FinSet object from faces and
// degeneracies computed on words.
template <typename Face, typename Degeneracy>
SimplicialObject<FinSet> finset_from_words(const std::vector<std::vector<Word>>& words, Face face, Degeneracy degeneracy) {
  const int N = static_cast<int>(words.size()) - 1;
  std::vector<std::map<Word, int>> index(N + 1);
  for (int n = 0; n <= N; ++n)
    for (int i = 0; i < static_cast<int>(words[n].size()); ++i) index[n].emplace(words[n][i], i);
  auto lookup = [&](int n, const Word& w) {
    auto it = index[n].find(w);
    if (it == index[n].end()) throw Error(ErrorCode::Internal, "face of a simplex left the level");
    return it->second;
  };
  std::vector<FinSetObj> levels;
  std::vector<std::vector<FinSetMap>> faces(N + 1), degeneracies(N);
  for (int n = 0; n <= N; ++n) levels.push_back({static_cast<int>(words[n].size())});
  for (int n = 1; n <= N; ++n)
    for (int i = 0; i <= n; ++i) {
      std::vector<int> image;
      for (const Word& w : words[n]) image.push_back(lookup(n - 1, face(n, i, w)));
      faces[n].push_back(FinSetMap::make(levels[n - 1].size, std::move(image)));
    }
  for (int n = 0; n < N; ++n)
    for (int i = 0; i <= n; ++i) {
      std::vector<int> image;
      for (const Word& w : words[n]) image.push_back(lookup(n + 1, degeneracy(n, i, w)));
      degeneracies[n].push_back(FinSetMap::make(levels[n + 1].size, std::move(image)));
    }
  return SimplicialObject<FinSet>(std::move(levels), std::move(faces), std::move(degeneracies));
}

}  // namespace

SimplicialObject<FinSet> nerve_of_category(const FiniteCategory& C, int N) {
  C.validate();
  if (N < 0) throw Error(ErrorCode::BadInput, "negative truncation");
  std::vector<std::vector<Word>> words(N + 1);
  for (int x = 0; x < C.objects; ++x) words[0].push_back({x});
  if (N >= 1)
    for (int f = 0; f < C.morphisms(); ++f) words[1].push_back({f});
  for (int n = 2; n <= N; ++n)
    for (const Word& w : words[n - 1])
      for (int f = 0; f < C.morphisms(); ++f)
        if (C.source[f] == C.target[w.back()]) {
          Word v = w;
          v.push_back(f);
          words[n].push_back(std::move(v));
        }
  for (auto& level : words) std::sort(level.begin(), level.end());
  auto face = [&](int n, int i, const Word& w) -> Word {
    if (n == 1) return {i == 0 ? C.target[w[0]] : C.source[w[0]]};
    Word v;
    for (int a = 0; a < n; ++a) {
      if ((i == 0 && a == 0) || (i == n && a == n - 1)) continue;
      if (i > 0 && i < n && a == i - 1) {
        v.push_back(C.compose[w[i]][w[i - 1]]);
        ++a;
        continue;
      }
      v.push_back(w[a]);
    }
    return v;
  };
  auto degeneracy = [&](int n, int i, const Word& w) -> Word {
    if (n == 0) return {C.identity[w[0]]};
    const int vertex = i == 0 ? C.source[w[0]] : C.target[w[i - 1]];
    Word v = w;
    v.insert(v.begin() + i, C.identity[vertex]);
    return v;
  };
  return finset_from_words(words, face, degeneracy);
}

// ------------------------------------------------------- partial monoids

void PartialMonoid::validate() const {
  const int m = size();
  auto bad = [](const std::string& what) { throw Error(ErrorCode::NotPartialMonoid, what); };
  if (m == 0) bad("no elements");
  if (unit < 0 || unit >= m) bad("unit out of range");
  for (const auto& row : product) {
    if (static_cast<int>(row.size()) != m) bad("product table is not square");
    for (int v : row)
      if (v < -1 || v >= m) bad("product value out of range");
  }
  if (!names.empty() && static_cast<int>(names.size()) != m) bad("one name per element is needed");
  for (int a = 0; a < m; ++a)
    if (product[unit][a] != a || product[a][unit] != a) bad("unit law fails for element " + std::to_string(a));
  for (int a = 0; a < m; ++a)
    for (int b = 0; b < m; ++b)
      for (int c = 0; c < m; ++c) {
        const int ab = product[a][b], bc = product[b][c];
        const int left = ab < 0 ? -1 : product[ab][c];
        const int right = bc < 0 ? -1 : product[a][bc];
        if (left != right)
          bad("(ab)c and a(bc) differ for a=" + std::to_string(a) + " b=" + std::to_string(b) + " c=" + std::to_string(c));
      }
}

PartialMonoid PartialMonoid::disjoint_union(int k) {
  if (k < 0 || k > 6) throw Error(ErrorCode::TooLarge, "disjoint-union monoid on at most 6 letters");
  PartialMonoid M;
  const int m = 1 << k;
  M.product.assign(m, std::vector<int>(m, -1));
  for (int a = 0; a < m; ++a) {
    for (int b = 0; b < m; ++b)
      if ((a & b) == 0) M.product[a][b] = a | b;
    std::string name = "{";
    for (int i = 0; i < k; ++i)
      if (a >> i & 1) name += (name.size() > 1 ? "," : "") + std::to_string(i + 1);
    M.names.push_back(name + "}");
  }
  return M;
}

SimplicialObject<FinSet> partial_monoid_object(const PartialMonoid& M, int N) {
  M.validate();
  if (N < 0) throw Error(ErrorCode::BadInput, "negative truncation");
  std::vector<std::vector<Word>> words(N + 1);
  words[0].push_back({});
  // Suffix products of each word, so extending only needs one product per suffix.
  std::vector<std::vector<Word>> suffixes(N + 1);
  suffixes[0].push_back({});
  for (int n = 1; n <= N; ++n)
    for (std::size_t w = 0; w < words[n - 1].size(); ++w)
      for (int a = 0; a < M.size(); ++a) {
        Word ext;
        bool ok = true;
        for (int s : suffixes[n - 1][w]) {
          const int v = M.product[s][a];
          if (v < 0) {
            ok = false;
            break;
          }
          ext.push_back(v);
        }
        if (!ok) continue;
        ext.push_back(a);
        Word v = words[n - 1][w];
        v.push_back(a);
        words[n].push_back(std::move(v));
        suffixes[n].push_back(std::move(ext));
      }
  auto face = [&](int n, int i, const Word& w) -> Word {
    Word v;
    for (int a = 0; a < n; ++a) {
      if ((i == 0 && a == 0) || (i == n && a == n - 1)) continue;
      if (i > 0 && i < n && a == i - 1) {
        v.push_back(M.product[w[i - 1]][w[i]]);
        ++a;
        continue;
      }
      v.push_back(w[a]);
    }
    return v;
  };
  auto degeneracy = [&](int, int i, const Word& w) -> Word {
    Word v = w;
    v.insert(v.begin() + i, M.unit);
    return v;
  };
  return finset_from_words(words, face, degeneracy);
}

// -------------------------------------------------------- chain complexes

void ChainComplex::validate() const {
  auto bad = [](const std::string& what) { throw Error(ErrorCode::BadInput, "not a chain complex: " + what); };
  if (dims.empty()) bad("no degrees");
  if (d.size() != dims.size()) bad("one differential per degree is needed");
  for (int k = 0; k <= top(); ++k) {
    if (dims[k] < 0) bad("negative dimension");
    const int rows = k == 0 ? 0 : dims[k - 1];
    if (d[k].rows() != rows || d[k].cols() != dims[k]) bad("differential " + std::to_string(k) + " has the wrong shape");
    if (!(d[k].field() == field)) bad("differential " + std::to_string(k) + " is over another field");
    if (k >= 2 && !(d[k - 1] * d[k]).is_zero()) bad("d.d is not zero in degree " + std::to_string(k));
  }
}

int ChainComplex::rank_of(int k) const { return k >= 1 && k <= top() ? rank(d[k]) : 0; }

std::vector<int> ChainComplex::homology_dims() const {
  std::vector<int> h;
  for (int k = 0; k <= top(); ++k) h.push_back(dims[k] - rank_of(k) - rank_of(k + 1));
  return h;
}

int ChainComplex::max_nonzero_degree() const {
  for (int k = top(); k >= 0; --k)
    if (dims[k] > 0) return k;
  return -1;
}

bool ChainComplex::isomorphic(const ChainComplex& o) const {
  if (!(field == o.field)) return false;
  const int t = std::max(max_nonzero_degree(), o.max_nonzero_degree());
  for (int k = 0; k <= t; ++k) {
    const int a = k <= top() ? dims[k] : 0, b = k <= o.top() ? o.dims[k] : 0;
    if (a != b || rank_of(k) != o.rank_of(k)) return false;
  }
  return true;
}

ChainComplex ChainComplex::from_dims(const std::vector<int>& dims, Field field) {
  ChainComplex C{field, dims, {}};
  for (int k = 0; k < static_cast<int>(dims.size()); ++k) C.d.emplace_back(k == 0 ? 0 : dims[k - 1], dims[k], field);
  C.validate();
  return C;
}

ChainComplex random_chain_complex(std::uint64_t seed, int max_degree, int max_dim, Field field) {
  if (max_degree < 0 || max_dim < 0) throw Error(ErrorCode::BadInput, "negative bound for a random complex");
  std::mt19937_64 rng(seed);
  auto pick = [&](int lo, int hi) { return std::uniform_int_distribution<int>(lo, hi)(rng); };
  const int top = pick(0, max_degree);
  std::vector<int> dims;
  for (int k = 0; k <= top; ++k) dims.push_back(pick(0, max_dim));
  ChainComplex C = ChainComplex::from_dims(dims, field);
  for (int k = 1; k <= top; ++k) {
    // Columns of d_k live in ker d_{k-1}.
    const Matrix cycles = k == 1 ? Matrix::identity(dims[0], field) : kernel(C.d[k - 1]);
    Matrix coeffs(cycles.cols(), dims[k], field);
    for (int i = 0; i < coeffs.rows(); ++i)
      for (int j = 0; j < coeffs.cols(); ++j) coeffs.set(i, j, Rational(pick(-2, 2)));
    C.d[k] = cycles * coeffs;
  }
  C.validate();
  return C;
}

std::vector<std::vector<int>> surjections(int n, int k) {
  std::vector<std::vector<int>> out;
  if (n < 0 || k < 0 || k > n) return out;
  std::vector<int> seq{0};
  auto rec = [&](auto&& self) -> void {
    const int len = static_cast<int>(seq.size());
    if (len == n + 1) {
      if (seq.back() == k) out.push_back(seq);
      return;
    }
    const int left = n + 1 - len;
    if (k - seq.back() < left) {
      seq.push_back(seq.back());
      self(self);
      seq.pop_back();
    }
    if (seq.back() < k) {
      seq.push_back(seq.back() + 1);
      self(self);
      seq.pop_back();
    }
  };
  rec(rec);
  return out;
}

namespace {

struct DkLevel {
  std::map<std::vector<int>, int> offset;  // surjection -> first coordinate
  int dim = 0;
};

DkLevel dk_level(const ChainComplex& C, int n) {
  DkLevel L;
  for (int k = 0; k <= std::min(n, C.top()); ++k)
    for (auto& s : surjections(n, k)) {
      L.offset.emplace(s, L.dim);
      L.dim += C.dims[k];
    }
  return L;
}

// theta^* : X_n -> X_m for monotone theta : [m] -> [n].
Matrix dk_map(const ChainComplex& C, const std::vector<DkLevel>& levels, const std::vector<int>& theta, int n) {
  const int m = static_cast<int>(theta.size()) - 1;
  Matrix out(levels[m].dim, levels[n].dim, C.field);
  for (const auto& [sigma, col] : levels[n].offset) {
    const int k = sigma.back();
    std::vector<int> image;
    for (int a : theta) image.push_back(sigma[a]);
    std::vector<int> values = image;
    values.erase(std::unique(values.begin(), values.end()), values.end());
    std::vector<int> tau;
    for (int v : image) tau.push_back(static_cast<int>(std::lower_bound(values.begin(), values.end(), v) - values.begin()));
    const int j = static_cast<int>(values.size()) - 1;
    if (j == k) {
      out.paste(Matrix::identity(C.dims[k], C.field), levels[m].offset.at(tau), col);
    } else if (j == k - 1 && values.front() == 1) {
      out.paste(C.d[k], levels[m].offset.at(tau), col);
    }
  }
  return out;
}

}  // namespace

SimplicialObject<Vect> dold_kan_inverse(const ChainComplex& C, int N) {
  C.validate();
  if (N < 0) throw Error(ErrorCode::BadInput, "negative truncation");
  std::vector<DkLevel> levels;
  for (int n = 0; n <= N; ++n) levels.push_back(dk_level(C, n));
  std::vector<VectObj> objs;
  std::vector<std::vector<VectMap>> faces(N + 1), degeneracies(N);
  for (int n = 0; n <= N; ++n) objs.push_back({levels[n].dim, C.field});
  for (int n = 1; n <= N; ++n)
    for (int i = 0; i <= n; ++i) {
      std::vector<int> theta;
      for (int a = 0; a < n; ++a) theta.push_back(a < i ? a : a + 1);
      faces[n].push_back({dk_map(C, levels, theta, n)});
    }
  for (int n = 0; n < N; ++n)
    for (int i = 0; i <= n; ++i) {
      std::vector<int> theta;
      for (int a = 0; a <= n + 1; ++a) theta.push_back(a <= i ? a : a - 1);
      degeneracies[n].push_back({dk_map(C, levels, theta, n)});
    }
  return SimplicialObject<Vect>(std::move(objs), std::move(faces), std::move(degeneracies));
}

ChainComplex normalized_chains(const SimplicialObject<Vect>& X) {
  const int N = X.truncation();
  const Field field = X.level(0).field;
  std::vector<Matrix> basis;
  std::vector<std::vector<int>> free;
  for (int n = 0; n <= N; ++n) {
    if (n == 0) {
      basis.push_back(Matrix::identity(X.level(0).dim, field));
      free.emplace_back();
      for (int i = 0; i < X.level(0).dim; ++i) free.back().push_back(i);
      continue;
    }
    std::vector<Matrix> blocks;
    for (int i = 1; i <= n; ++i) blocks.push_back(X.face(n, i).matrix);
    const Matrix stacked = Matrix::vstack(blocks, X.level(n).dim, field);
    basis.push_back(kernel(stacked));
    free.push_back(free_columns(stacked));
  }
  ChainComplex C{field, {}, {}};
  for (int n = 0; n <= N; ++n) {
    C.dims.push_back(basis[n].cols());
    if (n == 0) {
      C.d.emplace_back(0, basis[0].cols(), field);
      continue;
    }
    C.d.push_back((X.face(n, 0).matrix * basis[n]).select_rows(free[n - 1]));
  }
  C.validate();
  return C;
}

// --------------------------------------------------------- S-construction

namespace {

std::vector<int> entries(const Matrix& m) {
  std::vector<int> v;
  for (int i = 0; i < m.rows(); ++i)
    for (int j = 0; j < m.cols(); ++j) v.push_back(static_cast<int>(m(i, j).get_num().get_si()));
  return v;
}

Matrix square_block(const Matrix& m, int first, int count) { return m.row_block(first, count).col_block(first, count); }

bool is_prime(int p) {
  if (p < 2) return false;
  for (int q = 2; q * q <= p; ++q)
    if (p % q == 0) return false;
  return true;
}

struct FlagGroup {
  std::vector<Matrix> elements;
  std::map<std::vector<int>, int> index;
  FiniteGroup group;
};

FlagGroup flag_group(int p, const std::vector<int>& flag) {
  FlagGroup G;
  G.elements = flag_automorphisms(p, flag);
  for (int e = 0; e < static_cast<int>(G.elements.size()); ++e) G.index.emplace(entries(G.elements[e]), e);
  const int order = static_cast<int>(G.elements.size());
  std::vector<std::vector<int>> table(order, std::vector<int>(order));
  for (int a = 0; a < order; ++a)
    for (int b = 0; b < order; ++b) table[a][b] = G.index.at(entries(G.elements[a] * G.elements[b]));
  G.group = FiniteGroup(table);
  return G;
}

std::string flag_label(const std::vector<int>& flag) {
  std::string s;
  for (int a : flag) s += (s.empty() ? "" : ",") + std::to_string(a);
  return s;
}

}  // namespace

std::vector<Matrix> flag_automorphisms(int p, const std::vector<int>& flag) {
  if (!is_prime(p)) throw Error(ErrorCode::BadInput, "characteristic must be prime");
  if (flag.empty() || flag.front() != 0 || !std::is_sorted(flag.begin(), flag.end()))
    throw Error(ErrorCode::BadInput, "flag dimensions must start at 0 and increase");
  const Field field = Field::prime(p);
  const int k = flag.back();
  if (k > 3) throw Error(ErrorCode::TooLarge, "flag automorphisms in dimension at most 3");
  // Coordinate x belongs to step s when flag[s-1] <= x < flag[s].
  std::vector<int> step(k);
  for (int s = 1; s < static_cast<int>(flag.size()); ++s)
    for (int x = flag[s - 1]; x < flag[s]; ++x) step[x] = s;
  std::vector<Matrix> out{Matrix::identity(k, field)};
  std::vector<std::pair<int, int>> slots;
  for (int r = 0; r < k; ++r)
    for (int c = 0; c < k; ++c)
      if (step[r] <= step[c]) slots.emplace_back(r, c);
  std::vector<int> digits(slots.size(), 0);
  while (true) {
    Matrix m(k, k, field);
    for (std::size_t s = 0; s < slots.size(); ++s) m.set(slots[s].first, slots[s].second, Rational(digits[s]));
    if (rank(m) == k && !(m == out.front())) out.push_back(std::move(m));
    std::size_t s = 0;
    while (s < digits.size() && ++digits[s] == p) digits[s++] = 0;
    if (s == digits.size()) break;
  }
  return out;
}

SimplicialObject<Groupoid> s_construction(int p, int n_max, int cutoff, const SConstructionGuards& guards) {
  if (!is_prime(p)) throw Error(ErrorCode::BadInput, "characteristic must be prime, got " + std::to_string(p));
  if (n_max < 0 || cutoff < 0) throw Error(ErrorCode::BadInput, "negative level or cutoff");
  if (p > guards.max_prime) throw Error(ErrorCode::TooLarge, "field size " + std::to_string(p) + " exceeds the guard");
  if (n_max > guards.max_n) throw Error(ErrorCode::TooLarge, "level " + std::to_string(n_max) + " exceeds the guard");
  if (cutoff > guards.max_cutoff) throw Error(ErrorCode::TooLarge, "cutoff " + std::to_string(cutoff) + " exceeds the guard");

  std::map<std::vector<int>, FlagGroup> groups;
  auto group_of = [&](const std::vector<int>& flag) -> const FlagGroup& {
    auto it = groups.find(flag);
    if (it == groups.end()) it = groups.emplace(flag, flag_group(p, flag)).first;
    return it->second;
  };
  std::vector<std::vector<std::vector<int>>> flags(n_max + 1);
  std::vector<std::map<std::vector<int>, int>> flag_index(n_max + 1);
  std::vector<GroupoidObj> levels;
  for (int n = 0; n <= n_max; ++n) {
    std::vector<int> flag{0};
    auto rec = [&](auto&& self) -> void {
      if (static_cast<int>(flag.size()) == n + 1) {
        flag_index[n].emplace(flag, static_cast<int>(flags[n].size()));
        flags[n].push_back(flag);
        return;
      }
      for (int a = flag.back(); a <= cutoff; ++a) {
        flag.push_back(a);
        self(self);
        flag.pop_back();
      }
    };
    rec(rec);
    std::vector<GroupoidObj::Component> comps;
    std::vector<std::string> labels;
    for (int x = 0; x < static_cast<int>(flags[n].size()); ++x) {
      comps.push_back({group_of(flags[n][x]).group, {x}});
      labels.push_back(flag_label(flags[n][x]));
    }
    levels.emplace_back(std::move(comps), std::move(labels));
  }

  // A simplicial operator on flags, with the matching block of each automorphism.
  auto make_functor = [&](int n, int m, auto&& on_flag, auto&& on_matrix) {
    std::vector<int> objects;
    std::vector<std::vector<Arrow>> images;
    std::vector<Arrow> connecting;
    for (int x = 0; x < static_cast<int>(flags[n].size()); ++x) {
      const auto& f = flags[n][x];
      const auto g = on_flag(f);
      const int y = flag_index[m].at(g);
      const FlagGroup& src = group_of(f);
      const FlagGroup& tgt = group_of(g);
      objects.push_back(y);
      images.emplace_back();
      for (const Matrix& a : src.elements) images.back().push_back({y, y, tgt.index.at(entries(on_matrix(f, a)))});
      connecting.push_back({y, y, 0});
    }
    return GroupoidFunctor(levels[n], levels[m], std::move(objects), std::move(images), std::move(connecting));
  };

  std::vector<std::vector<GroupoidFunctor>> faces(n_max + 1), degeneracies(n_max);
  for (int n = 1; n <= n_max; ++n)
    for (int i = 0; i <= n; ++i) {
      auto on_flag = [i](const std::vector<int>& f) {
        std::vector<int> g;
        for (int a = 0; a < static_cast<int>(f.size()); ++a)
          if (a != i) g.push_back(i == 0 ? f[a] - f[1] : f[a]);
        return g;
      };
      auto on_matrix = [i, n](const std::vector<int>& f, const Matrix& a) {
        if (i == 0) return square_block(a, f[1], f[n] - f[1]);
        if (i == n) return square_block(a, 0, f[n - 1]);
        return a;
      };
      faces[n].push_back(make_functor(n, n - 1, on_flag, on_matrix));
    }
  for (int n = 0; n < n_max; ++n)
    for (int i = 0; i <= n; ++i) {
      auto on_flag = [i](const std::vector<int>& f) {
        std::vector<int> g = f;
        g.insert(g.begin() + i, f[i]);
        return g;
      };
      auto on_matrix = [](const std::vector<int>&, const Matrix& a) { return a; };
      degeneracies[n].push_back(make_functor(n, n + 1, on_flag, on_matrix));
    }
  return SimplicialObject<Groupoid>(std::move(levels), std::move(faces), std::move(degeneracies));
}

// ------------------------------------------------------------------ json

nlohmann::json to_json(const ChainComplex& C) {
  nlohmann::json d = nlohmann::json::array();
  for (int k = 1; k <= C.top(); ++k) d.push_back(to_strings(C.d[k]));
  return {{"field", C.field.name()}, {"dims", C.dims}, {"differentials", d}};
}

ChainComplex chain_complex_from_json(const nlohmann::json& j) {
  try {
    const Field field = j.contains("field") ? Field::parse(j.at("field").get<std::string>()) : Field::rationals();
    ChainComplex C = ChainComplex::from_dims(j.at("dims").get<std::vector<int>>(), field);
    const auto& d = j.at("differentials");
    if (static_cast<int>(d.size()) != C.top()) throw Error(ErrorCode::BadInput, "one differential per positive degree is needed");
    for (int k = 1; k <= C.top(); ++k) C.d[k] = vect_map_from_json(d[k - 1], C.dims[k], C.dims[k - 1], field).matrix;
    C.validate();
    return C;
  } catch (const nlohmann::json::exception& e) {
    throw Error(ErrorCode::BadInput, e.what());
  }
}

nlohmann::json to_json(const FiniteCategory& C) {
  return {{"objects", C.objects}, {"source", C.source}, {"target", C.target}, {"identity", C.identity}, {"compose", C.compose}};
}

FiniteCategory category_from_json(const nlohmann::json& j) {
  try {
    FiniteCategory C;
    C.objects = j.at("objects").get<int>();
    C.source = j.at("source").get<std::vector<int>>();
    C.target = j.at("target").get<std::vector<int>>();
    C.identity = j.at("identity").get<std::vector<int>>();
    C.compose = j.at("compose").get<std::vector<std::vector<int>>>();
    C.validate();
    return C;
  } catch (const nlohmann::json::exception& e) {
    throw Error(ErrorCode::BadInput, e.what());
  }
}

nlohmann::json to_json(const PartialMonoid& M) {
  nlohmann::json j{{"unit", M.unit}, {"product", M.product}};
  if (!M.names.empty()) j["names"] = M.names;
  return j;
}

PartialMonoid partial_monoid_from_json(const nlohmann::json& j) {
  try {
    PartialMonoid M;
    M.unit = j.value("unit", 0);
    M.product = j.at("product").get<std::vector<std::vector<int>>>();
    if (j.contains("names")) M.names = j.at("names").get<std::vector<std::string>>();
    M.validate();
    return M;
  } catch (const nlohmann::json::exception& e) {
    throw Error(ErrorCode::BadInput, e.what());
  }
}

}  // namespace segalis
