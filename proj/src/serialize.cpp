#include "segalis/serialize.hpp"

#include <nlohmann/json.hpp>

namespace segalis {

namespace {

nlohmann::json object_json(const FinSetObj& o) { return o.size; }
nlohmann::json object_json(const VectObj& o) { return o.dim; }
nlohmann::json object_json(const GroupoidObj& o) { return to_json(o); }

template <Backend B>
nlohmann::json encode(const SimplicialObject<B>& X) {
  const int N = X.truncation();
  nlohmann::json objects = nlohmann::json::array(), faces = nlohmann::json::array(),
                 degeneracies = nlohmann::json::array();
  for (int n = 0; n <= N; ++n) {
    objects.push_back(object_json(X.level(n)));
    nlohmann::json f = nlohmann::json::array();
    for (int i = 0; n > 0 && i <= n; ++i) f.push_back(to_json(X.face(n, i)));
    faces.push_back(std::move(f));
    if (n < N) {
      nlohmann::json s = nlohmann::json::array();
      for (int i = 0; i <= n; ++i) s.push_back(to_json(X.degeneracy(n, i)));
      degeneracies.push_back(std::move(s));
    }
  }
  nlohmann::json j = {{"backend", std::string(B::tag)}};
  if constexpr (std::is_same_v<B, Vect>) j["field"] = X.level(0).field.name();
  j["truncation"] = N;
  j["objects"] = std::move(objects);
  j["faces"] = std::move(faces);
  j["degeneracies"] = std::move(degeneracies);
  return j;
}

const nlohmann::json& array_of(const nlohmann::json& j, const char* key, std::size_t size) {
  const auto& a = j.at(key);
  if (!a.is_array() || a.size() != size)
    throw Error(ErrorCode::BadInput, std::string("'") + key + "' must be an array of length " + std::to_string(size));
  return a;
}

// read_map(entry, source, target) builds one morphism
template <Backend B, class ReadObject, class ReadMap>
SimplicialObject<B> decode(const nlohmann::json& j, ReadObject read_object, ReadMap read_map) {
  const int N = j.at("truncation").get<int>();
  if (N < 0) throw Error(ErrorCode::BadInput, "truncation must be nonnegative");
  const auto& objs = array_of(j, "objects", N + 1);
  const auto& fj = array_of(j, "faces", N + 1);
  const auto& sj = array_of(j, "degeneracies", N);
  std::vector<typename B::Object> levels;
  for (const auto& o : objs) levels.push_back(read_object(o));
  std::vector<std::vector<typename B::Morphism>> faces(N + 1), degeneracies(N);
  for (int n = 0; n <= N; ++n) {
    if (!fj[n].is_array() || static_cast<int>(fj[n].size()) != (n == 0 ? 0 : n + 1))
      throw Error(ErrorCode::BadInput, "level " + std::to_string(n) + " has the wrong number of faces");
    for (const auto& f : fj[n]) faces[n].push_back(read_map(f, levels[n], levels[n - 1]));
    if (n == N) continue;
    if (!sj[n].is_array() || static_cast<int>(sj[n].size()) != n + 1)
      throw Error(ErrorCode::BadInput, "level " + std::to_string(n) + " has the wrong number of degeneracies");
    for (const auto& s : sj[n]) degeneracies[n].push_back(read_map(s, levels[n], levels[n + 1]));
  }
  return SimplicialObject<B>(std::move(levels), std::move(faces), std::move(degeneracies));
}

}  // namespace

nlohmann::json to_json(const SimplicialObject<FinSet>& X) { return encode(X); }
nlohmann::json to_json(const SimplicialObject<Vect>& X) { return encode(X); }
nlohmann::json to_json(const SimplicialObject<Groupoid>& X) { return encode(X); }

nlohmann::json to_json(const AnySimplicialObject& X) {
  return std::visit([](const auto& x) { return to_json(x); }, X);
}

AnySimplicialObject simplicial_object_from_json(const nlohmann::json& j) {
  try {
    const auto tag = j.at("backend").get<std::string>();
    if (tag == FinSet::tag) {
      return decode<FinSet>(
          j, [](const nlohmann::json& o) { return FinSetObj{o.get<int>()}; },
          [](const nlohmann::json& m, const FinSetObj& s, const FinSetObj& t) {
            return finset_map_from_json(m, s.size, t.size);
          });
    }
    if (tag == Vect::tag) {
      const Field field = j.contains("field") ? Field::parse(j.at("field").get<std::string>()) : Field::rationals();
      return decode<Vect>(
          j, [&](const nlohmann::json& o) { return VectObj{o.get<int>(), field}; },
          [&](const nlohmann::json& m, const VectObj& s, const VectObj& t) {
            return vect_map_from_json(m, s.dim, t.dim, field);
          });
    }
    if (tag == Groupoid::tag) {
      return decode<Groupoid>(j, [](const nlohmann::json& o) { return groupoid_from_json(o); },
                              [](const nlohmann::json& m, const GroupoidObj& s, const GroupoidObj& t) {
                                return groupoid_functor_from_json(m, s, t);
                              });
    }
    throw Error(ErrorCode::BadInput, "unknown backend '" + tag + "'");
  } catch (const nlohmann::json::exception& e) {
    throw Error(ErrorCode::BadInput, e.what());
  }
}

int truncation_of(const AnySimplicialObject& X) {
  return std::visit([](const auto& x) { return x.truncation(); }, X);
}

std::string_view backend_tag(const AnySimplicialObject& X) {
  static constexpr std::string_view tags[] = {FinSet::tag, Vect::tag, Groupoid::tag};
  return tags[X.index()];
}

}  // namespace segalis
