#pragma once

#include <variant>

#include <nlohmann/json_fwd.hpp>

#include "segalis/backends.hpp"
#include "segalis/simplicial.hpp"

namespace segalis {

using AnySimplicialObject =
    std::variant<SimplicialObject<FinSet>, SimplicialObject<Vect>, SimplicialObject<Groupoid>>;

/// Layout: {"backend": "finset"|"vect"|"groupoid", "field" (vect only),
/// "truncation": N, "objects": [...], "faces": [[...]...],
/// "degeneracies": [[...]...]}. faces[n] lists d_0..d_n on X_n, so faces[0]
/// is empty; degeneracies[n] lists s_0..s_n for n < N. Finite sets and vector
/// spaces are stored as sizes and dimensions, maps as image lists and
/// matrices (entries as strings).
nlohmann::json to_json(const SimplicialObject<FinSet>& X);
nlohmann::json to_json(const SimplicialObject<Vect>& X);
nlohmann::json to_json(const SimplicialObject<Groupoid>& X);
nlohmann::json to_json(const AnySimplicialObject& X);

/// Throws BadInput on malformed input and NotSimplicial if the identities fail.
AnySimplicialObject simplicial_object_from_json(const nlohmann::json& j);

int truncation_of(const AnySimplicialObject& X);
std::string_view backend_tag(const AnySimplicialObject& X);

}  // namespace segalis
