#pragma once

#include <string>

#include "chainfix/multimap.hpp"
#include "chainfix/realization.hpp"
#include "chainfix/simplicial.hpp"
#include "json.hpp"

namespace chainfix {

// Insertion-ordered JSON keeps report bytes stable across runs.
using Json = nlohmann::ordered_json;

// Complexes, bodies and multivalued maps as JSON. All rationals travel as
// exact "p/q" strings, so every file round-trips without loss.
Json json_of_complex(const GeomComplex& K);
GeomComplex complex_of_json(const Json& j);

Json json_of_body(const ConvexBody& X);
ConvexBody body_of_json(const Json& j);

Json json_of_multimap(const MultiMap& F);
MultiMap multimap_of_json(const Json& j);

// canonical text form: two-space indent and one trailing newline
std::string json_text(const Json& j);

Json load_json(const std::string& path);
void save_json(const std::string& path, const Json& j);

}  // namespace chainfix
