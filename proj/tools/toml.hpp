#pragma once

#include <string_view>

#include <json.hpp>

namespace posefuse::toml {

// Parses a practical TOML subset into a JSON tree: [section] and
// [dotted.section] tables, key = value pairs with strings, integers, floats,
// booleans and single-line arrays of scalars, plus # comments. Table order is
// preserved. Throws Error{parse_error} with the offending line number.
nlohmann::ordered_json parse(std::string_view text);

}  // namespace posefuse::toml
