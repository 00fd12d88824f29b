#pragma once

#include <string>

#include <nlohmann/json.hpp>

namespace fracdim {

using Json = nlohmann::ordered_json;

// Shortest "%.17g" rendering; non-finite values become "null".
std::string format_double(double v);

// Serializes with every floating-point number rendered at 17 significant
// digits. Key order is insertion order, so equal documents give equal bytes.
std::string dump_json(const Json& j, int indent = -1);

}  // namespace fracdim
