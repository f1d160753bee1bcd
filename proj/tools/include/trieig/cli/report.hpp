#pragma once

// JSON encodings shared by the commands. Values that may leave the double
// range are strings "+s*2^e" (or exact "n/d") next to a "log2" number.

#include <string>

#include "json.hpp"

#include "trieig/extscalar.hpp"
#include "trieig/matgen.hpp"
#include "trieig/rational.hpp"

namespace trieig::cli {

using Json = nlohmann::ordered_json;

/// {"value": "+s*2^e", "log2": x}; log2 is null for zero.
Json ext_json(const ExtScalar& v);

/// {"value": "n/d", "log2": x}.
Json exact_json(const Rational& v);

/// A plain number when v fits a double, ext_json otherwise.
Json number_or_ext(const ExtScalar& v);

/// m, a, b, c, gamma (exact text or number), gamma_kind, orientation.
Json params_json(const MatrixParams& p);

/// Pretty-printed JSON, two-space indent, floats with 17 significant digits.
std::string dump_json(const Json& j);

const char* to_string(Shape s);
using trieig::to_string;

}  // namespace trieig::cli
