#pragma once

#include <string>
#include <vector>

#include <json.hpp>

#include "staralg/cmat.hpp"

namespace staralg {

using Json = nlohmann::ordered_json;

// Matrix wire form: {"rows": N, "cols": M, "data": [[re, im], ...]} row-major.
// Numbers are emitted with 17 significant digits via format_number below.
Json cmat_to_json(const CMat& m);
CMat cmat_from_json(const Json& j);

// %.17g rendering used for every floating point number in reports, so that
// identical inputs yield byte-identical output.
std::string format_number(double x);

// Serialize a Json tree, rendering doubles through format_number.
std::string dump_deterministic(const Json& j, int indent = -1);

// Function table wire form: [{"at": [re, im], "val": [re, im]}, ...]
using FnTable = std::vector<std::pair<Complex, Complex>>;
Json fn_table_to_json(const FnTable& table);
FnTable fn_table_from_json(const Json& j);

} // namespace staralg
