#pragma once

// JSON forms of the library types. Complex numbers are [re, im] pairs and
// matrices are {"rows", "cols", "data"} in row-major order.

#include <filesystem>
#include <string>

#include "json.hpp"
#include "lqhv/bounds.hpp"
#include "lqhv/lqhv.hpp"
#include "lqhv/norms_positivity.hpp"
#include "lqhv/scenarios.hpp"
#include "lqhv/source_ops.hpp"

namespace lqhv::io {

using Json = nlohmann::ordered_json;

Json to_json(const ComplexMatrix& m);
Json to_json(const FactorShape& s);
Json to_json(const QuantumState& s);
Json to_json(const OutcomeSpace& o);
Json to_json(const PovmFamily& p);
Json to_json(const Scenario& sc);
Json to_json(const BellFunctional& f);
Json to_json(const SignedMeasure& mu);
Json to_json(const SourceOperator& t);
Json to_json(const BoundReport& r);
Json to_json(const CoveringBracket& b);
Json to_json(const PositivityVerdict& v);

// All readers throw Error(parse) naming the offending key.
ComplexMatrix matrix_from_json(const Json& j);
FactorShape shape_from_json(const Json& j);
QuantumState state_from_json(const Json& j);
OutcomeSpace outcomes_from_json(const Json& j);
PovmFamily povms_from_json(const Json& j);
Scenario scenario_from_json(const Json& j);
BellFunctional functional_from_json(const Json& j);
SignedMeasure measure_from_json(const Json& j);
SourceOperator source_operator_from_json(const Json& j);

// Error(io) when the file cannot be opened, Error(parse) with the byte
// offset when it is not JSON.
Json read_json_file(const std::filesystem::path& path);
Json parse_json(const std::string& text);
void write_text_file(const std::filesystem::path& path, const std::string& text);
std::string dump(const Json& j);

}  // namespace lqhv::io
