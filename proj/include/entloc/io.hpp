#pragma once

// JSON documents shared by the CLI:
//
//   state:    {"dims": [{"label": "A", "dim": 2, "role": "A"}, ...],
//              "kind": "pure" | "density",
//              "data": [[re, im], ...]}          (row-major for densities)
//   protocol: {"party": "a", "instrument": [[K_00, K_01, ...], [K_10, ...]],
//              "children": {"0": {...}, "1": {...}}}
//             Each K is a flat row-major [[re, im], ...] list; a node without
//             "party" (or a missing child) is a leaf.
//   roof config: {"restarts": n, "ensemble_size": m, "max_iters": k, "tol": t, "seed": s}

#include <filesystem>
#include <string>
#include <variant>

#include <json.hpp>

#include "entloc/collaborate.hpp"
#include "entloc/localize.hpp"
#include "entloc/measures.hpp"
#include "entloc/qcore.hpp"

namespace entloc {

using json = nlohmann::json;
using AnyState = std::variant<PureState, DensityOperator>;

json complex_list(const Vector& v);
/// Flat row-major list of a matrix.
json matrix_to_json(const Matrix& m);
Vector vector_from_json(const json& data);
/// Square matrix from a flat row-major list.
Matrix matrix_from_json(const json& data);

json dims_to_json(const DimSpec& dims);
DimSpec dims_from_json(const json& j);

json state_to_json(const PureState& psi);
json state_to_json(const DensityOperator& rho);
json state_to_json(const AnyState& state);
/// ParseError for malformed or invalid documents, DimensionError when the data
/// length does not match the declared dimensions.
AnyState state_from_json(const json& j);
DensityOperator as_density(const AnyState& state);

json protocol_to_json(const ProtocolTree& tree);
ProtocolTree protocol_from_json(const json& j);

json roof_config_to_json(const RoofConfig& config);
RoofConfig roof_config_from_json(const json& j);

json povm_to_json(const ProductPovm& povm);
json le_result_to_json(const LEResult& result);
json roof_result_to_json(const RoofResult& result);
json protocol_result_to_json(const ProtocolResult& result);

json read_json_file(const std::filesystem::path& path);
void write_json_file(const std::filesystem::path& path, const json& j);

}  // namespace entloc
