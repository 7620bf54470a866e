#pragma once

#include <cstdint>
#include <string>

#include <nlohmann/json.hpp>

#include "sppt/decomposition.hpp"
#include "sppt/states.hpp"

namespace sppt {

using Json = nlohmann::ordered_json;

// Matrices serialize as { "rows": r, "cols": c, "data": [[re,im], ...] }
// with row-major data; vectors as plain [[re,im], ...].
Json matrix_to_json(const Matrix& m);
Matrix matrix_from_json(const Json& j);
Json vector_to_json(const Vector& v);
Vector vector_from_json(const Json& j);

// State files: { "dims": [...], "matrix": [[re,im],...] row-major,
// "normalized": bool, "meta": {...} }.
Json state_to_json(const DensityMatrix& rho, const Json& meta = Json::object());
DensityMatrix state_from_json(const Json& j);

Json factor_to_json(const StructuredFactor& f);
StructuredFactor factor_from_json(const Json& j);

Json ground_truth_to_json(const GroundTruth& gt);

Json decomposition_to_json(const SeparableDecomposition& dec,
                           const DecompositionReport& report);

void write_json_file(const std::string& path, const Json& j);
Json read_json_file(const std::string& path); // throws std::runtime_error on parse failure

std::uint64_t fnv1a64(const std::string& bytes);
std::string digest_hex(const std::string& bytes);

} // namespace sppt
