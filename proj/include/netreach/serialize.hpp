#pragma once

#include <string>
#include <string_view>
#include <vector>

#include <Eigen/Dense>
#include <nlohmann/json.hpp>

#include "netreach/model.hpp"

namespace netreach {

/// Network document layout:
///
///   {
///     "subsystems": [ {"id": 1, "role": "follower", "A": [[..]], "B": .., "C": ..}, ... ],
///     "gains": [ {"to": 1, "from": 4, "L": [[..]]}, ... ],
///     "base_input_mode": "independent" | "shared"      (optional)
///   }
///
/// Matrices are row-major nested arrays. Unknown keys (e.g. "comment") are
/// ignored. Throws ParseError for malformed JSON and SchemaError for
/// missing fields, ragged rows, unknown roles, or gain blocks whose target
/// is not a follower. Dimension checks are left to validate_network.
NetworkSpec parse_network_spec(std::string_view text);

/// Inverse of parse_network_spec; doubles round-trip exactly.
std::string serialize_network_spec(const NetworkSpec& spec, int indent = 2);

nlohmann::json network_to_json(const NetworkSpec& spec);
NetworkSpec network_from_json(const nlohmann::json& doc);

/// Profile document: {"followers": [{"n":1,"m":1,"p":1,"count":3}], "leaders": [...],
/// "base_input_mode": "...", "zero_leader_gains": false}. "count" defaults to 1.
DimensionProfile parse_profile(std::string_view text);
nlohmann::json profile_to_json(const DimensionProfile& profile);

nlohmann::json matrix_to_json(const Eigen::MatrixXd& m);
/// Ragged rows raise SchemaError naming `what`.
Eigen::MatrixXd matrix_from_json(const nlohmann::json& value, const std::string& what);

/// A flat JSON array of numbers.
Eigen::VectorXd parse_vector(std::string_view text);
/// JSON array of per-step vectors; returns one column per step.
Eigen::MatrixXd parse_sequence(std::string_view text, int width);

std::string read_file(const std::string& path);

}  // namespace netreach
