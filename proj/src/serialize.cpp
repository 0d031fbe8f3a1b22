#include "netreach/serialize.hpp"

#include <fstream>
#include <sstream>

#include "netreach/errors.hpp"

namespace netreach {

using nlohmann::json;

namespace {

json parse_json(std::string_view text) {
  try {
    return json::parse(text.begin(), text.end());
  } catch (const json::parse_error& e) {
    throw ParseError(std::string("malformed document: ") + e.what());
  }
}

const json& require(const json& obj, const char* key, const std::string& where) {
  if (!obj.is_object() || !obj.contains(key)) {
    throw SchemaError(where + ": missing field '" + key + "'");
  }
  return obj.at(key);
}

int require_int(const json& obj, const char* key, const std::string& where) {
  const json& v = require(obj, key, where);
  if (!v.is_number_integer()) {
    throw SchemaError(where + ": field '" + key + "' must be an integer");
  }
  return v.get<int>();
}

Role parse_role(const json& v, const std::string& where) {
  if (v == "follower") return Role::Follower;
  if (v == "leader") return Role::Leader;
  throw SchemaError(where + ": role must be \"follower\" or \"leader\"");
}

BaseInputMode parse_mode(const json& v) {
  if (v == "independent") return BaseInputMode::Independent;
  if (v == "shared") return BaseInputMode::Shared;
  throw SchemaError("base_input_mode must be \"independent\" or \"shared\"");
}

}  // namespace

json matrix_to_json(const Eigen::MatrixXd& m) {
  json rows = json::array();
  for (Eigen::Index r = 0; r < m.rows(); ++r) {
    json row = json::array();
    for (Eigen::Index c = 0; c < m.cols(); ++c) row.push_back(m(r, c));
    rows.push_back(std::move(row));
  }
  return rows;
}

Eigen::MatrixXd matrix_from_json(const json& value, const std::string& what) {
  if (!value.is_array()) throw SchemaError(what + " must be an array of rows");
  const auto rows = static_cast<Eigen::Index>(value.size());
  if (rows == 0) return Eigen::MatrixXd(0, 0);
  if (!value[0].is_array()) throw SchemaError(what + " must be an array of rows");
  const auto cols = static_cast<Eigen::Index>(value[0].size());
  Eigen::MatrixXd m(rows, cols);
  for (Eigen::Index r = 0; r < rows; ++r) {
    const json& row = value[r];
    if (!row.is_array() || static_cast<Eigen::Index>(row.size()) != cols) {
      throw SchemaError(what + ": ragged rows (row " + std::to_string(r + 1) +
                        " differs from row 1)");
    }
    for (Eigen::Index c = 0; c < cols; ++c) {
      if (!row[c].is_number()) {
        throw SchemaError(what + ": non-numeric entry at (" + std::to_string(r + 1) +
                          ", " + std::to_string(c + 1) + ")");
      }
      m(r, c) = row[c].get<double>();
    }
  }
  return m;
}

NetworkSpec network_from_json(const json& doc) {
  if (!doc.is_object()) throw SchemaError("network document must be an object");
  NetworkSpec spec;

  const json& subs = require(doc, "subsystems", "network");
  if (!subs.is_array()) throw SchemaError("'subsystems' must be an array");
  for (std::size_t k = 0; k < subs.size(); ++k) {
    const std::string where = "subsystems[" + std::to_string(k) + "]";
    const json& s = subs[k];
    SubsystemModel model;
    model.id = require_int(s, "id", where);
    model.role = parse_role(require(s, "role", where), where);
    model.A = matrix_from_json(require(s, "A", where), where + ".A");
    model.B = matrix_from_json(require(s, "B", where), where + ".B");
    model.C = matrix_from_json(require(s, "C", where), where + ".C");
    spec.subsystems.push_back(std::move(model));
  }

  auto role_of = [&](int id) -> const Role* {
    for (const auto& s : spec.subsystems)
      if (s.id == id) return &s.role;
    return nullptr;
  };

  if (doc.contains("gains")) {
    const json& gains = doc.at("gains");
    if (!gains.is_array()) throw SchemaError("'gains' must be an array");
    for (std::size_t k = 0; k < gains.size(); ++k) {
      const std::string where = "gains[" + std::to_string(k) + "]";
      const json& g = gains[k];
      const int to = require_int(g, "to", where);
      const int from = require_int(g, "from", where);
      const Role* to_role = role_of(to);
      if (to_role == nullptr || role_of(from) == nullptr) {
        throw SchemaError(where + ": unknown subsystem id");
      }
      if (*to_role != Role::Follower) {
        throw SchemaError(where + ": block targets leader " + std::to_string(to) +
                          "; only followers receive gains");
      }
      if (spec.gains.find(to, from) != nullptr) {
        throw SchemaError(where + ": duplicate block (" + std::to_string(to) + ", " +
                          std::to_string(from) + ")");
      }
      spec.gains.set(to, from, matrix_from_json(require(g, "L", where), where + ".L"));
    }
  }

  if (doc.contains("base_input_mode")) {
    spec.base_input_mode = parse_mode(doc.at("base_input_mode"));
  }
  return spec;
}

NetworkSpec parse_network_spec(std::string_view text) {
  return network_from_json(parse_json(text));
}

json network_to_json(const NetworkSpec& spec) {
  json doc;
  json subs = json::array();
  for (const auto& s : spec.subsystems) {
    subs.push_back({{"id", s.id},
                    {"role", to_string(s.role)},
                    {"A", matrix_to_json(s.A)},
                    {"B", matrix_to_json(s.B)},
                    {"C", matrix_to_json(s.C)}});
  }
  json gains = json::array();
  for (const auto& [key, block] : spec.gains.blocks()) {
    gains.push_back({{"to", key.first}, {"from", key.second}, {"L", matrix_to_json(block)}});
  }
  doc["subsystems"] = std::move(subs);
  doc["gains"] = std::move(gains);
  doc["base_input_mode"] = to_string(spec.base_input_mode);
  return doc;
}

std::string serialize_network_spec(const NetworkSpec& spec, int indent) {
  return network_to_json(spec).dump(indent);
}

DimensionProfile parse_profile(std::string_view text) {
  const json doc = parse_json(text);
  if (!doc.is_object()) throw SchemaError("profile document must be an object");
  DimensionProfile profile;
  auto read_group = [&](const char* key, std::vector<SubsystemDims>& out) {
    const json& group = require(doc, key, "profile");
    if (!group.is_array()) throw SchemaError(std::string("'") + key + "' must be an array");
    for (std::size_t k = 0; k < group.size(); ++k) {
      const std::string where = std::string(key) + "[" + std::to_string(k) + "]";
      const json& e = group[k];
      if (!e.is_object()) throw SchemaError(where + " must be an object");
      SubsystemDims d;
      d.n = e.contains("n") ? require_int(e, "n", where) : 1;
      d.m = e.contains("m") ? require_int(e, "m", where) : 1;
      d.p = e.contains("p") ? require_int(e, "p", where) : 1;
      const int count = e.contains("count") ? require_int(e, "count", where) : 1;
      if (count < 0) throw SchemaError(where + ": count must be nonnegative");
      out.insert(out.end(), count, d);
    }
  };
  read_group("followers", profile.followers);
  read_group("leaders", profile.leaders);
  if (doc.contains("base_input_mode")) {
    profile.base_input_mode = parse_mode(doc.at("base_input_mode"));
  }
  if (doc.contains("zero_leader_gains")) {
    if (!doc.at("zero_leader_gains").is_boolean()) {
      throw SchemaError("'zero_leader_gains' must be a boolean");
    }
    profile.zero_leader_gains = doc.at("zero_leader_gains").get<bool>();
  }
  return profile;
}

json profile_to_json(const DimensionProfile& profile) {
  auto group = [](const std::vector<SubsystemDims>& dims) {
    json arr = json::array();
    for (const auto& d : dims) arr.push_back({{"n", d.n}, {"m", d.m}, {"p", d.p}});
    return arr;
  };
  return {{"followers", group(profile.followers)},
          {"leaders", group(profile.leaders)},
          {"base_input_mode", to_string(profile.base_input_mode)},
          {"zero_leader_gains", profile.zero_leader_gains}};
}

Eigen::VectorXd parse_vector(std::string_view text) {
  const json doc = parse_json(text);
  if (!doc.is_array()) throw SchemaError("vector document must be a JSON array");
  Eigen::VectorXd v(static_cast<Eigen::Index>(doc.size()));
  for (std::size_t k = 0; k < doc.size(); ++k) {
    if (!doc[k].is_number()) throw SchemaError("vector entries must be numbers");
    v(static_cast<Eigen::Index>(k)) = doc[k].get<double>();
  }
  return v;
}

Eigen::MatrixXd parse_sequence(std::string_view text, int width) {
  const json doc = parse_json(text);
  if (!doc.is_array()) throw SchemaError("sequence document must be a JSON array");
  Eigen::MatrixXd seq(width, static_cast<Eigen::Index>(doc.size()));
  for (std::size_t t = 0; t < doc.size(); ++t) {
    const json& step = doc[t];
    // Scalar inputs may be written without the inner brackets.
    if (width == 1 && step.is_number()) {
      seq(0, static_cast<Eigen::Index>(t)) = step.get<double>();
      continue;
    }
    if (!step.is_array() || static_cast<int>(step.size()) != width) {
      throw SchemaError("sequence step " + std::to_string(t) + " must have " +
                        std::to_string(width) + " entries");
    }
    for (int k = 0; k < width; ++k) {
      if (!step[k].is_number()) throw SchemaError("sequence entries must be numbers");
      seq(k, static_cast<Eigen::Index>(t)) = step[k].get<double>();
    }
  }
  return seq;
}

std::string read_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw ParseError("cannot open file '" + path + "'");
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

}  // namespace netreach
