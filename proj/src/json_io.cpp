#include "ofdma/json_io.hpp"

#include <fstream>
#include <stdexcept>

namespace ofdma {

using nlohmann::json;

namespace {

Matrix matrix_from_json(const json& j, const char* name) {
  if (!j.is_array()) throw std::invalid_argument(std::string(name) + " must be an array of rows");
  Matrix m;
  for (const auto& row : j) {
    if (!row.is_array())
      throw std::invalid_argument(std::string(name) + " rows must be arrays of numbers");
    m.emplace_back(row.begin(), row.end());
  }
  return m;
}

std::optional<std::vector<double>> opt_vector_from_json(const json& j, const char* name) {
  if (j.is_null()) return std::nullopt;
  if (!j.is_array()) throw std::invalid_argument(std::string(name) + " must be an array or null");
  return std::vector<double>(j.begin(), j.end());
}

}  // namespace

json instance_to_json(const OfdmaInstance& inst) {
  json j;
  j["K"] = inst.num_users;
  j["N"] = inst.num_subcarriers;
  j["direct_gain"] = inst.direct_gain;
  j["noise"] = inst.noise;
  j["subcarrier_budget"] = inst.subcarrier_budget;
  j["user_budget"] = inst.user_budget ? json(*inst.user_budget) : json(nullptr);
  j["rate_target"] = inst.rate_target ? json(*inst.rate_target) : json(nullptr);
  return j;
}

OfdmaInstance instance_from_json(const json& j) {
  OfdmaInstance inst;
  try {
    inst.num_users = j.at("K").get<int>();
    inst.num_subcarriers = j.at("N").get<int>();
    inst.direct_gain = matrix_from_json(j.at("direct_gain"), "direct_gain");
    inst.noise = matrix_from_json(j.at("noise"), "noise");
    inst.subcarrier_budget = matrix_from_json(j.at("subcarrier_budget"), "subcarrier_budget");
    inst.user_budget = opt_vector_from_json(j.value("user_budget", json(nullptr)), "user_budget");
    inst.rate_target = opt_vector_from_json(j.value("rate_target", json(nullptr)), "rate_target");
  } catch (const json::exception& e) {
    throw std::invalid_argument(std::string("malformed instance JSON: ") + e.what());
  }
  return inst;
}

json tdm_to_json(const ThreeDMInstance& tdm) {
  json triples = json::array();
  for (const auto& t : tdm.triples) triples.push_back({t.x + 1, t.y + 1, t.z + 1});
  return json{{"size", tdm.size}, {"triples", triples}};
}

ThreeDMInstance tdm_from_json(const json& j) {
  ThreeDMInstance tdm;
  try {
    tdm.size = j.at("size").get<int>();
    for (const auto& t : j.at("triples")) {
      if (!t.is_array() || t.size() != 3)
        throw std::invalid_argument("each triple must be an [x, y, z] array");
      tdm.triples.push_back(
          {t[0].get<int>() - 1, t[1].get<int>() - 1, t[2].get<int>() - 1});
    }
  } catch (const json::exception& e) {
    throw std::invalid_argument(std::string("malformed 3DM JSON: ") + e.what());
  }
  return tdm;
}

json bundle_sidecar_json(const ReducedInstanceBundle& bundle, const ThreeDMInstance& source,
                         const std::string& variant) {
  auto role_names = [](const std::vector<NodeRole>& roles) {
    json arr = json::array();
    for (NodeRole r : roles) arr.push_back(r == NodeRole::TypeI ? "type1" : "type2");
    return arr;
  };
  json j;
  j["variant"] = variant;
  j["threshold"] = bundle.threshold ? json(*bundle.threshold) : json(nullptr);
  j["user_roles"] = role_names(bundle.user_roles);
  j["subcarrier_roles"] = role_names(bundle.subcarrier_roles);
  j["source_3dm"] = tdm_to_json(source);
  j["subcarrier_order"] =
      "Type-I subcarriers first (Y block then Z block, each in index order), "
      "then Type-II subcarriers";
  return j;
}

void write_json_file(const std::string& path, const json& j) {
  std::ofstream out(path);
  if (!out) throw std::runtime_error("cannot open " + path + " for writing");
  out << j.dump(2) << "\n";
}

json read_json_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw std::runtime_error("cannot open " + path);
  json j;
  try {
    in >> j;
  } catch (const json::exception& e) {
    throw std::invalid_argument(path + ": invalid JSON: " + e.what());
  }
  return j;
}

}  // namespace ofdma
