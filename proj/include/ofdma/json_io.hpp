#pragma once

#include <string>

#include <json.hpp>

#include "ofdma/core.hpp"
#include "ofdma/reductions.hpp"

namespace ofdma {

/// Instance schema (row-major, user-major):
/// {"K":int, "N":int, "direct_gain":[[..]], "noise":[[..]],
///  "subcarrier_budget":[[..]], "user_budget":[..]|null, "rate_target":[..]|null}
nlohmann::json instance_to_json(const OfdmaInstance& inst);
OfdmaInstance instance_from_json(const nlohmann::json& j);

/// 3DM schema: {"size":int, "triples":[[x,y,z],...]} with 1-based components.
nlohmann::json tdm_to_json(const ThreeDMInstance& tdm);
ThreeDMInstance tdm_from_json(const nlohmann::json& j);

/// Sidecar emitted next to reduced instances: roles, threshold, and the
/// source 3DM instance, plus the subcarrier ordering convention.
nlohmann::json bundle_sidecar_json(const ReducedInstanceBundle& bundle,
                                   const ThreeDMInstance& source,
                                   const std::string& variant);

void write_json_file(const std::string& path, const nlohmann::json& j);
nlohmann::json read_json_file(const std::string& path);

}  // namespace ofdma
