#pragma once

#include <span>
#include <string>
#include <vector>

#include <nlohmann/json.hpp>

#include "mffu/campaign.hpp"
#include "mffu/cones.hpp"
#include "mffu/ffsets.hpp"
#include "mffu/netlist.hpp"
#include "mffu/propagation.hpp"

namespace mffu::io {

using nlohmann::json;

/// Thrown when a stage artifact does not match the circuit or the schema.
class ArtifactError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// {nets:[{id,name}], gates:[{id,kind,inputs,output}], ffs:[{id,name,d,q}],
//  inputs:[...], outputs:[...], excluded:[...]}; net references are ids.
[[nodiscard]] json circuit_to_json(const Circuit& c);
[[nodiscard]] Circuit circuit_from_json(const json& j);

[[nodiscard]] json cones_to_json(const Circuit& c, std::span<const FaninCone> cones);
[[nodiscard]] json sites_to_json(const Circuit& c, std::span<const FaultSite> sites, SiteMode mode);
[[nodiscard]] std::vector<FaultSite> sites_from_json(const Circuit& c, const json& j);

/// One row per unique set (members by flip-flop name, multiplicity,
/// originating sites), the raw per-site list and the per-cone view.
[[nodiscard]] json sets_to_json(const Circuit& c, const SetCollection& sets);
[[nodiscard]] SetCollection sets_from_json(const Circuit& c, const json& j);
[[nodiscard]] std::string sets_to_csv(const Circuit& c, const SetCollection& sets);

[[nodiscard]] json patterns_to_json(const Circuit& c, std::span<const PatternResult> results,
                                    const OptimizedSets& optimized);

[[nodiscard]] json report_to_json(const CampaignReport& report);
[[nodiscard]] std::string report_to_csv(const CampaignReport& report);
[[nodiscard]] json sfi_plans_to_json(std::span<const SfiPlan> plans);

/// "5%", "1%", "0.1%".
[[nodiscard]] std::string margin_label(double margin);

}  // namespace mffu::io
