#pragma once

#include <optional>
#include <stdexcept>
#include <unordered_map>
#include <vector>

#include "mffu/cones.hpp"
#include "mffu/netlist.hpp"

namespace mffu {

/// Values of the free nets: primary inputs and flip-flop q nets.
using Assignment = std::unordered_map<NetId, bool>;

/// Per-net two-valued simulation result, indexed by net id.
using NetValues = std::vector<bool>;

/// Two-valued evaluation of the whole combinational logic. If `forced_flip`
/// is set, that net is complemented before its fanout is evaluated.
/// Throws std::invalid_argument when a primary input or q net is missing
/// from `assignment`.
[[nodiscard]] NetValues simulate(const Circuit& c, const Assignment& assignment,
                                 std::optional<NetId> forced_flip = std::nullopt);

class SupportTooLarge : public std::length_error {
 public:
  using std::length_error::length_error;
};

/// Free nets the site's observed flip-flops depend on, sorted.
[[nodiscard]] std::vector<NetId> observed_support(const Circuit& c, const FaultSite& site);

/// Ground truth by brute force: simulates the good and the flipped circuit
/// for every assignment of the observed support and collects the distinct
/// non-empty sets of differing flip-flop inputs, sorted. Throws
/// SupportTooLarge when the support exceeds `support_limit`.
[[nodiscard]] std::vector<FfSet> exhaustive_patterns(const Circuit& c, const FaultSite& site,
                                                     std::size_t support_limit = 20);

}  // namespace mffu
