#pragma once

#include <vector>

#include "mffu/ff_set.hpp"
#include "mffu/netlist.hpp"

namespace mffu {

/// Backward combinational closure of one flip-flop's D input.
///
/// `member_nets` holds the combinational nets (gate outputs and primary
/// inputs) whose value can reach the D pin; `support` holds the free values
/// the cone is a function of (primary inputs and flip-flop q nets). Primary
/// inputs appear in both because they are fault sites and free variables at
/// once. Both lists are sorted by net id.
struct FaninCone {
  FfId ff;
  std::vector<NetId> member_nets;
  std::vector<NetId> support;
};

enum class SiteKind : std::uint8_t {
  Stem,          // fanout >= 2
  FfrTerminal,   // single-fanout net that is a flip-flop D input
  RegionRoot,    // region with no stem or D pin downstream (dangling, PO-only, or feeding an excluded net)
};

enum class SiteMode : std::uint8_t { Collapsed, AllNets };

[[nodiscard]] std::string_view to_string(SiteKind kind);
[[nodiscard]] std::string_view to_string(SiteMode mode);

/// One SET injection location. In collapsed mode a site stands for every
/// net of its fan-out-free region (`represented_nets`, which includes the
/// site net itself).
struct FaultSite {
  NetId net;
  SiteKind kind = SiteKind::Stem;
  std::vector<NetId> represented_nets;
  FfSet static_ffs;
  bool po_only = false;  // reaches no flip-flop; kept for coverage, skipped by set analysis
};

[[nodiscard]] FaninCone extract_fanin_cone(const Circuit& c, FfId ff);
[[nodiscard]] std::vector<FaninCone> extract_all_cones(const Circuit& c);

/// Flip-flops reachable forward from `net` without crossing a flip-flop.
/// Throws std::out_of_range for an unknown net id.
[[nodiscard]] FfSet static_ff_set(const Circuit& c, NetId net);

/// Forward flip-flop reachability for every net, computed in one reverse
/// topological sweep.
class ReachIndex {
 public:
  explicit ReachIndex(const Circuit& c);
  [[nodiscard]] FfSet reach(NetId net) const;

 private:
  std::size_t words_ = 0;
  std::vector<std::uint64_t> bits_;  // nets x words
};

/// Fault sites sorted by net id. Excluded nets never appear.
[[nodiscard]] std::vector<FaultSite> enumerate_fault_sites(const Circuit& c, SiteMode mode);

}  // namespace mffu
