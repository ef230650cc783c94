#include "mffu/cones.hpp"

#include <algorithm>
#include <bit>

namespace mffu {

std::string_view to_string(SiteKind kind) {
  switch (kind) {
    case SiteKind::Stem: return "stem";
    case SiteKind::FfrTerminal: return "ffr_terminal";
    case SiteKind::RegionRoot: return "region_root";
  }
  return "?";
}

std::string_view to_string(SiteMode mode) {
  return mode == SiteMode::Collapsed ? "collapsed" : "all_nets";
}

FaninCone extract_fanin_cone(const Circuit& c, FfId ff) {
  FaninCone cone{ff, {}, {}};
  std::vector<bool> seen(c.nets().size(), false);
  std::vector<NetId> stack{c.flipflop(ff).d};
  seen[stack.back().index()] = true;
  while (!stack.empty()) {
    const auto id = stack.back();
    stack.pop_back();
    const auto& driver = c.net(id).driver;
    switch (driver.kind) {
      case Driver::Kind::FlipFlop:
        cone.support.push_back(id);
        break;
      case Driver::Kind::Input:
        cone.member_nets.push_back(id);
        cone.support.push_back(id);
        break;
      case Driver::Kind::Gate:
        cone.member_nets.push_back(id);
        for (auto in : c.gate(GateId{driver.index}).inputs) {
          if (!seen[in.index()]) {
            seen[in.index()] = true;
            stack.push_back(in);
          }
        }
        break;
    }
  }
  std::sort(cone.member_nets.begin(), cone.member_nets.end());
  std::sort(cone.support.begin(), cone.support.end());
  return cone;
}

std::vector<FaninCone> extract_all_cones(const Circuit& c) {
  std::vector<FaninCone> cones;
  cones.reserve(c.flipflops().size());
  for (const auto& ff : c.flipflops()) cones.push_back(extract_fanin_cone(c, ff.id));
  return cones;
}

FfSet static_ff_set(const Circuit& c, NetId net) {
  const auto& start = c.net(net);  // throws std::out_of_range on unknown ids
  std::vector<FfId> ffs;
  std::vector<bool> seen(c.nets().size(), false);
  std::vector<NetId> stack{start.id};
  seen[net.index()] = true;
  while (!stack.empty()) {
    const auto id = stack.back();
    stack.pop_back();
    for (const auto& sink : c.net(id).fanouts) {
      if (sink.kind == Sink::Kind::FlipFlop) {
        ffs.push_back(FfId{sink.index});
      } else if (sink.kind == Sink::Kind::Gate) {
        const auto out = c.gate(GateId{sink.index}).output;
        if (!seen[out.index()]) {
          seen[out.index()] = true;
          stack.push_back(out);
        }
      }
    }
  }
  return FfSet(std::move(ffs));
}

ReachIndex::ReachIndex(const Circuit& c)
    : words_((c.flipflops().size() + 63) / 64), bits_(c.nets().size() * words_, 0) {
  auto row = [this](NetId id) { return bits_.begin() + static_cast<std::ptrdiff_t>(id.index() * words_); };
  auto absorb = [&](NetId id) {
    for (const auto& sink : c.net(id).fanouts) {
      if (sink.kind == Sink::Kind::FlipFlop) {
        row(id)[sink.index / 64] |= std::uint64_t{1} << (sink.index % 64);
      } else if (sink.kind == Sink::Kind::Gate) {
        const auto src = row(c.gate(GateId{sink.index}).output);
        auto dst = row(id);
        for (std::size_t w = 0; w < words_; ++w) dst[w] |= src[w];
      }
    }
  };
  const auto order = c.topological_order();
  for (auto it = order.rbegin(); it != order.rend(); ++it) absorb(c.gate(*it).output);
  for (const auto& net : c.nets()) {
    if (net.driver.kind != Driver::Kind::Gate) absorb(net.id);
  }
}

FfSet ReachIndex::reach(NetId net) const {
  std::vector<FfId> ffs;
  for (std::size_t w = 0; w < words_; ++w) {
    auto word = bits_.at(net.index() * words_ + w);
    while (word != 0) {
      const auto bit = static_cast<std::uint32_t>(std::countr_zero(word));
      ffs.push_back(FfId{static_cast<std::uint32_t>(w * 64) + bit});
      word &= word - 1;
    }
  }
  return FfSet(std::move(ffs));
}

std::vector<FaultSite> enumerate_fault_sites(const Circuit& c, SiteMode mode) {
  const ReachIndex reach(c);
  const auto n = c.nets().size();

  std::vector<bool> is_d_net(n, false);
  for (const auto& ff : c.flipflops()) is_d_net[ff.d.index()] = true;

  auto eligible = [&](NetId id) { return c.is_combinational(id) && !c.is_excluded(id); };
  // The single gate a fanout-1 net feeds, if any.
  auto sole_gate_output = [&](NetId id) -> std::optional<NetId> {
    for (const auto& sink : c.net(id).fanouts) {
      if (sink.kind == Sink::Kind::Gate) return c.gate(GateId{sink.index}).output;
    }
    return std::nullopt;
  };
  auto classify = [&](NetId id) {
    if (c.fanout_count(id) >= 2) return SiteKind::Stem;
    if (is_d_net[id.index()]) return SiteKind::FfrTerminal;
    return SiteKind::RegionRoot;
  };
  auto is_collapsed_site = [&](NetId id) {
    if (c.fanout_count(id) != 1 || is_d_net[id.index()]) return true;
    const auto next = sole_gate_output(id);
    return !next || c.is_excluded(*next);
  };

  std::vector<FaultSite> sites;
  std::vector<std::optional<std::size_t>> site_of(n);
  for (const auto& net : c.nets()) {
    if (!eligible(net.id)) continue;
    if (mode == SiteMode::Collapsed && !is_collapsed_site(net.id)) continue;
    FaultSite site{net.id, classify(net.id), {}, reach.reach(net.id), false};
    site.po_only = site.static_ffs.empty();
    site_of[net.id.index()] = sites.size();
    sites.push_back(std::move(site));
  }

  if (mode == SiteMode::AllNets) {
    for (auto& site : sites) site.represented_nets = {site.net};
    return sites;
  }

  // Walk each region-internal net forward along its single fanout until a
  // site is hit. Gate outputs are visited in reverse topological order so the
  // successor is always resolved first; inputs go last.
  std::vector<std::optional<std::size_t>> owner(n);
  auto resolve = [&](NetId id) {
    if (!eligible(id)) return;
    if (site_of[id.index()]) {
      owner[id.index()] = site_of[id.index()];
    } else {
      owner[id.index()] = owner[sole_gate_output(id)->index()];
    }
  };
  const auto order = c.topological_order();
  for (auto it = order.rbegin(); it != order.rend(); ++it) resolve(c.gate(*it).output);
  for (auto in : c.primary_inputs()) resolve(in);

  for (const auto& net : c.nets()) {
    if (const auto& o = owner[net.id.index()]) sites[*o].represented_nets.push_back(net.id);
  }
  return sites;
}

}  // namespace mffu
