#include "mffu/oracle.hpp"

#include <algorithm>
#include <set>

namespace mffu {

namespace {

bool eval_gate(GateKind kind, const std::vector<NetId>& inputs, const NetValues& v) {
  auto all = [&] { return std::all_of(inputs.begin(), inputs.end(), [&](NetId n) { return v[n.index()]; }); };
  auto any = [&] { return std::any_of(inputs.begin(), inputs.end(), [&](NetId n) { return v[n.index()]; }); };
  auto parity = [&] {
    bool acc = false;
    for (auto n : inputs) acc ^= v[n.index()];
    return acc;
  };
  switch (kind) {
    case GateKind::And: return all();
    case GateKind::Nand: return !all();
    case GateKind::Or: return any();
    case GateKind::Nor: return !any();
    case GateKind::Xor: return parity();
    case GateKind::Xnor: return !parity();
    case GateKind::Not: return !v[inputs[0].index()];
    case GateKind::Buff: return v[inputs[0].index()];
  }
  return false;
}

}  // namespace

NetValues simulate(const Circuit& c, const Assignment& assignment, std::optional<NetId> forced_flip) {
  NetValues values(c.nets().size(), false);
  for (const auto& net : c.nets()) {
    if (net.driver.kind == Driver::Kind::Gate) continue;
    auto it = assignment.find(net.id);
    if (it == assignment.end()) {
      throw std::invalid_argument("assignment does not cover net '" + net.name + "'");
    }
    values[net.id.index()] = it->second;
  }
  if (forced_flip && c.net(*forced_flip).driver.kind != Driver::Kind::Gate) {
    values[forced_flip->index()] = !values[forced_flip->index()];
  }
  for (auto gid : c.topological_order()) {
    const auto& gate = c.gate(gid);
    bool out = eval_gate(gate.kind, gate.inputs, values);
    if (forced_flip && gate.output == *forced_flip) out = !out;
    values[gate.output.index()] = out;
  }
  return values;
}

std::vector<NetId> observed_support(const Circuit& c, const FaultSite& site) {
  std::set<NetId> support;
  for (auto ff : site.static_ffs.members()) {
    const auto cone = extract_fanin_cone(c, ff);
    support.insert(cone.support.begin(), cone.support.end());
  }
  return {support.begin(), support.end()};
}

std::vector<FfSet> exhaustive_patterns(const Circuit& c, const FaultSite& site, std::size_t support_limit) {
  const auto support = observed_support(c, site);
  if (support.size() > support_limit) {
    throw SupportTooLarge("site '" + c.net(site.net).name + "' has support " + std::to_string(support.size()) +
                          ", limit is " + std::to_string(support_limit));
  }
  Assignment assignment;
  for (const auto& net : c.nets()) {
    if (net.driver.kind != Driver::Kind::Gate) assignment[net.id] = false;
  }

  std::set<FfSet> found;
  const std::uint64_t total = std::uint64_t{1} << support.size();
  for (std::uint64_t bits = 0; bits < total; ++bits) {
    for (std::size_t i = 0; i < support.size(); ++i) assignment[support[i]] = (bits >> i) & 1u;
    const auto good = simulate(c, assignment);
    const auto bad = simulate(c, assignment, site.net);
    std::vector<FfId> upset;
    for (auto ff : site.static_ffs.members()) {
      const auto d = c.flipflop(ff).d.index();
      if (good[d] != bad[d]) upset.push_back(ff);
    }
    if (!upset.empty()) found.insert(FfSet(std::move(upset)));
  }
  return {found.begin(), found.end()};
}

}  // namespace mffu
