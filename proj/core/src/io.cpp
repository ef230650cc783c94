#include "mffu/io.hpp"

#include <algorithm>
#include <cstdio>
#include <map>
#include <sstream>

namespace mffu::io {

namespace {

NetId net_by_name(const Circuit& c, const std::string& name) {
  if (auto id = c.find_net(name)) return *id;
  throw ArtifactError("artifact names unknown net '" + name + "'");
}

FfId ff_by_name(const Circuit& c, const std::string& name) {
  if (auto id = c.find_flipflop(name)) return *id;
  throw ArtifactError("artifact names unknown flip-flop '" + name + "'");
}

json ff_names(const Circuit& c, const FfSet& set) {
  json out = json::array();
  for (auto ff : set.members()) out.push_back(c.flipflop(ff).name);
  return out;
}

FfSet ffs_from_names(const Circuit& c, const json& j) {
  std::vector<FfId> ffs;
  for (const auto& name : j) ffs.push_back(ff_by_name(c, name.get<std::string>()));
  return FfSet(std::move(ffs));
}

json net_names(const Circuit& c, std::span<const NetId> nets) {
  json out = json::array();
  for (auto n : nets) out.push_back(c.net(n).name);
  return out;
}

SiteKind site_kind_from(const std::string& s) {
  for (auto k : {SiteKind::Stem, SiteKind::FfrTerminal, SiteKind::RegionRoot}) {
    if (to_string(k) == s) return k;
  }
  throw ArtifactError("unknown site kind '" + s + "'");
}

std::string csv_join(const Circuit& c, std::span<const FfId> ffs) {
  std::string out;
  for (auto ff : ffs) {
    if (!out.empty()) out += ' ';
    out += c.flipflop(ff).name;
  }
  return out;
}

std::string format_double(double v) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.6g", v);
  return buf;
}

}  // namespace

json circuit_to_json(const Circuit& c) {
  json j;
  j["nets"] = json::array();
  for (const auto& net : c.nets()) j["nets"].push_back({{"id", net.id.value}, {"name", net.name}});
  j["gates"] = json::array();
  for (const auto& gate : c.gates()) {
    json inputs = json::array();
    for (auto in : gate.inputs) inputs.push_back(in.value);
    j["gates"].push_back({{"id", gate.id.value},
                          {"kind", std::string(to_string(gate.kind))},
                          {"inputs", inputs},
                          {"output", gate.output.value}});
  }
  j["ffs"] = json::array();
  for (const auto& ff : c.flipflops()) {
    j["ffs"].push_back({{"id", ff.id.value}, {"name", ff.name}, {"d", ff.d.value}, {"q", ff.q.value}});
  }
  auto ids = [](std::span<const NetId> nets) {
    json out = json::array();
    for (auto n : nets) out.push_back(n.value);
    return out;
  };
  j["inputs"] = ids(c.primary_inputs());
  j["outputs"] = ids(c.primary_outputs());
  j["excluded"] = ids(c.excluded_nets());
  return j;
}

Circuit circuit_from_json(const json& j) {
  try {
    std::vector<std::string> names;
    for (const auto& net : j.at("nets")) {
      const auto id = net.at("id").get<std::size_t>();
      if (id != names.size()) throw ArtifactError("circuit nets must be listed in id order");
      names.push_back(net.at("name").get<std::string>());
    }
    auto name_of = [&](const json& ref) -> const std::string& {
      const auto id = ref.get<std::size_t>();
      if (id >= names.size()) throw ArtifactError("net id " + std::to_string(id) + " out of range");
      return names[id];
    };
    CircuitBuilder builder;
    for (const auto& name : names) builder.declare(name);
    for (const auto& in : j.at("inputs")) builder.add_input(name_of(in));
    for (const auto& ff : j.at("ffs")) builder.add_flipflop(name_of(ff.at("q")), name_of(ff.at("d")));
    for (const auto& gate : j.at("gates")) {
      const auto kind = gate_kind_from_string(gate.at("kind").get<std::string>());
      if (!kind) throw ArtifactError("unknown gate kind " + gate.at("kind").dump());
      std::vector<std::string> inputs;
      for (const auto& in : gate.at("inputs")) inputs.push_back(name_of(in));
      builder.add_gate(*kind, name_of(gate.at("output")), inputs);
    }
    for (const auto& out : j.at("outputs")) builder.add_output(name_of(out));
    for (const auto& ex : j.at("excluded")) builder.exclude(name_of(ex));
    return builder.build();
  } catch (const json::exception& e) {
    throw ArtifactError(std::string("malformed circuit JSON: ") + e.what());
  }
}

json cones_to_json(const Circuit& c, std::span<const FaninCone> cones) {
  json out = json::array();
  for (const auto& cone : cones) {
    out.push_back({{"ff_id", cone.ff.value},
                   {"ff", c.flipflop(cone.ff).name},
                   {"member_nets", net_names(c, cone.member_nets)},
                   {"support", net_names(c, cone.support)}});
  }
  return {{"cones", out}};
}

json sites_to_json(const Circuit& c, std::span<const FaultSite> sites, SiteMode mode) {
  json out = json::array();
  for (const auto& s : sites) {
    out.push_back({{"site_net", c.net(s.net).name},
                   {"net_id", s.net.value},
                   {"kind", std::string(to_string(s.kind))},
                   {"represented_nets", net_names(c, s.represented_nets)},
                   {"static_ffs", ff_names(c, s.static_ffs)},
                   {"po_only", s.po_only}});
  }
  return {{"mode", std::string(to_string(mode))}, {"sites", out}};
}

std::vector<FaultSite> sites_from_json(const Circuit& c, const json& j) {
  try {
    std::vector<FaultSite> sites;
    for (const auto& s : j.at("sites")) {
      FaultSite site;
      site.net = net_by_name(c, s.at("site_net").get<std::string>());
      site.kind = site_kind_from(s.at("kind").get<std::string>());
      for (const auto& n : s.at("represented_nets")) site.represented_nets.push_back(net_by_name(c, n));
      site.static_ffs = ffs_from_names(c, s.at("static_ffs"));
      site.po_only = s.at("po_only").get<bool>();
      sites.push_back(std::move(site));
    }
    return sites;
  } catch (const json::exception& e) {
    throw ArtifactError(std::string("malformed sites JSON: ") + e.what());
  }
}

json sets_to_json(const Circuit& c, const SetCollection& sets) {
  json unique = json::array();
  for (const auto& u : sets.unique_sets()) {
    unique.push_back({{"members", ff_names(c, u.set)},
                      {"multiplicity", u.set.multiplicity()},
                      {"sites", net_names(c, u.origins)}});
  }
  json raw = json::array();
  for (const auto& r : sets.raw_sets()) raw.push_back({{"site", c.net(r.site).name}, {"members", ff_names(c, r.set)}});
  json cones = json::array();
  for (const auto& row : sets.cone_view()) {
    cones.push_back({{"ff", c.flipflop(row.ff).name},
                     {"members", ff_names(c, row.set)},
                     {"multiplicity", row.set.multiplicity()}});
  }
  return {{"ff_count", sets.ff_count()},
          {"num_sets", sets.num_sets()},
          {"num_unique", sets.num_unique()},
          {"max_multiplicity", sets.max_multiplicity()},
          {"total_faults", fault_space_total(sets).str()},
          {"sets", unique},
          {"raw", raw},
          {"cones", cones}};
}

SetCollection sets_from_json(const Circuit& c, const json& j) {
  try {
    std::vector<RawSet> raw;
    for (const auto& r : j.at("raw")) {
      raw.push_back({net_by_name(c, r.at("site").get<std::string>()), ffs_from_names(c, r.at("members"))});
    }
    const auto ff_count = j.at("ff_count").get<std::size_t>();
    if (ff_count != c.flipflops().size()) throw ArtifactError("sets artifact belongs to a different circuit");
    return SetCollection(ff_count, std::move(raw));
  } catch (const json::exception& e) {
    throw ArtifactError(std::string("malformed sets JSON: ") + e.what());
  }
}

std::string sets_to_csv(const Circuit& c, const SetCollection& sets) {
  std::ostringstream out;
  out << "members,multiplicity,sites\n";
  for (const auto& u : sets.unique_sets()) {
    std::string sites;
    for (auto s : u.origins) sites += (sites.empty() ? "" : " ") + c.net(s).name;
    out << csv_join(c, u.set.members()) << ',' << u.set.multiplicity() << ',' << sites << '\n';
  }
  return out.str();
}

json patterns_to_json(const Circuit& c, std::span<const PatternResult> results, const OptimizedSets& optimized) {
  std::map<NetId, const SiteRepresentation*> reps;
  for (const auto& r : optimized.sites) reps[r.site] = &r;
  json sites = json::array();
  for (const auto& r : results) {
    auto sorted = r.patterns;
    std::sort(sorted.begin(), sorted.end());
    json patterns = json::array();
    for (const auto& p : sorted) patterns.push_back(ff_names(c, p));
    json entry{{"site", c.net(r.site).name},
               {"status", std::string(to_string(r.status))},
               {"overflow", r.status == PatternStatus::Overflow},
               {"unknown", r.status == PatternStatus::Unknown},
               {"static_ffs", ff_names(c, r.static_set)},
               {"patterns", patterns}};
    if (auto it = reps.find(r.site); it != reps.end()) {
      json chosen = json::array();
      for (const auto& s : it->second->sets) chosen.push_back(ff_names(c, s));
      entry["representation"] = std::string(to_string(it->second->kind));
      entry["sets"] = chosen;
    }
    sites.push_back(std::move(entry));
  }
  return {{"sites", sites}};
}

std::string margin_label(double margin) { return format_double(margin * 100.0) + "%"; }

json sfi_plans_to_json(std::span<const SfiPlan> plans) {
  json out = json::array();
  for (const auto& p : plans) {
    out.push_back({{"method", std::string(to_string(p.method))},
                   {"population", p.population.str()},
                   {"confidence", p.confidence},
                   {"t", p.t},
                   {"margin", p.margin},
                   {"p", p.p},
                   {"sample", p.sample.str()},
                   {"sample_sci", to_scientific(p.sample)}});
  }
  return out;
}

json report_to_json(const CampaignReport& report) {
  json methods = json::array();
  for (const auto& m : report.methods) {
    json sfi = json::object();
    for (const auto& p : report.plans) {
      if (p.method == m.method) sfi["n(" + margin_label(p.margin) + ")"] = p.sample.str();
    }
    methods.push_back({{"method", std::string(to_string(m.method))},
                       {"num_sets", m.num_sets},
                       {"num_superset", m.num_unique},
                       {"max_multiplicity", m.max_multiplicity},
                       {"total_faults", m.total_faults.str()},
                       {"total_faults_sci", to_scientific(m.total_faults)},
                       {"sfi", sfi}});
  }
  auto opt = [](const std::optional<double>& v) -> json { return v ? json(*v) : json(nullptr); };
  return {{"circuit",
           {{"num_ffs", report.stats.num_ffs},
            {"num_gates", report.stats.num_gates},
            {"num_pis", report.stats.num_pis},
            {"num_pos", report.stats.num_pos},
            {"num_nets", report.stats.num_nets}}},
          {"methods", methods},
          {"sfi_plans", sfi_plans_to_json(report.plans)},
          {"ratios",
           {{"static_over_propagated", opt(report.static_over_propagated)},
            {"random_over_propagated", opt(report.random_over_propagated)}}}};
}

std::string report_to_csv(const CampaignReport& report) {
  std::vector<double> margins;
  for (const auto& p : report.plans) {
    if (p.method == Method::Static) margins.push_back(p.margin);
  }
  std::ostringstream out;
  out << "method,num_sets,num_superset,max_multiplicity,total_faults,total_faults_sci";
  for (double m : margins) out << ",n(" << margin_label(m) << ")";
  out << '\n';
  for (const auto& m : report.methods) {
    out << to_string(m.method) << ',' << m.num_sets << ',' << m.num_unique << ',' << m.max_multiplicity << ','
        << m.total_faults.str() << ',' << to_scientific(m.total_faults);
    for (const auto& p : report.plans) {
      if (p.method == m.method) out << ',' << p.sample.str();
    }
    out << '\n';
  }
  return out.str();
}

}  // namespace mffu::io
