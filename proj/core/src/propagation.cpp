#include "mffu/propagation.hpp"

#include <algorithm>
#include <atomic>
#include <chrono>
#include <map>
#include <stdexcept>
#include <thread>

#include "mffu/campaign.hpp"

namespace mffu {

namespace {

std::uint64_t mix_seed(std::uint64_t seed, std::uint64_t salt) {
  // splitmix64 finalizer
  std::uint64_t z = seed + 0x9e3779b97f4a7c15ULL * (salt + 1);
  z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
  z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
  return z ^ (z >> 31);
}

void encode_and(CnfFormula& f, int out, std::span<const int> in) {
  std::vector<int> big{out};
  for (int a : in) {
    f.add_clause({-out, a});
    big.push_back(-a);
  }
  f.add_clause(std::move(big));
}

void encode_or(CnfFormula& f, int out, std::span<const int> in) {
  std::vector<int> big{-out};
  for (int a : in) {
    f.add_clause({out, -a});
    big.push_back(a);
  }
  f.add_clause(std::move(big));
}

void encode_xor2(CnfFormula& f, int out, int a, int b) {
  f.add_clause({-out, a, b});
  f.add_clause({-out, -a, -b});
  f.add_clause({out, -a, b});
  f.add_clause({out, a, -b});
}

void encode_xor(CnfFormula& f, int out, std::span<const int> in) {
  int acc = in[0];
  for (std::size_t i = 1; i < in.size(); ++i) {
    const int target = i + 1 == in.size() ? out : f.new_var("xor chain");
    encode_xor2(f, target, acc, in[i]);
    acc = target;
  }
}

}  // namespace

void encode_gate(CnfFormula& formula, GateKind kind, int out, std::span<const int> inputs) {
  switch (kind) {
    case GateKind::And: encode_and(formula, out, inputs); break;
    case GateKind::Nand: encode_and(formula, -out, inputs); break;
    case GateKind::Or: encode_or(formula, out, inputs); break;
    case GateKind::Nor: encode_or(formula, -out, inputs); break;
    case GateKind::Xor: encode_xor(formula, out, inputs); break;
    case GateKind::Xnor: encode_xor(formula, -out, inputs); break;
    case GateKind::Buff:
      formula.add_clause({-out, inputs[0]});
      formula.add_clause({out, -inputs[0]});
      break;
    case GateKind::Not:
      formula.add_clause({-out, -inputs[0]});
      formula.add_clause({out, inputs[0]});
      break;
  }
}

MiterInstance build_miter(const Circuit& c, const FaultSite& site) {
  if (site.static_ffs.empty()) {
    throw std::invalid_argument("site '" + c.net(site.net).name + "' reaches no flip-flop");
  }
  MiterInstance m;
  m.site = site.net;
  m.observed.assign(site.static_ffs.members().begin(), site.static_ffs.members().end());

  std::vector<bool> in_region(c.nets().size(), false);
  std::vector<NetId> stack;
  for (auto ff : m.observed) {
    const auto d = c.flipflop(ff).d;
    if (!in_region[d.index()]) {
      in_region[d.index()] = true;
      stack.push_back(d);
    }
  }
  while (!stack.empty()) {
    const auto id = stack.back();
    stack.pop_back();
    const auto& driver = c.net(id).driver;
    if (driver.kind != Driver::Kind::Gate) continue;
    for (auto in : c.gate(GateId{driver.index}).inputs) {
      if (!in_region[in.index()]) {
        in_region[in.index()] = true;
        stack.push_back(in);
      }
    }
  }
  for (const auto& net : c.nets()) {
    if (in_region[net.id.index()] && net.driver.kind != Driver::Kind::Gate) m.support.push_back(net.id);
  }

  m.downstream.assign(c.nets().size(), false);
  m.downstream[site.net.index()] = true;
  for (auto gid : c.topological_order()) {
    const auto& gate = c.gate(gid);
    if (!in_region[gate.output.index()]) continue;
    m.good_gates.push_back(gid);
    if (gate.output == site.net) continue;
    const bool affected = std::any_of(gate.inputs.begin(), gate.inputs.end(),
                                      [&](NetId in) { return m.downstream[in.index()]; });
    if (affected) {
      m.downstream[gate.output.index()] = true;
      m.faulty_gates.push_back(gid);
    }
  }
  return m;
}

MiterCnf encode_cnf(const Circuit& c, const MiterInstance& m) {
  MiterCnf out;
  auto& f = out.formula;
  out.good_var.assign(c.nets().size(), 0);
  out.faulty_lit.assign(c.nets().size(), 0);

  for (auto s : m.support) out.good_var[s.index()] = f.new_var("good " + c.net(s).name);
  for (auto gid : m.good_gates) {
    const auto o = c.gate(gid).output;
    out.good_var[o.index()] = f.new_var("good " + c.net(o).name);
  }
  std::vector<int> lits;
  for (auto gid : m.good_gates) {
    const auto& gate = c.gate(gid);
    lits.clear();
    for (auto in : gate.inputs) lits.push_back(out.good_var[in.index()]);
    encode_gate(f, gate.kind, out.good_var[gate.output.index()], lits);
  }

  out.faulty_lit[m.site.index()] = -out.good_var[m.site.index()];
  for (auto gid : m.faulty_gates) {
    const auto& gate = c.gate(gid);
    const int o = f.new_var("faulty " + c.net(gate.output).name);
    out.faulty_lit[gate.output.index()] = o;
    lits.clear();
    for (auto in : gate.inputs) {
      lits.push_back(m.downstream[in.index()] ? out.faulty_lit[in.index()] : out.good_var[in.index()]);
    }
    encode_gate(f, gate.kind, o, lits);
  }

  for (auto ff : m.observed) {
    const auto d = c.flipflop(ff).d;
    const int diff = f.new_var("diff " + c.flipflop(ff).name);
    encode_xor2(f, diff, out.good_var[d.index()], out.faulty_lit[d.index()]);
    out.diff_var.push_back(diff);
  }
  return out;
}

std::string_view to_string(PatternStatus status) {
  switch (status) {
    case PatternStatus::Exact: return "exact";
    case PatternStatus::Overflow: return "overflow";
    case PatternStatus::Unknown: return "unknown";
  }
  return "?";
}

std::vector<FfSet> PatternResult::effective_sets() const {
  if (status == PatternStatus::Exact) return patterns;
  return {static_set};
}

PatternResult enumerate_patterns(const Circuit& c, const FaultSite& site, const PropagationOptions& options) {
  if (options.pattern_cap == 0) throw std::invalid_argument("pattern cap must be at least 1");
  const auto miter = build_miter(c, site);
  const auto cnf = encode_cnf(c, miter);

  PatternResult result{site.net, site.static_ffs, PatternStatus::Exact, {}};
  Solver solver(options.solver);
  solver.add_formula(cnf.formula);
  solver.add_clause(cnf.diff_var);  // at least one flip-flop differs

  std::vector<int> blocking(cnf.diff_var.size());
  while (true) {
    const auto status = solver.solve();
    if (status == SatStatus::Unsat) break;
    if (status == SatStatus::Unknown) {
      result.status = PatternStatus::Unknown;
      break;
    }
    if (result.patterns.size() == options.pattern_cap) {
      result.status = PatternStatus::Overflow;
      break;
    }
    std::vector<FfId> upset;
    for (std::size_t i = 0; i < cnf.diff_var.size(); ++i) {
      const int d = cnf.diff_var[i];
      const bool flipped = solver.model_value(d);
      if (flipped) upset.push_back(miter.observed[i]);
      blocking[i] = flipped ? -d : d;
    }
    result.patterns.emplace_back(std::move(upset));
    if (!solver.add_clause(blocking)) break;
  }
  if (result.status != PatternStatus::Exact) result.patterns.clear();
  return result;
}

std::vector<PatternResult> enumerate_all_patterns(const Circuit& c, std::span<const FaultSite> sites,
                                                  const PropagationOptions& options, std::size_t jobs) {
  std::vector<const FaultSite*> work;
  for (const auto& site : sites) {
    if (!site.po_only) work.push_back(&site);
  }
  std::vector<PatternResult> results(work.size());
  std::atomic<std::size_t> next{0};
  auto worker = [&] {
    for (auto i = next.fetch_add(1); i < work.size(); i = next.fetch_add(1)) {
      auto opts = options;
      opts.solver.seed = mix_seed(options.solver.seed, work[i]->net.value);
      const auto start = std::chrono::steady_clock::now();
      results[i] = enumerate_patterns(c, *work[i], opts);
      results[i].seconds = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
    }
  };
  jobs = std::clamp<std::size_t>(jobs, 1, std::max<std::size_t>(work.size(), 1));
  if (jobs == 1) {
    worker();
  } else {
    std::vector<std::thread> pool;
    for (std::size_t t = 0; t < jobs; ++t) pool.emplace_back(worker);
    for (auto& t : pool) t.join();
  }
  return results;
}

std::string_view to_string(Representation r) {
  switch (r) {
    case Representation::Patterns: return "patterns";
    case Representation::StaticFallback: return "static_fallback";
    case Representation::StaticCheaper: return "static_cheaper";
    case Representation::Dropped: return "dropped";
  }
  return "?";
}

OptimizedSets optimize_sets(const SetCollection& static_sets, std::span<const PatternResult> results) {
  std::map<NetId, const PatternResult*> by_site;
  for (const auto& r : results) by_site[r.site] = &r;

  // Sites in net order; a site's raw static entry is unique per site.
  std::vector<SiteRepresentation> reps;
  std::map<FfSet, std::vector<std::size_t>> groups;
  for (const auto& raw : static_sets.raw_sets()) {
    auto it = by_site.find(raw.site);
    if (it == by_site.end()) throw std::invalid_argument("no propagation result for a static site");
    const auto& result = *it->second;
    SiteRepresentation rep{raw.site, Representation::Patterns, {}};
    if (result.status != PatternStatus::Exact) {
      rep.kind = Representation::StaticFallback;
      rep.sets = {raw.set};
    } else if (result.patterns.empty()) {
      rep.kind = Representation::Dropped;
    } else {
      for (const auto& p : result.patterns) {
        const bool absorbed = std::any_of(result.patterns.begin(), result.patterns.end(), [&](const FfSet& q) {
          return q != p && p.is_subset_of(q);
        });
        if (!absorbed) rep.sets.push_back(p);
      }
      std::sort(rep.sets.begin(), rep.sets.end());
    }
    groups[raw.set].push_back(reps.size());
    reps.push_back(std::move(rep));
  }

  for (const auto& [static_set, members] : groups) {
    std::vector<FfSet> distinct;
    for (auto i : members) distinct.insert(distinct.end(), reps[i].sets.begin(), reps[i].sets.end());
    std::sort(distinct.begin(), distinct.end());
    distinct.erase(std::unique(distinct.begin(), distinct.end()), distinct.end());
    BigInt cost = 0;
    for (const auto& s : distinct) cost += injection_count(s);
    if (cost <= injection_count(static_set)) continue;
    for (auto i : members) {
      if (reps[i].kind == Representation::Patterns) {
        reps[i].kind = Representation::StaticCheaper;
        reps[i].sets = {static_set};
      }
    }
  }

  std::vector<RawSet> raw;
  for (const auto& rep : reps) {
    for (const auto& s : rep.sets) raw.push_back({rep.site, s});
  }
  return {SetCollection(static_sets.ff_count(), std::move(raw)), std::move(reps)};
}

}  // namespace mffu
