#pragma once

#include <cstdint>
#include <span>
#include <vector>

#include "mffu/cnf.hpp"
#include "mffu/cones.hpp"
#include "mffu/ffsets.hpp"
#include "mffu/netlist.hpp"
#include "mffu/sat_solver.hpp"

namespace mffu {

/// Good/faulty circuit pair for one fault site. The good copy covers the
/// fan-in cones of every observed flip-flop; only the part of it downstream
/// of the site is duplicated. The faulty site value is the complement of the
/// good one for the whole cycle.
struct MiterInstance {
  NetId site;
  std::vector<FfId> observed;          // static flip-flop set of the site
  std::vector<NetId> support;          // free values: primary inputs and q nets, sorted
  std::vector<GateId> good_gates;      // topological order
  std::vector<GateId> faulty_gates;    // duplicated gates, topological order
  std::vector<bool> downstream;        // per net: site or driven by a duplicated gate
};

/// Throws std::invalid_argument when the site reaches no flip-flop.
[[nodiscard]] MiterInstance build_miter(const Circuit& c, const FaultSite& site);

/// CNF of a miter plus the variable maps needed to decode models.
struct MiterCnf {
  CnfFormula formula;
  std::vector<int> good_var;    // per net, 0 if the net is outside the miter
  std::vector<int> faulty_lit;  // per net, 0 unless downstream of the site
  std::vector<int> diff_var;    // parallel to MiterInstance::observed
};

/// Appends the Tseitin clauses of one gate: `out` is the output literal and
/// `inputs` the input literals. Multi-input XOR/XNOR add chaining variables.
void encode_gate(CnfFormula& formula, GateKind kind, int out, std::span<const int> inputs);

[[nodiscard]] MiterCnf encode_cnf(const Circuit& c, const MiterInstance& miter);

enum class PatternStatus : std::uint8_t {
  Exact,     // every achievable difference pattern was found
  Overflow,  // more than `cap` patterns; fall back to the static set
  Unknown,   // solver hit its conflict limit; fall back to the static set
};

[[nodiscard]] std::string_view to_string(PatternStatus status);

struct PropagationOptions {
  std::size_t pattern_cap = 4096;
  SolverConfig solver;
};

/// Achievable simultaneous-upset combinations of one site.
struct PatternResult {
  NetId site;
  FfSet static_set;
  PatternStatus status = PatternStatus::Exact;
  std::vector<FfSet> patterns;  // discovery order; empty unless Exact
  double seconds = 0.0;         // wall time, not part of any artifact

  /// Sets this site must be covered by: the patterns when exact, the static
  /// set otherwise.
  [[nodiscard]] std::vector<FfSet> effective_sets() const;
};

/// Enumerates the distinct non-empty difference vectors over the site's
/// observed flip-flops, blocking each found vector (projected onto the
/// difference variables) until the formula becomes unsatisfiable.
[[nodiscard]] PatternResult enumerate_patterns(const Circuit& c, const FaultSite& site,
                                               const PropagationOptions& options = {});

/// Runs enumerate_patterns over every non-po_only site with up to `jobs`
/// worker threads. Each site's solver is seeded from `options.solver.seed`
/// and the site net id, so results do not depend on scheduling.
[[nodiscard]] std::vector<PatternResult> enumerate_all_patterns(const Circuit& c,
                                                                std::span<const FaultSite> sites,
                                                                const PropagationOptions& options,
                                                                std::size_t jobs = 1);

enum class Representation : std::uint8_t {
  Patterns,        // maximal achievable patterns
  StaticFallback,  // overflow/unknown: static set kept
  StaticCheaper,   // patterns would cost more injections than the static set
  Dropped,         // no achievable pattern: false paths only
};

[[nodiscard]] std::string_view to_string(Representation r);

struct SiteRepresentation {
  NetId site;
  Representation kind = Representation::Patterns;
  std::vector<FfSet> sets;
};

struct OptimizedSets {
  SetCollection collection;
  std::vector<SiteRepresentation> sites;  // parallel to the static collection's sites, sorted by net
};

/// Replaces every static set by the sets its sites can really upset.
///
/// A site is covered by its maximal patterns (injecting a set covers all of
/// its non-empty subsets). Sites sharing one static set form a group; if the
/// group's distinct pattern sets would cost more injections than the static
/// set itself, the whole group keeps the static set. The optimized total is
/// therefore never above the static total. Sites with no pattern disappear.
///
/// Throws std::invalid_argument if a static site has no result.
[[nodiscard]] OptimizedSets optimize_sets(const SetCollection& static_sets,
                                          std::span<const PatternResult> results);

}  // namespace mffu
