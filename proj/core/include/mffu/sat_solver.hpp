#pragma once

#include <cstdint>
#include <initializer_list>
#include <optional>
#include <random>
#include <span>
#include <string_view>
#include <vector>

#include "mffu/cnf.hpp"

namespace mffu {

enum class SatStatus : std::uint8_t { Sat, Unsat, Unknown };

[[nodiscard]] std::string_view to_string(SatStatus status);

struct SolverConfig {
  std::uint64_t conflict_limit = 1'000'000;  // per solve() call; exceeded => Unknown
  std::uint64_t seed = 0;
  double random_decision_freq = 0.0;
  double var_decay = 0.95;
  double clause_decay = 0.999;
  std::uint64_t restart_unit = 100;  // Luby sequence scale, in conflicts
};

struct SolverStats {
  std::uint64_t solves = 0;
  std::uint64_t decisions = 0;
  std::uint64_t propagations = 0;
  std::uint64_t conflicts = 0;
  std::uint64_t restarts = 0;
  std::uint64_t learnts_removed = 0;
};

/// Incremental CDCL solver: two watched literals, first-UIP learning with
/// clause minimization, VSIDS branching with phase saving, Luby restarts and
/// LBD-guided learnt clause reduction. Clauses may be added between solve()
/// calls; assumptions hold for a single call only.
class Solver {
 public:
  explicit Solver(SolverConfig config = {});

  /// Allocates a fresh variable and returns its DIMACS index.
  int new_var();
  void ensure_vars(int count);
  [[nodiscard]] int num_vars() const { return static_cast<int>(assigns_.size()); }

  /// Returns false once the clause set is unsatisfiable at the top level.
  bool add_clause(std::span<const int> lits);
  bool add_clause(std::initializer_list<int> lits) { return add_clause(std::span<const int>(lits.begin(), lits.size())); }
  void add_formula(const CnfFormula& formula);

  SatStatus solve(std::span<const int> assumptions = {});

  /// Value of `var` in the last satisfying model.
  [[nodiscard]] bool model_value(int var) const { return model_.at(static_cast<std::size_t>(var)); }
  /// Last model indexed by variable; entry 0 unused.
  [[nodiscard]] const std::vector<bool>& model() const { return model_; }
  [[nodiscard]] const SolverStats& stats() const { return stats_; }
  [[nodiscard]] bool okay() const { return ok_; }

 private:
  using Lit = std::uint32_t;  // 2 * var + negated
  using ClauseRef = std::uint32_t;
  static constexpr ClauseRef kNoReason = UINT32_MAX;
  static constexpr std::uint8_t kFalse = 0;
  static constexpr std::uint8_t kTrue = 1;
  static constexpr std::uint8_t kUndef = 2;

  struct Clause {
    std::vector<Lit> lits;
    double activity = 0.0;
    std::uint32_t lbd = 0;
    bool learnt = false;
    bool deleted = false;
  };
  struct Watcher {
    ClauseRef cref;
    Lit blocker;
  };

  [[nodiscard]] static Lit from_dimacs(int lit);
  [[nodiscard]] std::uint8_t value(Lit lit) const;
  [[nodiscard]] std::uint32_t decision_level() const { return static_cast<std::uint32_t>(trail_lim_.size()); }

  void enqueue(Lit lit, ClauseRef reason);
  ClauseRef propagate();
  void analyze(ClauseRef conflict, std::vector<Lit>& learnt, std::uint32_t& backtrack_level, std::uint32_t& lbd);
  [[nodiscard]] bool redundant(Lit lit) const;
  void cancel_until(std::uint32_t level);
  ClauseRef attach(std::vector<Lit> lits, bool learnt, std::uint32_t lbd);
  [[nodiscard]] bool locked(ClauseRef cref) const;
  void reduce_learnts();
  SatStatus search(std::uint64_t conflict_budget, std::span<const Lit> assumptions, std::uint64_t conflicts_left);
  [[nodiscard]] std::optional<Lit> pick_branch();

  void bump_var(std::uint32_t var);
  void bump_clause(Clause& clause);

  // Max-heap of unassigned variables ordered by activity.
  void heap_insert(std::uint32_t var);
  std::uint32_t heap_pop();
  void heap_up(std::size_t pos);
  void heap_down(std::size_t pos);
  [[nodiscard]] bool heap_contains(std::uint32_t var) const { return heap_pos_[var] >= 0; }

  SolverConfig config_;
  SolverStats stats_;
  std::mt19937_64 rng_;
  bool ok_ = true;

  std::vector<Clause> clauses_;
  std::vector<std::vector<Watcher>> watches_;  // indexed by literal: clauses watching it
  std::size_t num_original_ = 0;
  std::size_t num_learnts_ = 0;
  double max_learnts_ = 0.0;

  std::vector<std::uint8_t> assigns_;
  std::vector<bool> phase_;
  std::vector<std::uint32_t> level_;
  std::vector<ClauseRef> reason_;
  std::vector<Lit> trail_;
  std::vector<std::size_t> trail_lim_;
  std::size_t qhead_ = 0;

  std::vector<double> activity_;
  double var_inc_ = 1.0;
  double clause_inc_ = 1.0;
  std::vector<std::uint32_t> heap_;
  std::vector<std::int64_t> heap_pos_;

  mutable std::vector<std::uint8_t> seen_;
  std::vector<bool> model_;
};

struct SolveResult {
  SatStatus status = SatStatus::Unknown;
  std::vector<bool> model;  // indexed by variable when status == Sat
};

/// One-shot convenience wrapper around Solver.
[[nodiscard]] SolveResult sat_solve(const CnfFormula& formula, std::span<const int> assumptions = {},
                                    SolverConfig config = {});

}  // namespace mffu
