#include "mffu/sat_solver.hpp"

#include <algorithm>
#include <cmath>
#include <cstdlib>
#include <stdexcept>

namespace mffu {

namespace {

constexpr double kVarRescale = 1e100;
constexpr double kClauseRescale = 1e20;

// Luby sequence 1 1 2 1 1 2 4 1 1 2 ...; i is 0-based.
double luby(double y, std::uint64_t i) {
  std::uint64_t size = 1;
  int seq = 0;
  while (size < i + 1) {
    ++seq;
    size = 2 * size + 1;
  }
  while (size - 1 != i) {
    size = (size - 1) >> 1;
    --seq;
    i = i % size;
  }
  return std::pow(y, seq);
}

}  // namespace

std::string_view to_string(SatStatus status) {
  switch (status) {
    case SatStatus::Sat: return "sat";
    case SatStatus::Unsat: return "unsat";
    case SatStatus::Unknown: return "unknown";
  }
  return "?";
}

Solver::Solver(SolverConfig config) : config_(config), rng_(config.seed) {}

Solver::Lit Solver::from_dimacs(int lit) {
  if (lit == 0) throw std::invalid_argument("literal 0 is not a variable");
  return (static_cast<Lit>(std::abs(lit)) - 1) * 2 + (lit < 0 ? 1u : 0u);
}

std::uint8_t Solver::value(Lit lit) const {
  const auto a = assigns_[lit >> 1];
  if (a == kUndef) return kUndef;
  return static_cast<std::uint8_t>(a ^ (lit & 1u));
}

int Solver::new_var() {
  const auto var = static_cast<std::uint32_t>(assigns_.size());
  assigns_.push_back(kUndef);
  phase_.push_back(false);
  level_.push_back(0);
  reason_.push_back(kNoReason);
  activity_.push_back(0.0);
  seen_.push_back(0);
  heap_pos_.push_back(-1);
  watches_.emplace_back();
  watches_.emplace_back();
  heap_insert(var);
  return static_cast<int>(var) + 1;
}

void Solver::ensure_vars(int count) {
  while (num_vars() < count) new_var();
}

bool Solver::add_clause(std::span<const int> dimacs) {
  if (!ok_) return false;
  std::vector<Lit> lits;
  lits.reserve(dimacs.size());
  for (int d : dimacs) {
    ensure_vars(std::abs(d));
    lits.push_back(from_dimacs(d));
  }
  std::sort(lits.begin(), lits.end());
  lits.erase(std::unique(lits.begin(), lits.end()), lits.end());
  std::vector<Lit> kept;
  for (std::size_t i = 0; i < lits.size(); ++i) {
    if (i + 1 < lits.size() && (lits[i] ^ 1u) == lits[i + 1]) return true;  // tautology
    const auto v = value(lits[i]);
    if (v == kTrue) return true;
    if (v == kUndef) kept.push_back(lits[i]);
  }
  if (kept.empty()) {
    ok_ = false;
    return false;
  }
  if (kept.size() == 1) {
    enqueue(kept.front(), kNoReason);
    if (propagate() != kNoReason) ok_ = false;
    return ok_;
  }
  attach(std::move(kept), false, 0);
  ++num_original_;
  return true;
}

void Solver::add_formula(const CnfFormula& formula) {
  ensure_vars(formula.num_vars);
  for (const auto& clause : formula.clauses) add_clause(clause);
}

Solver::ClauseRef Solver::attach(std::vector<Lit> lits, bool learnt, std::uint32_t lbd) {
  const auto cref = static_cast<ClauseRef>(clauses_.size());
  watches_[lits[0]].push_back({cref, lits[1]});
  watches_[lits[1]].push_back({cref, lits[0]});
  clauses_.push_back({std::move(lits), 0.0, lbd, learnt, false});
  if (learnt) ++num_learnts_;
  return cref;
}

void Solver::enqueue(Lit lit, ClauseRef reason) {
  const auto var = lit >> 1;
  assigns_[var] = static_cast<std::uint8_t>((lit & 1u) ? kFalse : kTrue);
  level_[var] = decision_level();
  reason_[var] = reason;
  trail_.push_back(lit);
}

Solver::ClauseRef Solver::propagate() {
  ClauseRef conflict = kNoReason;
  while (qhead_ < trail_.size()) {
    const Lit false_lit = trail_[qhead_++] ^ 1u;
    auto& ws = watches_[false_lit];
    ++stats_.propagations;
    std::size_t i = 0;
    std::size_t j = 0;
    while (i < ws.size()) {
      const Watcher w = ws[i++];
      if (value(w.blocker) == kTrue) {
        ws[j++] = w;
        continue;
      }
      Clause& clause = clauses_[w.cref];
      if (clause.deleted) continue;
      auto& lits = clause.lits;
      if (lits[0] == false_lit) std::swap(lits[0], lits[1]);
      const Lit first = lits[0];
      if (first != w.blocker && value(first) == kTrue) {
        ws[j++] = {w.cref, first};
        continue;
      }
      bool moved = false;
      for (std::size_t k = 2; k < lits.size(); ++k) {
        if (value(lits[k]) != kFalse) {
          std::swap(lits[1], lits[k]);
          watches_[lits[1]].push_back({w.cref, first});
          moved = true;
          break;
        }
      }
      if (moved) continue;
      ws[j++] = {w.cref, first};
      if (value(first) == kFalse) {
        conflict = w.cref;
        qhead_ = trail_.size();
        while (i < ws.size()) ws[j++] = ws[i++];
      } else {
        enqueue(first, w.cref);
      }
    }
    ws.resize(j);
  }
  return conflict;
}

bool Solver::redundant(Lit lit) const {
  const auto reason = reason_[lit >> 1];
  if (reason == kNoReason) return false;
  const auto& lits = clauses_[reason].lits;
  for (std::size_t k = 1; k < lits.size(); ++k) {
    const auto var = lits[k] >> 1;
    if (!seen_[var] && level_[var] > 0) return false;
  }
  return true;
}

void Solver::analyze(ClauseRef conflict, std::vector<Lit>& learnt, std::uint32_t& backtrack_level,
                     std::uint32_t& lbd) {
  learnt.assign(1, 0);  // slot for the asserting literal
  int open_paths = 0;
  std::optional<Lit> pivot;
  std::size_t index = trail_.size();
  ClauseRef reason = conflict;
  do {
    Clause& clause = clauses_[reason];
    if (clause.learnt) bump_clause(clause);
    for (std::size_t k = pivot ? 1 : 0; k < clause.lits.size(); ++k) {
      const Lit q = clause.lits[k];
      const auto var = q >> 1;
      if (seen_[var] || level_[var] == 0) continue;
      bump_var(var);
      seen_[var] = 1;
      if (level_[var] >= decision_level()) {
        ++open_paths;
      } else {
        learnt.push_back(q);
      }
    }
    while (!seen_[trail_[--index] >> 1]) {
    }
    pivot = trail_[index];
    reason = reason_[*pivot >> 1];
    seen_[*pivot >> 1] = 0;
    --open_paths;
  } while (open_paths > 0);
  learnt[0] = *pivot ^ 1u;

  // Drop literals implied by the rest of the clause.
  std::vector<Lit> removed;
  std::size_t keep = 1;
  for (std::size_t k = 1; k < learnt.size(); ++k) {
    if (redundant(learnt[k])) {
      removed.push_back(learnt[k]);
    } else {
      learnt[keep++] = learnt[k];
    }
  }
  learnt.resize(keep);
  for (auto lit : learnt) seen_[lit >> 1] = 0;
  for (auto lit : removed) seen_[lit >> 1] = 0;

  backtrack_level = 0;
  if (learnt.size() > 1) {
    std::size_t best = 1;
    for (std::size_t k = 2; k < learnt.size(); ++k) {
      if (level_[learnt[k] >> 1] > level_[learnt[best] >> 1]) best = k;
    }
    std::swap(learnt[1], learnt[best]);
    backtrack_level = level_[learnt[1] >> 1];
  }

  std::vector<std::uint32_t> levels;
  levels.reserve(learnt.size());
  for (auto lit : learnt) levels.push_back(level_[lit >> 1]);
  std::sort(levels.begin(), levels.end());
  lbd = static_cast<std::uint32_t>(std::unique(levels.begin(), levels.end()) - levels.begin());
}

void Solver::cancel_until(std::uint32_t level) {
  if (decision_level() <= level) return;
  for (std::size_t k = trail_.size(); k > trail_lim_[level]; --k) {
    const auto var = trail_[k - 1] >> 1;
    phase_[var] = assigns_[var] == kTrue;
    assigns_[var] = kUndef;
    reason_[var] = kNoReason;
    if (!heap_contains(var)) heap_insert(var);
  }
  trail_.resize(trail_lim_[level]);
  trail_lim_.resize(level);
  qhead_ = trail_.size();
}

bool Solver::locked(ClauseRef cref) const {
  const auto& lits = clauses_[cref].lits;
  return reason_[lits[0] >> 1] == cref && value(lits[0]) == kTrue;
}

void Solver::reduce_learnts() {
  std::vector<ClauseRef> candidates;
  for (ClauseRef c = 0; c < clauses_.size(); ++c) {
    const auto& clause = clauses_[c];
    if (clause.learnt && !clause.deleted && clause.lbd > 2 && !locked(c)) candidates.push_back(c);
  }
  std::sort(candidates.begin(), candidates.end(), [this](ClauseRef a, ClauseRef b) {
    const auto& ca = clauses_[a];
    const auto& cb = clauses_[b];
    if (ca.lbd != cb.lbd) return ca.lbd > cb.lbd;
    return ca.activity < cb.activity;
  });
  for (std::size_t k = 0; k < candidates.size() / 2; ++k) {
    auto& clause = clauses_[candidates[k]];
    clause.deleted = true;
    clause.lits.clear();
    clause.lits.shrink_to_fit();
    --num_learnts_;
    ++stats_.learnts_removed;
  }
}

void Solver::bump_var(std::uint32_t var) {
  activity_[var] += var_inc_;
  if (activity_[var] > kVarRescale) {
    for (auto& a : activity_) a /= kVarRescale;
    var_inc_ /= kVarRescale;
  }
  if (heap_contains(var)) heap_up(static_cast<std::size_t>(heap_pos_[var]));
}

void Solver::bump_clause(Clause& clause) {
  clause.activity += clause_inc_;
  if (clause.activity > kClauseRescale) {
    for (auto& c : clauses_) {
      if (c.learnt) c.activity /= kClauseRescale;
    }
    clause_inc_ /= kClauseRescale;
  }
}

std::optional<Solver::Lit> Solver::pick_branch() {
  if (config_.random_decision_freq > 0.0 && !heap_.empty()) {
    std::uniform_real_distribution<double> coin(0.0, 1.0);
    if (coin(rng_) < config_.random_decision_freq) {
      std::uniform_int_distribution<std::size_t> pick(0, heap_.size() - 1);
      const auto var = heap_[pick(rng_)];
      if (assigns_[var] == kUndef) return var * 2 + (phase_[var] ? 0u : 1u);
    }
  }
  while (!heap_.empty()) {
    const auto var = heap_pop();
    if (assigns_[var] == kUndef) return var * 2 + (phase_[var] ? 0u : 1u);
  }
  return std::nullopt;
}

SatStatus Solver::search(std::uint64_t conflict_budget, std::span<const Lit> assumptions,
                         std::uint64_t conflicts_left) {
  std::uint64_t conflicts = 0;
  std::vector<Lit> learnt;
  while (true) {
    const auto conflict = propagate();
    if (conflict != kNoReason) {
      ++stats_.conflicts;
      ++conflicts;
      if (decision_level() == 0) {
        ok_ = false;
        return SatStatus::Unsat;
      }
      std::uint32_t backtrack = 0;
      std::uint32_t lbd = 0;
      analyze(conflict, learnt, backtrack, lbd);
      cancel_until(backtrack);
      if (learnt.size() == 1) {
        enqueue(learnt[0], kNoReason);
      } else {
        const auto cref = attach(learnt, true, lbd);
        bump_clause(clauses_[cref]);
        enqueue(learnt[0], cref);
      }
      var_inc_ /= config_.var_decay;
      clause_inc_ /= config_.clause_decay;
      if (conflicts >= conflicts_left) return SatStatus::Unknown;
      continue;
    }

    if (conflicts >= conflict_budget) {
      cancel_until(0);
      ++stats_.restarts;
      return SatStatus::Unknown;  // caller restarts
    }
    if (static_cast<double>(num_learnts_) >= max_learnts_ + static_cast<double>(trail_.size())) {
      reduce_learnts();
      max_learnts_ *= 1.1;
    }

    std::optional<Lit> next;
    while (decision_level() < assumptions.size()) {
      const Lit a = assumptions[decision_level()];
      const auto v = value(a);
      if (v == kTrue) {
        trail_lim_.push_back(trail_.size());
      } else if (v == kFalse) {
        return SatStatus::Unsat;
      } else {
        next = a;
        break;
      }
    }
    if (!next) {
      next = pick_branch();
      if (!next) return SatStatus::Sat;
      ++stats_.decisions;
    }
    trail_lim_.push_back(trail_.size());
    enqueue(*next, kNoReason);
  }
}

SatStatus Solver::solve(std::span<const int> assumptions) {
  ++stats_.solves;
  model_.clear();
  if (!ok_) return SatStatus::Unsat;
  std::vector<Lit> assume;
  assume.reserve(assumptions.size());
  for (int d : assumptions) {
    ensure_vars(std::abs(d));
    assume.push_back(from_dimacs(d));
  }
  max_learnts_ = std::max(static_cast<double>(num_original_) / 3.0, 2000.0);

  const auto start = stats_.conflicts;
  SatStatus status = SatStatus::Unknown;
  for (std::uint64_t round = 0;; ++round) {
    const auto used = stats_.conflicts - start;
    if (used >= config_.conflict_limit) break;
    const auto budget = static_cast<std::uint64_t>(luby(2.0, round) * static_cast<double>(config_.restart_unit));
    status = search(budget, assume, config_.conflict_limit - used);
    if (status != SatStatus::Unknown) break;
  }

  if (status == SatStatus::Sat) {
    model_.assign(assigns_.size() + 1, false);
    for (std::size_t v = 0; v < assigns_.size(); ++v) model_[v + 1] = assigns_[v] == kTrue;
  }
  cancel_until(0);
  return status;
}

void Solver::heap_insert(std::uint32_t var) {
  heap_pos_[var] = static_cast<std::int64_t>(heap_.size());
  heap_.push_back(var);
  heap_up(heap_.size() - 1);
}

std::uint32_t Solver::heap_pop() {
  const auto top = heap_.front();
  heap_pos_[top] = -1;
  heap_.front() = heap_.back();
  heap_.pop_back();
  if (!heap_.empty()) {
    heap_pos_[heap_.front()] = 0;
    heap_down(0);
  }
  return top;
}

void Solver::heap_up(std::size_t pos) {
  const auto var = heap_[pos];
  while (pos > 0) {
    const auto parent = (pos - 1) / 2;
    if (activity_[heap_[parent]] >= activity_[var]) break;
    heap_[pos] = heap_[parent];
    heap_pos_[heap_[pos]] = static_cast<std::int64_t>(pos);
    pos = parent;
  }
  heap_[pos] = var;
  heap_pos_[var] = static_cast<std::int64_t>(pos);
}

void Solver::heap_down(std::size_t pos) {
  const auto var = heap_[pos];
  while (true) {
    auto child = 2 * pos + 1;
    if (child >= heap_.size()) break;
    if (child + 1 < heap_.size() && activity_[heap_[child + 1]] > activity_[heap_[child]]) ++child;
    if (activity_[heap_[child]] <= activity_[var]) break;
    heap_[pos] = heap_[child];
    heap_pos_[heap_[pos]] = static_cast<std::int64_t>(pos);
    pos = child;
  }
  heap_[pos] = var;
  heap_pos_[var] = static_cast<std::int64_t>(pos);
}

SolveResult sat_solve(const CnfFormula& formula, std::span<const int> assumptions, SolverConfig config) {
  Solver solver(config);
  solver.add_formula(formula);
  SolveResult result;
  result.status = solver.solve(assumptions);
  if (result.status == SatStatus::Sat) result.model = solver.model();
  return result;
}

}  // namespace mffu
