#pragma once

#include <iosfwd>
#include <string>
#include <vector>

namespace mffu {

/// CNF in DIMACS conventions: variables are 1-based, a literal is +v or -v.
struct CnfFormula {
  int num_vars = 0;
  std::vector<std::vector<int>> clauses;
  std::vector<std::string> annotations;  // annotations[v] describes variable v; index 0 unused

  int new_var(std::string annotation = {}) {
    ++num_vars;
    annotations.resize(static_cast<std::size_t>(num_vars) + 1);
    annotations[static_cast<std::size_t>(num_vars)] = std::move(annotation);
    return num_vars;
  }
  void add_clause(std::vector<int> clause) { clauses.push_back(std::move(clause)); }
};

/// Writes `p cnf` text; non-empty annotations become `c <var> <text>` lines
/// ahead of the header.
void write_dimacs(std::ostream& out, const CnfFormula& formula);

/// Reads DIMACS text. Comment lines are ignored. Throws std::runtime_error on
/// malformed input.
[[nodiscard]] CnfFormula read_dimacs(std::istream& in);

/// True if `model` (indexed by variable, entry 0 unused) satisfies every clause.
[[nodiscard]] bool satisfies(const CnfFormula& formula, const std::vector<bool>& model);

}  // namespace mffu
