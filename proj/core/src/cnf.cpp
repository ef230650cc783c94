#include "mffu/cnf.hpp"

#include <cstdlib>
#include <istream>
#include <ostream>
#include <sstream>
#include <stdexcept>

namespace mffu {

void write_dimacs(std::ostream& out, const CnfFormula& formula) {
  for (std::size_t v = 1; v < formula.annotations.size(); ++v) {
    if (!formula.annotations[v].empty()) out << "c " << v << ' ' << formula.annotations[v] << '\n';
  }
  out << "p cnf " << formula.num_vars << ' ' << formula.clauses.size() << '\n';
  for (const auto& clause : formula.clauses) {
    for (int lit : clause) out << lit << ' ';
    out << "0\n";
  }
}

CnfFormula read_dimacs(std::istream& in) {
  CnfFormula formula;
  bool header = false;
  std::size_t expected_clauses = 0;
  std::vector<int> clause;
  std::string line;
  while (std::getline(in, line)) {
    if (line.empty() || line[0] == 'c' || line[0] == '%') continue;
    std::istringstream tokens(line);
    if (line[0] == 'p') {
      std::string p;
      std::string fmt;
      long vars = 0;
      tokens >> p >> fmt >> vars >> expected_clauses;
      if (!tokens || fmt != "cnf" || vars < 0) throw std::runtime_error("malformed DIMACS header: " + line);
      formula.num_vars = static_cast<int>(vars);
      formula.annotations.assign(static_cast<std::size_t>(vars) + 1, {});
      header = true;
      continue;
    }
    if (!header) throw std::runtime_error("DIMACS clause before header");
    int lit = 0;
    while (tokens >> lit) {
      if (lit == 0) {
        formula.clauses.push_back(std::move(clause));
        clause.clear();
      } else {
        if (std::abs(lit) > formula.num_vars) throw std::runtime_error("literal out of range: " + std::to_string(lit));
        clause.push_back(lit);
      }
    }
    if (!tokens.eof()) throw std::runtime_error("malformed DIMACS clause line: " + line);
  }
  if (!clause.empty()) formula.clauses.push_back(std::move(clause));
  if (!header) throw std::runtime_error("missing DIMACS header");
  return formula;
}

bool satisfies(const CnfFormula& formula, const std::vector<bool>& model) {
  for (const auto& clause : formula.clauses) {
    bool sat = false;
    for (int lit : clause) {
      const auto var = static_cast<std::size_t>(std::abs(lit));
      if (var < model.size() && model[var] == (lit > 0)) {
        sat = true;
        break;
      }
    }
    if (!sat) return false;
  }
  return true;
}

}  // namespace mffu
