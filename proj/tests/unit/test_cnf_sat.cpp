#include <gtest/gtest.h>

#include <random>
#include <sstream>

#include "helpers.hpp"
#include "mffu/cnf.hpp"
#include "mffu/generator.hpp"
#include "mffu/oracle.hpp"
#include "mffu/propagation.hpp"
#include "mffu/sat_solver.hpp"

using namespace mffu;

namespace {

CnfFormula random_3cnf(std::mt19937_64& rng, int vars, int clauses) {
  CnfFormula f;
  for (int v = 0; v < vars; ++v) f.new_var();
  std::uniform_int_distribution<int> var(1, vars);
  std::bernoulli_distribution neg(0.5);
  for (int i = 0; i < clauses; ++i) {
    std::vector<int> cl;
    for (int k = 0; k < 3; ++k) cl.push_back(neg(rng) ? -var(rng) : var(rng));
    f.add_clause(cl);
  }
  return f;
}

bool brute_force_sat(const CnfFormula& f) {
  const auto n = static_cast<unsigned>(f.num_vars);
  for (std::uint64_t m = 0; m < (std::uint64_t{1} << n); ++m) {
    bool all = true;
    for (const auto& cl : f.clauses) {
      bool sat = false;
      for (int lit : cl) {
        const bool v = (m >> (std::abs(lit) - 1)) & 1;
        if ((lit > 0) == v) {
          sat = true;
          break;
        }
      }
      if (!sat) {
        all = false;
        break;
      }
    }
    if (all) return true;
  }
  return false;
}

// Truth table of a single encoded gate: for every input assignment exactly the
// simulated output value must be consistent with the clauses.
void check_gate_encoding(GateKind kind, int arity) {
  CnfFormula f;
  std::vector<int> in;
  for (int i = 0; i < arity; ++i) in.push_back(f.new_var());
  const int out = f.new_var();
  encode_gate(f, kind, out, in);
  for (std::uint32_t m = 0; m < (1u << arity); ++m) {
    bool expect = false;
    int ones = 0;
    for (int i = 0; i < arity; ++i) ones += (m >> i) & 1;
    switch (kind) {
      case GateKind::And: expect = ones == arity; break;
      case GateKind::Nand: expect = ones != arity; break;
      case GateKind::Or: expect = ones > 0; break;
      case GateKind::Nor: expect = ones == 0; break;
      case GateKind::Xor: expect = ones % 2 == 1; break;
      case GateKind::Xnor: expect = ones % 2 == 0; break;
      case GateKind::Not: expect = ones == 0; break;
      case GateKind::Buff: expect = ones == 1; break;
    }
    for (bool o : {false, true}) {
      std::vector<int> assumptions;
      for (int i = 0; i < arity; ++i) assumptions.push_back((m >> i) & 1 ? in[i] : -in[i]);
      assumptions.push_back(o ? out : -out);
      const auto r = sat_solve(f, assumptions);
      EXPECT_EQ(r.status == SatStatus::Sat, o == expect)
          << to_string(kind) << " arity " << arity << " inputs " << m << " out " << o;
    }
  }
}

}  // namespace

TEST(Tseitin, ClauseCounts) {
  CnfFormula f;
  const int a = f.new_var();
  const int b = f.new_var();
  const int o = f.new_var();
  const std::vector<int> in{a, b};
  encode_gate(f, GateKind::And, o, in);
  EXPECT_EQ(f.clauses.size(), 3u);
  CnfFormula g;
  g.num_vars = 3;
  encode_gate(g, GateKind::Xor, o, in);
  EXPECT_EQ(g.clauses.size(), 4u);
  EXPECT_EQ(g.num_vars, 3);
}

TEST(Tseitin, EveryGateKindMatchesItsTruthTable) {
  for (auto kind : {GateKind::And, GateKind::Or, GateKind::Nand, GateKind::Nor, GateKind::Xor, GateKind::Xnor}) {
    for (int arity : {2, 3, 4}) check_gate_encoding(kind, arity);
  }
  check_gate_encoding(GateKind::Not, 1);
  check_gate_encoding(GateKind::Buff, 1);
}

TEST(Dimacs, RoundTripAndAnnotations) {
  CnfFormula f;
  const int x = f.new_var("good:x");
  const int y = f.new_var();
  f.add_clause({x, -y});
  f.add_clause({y});
  std::stringstream text;
  write_dimacs(text, f);
  EXPECT_NE(text.str().find("c 1 good:x"), std::string::npos);
  EXPECT_NE(text.str().find("p cnf 2 2"), std::string::npos);
  const auto back = read_dimacs(text);
  EXPECT_EQ(back.num_vars, 2);
  EXPECT_EQ(back.clauses, f.clauses);
  std::stringstream bad("p cnf 2 1\n1 x 0\n");
  EXPECT_THROW((void)read_dimacs(bad), std::runtime_error);
}

TEST(Sat, UnitContradiction) {
  CnfFormula f;
  const int x = f.new_var();
  f.add_clause({x});
  f.add_clause({-x});
  EXPECT_EQ(sat_solve(f).status, SatStatus::Unsat);
}

TEST(Sat, AssumptionForcesOtherLiteral) {
  CnfFormula f;
  const int x = f.new_var();
  const int y = f.new_var();
  f.add_clause({x, y});
  const std::vector<int> assume{-x};
  const auto r = sat_solve(f, assume);
  ASSERT_EQ(r.status, SatStatus::Sat);
  EXPECT_FALSE(r.model[x]);
  EXPECT_TRUE(r.model[y]);
}

TEST(Sat, AssumptionsDoNotPersist) {
  Solver s;
  const int x = s.new_var();
  const int y = s.new_var();
  s.add_clause({x, y});
  const std::vector<int> both{-x, -y};
  EXPECT_EQ(s.solve(both), SatStatus::Unsat);
  EXPECT_EQ(s.solve(), SatStatus::Sat);
  s.add_clause({-x});
  EXPECT_EQ(s.solve(), SatStatus::Sat);
  EXPECT_TRUE(s.model_value(y));
}

TEST(Sat, EmptyFormulaAndEmptyClause) {
  EXPECT_EQ(sat_solve(CnfFormula{}).status, SatStatus::Sat);
  CnfFormula f;
  f.new_var();
  f.add_clause({});
  EXPECT_EQ(sat_solve(f).status, SatStatus::Unsat);
}

TEST(Sat, Random3CnfAgreesWithTruthTable) {
  std::mt19937_64 rng(2024);
  for (int i = 0; i < 300; ++i) {
    const int vars = 3 + static_cast<int>(rng() % 12);
    const int clauses = static_cast<int>(vars * (3.0 + (rng() % 300) / 100.0));
    const auto f = random_3cnf(rng, vars, clauses);
    SolverConfig cfg;
    cfg.seed = rng();
    cfg.random_decision_freq = (i % 2) ? 0.05 : 0.0;
    const auto r = sat_solve(f, {}, cfg);
    ASSERT_NE(r.status, SatStatus::Unknown);
    EXPECT_EQ(r.status == SatStatus::Sat, brute_force_sat(f)) << "instance " << i;
    if (r.status == SatStatus::Sat) EXPECT_TRUE(satisfies(f, r.model));
  }
}

TEST(Sat, TwentyVariableInstance) {
  std::mt19937_64 rng(7);
  for (int i = 0; i < 4; ++i) {
    const auto f = random_3cnf(rng, 20, 86);  // near the phase transition
    const auto r = sat_solve(f);
    EXPECT_EQ(r.status == SatStatus::Sat, brute_force_sat(f));
    if (r.status == SatStatus::Sat) EXPECT_TRUE(satisfies(f, r.model));
  }
}

TEST(Sat, PigeonholeIsUnsatAndConflictLimitGivesUnknown) {
  // 7 pigeons, 6 holes.
  constexpr int kP = 7;
  constexpr int kH = 6;
  CnfFormula f;
  for (int v = 0; v < kP * kH; ++v) f.new_var();
  auto var = [](int p, int h) { return p * kH + h + 1; };
  for (int p = 0; p < kP; ++p) {
    std::vector<int> cl;
    for (int h = 0; h < kH; ++h) cl.push_back(var(p, h));
    f.add_clause(cl);
  }
  for (int h = 0; h < kH; ++h) {
    for (int p = 0; p < kP; ++p) {
      for (int q = p + 1; q < kP; ++q) f.add_clause({-var(p, h), -var(q, h)});
    }
  }
  EXPECT_EQ(sat_solve(f).status, SatStatus::Unsat);
  SolverConfig tight;
  tight.conflict_limit = 5;
  EXPECT_EQ(sat_solve(f, {}, tight).status, SatStatus::Unknown);
}

TEST(MiterCnf, ModelsDecodeToConsistentSimulation) {
  for (std::uint64_t seed = 1; seed <= 15; ++seed) {
    const auto c = generate_circuit({.inputs = 4, .flipflops = 3, .gates = 10, .outputs = 1, .seed = seed});
    for (const auto& site : enumerate_fault_sites(c, SiteMode::AllNets)) {
      if (site.po_only) continue;
      const auto miter = build_miter(c, site);
      const auto cnf = encode_cnf(c, miter);
      SolverConfig cfg;
      cfg.seed = seed;
      const auto r = sat_solve(cnf.formula, {}, cfg);
      ASSERT_EQ(r.status, SatStatus::Sat);  // the miter itself is always satisfiable
      Assignment a;
      for (auto n : c.primary_inputs()) a[n] = false;
      for (const auto& f : c.flipflops()) a[f.q] = false;
      for (auto n : miter.support) a[n] = r.model[cnf.good_var[n.index()]];
      const auto good = simulate(c, a);
      const auto bad = simulate(c, a, site.net);
      for (const auto& n : c.nets()) {
        if (const int v = cnf.good_var[n.id.index()]; v != 0) EXPECT_EQ(r.model[v], good[n.id.index()]);
        if (const int l = cnf.faulty_lit[n.id.index()]; l != 0) {
          EXPECT_EQ(l > 0 ? r.model[l] : !r.model[-l], bad[n.id.index()]) << c.net(n.id).name;
        }
      }
      for (std::size_t i = 0; i < miter.observed.size(); ++i) {
        const auto d = c.flipflop(miter.observed[i]).d.index();
        EXPECT_EQ(r.model[cnf.diff_var[i]], good[d] != bad[d]);
      }
    }
  }
}
