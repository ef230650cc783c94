#include <gtest/gtest.h>

#include <algorithm>
#include <string>

#include "helpers.hpp"
#include "mffu/generator.hpp"
#include "mffu/netlist.hpp"

using namespace mffu;
using mffu::test::net;

namespace {

std::size_t error_line(const std::string& text, std::span<const std::string> exclude = {}) {
  try {
    (void)parse_bench(text, exclude);
  } catch (const NetlistError& e) {
    return e.line();
  }
  ADD_FAILURE() << "no NetlistError for:\n" << text;
  return SIZE_MAX;
}

}  // namespace

TEST(Netlist, SmallestFlipFlopCircuit) {
  const auto c = parse_bench("INPUT(a)\nINPUT(b)\ng = AND(a,b)\nf = DFF(g)\nOUTPUT(f)");
  EXPECT_EQ(c.gates().size(), 1u);
  EXPECT_EQ(c.flipflops().size(), 1u);
  EXPECT_EQ(c.primary_inputs().size(), 2u);
  EXPECT_EQ(c.primary_outputs().size(), 1u);
  // Nets a, b, g, f.
  EXPECT_EQ(circuit_stats(c), (CircuitStats{1, 1, 2, 1, 4}));
  const auto& ff = c.flipflop(FfId{0});
  EXPECT_EQ(ff.name, "f");
  EXPECT_EQ(ff.d, net(c, "g"));
  EXPECT_EQ(ff.q, net(c, "f"));
  EXPECT_NE(ff.d, ff.q);
}

TEST(Netlist, EmptyCircuitHasZeroStats) {
  EXPECT_EQ(circuit_stats(parse_bench("")), CircuitStats{});
  EXPECT_EQ(circuit_stats(parse_bench("# only a comment\n\n")), CircuitStats{});
}

TEST(Netlist, ThreeLineCircuitCounts) {
  const auto c = parse_bench("INPUT(x)\ny = NOT(x)\nz = AND(x, y)\nf = DFF(z)\n");
  const auto s = circuit_stats(c);
  EXPECT_EQ(s.num_gates, 2u);
  EXPECT_EQ(s.num_ffs, 1u);
  EXPECT_EQ(s.num_nets, 4u);
}

TEST(Netlist, CommentsWhitespaceAndCrlf) {
  const auto c = parse_bench("# header\r\nINPUT( a )\r\n  INPUT(b)   # trailing\r\n\r\ng=nand( a , b )\r\nq = dff(g)\r\n");
  EXPECT_EQ(c.gates().size(), 1u);
  EXPECT_EQ(c.gate(GateId{0}).kind, GateKind::Nand);
  EXPECT_EQ(c.flipflops().size(), 1u);
}

TEST(Netlist, AllGateKindsAndBufAlias) {
  const auto c = parse_bench(
      "INPUT(a)\nINPUT(b)\n"
      "g1 = AND(a,b)\ng2 = OR(a,b)\ng3 = NAND(a,b)\ng4 = NOR(a,b)\n"
      "g5 = XOR(a,b)\ng6 = XNOR(a,b)\ng7 = NOT(a)\ng8 = BUFF(b)\ng9 = BUF(a)\n");
  ASSERT_EQ(c.gates().size(), 9u);
  EXPECT_EQ(c.gate(GateId{7}).kind, GateKind::Buff);
  EXPECT_EQ(c.gate(GateId{8}).kind, GateKind::Buff);
}

TEST(Netlist, NamesAreCaseSensitive) {
  const auto c = parse_bench("INPUT(a)\nINPUT(A)\ng = AND(a, A)\n");
  EXPECT_EQ(c.primary_inputs().size(), 2u);
}

TEST(Netlist, UndefinedNetReportsItsLine) {
  EXPECT_EQ(error_line("g = AND(a,b)"), 1u);
  EXPECT_EQ(error_line("INPUT(a)\n\nq = DFF(g)\n"), 3u);
}

TEST(Netlist, DuplicateDriver) {
  EXPECT_EQ(error_line("INPUT(a)\nINPUT(b)\na = AND(a,b)\n"), 3u);
  EXPECT_EQ(error_line("INPUT(a)\nINPUT(a)\n"), 2u);
  EXPECT_EQ(error_line("INPUT(a)\nq = DFF(a)\nq = NOT(a)\n"), 3u);
}

TEST(Netlist, CombinationalCycle) {
  EXPECT_EQ(error_line("INPUT(a)\nx = AND(a, y)\ny = NOT(x)\n"), 2u);
  // A loop through a flip-flop is legal.
  EXPECT_NO_THROW((void)parse_bench("INPUT(a)\nq = DFF(x)\nx = AND(a, q)\n"));
}

TEST(Netlist, ArityViolations) {
  EXPECT_EQ(error_line("INPUT(a)\nINPUT(b)\ny = NOT(a, b)\n"), 3u);
  EXPECT_EQ(error_line("INPUT(a)\ny = AND(a)\n"), 2u);
  EXPECT_EQ(error_line("INPUT(a)\ny = BUFF()\n"), 2u);
}

TEST(Netlist, UnknownGateKindAndSyntax) {
  EXPECT_EQ(error_line("INPUT(a)\nb = FOO(a)\n"), 2u);
  EXPECT_EQ(error_line("INPUT(a)\nthis is not bench\n"), 2u);
  EXPECT_EQ(error_line("INPUT(a\n"), 1u);
}

TEST(Netlist, ErrorMessageCarriesLine) {
  try {
    (void)parse_bench("INPUT(a)\nb = FOO(a)\n");
    FAIL();
  } catch (const NetlistError& e) {
    EXPECT_NE(std::string(e.what()).find("line 2"), std::string::npos) << e.what();
  }
}

TEST(Netlist, ExcludeMarksNets) {
  const std::vector<std::string> exclude{"rst"};
  const auto c = parse_bench("INPUT(rst)\nINPUT(a)\ng = AND(a, rst)\nq = DFF(g)\n", exclude);
  EXPECT_TRUE(c.is_excluded(net(c, "rst")));
  EXPECT_FALSE(c.is_excluded(net(c, "a")));
  ASSERT_EQ(c.excluded_nets().size(), 1u);
  EXPECT_EQ(c.stats().num_nets, 4u);

  const std::vector<std::string> unknown{"nope"};
  EXPECT_THROW((void)parse_bench("INPUT(a)\n", unknown), NetlistError);
}

TEST(Netlist, FanoutAndDrivers) {
  const auto c = test::load("fanout.bench");
  EXPECT_EQ(c.fanout_count(net(c, "AND1")), 4u);
  EXPECT_EQ(c.fanout_count(net(c, "x")), 2u);
  EXPECT_EQ(c.fanout_count(net(c, "OR1")), 2u);  // two D pins
  EXPECT_TRUE(c.is_combinational(net(c, "x")));
  EXPECT_TRUE(c.is_combinational(net(c, "OR1")));
  EXPECT_FALSE(c.is_combinational(net(c, "FF1")));
}

TEST(Netlist, TopologicalOrderRespectsDependencies) {
  const auto c = generate_circuit({.inputs = 6, .flipflops = 5, .gates = 80, .outputs = 3, .seed = 11});
  std::vector<std::size_t> position(c.gates().size());
  const auto order = c.topological_order();
  ASSERT_EQ(order.size(), c.gates().size());
  for (std::size_t i = 0; i < order.size(); ++i) position[order[i].index()] = i;
  for (const auto& g : c.gates()) {
    for (auto in : g.inputs) {
      const auto& d = c.net(in).driver;
      if (d.kind == Driver::Kind::Gate) EXPECT_LT(position[d.index], position[g.id.index()]);
    }
  }
}

TEST(Netlist, WriteParseRoundTrip) {
  for (std::uint64_t seed = 1; seed <= 20; ++seed) {
    const auto c = generate_circuit({.inputs = 4, .flipflops = 4, .gates = 30, .outputs = 2, .seed = seed});
    const auto back = parse_bench(write_bench(c));
    ASSERT_EQ(back.stats(), c.stats());
    for (const auto& g : c.gates()) {
      const auto& out_name = c.net(g.output).name;
      const auto& g2 = back.gate(GateId{static_cast<std::uint32_t>(back.net(net(back, out_name)).driver.index)});
      EXPECT_EQ(g2.kind, g.kind);
      ASSERT_EQ(g2.inputs.size(), g.inputs.size());
      for (std::size_t i = 0; i < g.inputs.size(); ++i) {
        EXPECT_EQ(back.net(g2.inputs[i]).name, c.net(g.inputs[i]).name);
      }
    }
    for (const auto& f : c.flipflops()) {
      const auto& f2 = back.flipflop(back.find_flipflop(f.name).value());
      EXPECT_EQ(back.net(f2.d).name, c.net(f.d).name);
    }
  }
}

TEST(Netlist, BuilderAcceptsForwardReferences) {
  CircuitBuilder b;
  const std::vector<std::string> in{"a", "q"};
  b.add_gate(GateKind::Or, "g", in);
  b.add_flipflop("q", "g");
  b.add_input("a");
  const auto c = b.build();
  EXPECT_EQ(c.stats(), (CircuitStats{1, 1, 1, 0, 3}));
}

TEST(Generator, SeededAndDeterministic) {
  GeneratorParams p{.inputs = 5, .flipflops = 6, .gates = 40, .outputs = 2, .seed = 3};
  EXPECT_EQ(generate_bench(p), generate_bench(p));
  auto q = p;
  q.seed = 4;
  EXPECT_NE(generate_bench(p), generate_bench(q));
  const auto c = generate_circuit(p);
  EXPECT_EQ(c.stats().num_ffs, 6u);
  EXPECT_EQ(c.stats().num_gates, 40u);
  EXPECT_THROW((void)generate_bench({.inputs = 0}), std::invalid_argument);
}
