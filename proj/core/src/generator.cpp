#include "mffu/generator.hpp"

#include <algorithm>
#include <random>
#include <sstream>
#include <stdexcept>
#include <vector>

namespace mffu {

namespace {

// Independent of the standard library's distribution implementations so
// fixtures stay identical across toolchains.
class Rng {
 public:
  explicit Rng(std::uint64_t seed) : engine_(seed) {}
  std::size_t below(std::size_t n) { return static_cast<std::size_t>(engine_() % n); }

 private:
  std::mt19937_64 engine_;
};

constexpr std::pair<GateKind, unsigned> kKindWeights[] = {
    {GateKind::And, 16}, {GateKind::Or, 16},  {GateKind::Nand, 14}, {GateKind::Nor, 14},
    {GateKind::Xor, 10}, {GateKind::Xnor, 6}, {GateKind::Not, 16},  {GateKind::Buff, 8},
};

GateKind pick_kind(Rng& rng) {
  unsigned total = 0;
  for (const auto& [k, w] : kKindWeights) total += w;
  auto roll = static_cast<unsigned>(rng.below(total));
  for (const auto& [k, w] : kKindWeights) {
    if (roll < w) return k;
    roll -= w;
  }
  return GateKind::And;
}

}  // namespace

std::string generate_bench(const GeneratorParams& p) {
  if (p.inputs == 0) throw std::invalid_argument("generated circuits need at least one primary input");
  Rng rng(p.seed);
  std::ostringstream out;
  out << "# generated: inputs=" << p.inputs << " flipflops=" << p.flipflops << " gates=" << p.gates
      << " seed=" << p.seed << "\n";

  std::vector<std::string> pool;
  for (std::size_t i = 0; i < p.inputs; ++i) {
    pool.push_back("i" + std::to_string(i));
    out << "INPUT(" << pool.back() << ")\n";
  }
  for (std::size_t f = 0; f < p.flipflops; ++f) pool.push_back("q" + std::to_string(f));

  std::vector<std::string> gate_outputs;
  std::ostringstream body;
  for (std::size_t g = 0; g < p.gates; ++g) {
    const auto kind = pick_kind(rng);
    const bool unary = kind == GateKind::Not || kind == GateKind::Buff;
    const std::size_t lo = p.window > 0 && pool.size() > p.window ? pool.size() - p.window : 0;
    const std::size_t span = pool.size() - lo;
    std::size_t fanin = unary ? 1 : 2 + rng.below(std::max<std::size_t>(p.max_fanin, 2) - 1);
    fanin = std::min(fanin, span);
    if (span == 0) break;
    if (!unary && fanin < 2) continue;  // not enough distinct nets yet

    // Half of the picks favour earlier gates so cones get depth and reconvergence.
    const std::size_t first_gate = p.inputs + p.flipflops;
    std::vector<std::size_t> picked;
    while (picked.size() < fanin) {
      auto idx = lo + rng.below(span);
      if (p.window == 0 && pool.size() > first_gate && rng.below(2) == 0) {
        idx = first_gate + rng.below(pool.size() - first_gate);
      }
      if (std::find(picked.begin(), picked.end(), idx) == picked.end()) picked.push_back(idx);
    }
    const std::string name = "g" + std::to_string(g);
    body << name << " = " << to_string(kind) << "(";
    for (std::size_t k = 0; k < picked.size(); ++k) body << (k ? ", " : "") << pool[picked[k]];
    body << ")\n";
    pool.push_back(name);
    gate_outputs.push_back(name);
  }

  // Flip-flops capture mostly deep nets.
  const std::vector<std::string> inputs(pool.begin(), pool.begin() + static_cast<std::ptrdiff_t>(p.inputs));
  const auto& sources = gate_outputs.empty() ? inputs : gate_outputs;
  for (std::size_t f = 0; f < p.flipflops; ++f) {
    const auto half = sources.size() / 2;
    out << "q" << f << " = DFF(" << sources[half + rng.below(sources.size() - half)] << ")\n";
  }
  for (std::size_t o = 0; o < p.outputs && !gate_outputs.empty(); ++o) {
    out << "OUTPUT(" << gate_outputs[rng.below(gate_outputs.size())] << ")\n";
  }
  out << body.str();
  return out.str();
}

Circuit generate_circuit(const GeneratorParams& params) { return parse_bench(generate_bench(params)); }

}  // namespace mffu
