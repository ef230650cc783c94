#pragma once

#include <cstdint>
#include <string>

#include "mffu/netlist.hpp"

namespace mffu {

/// Shape of a seeded random sequential circuit. Gates only read nets created
/// before them, so the result is acyclic by construction.
struct GeneratorParams {
  std::size_t inputs = 4;
  std::size_t flipflops = 4;
  std::size_t gates = 20;
  std::size_t outputs = 2;
  std::size_t max_fanin = 3;
  std::size_t window = 0;  // gates read only the last `window` nets; 0 = any earlier net
  std::uint64_t seed = 1;
};

[[nodiscard]] std::string generate_bench(const GeneratorParams& params);
[[nodiscard]] Circuit generate_circuit(const GeneratorParams& params);

}  // namespace mffu
