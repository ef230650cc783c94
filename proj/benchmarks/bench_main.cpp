#include <benchmark/benchmark.h>

#include <random>

#include "mffu/cones.hpp"
#include "mffu/generator.hpp"
#include "mffu/propagation.hpp"
#include "mffu/sat_solver.hpp"

using namespace mffu;

namespace {

CnfFormula random_3cnf(int vars, double ratio, std::uint64_t seed) {
  std::mt19937_64 rng(seed);
  CnfFormula f;
  for (int v = 0; v < vars; ++v) f.new_var();
  const int clauses = static_cast<int>(vars * ratio);
  for (int k = 0; k < clauses; ++k) {
    std::vector<int> cl;
    for (int j = 0; j < 3; ++j) {
      const int v = 1 + static_cast<int>(rng() % static_cast<std::uint64_t>(vars));
      cl.push_back(rng() & 1 ? -v : v);
    }
    f.add_clause(cl);
  }
  return f;
}

GeneratorParams scale_params(std::size_t gates) {
  GeneratorParams p;
  p.inputs = 20;
  p.flipflops = gates / 10;
  p.gates = gates;
  p.outputs = 10;
  p.window = 40;
  p.seed = 13;
  return p;
}

}  // namespace

static void BM_SolveRandom3Cnf(benchmark::State& state) {
  const auto f = random_3cnf(static_cast<int>(state.range(0)), 4.26, 7);
  for (auto _ : state) benchmark::DoNotOptimize(sat_solve(f, {}, {}));
}
BENCHMARK(BM_SolveRandom3Cnf)->Arg(50)->Arg(100)->Arg(150);

static void BM_ParseBench(benchmark::State& state) {
  const auto text = generate_bench(scale_params(static_cast<std::size_t>(state.range(0))));
  for (auto _ : state) benchmark::DoNotOptimize(parse_bench(text));
  state.SetBytesProcessed(static_cast<std::int64_t>(state.iterations() * text.size()));
}
BENCHMARK(BM_ParseBench)->Arg(500)->Arg(5000);

static void BM_EnumerateAllPatterns(benchmark::State& state) {
  const auto c = generate_circuit(scale_params(static_cast<std::size_t>(state.range(0))));
  const auto sites = enumerate_fault_sites(c, SiteMode::Collapsed);
  for (auto _ : state) benchmark::DoNotOptimize(enumerate_all_patterns(c, sites, {}));
}
BENCHMARK(BM_EnumerateAllPatterns)->Arg(200)->Arg(500)->Unit(benchmark::kMillisecond);

static void BM_FaultSites(benchmark::State& state) {
  const auto c = generate_circuit(scale_params(static_cast<std::size_t>(state.range(0))));
  for (auto _ : state) benchmark::DoNotOptimize(enumerate_fault_sites(c, SiteMode::Collapsed));
}
BENCHMARK(BM_FaultSites)->Arg(500)->Arg(5000);
BENCHMARK_MAIN();
