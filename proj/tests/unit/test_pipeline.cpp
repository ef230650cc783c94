#include <gtest/gtest.h>

#include <sys/wait.h>

#include <cstdlib>
#include <fstream>
#include <sstream>

#include "helpers.hpp"
#include "mffu/generator.hpp"
#include "mffu/io.hpp"
#include "mffu/pipeline.hpp"

using namespace mffu;
namespace fs = std::filesystem;
using io::json;

namespace {

json read_json(const fs::path& p) { return json::parse(test::read_text(p)); }

RunConfig config_for(const fs::path& input, const fs::path& out) {
  RunConfig cfg;
  cfg.input = input.string();
  cfg.out_dir = out;
  cfg.timestamp = false;
  return cfg;
}

fs::path write_bench(const fs::path& dir, const std::string& name, const std::string& text) {
  const auto p = dir / name;
  std::ofstream(p) << text;
  return p;
}

struct CliResult {
  int code;
  std::string out;
};

CliResult run_cli(const std::string& args, const fs::path& dir) {
  const auto out = dir / "stdout.txt";
  const auto cmd = std::string(MFFU_CLI) + " " + args + " > " + out.string() + " 2> " + (dir / "stderr.txt").string();
  const int status = std::system(cmd.c_str());
  return {WIFEXITED(status) ? WEXITSTATUS(status) : -1, test::read_text(out)};
}

}  // namespace

TEST(Pipeline, SingleFlipFlopCircuit) {
  const auto dir = test::scratch("single_ff");
  const auto input = write_bench(dir, "one.bench", "INPUT(a)\nq = DFF(a)\nOUTPUT(q)\n");
  std::ostringstream log;
  ASSERT_EQ(run_pipeline(config_for(input, dir / "out"), log), 0) << log.str();
  const auto report = read_json(dir / "out" / "report.json");
  for (const auto& m : report.at("methods")) EXPECT_EQ(m.at("total_faults"), "1") << m.at("method");
  for (const char* f : {"circuit.json", "cones.json", "sites.json", "sets.json", "sets.csv", "patterns.json",
                        "optimized_sets.json", "optimized_sets.csv", "report.json", "report.csv"}) {
    EXPECT_TRUE(fs::exists(dir / "out" / f)) << f;
  }
}

TEST(Pipeline, IntersectionSetsAndOptimized) {
  const auto dir = test::scratch("intersection");
  std::ostringstream log;
  ASSERT_EQ(run_pipeline(config_for(test::data_path("intersection.bench"), dir), log), 0) << log.str();
  const auto cones = read_json(dir / "sets.json").at("cones");
  ASSERT_EQ(cones.size(), 4u);
  EXPECT_EQ(cones[0].at("members"), (json{"A", "B"}));
  EXPECT_EQ(cones[1].at("members"), (json{"A", "B", "C"}));
  EXPECT_EQ(cones[2].at("members"), (json{"B", "C", "D"}));
  EXPECT_EQ(cones[3].at("members"), (json{"C", "D"}));
  const auto opt = read_json(dir / "optimized_sets.json").at("cones");
  EXPECT_EQ(opt[1].at("members"), (json{"A", "B"}));
  EXPECT_EQ(opt[2].at("members"), (json{"C"}));
}

TEST(Pipeline, StagesComposeToFullRun) {
  const auto dir = test::scratch("compose");
  const auto input = write_bench(dir, "g.bench", generate_bench({.inputs = 5, .flipflops = 6, .gates = 60, .seed = 4}));
  std::ostringstream log;
  auto full = config_for(input, dir / "full");
  ASSERT_EQ(run_pipeline(full, log), 0);

  auto staged = config_for(input, dir / "staged");
  run_stage(Stage::Cones, staged, log);
  staged.input.clear();
  run_stage(Stage::Sets, staged, log);
  run_stage(Stage::Propagate, staged, log);
  run_stage(Stage::Report, staged, log);
  for (const char* f : {"circuit.json", "sites.json", "sets.json", "patterns.json", "optimized_sets.json",
                        "report.json", "report.csv"}) {
    EXPECT_EQ(test::read_text(dir / "full" / f), test::read_text(dir / "staged" / f)) << f;
  }

  // A stage given --input emits only its own artifacts (plus circuit.json).
  auto direct = config_for(input, dir / "direct");
  run_stage(Stage::Sets, direct, log);
  EXPECT_TRUE(fs::exists(dir / "direct" / "sets.json"));
  EXPECT_FALSE(fs::exists(dir / "direct" / "sites.json"));
  EXPECT_EQ(test::read_text(dir / "direct" / "sets.json"), test::read_text(dir / "full" / "sets.json"));
}

TEST(Pipeline, DeterministicAcrossRunsAndJobs) {
  const auto dir = test::scratch("determinism");
  const auto input =
      write_bench(dir, "g.bench", generate_bench({.inputs = 8, .flipflops = 10, .gates = 100, .seed = 17}));
  std::ostringstream log;
  auto a = config_for(input, dir / "a");
  a.timestamp = true;
  auto b = config_for(input, dir / "b");
  b.timestamp = true;
  b.jobs = 4;
  ASSERT_EQ(run_pipeline(a, log), 0);
  ASSERT_EQ(run_pipeline(b, log), 0);
  auto ja = read_json(dir / "a" / "report.json");
  auto jb = read_json(dir / "b" / "report.json");
  EXPECT_TRUE(ja.contains("generated_at"));
  ja.erase("generated_at");
  jb.erase("generated_at");
  EXPECT_EQ(ja, jb);
  EXPECT_EQ(test::read_text(dir / "a" / "patterns.json"), test::read_text(dir / "b" / "patterns.json"));
}

TEST(Pipeline, ErrorsMapToExitCodes) {
  const auto dir = test::scratch("errors");
  std::ostringstream log;
  const auto bad = write_bench(dir, "bad.bench", "INPUT(a)\nb = AND(a)\n");
  EXPECT_EQ(run_pipeline(config_for(bad, dir / "o1"), log), exit_code::kParse);
  EXPECT_NE(log.str().find("line 2"), std::string::npos) << log.str();
  EXPECT_EQ(run_pipeline(config_for(dir / "missing.bench", dir / "o2"), log), exit_code::kIo);

  RunConfig empty;
  empty.out_dir = dir / "o3";
  try {
    run_stage(Stage::Report, empty, log);
    FAIL();
  } catch (const PipelineError& e) {
    EXPECT_EQ(e.code(), exit_code::kMissingArtifact);
    EXPECT_NE(std::string(e.what()).find("parse"), std::string::npos);
  }
  auto cfg = config_for(test::data_path("s27.bench"), dir / "o4");
  run_stage(Stage::Parse, cfg, log);
  cfg.input.clear();
  try {
    run_stage(Stage::Propagate, cfg, log);
    FAIL();
  } catch (const PipelineError& e) {
    EXPECT_EQ(e.code(), exit_code::kMissingArtifact);
    EXPECT_NE(std::string(e.what()).find("'cones'"), std::string::npos) << e.what();
  }
  auto bad_margin = config_for(test::data_path("s27.bench"), dir / "o5");
  bad_margin.margins = {1.5};
  EXPECT_EQ(run_pipeline(bad_margin, log), exit_code::kUsage);
}

TEST(Cli, ParseErrorExitsTwoWithLine) {
  const auto dir = test::scratch("cli_parse");
  const auto bad = write_bench(dir, "bad.bench", "INPUT(a)\nINPUT(b)\nc = FOO(a, b)\n");
  EXPECT_EQ(run_cli("parse --input " + bad.string() + " --out " + (dir / "o").string(), dir).code, 2);
  EXPECT_NE(test::read_text(dir / "stderr.txt").find("line 3"), std::string::npos);
}

TEST(Cli, SfiOnlyPopulation) {
  const auto dir = test::scratch("cli_sfi");
  const auto r = run_cli("report --sfi-only --population 4140", dir);
  ASSERT_EQ(r.code, 0);
  const auto j = json::parse(r.out);
  EXPECT_EQ(j.at("n(5%)"), "352");
}

TEST(Cli, MissingArtifactExitsFour) {
  const auto dir = test::scratch("cli_missing");
  EXPECT_EQ(run_cli("sets --out " + (dir / "o").string(), dir).code, 4);
  EXPECT_NE(test::read_text(dir / "stderr.txt").find("parse"), std::string::npos);
}

TEST(Cli, ConfigFileWithFlagOverride) {
  const auto dir = test::scratch("cli_config");
  std::ofstream(dir / "run.cfg") << "input = " << test::data_path("intersection.bench").string() << "\n"
                                 << "out = " << (dir / "from_config").string() << "\n"
                                 << "margins = 0.05\n"
                                 << "no-timestamp = true\n";
  ASSERT_EQ(run_cli("run --config " + (dir / "run.cfg").string(), dir).code, 0);
  EXPECT_TRUE(fs::exists(dir / "from_config" / "report.json"));
  EXPECT_EQ(read_json(dir / "from_config" / "report.json").at("sfi_plans").size(), 3u);
  ASSERT_EQ(run_cli("run --config " + (dir / "run.cfg").string() + " --out " + (dir / "override").string(), dir).code,
            0);
  EXPECT_TRUE(fs::exists(dir / "override" / "report.json"));
}

TEST(Cli, GenerateIsSeeded) {
  const auto dir = test::scratch("cli_generate");
  const auto a = run_cli("generate --gates 30 --flipflops 4 --seed 3", dir).out;
  const auto b = run_cli("generate --gates 30 --flipflops 4 --seed 3", dir).out;
  EXPECT_EQ(a, b);
  EXPECT_EQ(parse_bench(a).stats().num_gates, 30u);
}
