// mffu: plan multiple-bit upset injection campaigns from a .bench netlist.

#include <iostream>
#include <map>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "mffu/campaign.hpp"
#include "mffu/generator.hpp"
#include "mffu/io.hpp"
#include "mffu/pipeline.hpp"

namespace {

int sfi_only(const std::string& population, const mffu::RunConfig& cfg) {
  mffu::BigInt n;
  try {
    n = mffu::BigInt(population);
  } catch (const std::exception&) {
    std::cerr << "error: --population must be a non-negative integer, got '" << population << "'\n";
    return mffu::exit_code::kUsage;
  }
  try {
    mffu::validate(cfg);
    const auto plans = mffu::sfi_plans(n, cfg.margins, cfg.confidence);
    nlohmann::json out{{"population", n.str()}, {"confidence", cfg.confidence}};
    for (const auto& p : plans) out["n(" + mffu::io::margin_label(p.margin) + ")"] = p.sample.str();
    out["plans"] = mffu::io::sfi_plans_to_json(plans);
    std::cout << out.dump(2) << '\n';
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << '\n';
    return mffu::exit_code::kUsage;
  }
  return mffu::exit_code::kOk;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Multiple flip-flop upset set analysis and fault-injection campaign sizing"};
  app.set_config("--config", "", "Flat key = value file; command-line flags override it");
  app.require_subcommand(1);
  app.fallthrough();

  mffu::RunConfig cfg;
  std::string mode = "collapsed";
  std::string population;
  bool sfi = false;
  bool no_timestamp = false;

  app.add_option("--input,-i", cfg.input, "ISCAS-89 .bench netlist");
  app.add_option("--mode", mode, "Fault-site mode")->check(CLI::IsMember({"collapsed", "all_nets"}));
  app.add_option("--exclude", cfg.exclude, "Nets to exclude (clock/reset/scan)")->delimiter(',');
  app.add_option("--pattern-cap", cfg.pattern_cap, "Maximum patterns enumerated per site")
      ->check(CLI::PositiveNumber);
  app.add_option("--conflict-cap", cfg.conflict_cap, "SAT conflict limit per call")->check(CLI::PositiveNumber);
  app.add_option("--margins", cfg.margins, "SFI error margins")->delimiter(',')->check(CLI::Range(0.0, 1.0));
  app.add_option("--confidence", cfg.confidence, "SFI confidence level (0.90, 0.95, 0.998)");
  app.add_option("--out,-o", cfg.out_dir, "Artifact directory");
  app.add_option("--jobs,-j", cfg.jobs, "Worker threads for propagation")->check(CLI::PositiveNumber);
  app.add_option("--seed", cfg.seed, "Seed for solver heuristics and generated circuits");
  app.add_flag("--dimacs", cfg.dimacs, "Also write one DIMACS file per fault site");
  app.add_flag("--no-timestamp", no_timestamp, "Omit generated_at from report.json");

  const std::map<std::string, mffu::Stage> stages{{"parse", mffu::Stage::Parse},
                                                  {"cones", mffu::Stage::Cones},
                                                  {"sets", mffu::Stage::Sets},
                                                  {"propagate", mffu::Stage::Propagate},
                                                  {"report", mffu::Stage::Report}};
  app.add_subcommand("parse", "Parse the netlist and write circuit.json");
  app.add_subcommand("cones", "Write fan-in cones and fault sites");
  app.add_subcommand("sets", "Write the static flip-flop sets");
  app.add_subcommand("propagate", "Enumerate achievable upset patterns and optimized sets");
  auto* report = app.add_subcommand("report", "Write fault-space and SFI sample-size reports");
  report->add_flag("--sfi-only", sfi, "Only compute SFI sample sizes for --population");
  report->add_option("--population", population, "Fault population for --sfi-only");
  app.add_subcommand("run", "Run every stage and write all artifacts");

  mffu::GeneratorParams gen;
  auto* generate = app.add_subcommand("generate", "Print a seeded random .bench circuit");
  generate->add_option("--inputs", gen.inputs)->check(CLI::PositiveNumber);
  generate->add_option("--flipflops", gen.flipflops);
  generate->add_option("--gates", gen.gates);
  generate->add_option("--outputs", gen.outputs);
  generate->add_option("--max-fanin", gen.max_fanin)->check(CLI::Range(1, 16));
  generate->add_option("--window", gen.window);

  CLI11_PARSE(app, argc, argv);

  cfg.mode = mode == "all_nets" ? mffu::SiteMode::AllNets : mffu::SiteMode::Collapsed;
  cfg.timestamp = !no_timestamp;

  if (generate->parsed()) {
    gen.seed = cfg.seed;
    try {
      std::cout << mffu::generate_bench(gen);
    } catch (const std::exception& e) {
      std::cerr << "error: " << e.what() << '\n';
      return mffu::exit_code::kUsage;
    }
    return mffu::exit_code::kOk;
  }
  if (sfi) {
    if (population.empty()) {
      std::cerr << "error: --sfi-only needs --population\n";
      return mffu::exit_code::kUsage;
    }
    return sfi_only(population, cfg);
  }

  const auto* sub = app.get_subcommands().front();
  if (sub->get_name() == "run") return mffu::run_pipeline(cfg, std::cerr);
  try {
    mffu::run_stage(stages.at(sub->get_name()), cfg, std::cerr);
  } catch (const mffu::PipelineError& e) {
    std::cerr << "error: " << e.what() << '\n';
    return e.code();
  }
  return mffu::exit_code::kOk;
}
