#include "mffu/pipeline.hpp"

#include <chrono>
#include <ctime>
#include <fstream>
#include <iomanip>
#include <iostream>
#include <sstream>

#include "mffu/campaign.hpp"
#include "mffu/cnf.hpp"
#include "mffu/ffsets.hpp"
#include "mffu/io.hpp"
#include "mffu/netlist.hpp"
#include "mffu/propagation.hpp"

namespace mffu {

namespace fs = std::filesystem;
using io::json;

namespace {

constexpr const char* kCircuit = "circuit.json";
constexpr const char* kCones = "cones.json";
constexpr const char* kSites = "sites.json";
constexpr const char* kSets = "sets.json";
constexpr const char* kSetsCsv = "sets.csv";
constexpr const char* kPatterns = "patterns.json";
constexpr const char* kOptimized = "optimized_sets.json";
constexpr const char* kOptimizedCsv = "optimized_sets.csv";
constexpr const char* kReport = "report.json";
constexpr const char* kReportCsv = "report.csv";

std::string read_file(const fs::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw PipelineError(exit_code::kIo, "cannot read " + path.string());
  std::ostringstream buf;
  buf << in.rdbuf();
  return buf.str();
}

void write_file(const fs::path& path, const std::string& text) {
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) throw PipelineError(exit_code::kIo, "cannot write " + path.string());
  out << text;
  if (!out.flush()) throw PipelineError(exit_code::kIo, "write failed for " + path.string());
}

void write_json(const fs::path& path, const json& j) { write_file(path, j.dump(2) + "\n"); }

json read_artifact(const fs::path& dir, const char* name, Stage producer) {
  const auto path = dir / name;
  if (!fs::exists(path)) {
    throw PipelineError(exit_code::kMissingArtifact, "missing upstream artifact " + path.string() + " (stage '" +
                                                         std::string(to_string(producer)) + "')");
  }
  try {
    return json::parse(read_file(path));
  } catch (const json::parse_error& e) {
    throw PipelineError(exit_code::kUsage, path.string() + ": " + e.what());
  }
}

std::string utc_timestamp() {
  const auto now = std::chrono::system_clock::to_time_t(std::chrono::system_clock::now());
  std::tm tm{};
  gmtime_r(&now, &tm);
  std::ostringstream out;
  out << std::put_time(&tm, "%Y-%m-%dT%H:%M:%SZ");
  return out.str();
}

// Everything computed so far; stages fill it in order.
struct State {
  std::optional<Circuit> circuit;
  SiteMode mode = SiteMode::Collapsed;
  std::vector<FaultSite> sites;
  std::optional<SetCollection> static_sets;
  std::optional<OptimizedSets> optimized;
  std::optional<SetCollection> optimized_collection;
};

void do_parse(const RunConfig& cfg, State& st, std::ostream& log) {
  const auto text = read_file(cfg.input);
  try {
    if (fs::path(cfg.input).extension() == ".json") {
      st.circuit = io::circuit_from_json(json::parse(text));
      if (!cfg.exclude.empty()) log << "parse: --exclude ignored for JSON circuits (use their \"excluded\" list)\n";
    } else {
      st.circuit = parse_bench(text, cfg.exclude);
    }
  } catch (const NetlistError& e) {
    throw PipelineError(exit_code::kParse, cfg.input + ": " + e.what());
  } catch (const json::exception& e) {
    throw PipelineError(exit_code::kParse, cfg.input + ": " + e.what());
  } catch (const io::ArtifactError& e) {
    throw PipelineError(exit_code::kParse, cfg.input + ": " + e.what());
  }
  const auto s = st.circuit->stats();
  log << "parse: " << s.num_pis << " inputs, " << s.num_pos << " outputs, " << s.num_ffs << " flip-flops, "
      << s.num_gates << " gates, " << s.num_nets << " nets\n";
}

void do_cones(const RunConfig& cfg, State& st, std::ostream& log) {
  st.mode = cfg.mode;
  st.sites = enumerate_fault_sites(*st.circuit, cfg.mode);
  log << "cones: " << st.sites.size() << " fault sites (" << to_string(cfg.mode) << ")\n";
}

void do_sets(State& st, std::ostream& log) {
  st.static_sets = collect_static_sets(st.sites, st.circuit->flipflops().size());
  log << "sets: " << st.static_sets->num_sets() << " static sets, " << st.static_sets->num_unique() << " unique\n";
}

void do_propagate(const RunConfig& cfg, State& st, std::vector<PatternResult>& results, std::ostream& log) {
  PropagationOptions options;
  options.pattern_cap = cfg.pattern_cap;
  options.solver.conflict_limit = cfg.conflict_cap;
  options.solver.seed = cfg.seed;

  // Only sites that own a static set need a miter.
  std::vector<FaultSite> work;
  for (const auto& s : st.sites) {
    if (!s.po_only) work.push_back(s);
  }
  results = enumerate_all_patterns(*st.circuit, work, options, cfg.jobs);
  std::size_t overflow = 0;
  std::size_t unknown = 0;
  for (const auto& r : results) {
    log << "propagate: site " << st.circuit->net(r.site).name << ' ' << to_string(r.status) << ' '
        << r.patterns.size() << " patterns " << std::fixed << std::setprecision(3) << r.seconds * 1e3 << " ms\n"
        << std::defaultfloat;
    overflow += r.status == PatternStatus::Overflow;
    unknown += r.status == PatternStatus::Unknown;
  }
  st.optimized = optimize_sets(*st.static_sets, results);
  st.optimized_collection = st.optimized->collection;
  log << "propagate: " << results.size() << " sites, " << overflow << " overflow, " << unknown << " unknown, "
      << st.optimized_collection->num_unique() << " optimized sets\n";
}

void write_dimacs_files(const RunConfig& cfg, const State& st) {
  const auto dir = cfg.out_dir / "cnf";
  std::error_code ec;
  fs::create_directories(dir, ec);
  if (ec) throw PipelineError(exit_code::kIo, "cannot create " + dir.string() + ": " + ec.message());
  for (const auto& s : st.sites) {
    if (s.po_only) continue;
    const auto cnf = encode_cnf(*st.circuit, build_miter(*st.circuit, s));
    std::ostringstream out;
    write_dimacs(out, cnf.formula);
    write_file(dir / ("site_" + std::to_string(s.net.value) + ".cnf"), out.str());
  }
}

}  // namespace

std::string_view to_string(Stage stage) {
  switch (stage) {
    case Stage::Parse: return "parse";
    case Stage::Cones: return "cones";
    case Stage::Sets: return "sets";
    case Stage::Propagate: return "propagate";
    case Stage::Report: return "report";
  }
  return "?";
}

void validate(const RunConfig& cfg) {
  if (cfg.jobs < 1) throw std::invalid_argument("jobs must be at least 1");
  if (cfg.pattern_cap < 1) throw std::invalid_argument("pattern cap must be at least 1");
  if (cfg.margins.empty()) throw std::invalid_argument("at least one margin is required");
  for (double m : cfg.margins) {
    if (!(m > 0.0 && m < 1.0)) throw std::invalid_argument("margin " + std::to_string(m) + " is outside (0, 1)");
  }
  (void)cutoff_for_confidence(cfg.confidence);
}

void run_stage(Stage last, const RunConfig& cfg, std::ostream& log, bool full) {
  try {
    validate(cfg);
  } catch (const std::exception& e) {
    throw PipelineError(exit_code::kUsage, e.what());
  }
  std::error_code ec;
  fs::create_directories(cfg.out_dir, ec);
  if (ec) throw PipelineError(exit_code::kIo, "cannot create " + cfg.out_dir.string() + ": " + ec.message());

  const auto& dir = cfg.out_dir;
  const bool from_input = !cfg.input.empty();
  auto emits = [&](Stage s) { return s == last || (full && s < last); };

  State st;
  std::vector<PatternResult> results;
  try {
    if (from_input) {
      do_parse(cfg, st, log);
    } else if (last == Stage::Parse) {
      throw PipelineError(exit_code::kUsage, "stage 'parse' needs --input");
    } else {
      st.circuit = io::circuit_from_json(read_artifact(dir, kCircuit, Stage::Parse));
    }
    write_json(dir / kCircuit, io::circuit_to_json(*st.circuit));
    if (last == Stage::Parse) return;

    if (from_input || last == Stage::Cones) {
      do_cones(cfg, st, log);
    } else {
      const auto j = read_artifact(dir, kSites, Stage::Cones);
      st.sites = io::sites_from_json(*st.circuit, j);
      st.mode = j.at("mode").get<std::string>() == to_string(SiteMode::AllNets) ? SiteMode::AllNets
                                                                                 : SiteMode::Collapsed;
    }
    if (emits(Stage::Cones)) {
      write_json(dir / kCones, io::cones_to_json(*st.circuit, extract_all_cones(*st.circuit)));
      write_json(dir / kSites, io::sites_to_json(*st.circuit, st.sites, st.mode));
    }
    if (last == Stage::Cones) return;

    if (from_input || last == Stage::Sets) {
      do_sets(st, log);
    } else {
      st.static_sets = io::sets_from_json(*st.circuit, read_artifact(dir, kSets, Stage::Sets));
    }
    if (emits(Stage::Sets)) {
      write_json(dir / kSets, io::sets_to_json(*st.circuit, *st.static_sets));
      write_file(dir / kSetsCsv, io::sets_to_csv(*st.circuit, *st.static_sets));
    }
    if (last == Stage::Sets) return;

    if (from_input || last == Stage::Propagate) {
      do_propagate(cfg, st, results, log);
    } else {
      st.optimized_collection = io::sets_from_json(*st.circuit, read_artifact(dir, kOptimized, Stage::Propagate));
    }
    if (emits(Stage::Propagate) && st.optimized) {
      write_json(dir / kPatterns, io::patterns_to_json(*st.circuit, results, *st.optimized));
      write_json(dir / kOptimized, io::sets_to_json(*st.circuit, *st.optimized_collection));
      write_file(dir / kOptimizedCsv, io::sets_to_csv(*st.circuit, *st.optimized_collection));
      if (cfg.dimacs) write_dimacs_files(cfg, st);
    }
    if (last == Stage::Propagate) return;

    const auto report =
        compare_methods(*st.circuit, *st.static_sets, *st.optimized_collection, cfg.margins, cfg.confidence);
    auto j = io::report_to_json(report);
    if (cfg.timestamp) j["generated_at"] = utc_timestamp();
    write_json(dir / kReport, j);
    write_file(dir / kReportCsv, io::report_to_csv(report));
    log << "report: static " << to_scientific(report.method(Method::Static).total_faults) << ", propagated "
        << to_scientific(report.method(Method::Propagated).total_faults) << ", random "
        << to_scientific(report.method(Method::Random).total_faults) << '\n';
  } catch (const PipelineError&) {
    throw;
  } catch (const io::ArtifactError& e) {
    throw PipelineError(exit_code::kUsage, e.what());
  } catch (const json::exception& e) {
    throw PipelineError(exit_code::kUsage, std::string("malformed artifact: ") + e.what());
  } catch (const fs::filesystem_error& e) {
    throw PipelineError(exit_code::kIo, e.what());
  } catch (const std::exception& e) {
    throw PipelineError(exit_code::kUsage, e.what());
  }
}

int run_pipeline(const RunConfig& cfg, std::ostream& log) {
  try {
    run_stage(Stage::Report, cfg, log, true);
    return exit_code::kOk;
  } catch (const PipelineError& e) {
    log << "error: " << e.what() << '\n';
    return e.code();
  }
}

}  // namespace mffu
