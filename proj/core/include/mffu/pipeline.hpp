#pragma once

#include <cstdint>
#include <filesystem>
#include <iosfwd>
#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

#include "mffu/cones.hpp"

namespace mffu {

struct RunConfig {
  std::string input;  // .bench or circuit .json; empty = read upstream artifacts from `out_dir`
  SiteMode mode = SiteMode::Collapsed;
  std::vector<std::string> exclude;
  std::size_t pattern_cap = 4096;
  std::uint64_t conflict_cap = 1'000'000;
  std::vector<double> margins{0.05, 0.01, 0.001};
  double confidence = 0.95;
  std::filesystem::path out_dir = "mffu-out";
  std::size_t jobs = 1;
  std::uint64_t seed = 0;
  bool dimacs = false;     // write cnf/site_<id>.cnf per analyzed site
  bool timestamp = true;   // add generated_at to report.json
};

/// Checks margins, jobs and confidence; throws std::invalid_argument.
void validate(const RunConfig& cfg);

enum class Stage : std::uint8_t { Parse, Cones, Sets, Propagate, Report };

[[nodiscard]] std::string_view to_string(Stage stage);

namespace exit_code {
inline constexpr int kOk = 0;
inline constexpr int kUsage = 1;
inline constexpr int kParse = 2;
inline constexpr int kIo = 3;
inline constexpr int kMissingArtifact = 4;
}  // namespace exit_code

/// Error carrying the process exit code the CLI should return.
class PipelineError : public std::runtime_error {
 public:
  PipelineError(int code, const std::string& message) : std::runtime_error(message), code_(code) {}
  [[nodiscard]] int code() const { return code_; }

 private:
  int code_;
};

/// Runs the pipeline up to and including `last` and writes that stage's
/// artifacts (plus circuit.json) into `cfg.out_dir`. With `cfg.input` empty
/// the stage's inputs are read from the artifacts of the previous stage.
/// `full` writes every stage's artifacts. Progress goes to `log`.
/// Throws PipelineError.
void run_stage(Stage last, const RunConfig& cfg, std::ostream& log, bool full = false);

/// Full pipeline; returns the process exit code and reports errors to `log`.
int run_pipeline(const RunConfig& cfg, std::ostream& log);

}  // namespace mffu
