#pragma once

#include <array>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include <boost/multiprecision/cpp_int.hpp>

#include "mffu/ffsets.hpp"
#include "mffu/netlist.hpp"

namespace mffu {

using BigInt = boost::multiprecision::cpp_int;

/// Non-empty upset combinations of one set: 2^k - 1.
[[nodiscard]] BigInt injection_count(const FfSet& set);

/// Sum of 2^k - 1 over the unique sets of the collection.
[[nodiscard]] BigInt fault_space_total(const SetCollection& sets);

/// Every non-empty combination of `num_ffs` flip-flops: 2^num_ffs - 1.
[[nodiscard]] BigInt random_multibit_space(std::size_t num_ffs);

/// Statistical fault injection sample size for population `population`,
/// margin `margin`, cut-off `t` and proportion `p`:
///   n = N / (1 + e^2 (N - 1) / (t^2 p (1 - p)))
/// rounded half up and clamped to [1, N]. Throws std::domain_error outside
/// N >= 1, 0 < e < 1, t > 0, 0 < p < 1.
[[nodiscard]] BigInt sfi_sample_size(const BigInt& population, double margin, double t, double p = 0.5);

/// Normal cut-off for the supported confidence levels (0.90, 0.95, 0.998).
/// Throws std::domain_error for other levels.
[[nodiscard]] double cutoff_for_confidence(double confidence);

/// "d.ddE+xx" with round-half-up on the decimal expansion, e.g. 18 -> "1.80E+01".
[[nodiscard]] std::string to_scientific(const BigInt& value, int significant_digits = 3);

enum class Method : std::uint8_t { Static, Propagated, Random };

[[nodiscard]] std::string_view to_string(Method method);

struct FaultSpaceReport {
  Method method = Method::Static;
  std::size_t num_sets = 0;
  std::size_t num_unique = 0;
  std::size_t max_multiplicity = 0;
  BigInt total_faults;
};

struct SfiPlan {
  Method method = Method::Static;
  BigInt population;
  double confidence = 0.95;
  double t = 1.96;
  double margin = 0.05;
  double p = 0.5;
  BigInt sample;
};

struct CampaignReport {
  CircuitStats stats;
  std::array<FaultSpaceReport, 3> methods;  // static, propagated, random
  std::vector<SfiPlan> plans;               // method-major, margins in the given order
  std::optional<double> static_over_propagated;
  std::optional<double> random_over_propagated;

  [[nodiscard]] const FaultSpaceReport& method(Method m) const { return methods[static_cast<std::size_t>(m)]; }
};

/// Fault-space comparison of the three planning methods plus one SFI plan
/// per (method, margin). Ratios are absent when the propagated total is 0.
[[nodiscard]] CampaignReport compare_methods(const Circuit& c, const SetCollection& static_sets,
                                             const SetCollection& optimized, std::span<const double> margins,
                                             double confidence = 0.95);

/// SFI plans for a bare population, one per margin.
[[nodiscard]] std::vector<SfiPlan> sfi_plans(const BigInt& population, std::span<const double> margins,
                                             double confidence = 0.95, Method method = Method::Static);

}  // namespace mffu
