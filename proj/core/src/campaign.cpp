#include "mffu/campaign.hpp"

#include <cmath>
#include <cstdio>
#include <stdexcept>

#include <boost/multiprecision/cpp_dec_float.hpp>

namespace mffu {

namespace {

using Decimal = boost::multiprecision::cpp_dec_float_50;

FaultSpaceReport report_for(Method method, const SetCollection& sets) {
  return {method, sets.num_sets(), sets.num_unique(), sets.max_multiplicity(), fault_space_total(sets)};
}

std::optional<double> ratio(const BigInt& num, const BigInt& den) {
  if (den == 0) return std::nullopt;
  return static_cast<double>(Decimal(num) / Decimal(den));
}

}  // namespace

BigInt injection_count(const FfSet& set) {
  BigInt one = 1;
  return (one << set.multiplicity()) - 1;
}

BigInt fault_space_total(const SetCollection& sets) {
  BigInt total = 0;
  for (const auto& u : sets.unique_sets()) total += injection_count(u.set);
  return total;
}

BigInt random_multibit_space(std::size_t num_ffs) {
  BigInt one = 1;
  return (one << num_ffs) - 1;
}

BigInt sfi_sample_size(const BigInt& population, double margin, double t, double p) {
  if (population < 1) throw std::domain_error("SFI population must be at least 1");
  if (!(margin > 0.0 && margin < 1.0)) throw std::domain_error("SFI margin must lie in (0, 1)");
  if (!(t > 0.0)) throw std::domain_error("SFI cut-off t must be positive");
  if (!(p > 0.0 && p < 1.0)) throw std::domain_error("SFI proportion p must lie in (0, 1)");

  const Decimal n_pop(population);
  const Decimal e(margin);
  const Decimal cut(t);
  const Decimal prop(p);
  const Decimal denom = 1 + e * e * (n_pop - 1) / (cut * cut * prop * (1 - prop));
  const Decimal exact = n_pop / denom;
  BigInt n = static_cast<BigInt>(boost::multiprecision::floor(exact + Decimal(0.5)));
  if (n < 1) n = 1;
  if (n > population) n = population;
  return n;
}

double cutoff_for_confidence(double confidence) {
  if (std::abs(confidence - 0.90) < 1e-9) return 1.645;
  if (std::abs(confidence - 0.95) < 1e-9) return 1.96;
  if (std::abs(confidence - 0.998) < 1e-9) return 3.09;
  throw std::domain_error("unsupported confidence level " + std::to_string(confidence) +
                          " (expected 0.90, 0.95 or 0.998)");
}

std::string to_scientific(const BigInt& value, int significant_digits) {
  if (value < 0) return "-" + to_scientific(-value, significant_digits);
  const auto sig = static_cast<std::size_t>(std::max(significant_digits, 1));
  std::string digits = value.str();
  long exponent = static_cast<long>(digits.size()) - 1;
  if (value == 0) exponent = 0;
  if (digits.size() > sig) {
    const bool round_up = digits[sig] >= '5';
    digits.resize(sig);
    if (round_up) {
      std::size_t i = sig;
      while (i > 0 && digits[i - 1] == '9') digits[--i] = '0';
      if (i == 0) {
        digits.insert(digits.begin(), '1');
        digits.pop_back();
        ++exponent;
      } else {
        ++digits[i - 1];
      }
    }
  }
  digits.resize(sig, '0');
  std::string out(1, digits[0]);
  if (sig > 1) out += "." + digits.substr(1);
  char exp[32];
  std::snprintf(exp, sizeof exp, "E%c%02ld", exponent < 0 ? '-' : '+', std::labs(exponent));
  return out + exp;
}

std::string_view to_string(Method method) {
  switch (method) {
    case Method::Static: return "static";
    case Method::Propagated: return "propagated";
    case Method::Random: return "random";
  }
  return "?";
}

std::vector<SfiPlan> sfi_plans(const BigInt& population, std::span<const double> margins, double confidence,
                               Method method) {
  const double t = cutoff_for_confidence(confidence);
  std::vector<SfiPlan> plans;
  for (double e : margins) {
    SfiPlan plan{method, population, confidence, t, e, 0.5, 0};
    if (population >= 1) plan.sample = sfi_sample_size(population, e, t, plan.p);
    plans.push_back(std::move(plan));
  }
  return plans;
}

CampaignReport compare_methods(const Circuit& c, const SetCollection& static_sets, const SetCollection& optimized,
                               std::span<const double> margins, double confidence) {
  CampaignReport report;
  report.stats = c.stats();
  report.methods[0] = report_for(Method::Static, static_sets);
  report.methods[1] = report_for(Method::Propagated, optimized);
  // Random injection behaves like one set holding every flip-flop.
  const auto num_ffs = c.flipflops().size();
  report.methods[2] = {Method::Random, num_ffs > 0 ? 1u : 0u, num_ffs > 0 ? 1u : 0u, num_ffs,
                       random_multibit_space(num_ffs)};

  for (const auto& m : report.methods) {
    auto plans = sfi_plans(m.total_faults, margins, confidence, m.method);
    report.plans.insert(report.plans.end(), plans.begin(), plans.end());
  }
  const auto& propagated = report.methods[1].total_faults;
  report.static_over_propagated = ratio(report.methods[0].total_faults, propagated);
  report.random_over_propagated = ratio(report.methods[2].total_faults, propagated);
  return report;
}

}  // namespace mffu
