#pragma once

#include <cstddef>
#include <cstdint>
#include <string>
#include <string_view>
#include <variant>
#include <vector>

#include "condint/config.hpp"
#include "condint/estimation.hpp"
#include "condint/intervals.hpp"
#include "condint/montecarlo.hpp"

namespace condint {

inline constexpr int kSchemaVersion = 1;

struct SimulationSummary {
  std::size_t length = 0;
  double mean = 0.0;
  double variance = 0.0;
  double x_last = 0.0;

  bool operator==(const SimulationSummary&) const = default;
};

struct MetricsReport {
  std::size_t n_a = 0;
  std::size_t n_b = 0;
  double d_k = 0.0;
  double d_l = 0.0;
  double d_bl = 0.0;

  bool operator==(const MetricsReport&) const = default;
};

using ReportResults = std::variant<SimulationSummary, EstimationResult, IntervalResult,
                                   std::vector<CoverageReport>, MergingReport, EquivalenceReport,
                                   NegligibilityReport, MetricsReport>;

/// `{schema_version, kind, config, results, seed}`.
struct Report {
  std::string kind;
  KeyValues config;
  ReportResults results;
  std::uint64_t seed = 0;

  bool operator==(const Report&) const = default;
};

/// Kind string implied by the results alternative.
const char* report_kind(const ReportResults& results) noexcept;

/// JSON text; every number is written with 17 significant digits.
std::string report_to_json(const Report& report);
Report report_from_json(std::string_view text);

/// Long-format table: `T,metric,value` for T-grid reports, `offset,metric,value`
/// for negligibility, `metric,value` otherwise.
std::string report_to_csv(const Report& report);

/// `rep,value` rows.
std::string samples_to_csv(const SampleTable& table);

}  // namespace condint
