#pragma once

// Seeded property suites over random parameter draws. Each suite returns one
// PropertyReport per property, aggregated over all draws.

#include <cstddef>
#include <cstdint>
#include <functional>
#include <iosfwd>
#include <string>
#include <string_view>
#include <vector>

#include "emv/analysis.hpp"
#include "emv/gfunc.hpp"
#include "emv/means.hpp"
#include "emv/rng.hpp"

namespace emv {

/// Receives every judged sample as it is produced (in deterministic order).
using SampleSink = std::function<void(std::string_view suite, std::string_view property,
                                      const std::vector<std::string>& location_names,
                                      const SampleRecord& record)>;

struct SuiteOptions {
  std::uint64_t seed = 42;
  /// Random parameter draws per suite.
  std::size_t samples = 100;
  /// Points per scan grid.
  int grid_points = 401;
  /// Majorization pairs per draw in the Schur checks.
  std::size_t pairs_per_draw = 100;
  /// Draws with |ln(y/x)| below this are rejected (nearly equal points make
  /// absolute sign thresholds meaningless).
  double min_log_ratio = 0.01;
  BranchThresholds thresholds{};
  SampleSink sink;
};

struct SuiteResult {
  std::string suite;
  std::uint64_t seed = 0;
  std::vector<PropertyReport> reports;

  bool passed() const;
};

/// theorem2, theorem3, theorem4, theorem5, theorem6, remark.
const std::vector<std::string>& suite_names();
bool is_suite_name(std::string_view name);  ///< also accepts "all"

/// Runs one suite. Throws DomainError for an unknown name.
SuiteResult run_suite(std::string_view name, const SuiteOptions& opts);
/// "all" expands to every suite in suite_names() order.
std::vector<SuiteResult> run_suites(std::string_view name, const SuiteOptions& opts);

/// Random GPair with a, b in [0.1, 10), a < b, ln(b/a) >= min_log_ratio.
GPair draw_gpair(SplitMix64& rng, double min_log_ratio);
/// Random base with r, s in [-10, 10), x, y in [0.1, 10), |ln(y/x)| >= min_log_ratio.
/// With require_s_gt_r the exponents are ordered and distinct.
MeanArgs draw_base(SplitMix64& rng, double min_log_ratio, bool require_s_gt_r = false);

/// "name=value name=value ..." with round-trip exact values.
std::string format_location(const std::vector<std::string>& names, const std::vector<double>& values);

/// One human-readable line per report.
void write_report_lines(std::ostream& out, const SuiteResult& result);

}  // namespace emv
