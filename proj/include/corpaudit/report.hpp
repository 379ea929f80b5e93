#pragma once

#include <cstdint>
#include <filesystem>
#include <map>
#include <optional>
#include <string>
#include <vector>

#include "corpaudit/langtags.hpp"
#include "corpaudit/stats.hpp"

namespace corpaudit {

struct ReportInputs {
  std::vector<StatsTable> tables;
  // dataset key -> lang -> sentences. Overrides the tables' own sizes when
  // the dataset is present.
  std::map<std::string, std::map<std::string, std::uint64_t>> sizes;
  std::vector<double> cdf_thresholds;  // percentages; default 0,10,...,100
  std::vector<DownstreamScore> downstream;  // correlated against every table
  std::vector<LintReport> lints;
};

struct DatasetSummary {
  std::string dataset;
  CorpusKind kind = CorpusKind::monolingual;
  std::size_t languages = 0;
  LabelPercentages macro;
  std::optional<MicroAverage> micro;  // nullopt when no size is known
  ThresholdCounts thresholds;
  std::vector<CdfPoint> cdf;
  std::optional<CorrelationResult> size_correlation;  // needs >= 3 sized, non-constant rows
  std::optional<DownstreamCorrelation> downstream;
};

DatasetSummary summarize(const StatsTable& table, const ReportInputs& inputs);

// Writes per_language.csv, aggregate.csv, thresholds.csv, cdf.csv,
// correlation.csv, summary.md and, when lint reports are given, lint.csv and
// lint.md. Returns the written paths in that order.
std::vector<std::filesystem::path> write_report(const std::filesystem::path& out_dir,
                                                const ReportInputs& inputs);

std::vector<double> default_cdf_thresholds();

}  // namespace corpaudit
