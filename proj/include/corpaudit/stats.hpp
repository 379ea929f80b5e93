#pragma once

#include <boost/multiprecision/cpp_int.hpp>

#include <cstdint>
#include <iosfwd>
#include <map>
#include <optional>
#include <span>
#include <stdexcept>
#include <string>
#include <vector>

#include "corpaudit/corpus_io.hpp"
#include "corpaudit/taxonomy.hpp"

namespace corpaudit {

// Percentages are carried as exact rationals and only rounded for output.
using Rational = boost::multiprecision::cpp_rational;

class StatsError : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

enum class StatKey { C, CC, CS, CB, X, WL, NL, offensive, porn };

inline constexpr StatKey kStatKeys[] = {StatKey::C,  StatKey::CC, StatKey::CS,
                                        StatKey::CB, StatKey::X,  StatKey::WL,
                                        StatKey::NL, StatKey::offensive, StatKey::porn};

std::string_view render_stat_key(StatKey key);

// Exact value of a decimal literal such as "96.15" or "-0.5".
Rational parse_decimal(std::string_view s);
// Round half away from zero to `decimals` places.
std::string format_fixed(const Rational& value, int decimals = 2);
double to_double(const Rational& value);

struct CorpusStats {
  std::string dataset;
  std::string lang;
  CorpusKind kind = CorpusKind::monolingual;
  std::uint64_t n_annotated = 0;   // records in the label denominator
  std::uint64_t n_unresolved = 0;  // records still labeled U (excluded)
  // Percentages 0..100. A key is absent when it does not apply (X for
  // monolingual data) or was not reported.
  std::map<StatKey, Rational> pct;
  std::optional<Rational> avg_length;
  std::optional<std::uint64_t> total_sentences;

  std::optional<Rational> get(StatKey key) const;
  const Rational& at(StatKey key) const;
  // Resolved share of all records, 1 when nothing is unresolved.
  double coverage() const;
};

// Percentages over the resolved (non-U) records. `lengths`, when non-empty,
// is aligned with `records` and gives each item's character count.
CorpusStats per_language_stats(std::span<const AnnotationRecord> records, CorpusKind kind,
                               std::span<const std::size_t> lengths = {});

// Per-language stats of one dataset, in the published column layout:
// lang,C,CC,CS,CB,X,WL,NL,porn,sentences,avg_length[,offensive,n_annotated]
struct StatsTable {
  std::string dataset;
  CorpusKind kind = CorpusKind::monolingual;
  std::vector<CorpusStats> rows;
};

StatsTable load_stats_table(const std::string& path);
void write_stats_table(std::ostream& out, const StatsTable& table);

using LabelPercentages = std::map<StatKey, Rational>;

// Unweighted mean over languages of every key present in all of them.
LabelPercentages macro_average(const std::vector<CorpusStats>& stats);

struct MicroAverage {
  LabelPercentages pct;
  std::map<std::string, Rational> weights;  // by lang, sum to 1
  std::vector<std::string> excluded;        // languages without a size
};

// Weights are size_l / sum(size). Languages missing from `sizes` are
// excluded and listed.
MicroAverage micro_average(const std::vector<CorpusStats>& stats,
                           const std::map<std::string, std::uint64_t>& sizes);
// Uses each row's own total_sentences.
MicroAverage micro_average(const std::vector<CorpusStats>& stats);

struct AggregateStats {
  LabelPercentages macro;
  MicroAverage micro;
};

AggregateStats aggregate(const std::vector<CorpusStats>& stats);

struct ThresholdCounts {
  std::size_t zero_c = 0;      // C == 0%
  std::size_t under50_c = 0;   // C < 50%
  std::size_t over50_nl = 0;   // NL > 50%
  std::size_t over50_wl = 0;   // WL > 50%

  bool operator==(const ThresholdCounts&) const = default;
};

ThresholdCounts threshold_summary(const std::vector<CorpusStats>& stats);

struct CdfPoint {
  double threshold;
  double fraction;  // share of languages with C% strictly below threshold
};

std::vector<CdfPoint> quality_cdf(const std::vector<CorpusStats>& stats,
                                  const std::vector<double>& thresholds);

struct CorrelationResult {
  double rho = 0;
  double p_value = 1;
  std::size_t n = 0;
};

// Average ranks for ties (1-based).
std::vector<double> average_ranks(std::span<const double> values);

// Spearman's rho as the Pearson correlation of average ranks. The two-sided
// p-value uses t = rho * sqrt((n-2)/(1-rho^2)) with n-2 degrees of freedom.
CorrelationResult spearman(std::span<const double> xs, std::span<const double> ys);

// Spearman of C% against dataset size over rows with a known size.
CorrelationResult quality_size_correlation(const std::vector<CorpusStats>& stats);

struct DownstreamScore {
  std::string lang;
  double spbleu = 0;
};

// CSV with header lang,spbleu.
std::vector<DownstreamScore> load_downstream_csv(const std::string& path);

struct DownstreamCorrelation {
  CorrelationResult quality;          // C% vs spBLEU
  std::optional<CorrelationResult> size;     // size vs spBLEU
  std::optional<CorrelationResult> product;  // C% x size vs spBLEU
  std::vector<std::string> matched;          // languages in both inputs
};

DownstreamCorrelation downstream_correlation(const std::vector<CorpusStats>& stats,
                                             const std::vector<DownstreamScore>& scores);

// Fraction of positions whose labels agree after coarsening both sides.
double agreement_accuracy(std::span<const Label> reference, std::span<const Label> other,
                          Granularity granularity);

// Aligns records by item id; both sides must cover the same item set.
double agreement_accuracy(std::span<const AnnotationRecord> reference,
                          std::span<const AnnotationRecord> other, Granularity granularity);

}  // namespace corpaudit
