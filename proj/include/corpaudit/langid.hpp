#pragma once

#include <cstdint>
#include <iosfwd>
#include <map>
#include <optional>
#include <stdexcept>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

#include "corpaudit/corpus_io.hpp"
#include "corpaudit/taxonomy.hpp"

namespace corpaudit {

class RulesDatabase;

class LangIdError : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

struct Prediction {
  std::string lang;  // best language even when low-confidence
  double score = 0;  // mean per-character log-probability (natural log)
  bool low_confidence = false;
};

// Anything that can label a text with a language. filter_corpus only needs
// this, so an external model can stand in for the bundled one.
class LanguageClassifier {
 public:
  virtual ~LanguageClassifier() = default;
  virtual Prediction predict(std::string_view text) const = 0;
  virtual std::vector<std::string> languages() const = 0;
};

struct LangIdOptions {
  double alpha = 0.5;
  int max_order = 4;                   // orders 1..max_order
  std::size_t min_text_length = 20;    // code points after whitespace collapse
  std::size_t min_training_chars = 1000;
};

// Character n-gram model. For each language and order k, the conditional
// probability of a code point c after the k-1 preceding code points h is
//
//   P_k(c | h) = (count(h c) + alpha) / (count(h) + alpha * V)
//
// with V the number of distinct training code points over all languages plus
// one for unseen characters. The text is padded with k-1 BOS marks. The
// score of a text is the mean over its code points of
// log((1/K) * sum_k P_k). Texts are whitespace-collapsed and trimmed first.
class LangIdModel : public LanguageClassifier {
 public:
  static constexpr int kFormatVersion = 1;

  static LangIdModel train(const std::vector<std::pair<std::string, std::vector<std::string>>>& corpora,
                           const LangIdOptions& options = {});

  Prediction predict(std::string_view text) const override;
  std::vector<std::string> languages() const override;

  // Mean per-character log-probability of `text` under one language.
  double score(std::string_view lang, std::string_view text) const;
  // P_k(c | h) for a single order, mostly for tests.
  double conditional(std::string_view lang, int order, std::u32string_view context,
                     char32_t c) const;

  const LangIdOptions& options() const { return options_; }
  std::size_t vocabulary_size() const { return vocab_size_; }

  // Plain-text format; counts are stored, so a load/save cycle reproduces
  // the file byte for byte.
  void save(std::ostream& out) const;
  static LangIdModel load(std::istream& in);
  void save_file(const std::string& path) const;
  static LangIdModel load_file(const std::string& path);

 private:
  struct Table {
    // One map per order: n-gram -> count, context -> count.
    std::vector<std::map<std::u32string, std::uint64_t>> ngrams;
    std::vector<std::map<std::u32string, std::uint64_t>> contexts;
  };

  void finalize();
  double char_logprob(const Table& t, const std::u32string& padded, std::size_t pos) const;
  const Table& table(std::string_view lang) const;

  LangIdOptions options_;
  std::map<std::string, Table, std::less<>> tables_;
  std::size_t vocab_size_ = 1;
};

// Text prepared for scoring: whitespace runs collapsed, trimmed.
std::u32string normalize_for_langid(std::string_view text);

struct FilterDecision {
  std::string id;
  std::string declared_src;  // as published
  std::string declared_tgt;
  Prediction src;
  Prediction tgt;
  bool evaluable = true;  // false when a declared language is not modeled
  bool kept = false;
};

// Declared tags are corrected through `rules` (when given) for `dataset`,
// then compared on the base language subtag with the predictions.
// Low-confidence predictions never match.
FilterDecision filter_pair(const LanguageClassifier& model, const SentencePair& pair,
                           const RulesDatabase* rules = nullptr, std::string_view dataset = {});
std::vector<FilterDecision> filter_corpus(const LanguageClassifier& model,
                                          const std::vector<SentencePair>& pairs,
                                          const RulesDatabase* rules = nullptr,
                                          std::string_view dataset = {});

// Confusion counts of one group of evaluable, resolved pairs.
// positive: label in {CC, CS, CB, X}; correct: label in {CC, CS, CB}.
struct FilterCounts {
  std::size_t pairs = 0;
  std::size_t kept = 0;
  std::size_t positive = 0;
  std::size_t kept_positive = 0;
  std::size_t correct = 0;
  std::size_t kept_correct = 0;

  // nullopt where the denominator is zero.
  std::optional<double> detection_precision() const;
  std::optional<double> detection_recall() const;
  std::optional<double> retention_precision() const;
  std::optional<double> retention_recall() const;
  std::optional<double> prefilter_correct() const;  // correct / pairs
};

struct FilterMetrics {
  FilterCounts overall;
  std::size_t unevaluable = 0;
  std::size_t unresolved = 0;  // annotated U
  // Keyed by the declared target tag.
  std::map<std::string, FilterCounts> per_language;
  // Languages whose pre-filter correct share is below 50%.
  std::vector<std::string> noisy;
  std::optional<double> median_noisy_prefilter;
  std::optional<double> median_noisy_retention_precision;
  std::optional<double> median_noisy_retention_recall;
  // Mean of per-language detection precision (languages where it is defined).
  std::optional<double> macro_detection_precision;
};

// Every decision must have an annotation; unevaluable decisions and U labels
// are counted and left out of the confusion counts.
FilterMetrics filter_eval(const std::map<std::string, AnnotationRecord>& annotations,
                          const std::vector<FilterDecision>& decisions);

void write_filter_report(std::ostream& out, const FilterMetrics& metrics);
void write_decisions(std::ostream& out, const std::vector<FilterDecision>& decisions);
// Reads the CSV written by write_decisions.
std::vector<FilterDecision> read_decisions(const std::string& path);

std::optional<double> median(std::vector<double> values);

}  // namespace corpaudit
