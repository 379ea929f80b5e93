#pragma once

#include <cstdint>
#include <map>
#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

#include "corpaudit/corpus_io.hpp"

namespace corpaudit {

// SplitMix64 (Steele, Lea & Flood 2014): state += 0x9E3779B97F4A7C15, output
// is the state passed through two xor-shift-multiply rounds. Chosen because
// the algorithm is a few lines of integer arithmetic and therefore replicates
// exactly on every platform and in every language.
class SplitMix64 {
 public:
  explicit SplitMix64(std::uint64_t seed) : state_(seed) {}

  std::uint64_t next();

  // Uniform integer in [0, bound) by rejection of the low
  // (2^64 mod bound) outputs; bound must be > 0.
  std::uint64_t uniform(std::uint64_t bound);

 private:
  std::uint64_t state_;
};

class SamplingError : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

// Sorted, unique indices of a uniform sample of min(n, total) elements out of
// [0, total), without replacement (Floyd's algorithm).
std::vector<std::uint64_t> sample_indices(std::uint64_t total, std::uint64_t n,
                                          std::uint64_t seed);

template <class Item>
struct AuditSample {
  CorpusDescriptor corpus;
  std::uint64_t seed = 0;
  std::uint64_t requested_n = 0;
  std::vector<std::uint64_t> selected_indices;
  std::vector<Item> items;
};

// Draws from a materialized corpus; `corpus.total_sentences` is set to
// items.size().
template <class Item>
AuditSample<Item> draw_sample(const std::vector<Item>& items, CorpusDescriptor corpus,
                              std::uint64_t n, std::uint64_t seed) {
  if (items.empty()) throw SamplingError("cannot sample from an empty corpus");
  AuditSample<Item> sample;
  corpus.total_sentences = items.size();
  sample.corpus = std::move(corpus);
  sample.seed = seed;
  sample.requested_n = n;
  sample.selected_indices = sample_indices(items.size(), n, seed);
  sample.items.reserve(sample.selected_indices.size());
  for (auto idx : sample.selected_indices) sample.items.push_back(items[idx]);
  return sample;
}

// Streaming variant: `next()` yields std::optional<Item>; `total` is the
// number of items the stream will produce (e.g. from a counting pass). Only
// the selected items are retained.
template <class Reader>
auto draw_sample_stream(Reader& reader, std::uint64_t total, CorpusDescriptor corpus,
                        std::uint64_t n, std::uint64_t seed) {
  using Item = typename decltype(reader.next())::value_type;
  if (total == 0) throw SamplingError("cannot sample from an empty corpus");
  AuditSample<Item> sample;
  corpus.total_sentences = total;
  sample.corpus = std::move(corpus);
  sample.seed = seed;
  sample.requested_n = n;
  sample.selected_indices = sample_indices(total, n, seed);
  std::uint64_t pos = 0;
  std::size_t want = 0;
  while (want < sample.selected_indices.size()) {
    auto item = reader.next();
    if (!item) throw SamplingError("corpus stream ended before the declared total");
    if (pos == sample.selected_indices[want]) {
      sample.items.push_back(std::move(*item));
      ++want;
    }
    ++pos;
  }
  return sample;
}

// Number of non-empty lines (items) in a corpus file.
std::uint64_t count_items(const std::string& path, CorpusKind kind);

// The k smallest languages by size (ties by tag), united with `extra`,
// ordered by size ascending then tag.
std::vector<std::string> select_languages(const std::map<std::string, std::uint64_t>& sizes,
                                          std::size_t k, const std::vector<std::string>& extra);

struct SizeRow {
  std::string dataset;
  std::string lang;
  std::optional<std::uint64_t> sentences;  // nullopt for "N/A"
};

// CSV with header dataset,lang,sentences.
std::vector<SizeRow> load_sizes_csv(const std::string& path);

// Known sizes of one dataset (case-insensitive dataset match; empty selects
// all rows). Rows without a size are skipped.
std::map<std::string, std::uint64_t> sizes_for(const std::vector<SizeRow>& rows,
                                               const std::string& dataset);

}  // namespace corpaudit
