#pragma once

#include <cstdint>
#include <memory>
#include <optional>
#include <stdexcept>
#include <string>
#include <string_view>
#include <unordered_set>
#include <vector>

namespace corpaudit {

enum class CorpusKind { monolingual, parallel };

std::string_view to_string(CorpusKind kind);
// Accepts "mono"/"monolingual" and "parallel".
CorpusKind parse_corpus_kind(std::string_view s);

struct SentenceItem {
  std::string id;    // "<corpus>:<line index>"
  std::string lang;  // declared tag as published
  std::string text;
  std::optional<std::string> source_uri;
};

struct SentencePair {
  std::string id;
  std::string src_lang;
  std::string tgt_lang;
  std::string src_text;
  std::string tgt_text;
};

struct CorpusDescriptor {
  std::string dataset;
  std::string lang;
  std::uint64_t total_sentences = 0;
  CorpusKind kind = CorpusKind::monolingual;
};

class CorpusError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// Sequential line source over a plain or gzip-compressed (".gz") file.
// Lines are returned without the trailing '\n'.
class LineReader {
 public:
  explicit LineReader(const std::string& path);
  ~LineReader();
  LineReader(const LineReader&) = delete;
  LineReader& operator=(const LineReader&) = delete;
  LineReader(LineReader&&) noexcept;
  LineReader& operator=(LineReader&&) noexcept;

  // False at end of input. Throws CorpusError on I/O failure.
  bool next(std::string& line);
  // Zero-based index of the line last returned.
  std::uint64_t line_index() const { return line_index_; }
  // Offset (in the decompressed stream) of the first byte of that line.
  std::uint64_t line_offset() const { return line_offset_; }
  const std::string& path() const { return path_; }

 private:
  struct Impl;
  std::unique_ptr<Impl> impl_;
  std::string path_;
  std::uint64_t line_index_ = 0;
  std::uint64_t line_offset_ = 0;
  std::uint64_t next_offset_ = 0;
  bool started_ = false;
};

// Default corpus id: the file name without directory and compression/text
// extensions.
std::string corpus_id_from_path(const std::string& path);

class MonolingualReader {
 public:
  MonolingualReader(const std::string& path, std::string lang, std::string corpus_id = {});

  std::optional<SentenceItem> next();
  std::uint64_t skipped() const { return skipped_; }
  const std::string& corpus_id() const { return corpus_id_; }

 private:
  LineReader lines_;
  std::string lang_;
  std::string corpus_id_;
  std::uint64_t skipped_ = 0;
};

class ParallelReader {
 public:
  ParallelReader(const std::string& path, std::string src_lang, std::string tgt_lang,
                 std::string corpus_id = {});

  std::optional<SentencePair> next();
  std::uint64_t skipped() const { return skipped_; }
  const std::string& corpus_id() const { return corpus_id_; }

 private:
  LineReader lines_;
  std::string src_lang_;
  std::string tgt_lang_;
  std::string corpus_id_;
  std::uint64_t skipped_ = 0;
};

struct MonolingualCorpus {
  std::vector<SentenceItem> items;
  std::uint64_t skipped = 0;
};

struct ParallelCorpus {
  std::vector<SentencePair> pairs;
  std::uint64_t skipped = 0;
  std::vector<std::string> warnings;  // e.g. identical source and target tags
};

MonolingualCorpus read_monolingual(const std::string& path, const std::string& lang,
                                   const std::string& corpus_id = {});
ParallelCorpus read_parallel(const std::string& path, const std::string& src_lang,
                             const std::string& tgt_lang, const std::string& corpus_id = {});

// Newline first, then after terminal punctuation (. ! ? ։ 。 ؟ ।) that is
// followed by whitespace. Segments are whitespace-trimmed; empty segments are
// dropped.
std::vector<std::string> split_sentences(std::string_view document);

// Key under which two sentences count as duplicates.
std::string dedup_key(std::string_view text);

// Streaming first-occurrence filter.
class Deduplicator {
 public:
  // True if `text` has not been seen before (and remembers it).
  bool admit(std::string_view text);
  std::uint64_t removed() const { return removed_; }

 private:
  std::unordered_set<std::string> seen_;
  std::uint64_t removed_ = 0;
};

struct DedupResult {
  std::vector<SentenceItem> items;
  std::uint64_t removed = 0;
};

DedupResult deduplicate(std::vector<SentenceItem> items);

}  // namespace corpaudit
