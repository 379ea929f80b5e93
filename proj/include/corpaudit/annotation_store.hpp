#pragma once

#include <cstdint>
#include <filesystem>
#include <functional>
#include <map>
#include <memory>
#include <mutex>
#include <optional>
#include <shared_mutex>
#include <stdexcept>
#include <string>
#include <vector>

#include "corpaudit/corpus_io.hpp"
#include "corpaudit/taxonomy.hpp"

namespace corpaudit {

// Error with a machine-readable code; the HTTP layer maps codes to statuses.
class StoreError : public std::runtime_error {
 public:
  StoreError(std::string code, const std::string& message,
             std::vector<Violation> violations = {})
      : std::runtime_error(message), code_(std::move(code)), violations_(std::move(violations)) {}
  // unknown_project, duplicate_project, bad_request, unreadable_corpus,
  // invalid_annotation, corrupt_log
  const std::string& code() const { return code_; }
  const std::vector<Violation>& violations() const { return violations_; }

 private:
  std::string code_;
  std::vector<Violation> violations_;
};

struct ProjectSpec {
  std::string name;  // becomes the project id: [A-Za-z0-9._-], not starting with '.'
  std::string corpus_path;
  CorpusKind kind = CorpusKind::monolingual;
  std::string dataset;
  std::string lang;      // monolingual
  std::string src_lang;  // parallel
  std::string tgt_lang;
  std::uint64_t n = 100;
  std::uint64_t seed = 0;
  std::string instructions;  // default_instructions(kind) when empty
};

// One sampled unit as shown to raters.
struct StoredItem {
  std::uint64_t index = 0;  // position in the sample
  std::string id;
  std::string lang;  // "src-tgt" for parallel items
  std::string src;
  std::optional<std::string> tgt;
};

struct ProjectManifest {
  std::string id;
  std::string dataset;
  std::string corpus_path;
  std::string corpus_hash;  // FNV-1a 64 of the corpus file bytes, hex
  CorpusKind kind = CorpusKind::monolingual;
  std::string lang;
  std::uint64_t total_sentences = 0;
  std::uint64_t requested_n = 0;
  std::uint64_t seed = 0;
  std::uint64_t n_items = 0;
  std::int64_t created = 0;
  std::string instructions;
};

struct Progress {
  std::uint64_t n_items = 0;
  struct Rater {
    std::uint64_t labeled = 0;  // distinct items
    std::uint64_t remaining = 0;
    std::map<std::string, std::uint64_t> by_label;  // latest label per item
  };
  std::map<std::string, Rater> raters;
  std::map<std::string, std::uint64_t> by_label;  // over all raters
  std::uint64_t records = 0;                      // log length, including superseded
};

// One line of the export file.
struct ExportRecord {
  std::string id;
  std::string corpus;
  std::string lang;
  std::string src;
  std::optional<std::string> tgt;
  AnnotationRecord record;
};

struct ExportResult {
  std::string jsonl;          // one line per (item, rater)
  std::string manifest_json;  // project manifest plus export counts
  std::uint64_t lines = 0;
  std::uint64_t unresolved = 0;  // lines still labeled U
};

// Latest record per (item, rater) by timestamp, ties going to the later log
// entry, ordered by item index then rater id. A pure function of its inputs.
ExportResult export_log(const ProjectManifest& manifest, const std::vector<StoredItem>& items,
                        const std::vector<AnnotationRecord>& log);

std::string export_line(const ExportRecord& record);
ExportRecord parse_export_line(const std::string& line);
std::vector<ExportRecord> read_export_jsonl(const std::string& path);

std::string default_instructions(CorpusKind kind);

// Hex FNV-1a 64 of a file's bytes.
std::string file_fingerprint(const std::string& path);

// Directory-backed project store:
//
//   <root>/<id>/manifest.json   written once at creation
//   <root>/<id>/sample.jsonl    the drawn items, immutable
//   <root>/<id>/log.jsonl       append-only annotation log
//
// Each append is a single write(2) on an O_APPEND descriptor followed by
// fdatasync, serialized per project. On load a trailing line without '\n'
// (an interrupted append) is ignored.
class AnnotationStore {
 public:
  using Clock = std::function<std::int64_t()>;

  explicit AnnotationStore(std::filesystem::path root, Clock clock = {});
  ~AnnotationStore();

  ProjectManifest create_project(const ProjectSpec& spec);
  std::vector<std::string> list_projects() const;
  ProjectManifest manifest(const std::string& id) const;
  std::vector<StoredItem> items(const std::string& id) const;

  // Items the rater has no record for, in sample order.
  std::vector<StoredItem> next_items(const std::string& id, const std::string& rater,
                                     std::size_t limit) const;
  // Validates, stamps `timestamp` with the server clock and appends.
  AnnotationRecord submit(const std::string& id, AnnotationRecord record);
  Progress progress(const std::string& id) const;
  ExportResult export_project(const std::string& id) const;
  std::vector<AnnotationRecord> log(const std::string& id) const;

  const std::filesystem::path& root() const { return root_; }

 private:
  struct Project;
  Project& open(const std::string& id) const;

  std::filesystem::path root_;
  Clock clock_;
  mutable std::mutex projects_mutex_;
  mutable std::map<std::string, std::unique_ptr<Project>> projects_;
};

}  // namespace corpaudit
