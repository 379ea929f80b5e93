#include "corpaudit/annotation_store.hpp"

#include <fcntl.h>
#include <unistd.h>

#include <algorithm>
#include <cerrno>
#include <chrono>
#include <cstring>
#include <fstream>
#include <json.hpp>
#include <set>
#include <sstream>

#include "corpaudit/sampling.hpp"

namespace corpaudit {

namespace fs = std::filesystem;
using json = nlohmann::ordered_json;

namespace {

std::int64_t system_now() {
  return std::chrono::duration_cast<std::chrono::seconds>(
             std::chrono::system_clock::now().time_since_epoch())
      .count();
}

bool valid_project_name(const std::string& name) {
  if (name.empty() || name.size() > 128 || name[0] == '.') return false;
  return std::all_of(name.begin(), name.end(), [](char c) {
    return std::isalnum(static_cast<unsigned char>(c)) || c == '.' || c == '_' || c == '-';
  });
}

std::string read_text(const fs::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw StoreError("corrupt_log", "cannot read " + path.string());
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

void write_text(const fs::path& path, const std::string& content) {
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  out << content;
  out.flush();
  if (!out) throw StoreError("io_error", "cannot write " + path.string());
}

json manifest_to_json(const ProjectManifest& m) {
  return json{{"id", m.id},
              {"dataset", m.dataset},
              {"corpus", m.corpus_path},
              {"corpus_hash", m.corpus_hash},
              {"kind", std::string(to_string(m.kind))},
              {"lang", m.lang},
              {"total_sentences", m.total_sentences},
              {"requested_n", m.requested_n},
              {"seed", m.seed},
              {"n_items", m.n_items},
              {"created", m.created},
              {"instructions", m.instructions}};
}

ProjectManifest manifest_from_json(const json& j) {
  ProjectManifest m;
  m.id = j.at("id").get<std::string>();
  m.dataset = j.at("dataset").get<std::string>();
  m.corpus_path = j.at("corpus").get<std::string>();
  m.corpus_hash = j.at("corpus_hash").get<std::string>();
  m.kind = parse_corpus_kind(j.at("kind").get<std::string>());
  m.lang = j.at("lang").get<std::string>();
  m.total_sentences = j.at("total_sentences").get<std::uint64_t>();
  m.requested_n = j.at("requested_n").get<std::uint64_t>();
  m.seed = j.at("seed").get<std::uint64_t>();
  m.n_items = j.at("n_items").get<std::uint64_t>();
  m.created = j.at("created").get<std::int64_t>();
  m.instructions = j.at("instructions").get<std::string>();
  return m;
}

json item_to_json(const StoredItem& item) {
  json j{{"index", item.index}, {"id", item.id}, {"lang", item.lang}, {"src", item.src}};
  if (item.tgt) j["tgt"] = *item.tgt;
  return j;
}

StoredItem item_from_json(const json& j) {
  StoredItem item;
  item.index = j.at("index").get<std::uint64_t>();
  item.id = j.at("id").get<std::string>();
  item.lang = j.at("lang").get<std::string>();
  item.src = j.at("src").get<std::string>();
  if (j.contains("tgt")) item.tgt = j.at("tgt").get<std::string>();
  return item;
}

std::string log_line(const AnnotationRecord& r) {
  json j{{"id", r.item_id},
         {"rater", r.rater_id},
         {"label", std::string(render_label(r.label))},
         {"porn", r.porn},
         {"offensive", r.offensive},
         {"note", r.note ? json(*r.note) : json(nullptr)},
         {"ts", r.timestamp}};
  return j.dump() + '\n';
}

AnnotationRecord record_from_json(const json& j) {
  AnnotationRecord r;
  r.item_id = j.at("id").get<std::string>();
  r.rater_id = j.at("rater").get<std::string>();
  r.label = parse_label(j.at("label").get<std::string>());
  r.porn = j.value("porn", false);
  r.offensive = j.value("offensive", false);
  if (j.contains("note") && !j.at("note").is_null()) r.note = j.at("note").get<std::string>();
  r.timestamp = j.value("ts", std::int64_t{0});
  return r;
}

// Records of a log file; a final line without '\n' is an interrupted append.
std::vector<AnnotationRecord> parse_log(const std::string& text, const std::string& name) {
  std::vector<AnnotationRecord> out;
  std::size_t start = 0;
  std::size_t lineno = 0;
  while (start < text.size()) {
    const auto end = text.find('\n', start);
    if (end == std::string::npos) break;
    ++lineno;
    const auto line = text.substr(start, end - start);
    start = end + 1;
    if (line.empty()) continue;
    try {
      out.push_back(record_from_json(json::parse(line)));
    } catch (const std::exception& e) {
      throw StoreError("corrupt_log", name + ":" + std::to_string(lineno) + ": " + e.what());
    }
  }
  return out;
}

}  // namespace

std::string file_fingerprint(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw StoreError("unreadable_corpus", "cannot open corpus " + path);
  std::uint64_t h = 0xcbf29ce484222325ULL;
  char buf[1 << 16];
  while (in.read(buf, sizeof buf) || in.gcount() > 0) {
    for (std::streamsize i = 0; i < in.gcount(); ++i) {
      h ^= static_cast<unsigned char>(buf[i]);
      h *= 0x100000001b3ULL;
    }
  }
  std::ostringstream out;
  out << std::hex;
  out.width(16);
  out.fill('0');
  out << h;
  return out.str();
}

std::string default_instructions(CorpusKind kind) {
  std::string text =
      "Label each item with one code.\n"
      "CC: correct, natural sentence.\n"
      "CS: correct, but a single word or short phrase.\n"
      "CB: correct, but boilerplate (menus, cookie notices, template text).\n";
  if (kind == CorpusKind::parallel) {
    text += "X: both sides are in the right languages but are not translations of each other.\n";
  }
  text +=
      "WL: wrong language (for pairs: either side).\n"
      "NL: not language (markup, numbers, random characters).\n"
      "U: unsure; must be resolved before export.\n"
      "Independently flag offensive or pornographic content.\n";
  return text;
}

std::string export_line(const ExportRecord& e) {
  json j{{"id", e.id}, {"corpus", e.corpus}, {"lang", e.lang}, {"src", e.src}};
  if (e.tgt) j["tgt"] = *e.tgt;
  j["label"] = std::string(render_label(e.record.label));
  j["porn"] = e.record.porn;
  j["offensive"] = e.record.offensive;
  j["rater"] = e.record.rater_id;
  j["ts"] = e.record.timestamp;
  j["note"] = e.record.note ? json(*e.record.note) : json(nullptr);
  return j.dump();
}

ExportRecord parse_export_line(const std::string& line) {
  const auto j = json::parse(line);
  ExportRecord e;
  e.id = j.at("id").get<std::string>();
  e.corpus = j.at("corpus").get<std::string>();
  e.lang = j.at("lang").get<std::string>();
  e.src = j.at("src").get<std::string>();
  if (j.contains("tgt")) e.tgt = j.at("tgt").get<std::string>();
  e.record = record_from_json(j);
  return e;
}

std::vector<ExportRecord> read_export_jsonl(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw std::runtime_error("cannot open annotations " + path);
  std::vector<ExportRecord> out;
  std::string line;
  std::size_t lineno = 0;
  while (std::getline(in, line)) {
    ++lineno;
    if (line.empty()) continue;
    try {
      out.push_back(parse_export_line(line));
    } catch (const std::exception& e) {
      throw std::runtime_error(path + ":" + std::to_string(lineno) + ": " + e.what());
    }
  }
  return out;
}

ExportResult export_log(const ProjectManifest& manifest, const std::vector<StoredItem>& items,
                        const std::vector<AnnotationRecord>& log) {
  std::map<std::string, std::size_t> index_of;
  for (std::size_t i = 0; i < items.size(); ++i) index_of[items[i].id] = i;
  // (item position, rater) -> position in the log of the winning record
  std::map<std::pair<std::size_t, std::string>, std::size_t> latest;
  for (std::size_t i = 0; i < log.size(); ++i) {
    auto it = index_of.find(log[i].item_id);
    if (it == index_of.end()) continue;
    auto [slot, inserted] = latest.try_emplace({it->second, log[i].rater_id}, i);
    if (!inserted && log[i].timestamp >= log[slot->second].timestamp) slot->second = i;
  }
  ExportResult out;
  std::ostringstream body;
  for (const auto& [key, pos] : latest) {
    const auto& item = items[key.first];
    ExportRecord e{item.id, manifest.id, item.lang, item.src, item.tgt, log[pos]};
    body << export_line(e) << '\n';
    ++out.lines;
    if (e.record.label == Label::U) ++out.unresolved;
  }
  out.jsonl = body.str();
  json m = manifest_to_json(manifest);
  m.erase("instructions");
  m["export_lines"] = out.lines;
  m["unresolved"] = out.unresolved;
  m["log_records"] = log.size();
  out.manifest_json = m.dump();
  return out;
}

struct AnnotationStore::Project {
  ProjectManifest manifest;
  std::vector<StoredItem> items;
  std::map<std::string, std::size_t> index_of;
  std::vector<AnnotationRecord> records;
  fs::path log_path;
  mutable std::shared_mutex mutex;
};

AnnotationStore::AnnotationStore(fs::path root, Clock clock)
    : root_(std::move(root)), clock_(clock ? std::move(clock) : Clock(system_now)) {
  std::error_code ec;
  fs::create_directories(root_, ec);
  if (ec) throw StoreError("io_error", "cannot create store root " + root_.string());
}

AnnotationStore::~AnnotationStore() = default;

ProjectManifest AnnotationStore::create_project(const ProjectSpec& spec) {
  if (!valid_project_name(spec.name)) {
    throw StoreError("bad_request", "project name must be 1-128 characters of [A-Za-z0-9._-] "
                                    "and must not start with '.'");
  }
  if (spec.n == 0) throw StoreError("bad_request", "n must be at least 1");
  if (spec.kind == CorpusKind::monolingual && spec.lang.empty()) {
    throw StoreError("bad_request", "monolingual projects need 'lang'");
  }
  if (spec.kind == CorpusKind::parallel && (spec.src_lang.empty() || spec.tgt_lang.empty())) {
    throw StoreError("bad_request", "parallel projects need 'src_lang' and 'tgt_lang'");
  }
  std::lock_guard lock(projects_mutex_);
  const fs::path dir = root_ / spec.name;
  if (projects_.count(spec.name) || fs::exists(dir)) {
    throw StoreError("duplicate_project", "project '" + spec.name + "' already exists");
  }

  auto project = std::make_unique<Project>();
  ProjectManifest& m = project->manifest;
  m.id = spec.name;
  m.dataset = spec.dataset;
  m.corpus_path = spec.corpus_path;
  m.kind = spec.kind;
  m.lang = spec.kind == CorpusKind::parallel ? spec.src_lang + "-" + spec.tgt_lang : spec.lang;
  m.requested_n = spec.n;
  m.seed = spec.seed;
  m.created = clock_();
  m.instructions = spec.instructions.empty() ? default_instructions(spec.kind) : spec.instructions;
  try {
    m.corpus_hash = file_fingerprint(spec.corpus_path);
    const auto total = count_items(spec.corpus_path, spec.kind);
    CorpusDescriptor desc{spec.dataset, m.lang, total, spec.kind};
    if (spec.kind == CorpusKind::monolingual) {
      MonolingualReader reader(spec.corpus_path, spec.lang);
      auto sample = draw_sample_stream(reader, total, desc, spec.n, spec.seed);
      for (std::size_t i = 0; i < sample.items.size(); ++i) {
        auto& it = sample.items[i];
        project->items.push_back({i, it.id, m.lang, std::move(it.text), std::nullopt});
      }
    } else {
      ParallelReader reader(spec.corpus_path, spec.src_lang, spec.tgt_lang);
      auto sample = draw_sample_stream(reader, total, desc, spec.n, spec.seed);
      for (std::size_t i = 0; i < sample.items.size(); ++i) {
        auto& it = sample.items[i];
        project->items.push_back({i, it.id, m.lang, std::move(it.src_text), std::move(it.tgt_text)});
      }
    }
    m.total_sentences = total;
  } catch (const StoreError&) {
    throw;
  } catch (const std::exception& e) {
    throw StoreError("unreadable_corpus", e.what());
  }
  m.n_items = project->items.size();

  // Written under a temporary name, then renamed into place.
  const fs::path tmp = root_ / ("." + spec.name + ".tmp");
  fs::remove_all(tmp);
  fs::create_directories(tmp);
  write_text(tmp / "manifest.json", manifest_to_json(m).dump(2) + "\n");
  std::string sample;
  for (const auto& item : project->items) sample += item_to_json(item).dump() + "\n";
  write_text(tmp / "sample.jsonl", sample);
  write_text(tmp / "log.jsonl", "");
  fs::rename(tmp, dir);

  for (std::size_t i = 0; i < project->items.size(); ++i) {
    project->index_of[project->items[i].id] = i;
  }
  project->log_path = dir / "log.jsonl";
  ProjectManifest result = m;
  projects_.emplace(spec.name, std::move(project));
  return result;
}

std::vector<std::string> AnnotationStore::list_projects() const {
  std::vector<std::string> out;
  for (const auto& entry : fs::directory_iterator(root_)) {
    const auto name = entry.path().filename().string();
    if (entry.is_directory() && valid_project_name(name) &&
        fs::exists(entry.path() / "manifest.json")) {
      out.push_back(name);
    }
  }
  std::sort(out.begin(), out.end());
  return out;
}

AnnotationStore::Project& AnnotationStore::open(const std::string& id) const {
  std::lock_guard lock(projects_mutex_);
  if (auto it = projects_.find(id); it != projects_.end()) return *it->second;
  const fs::path dir = root_ / id;
  if (!valid_project_name(id) || !fs::exists(dir / "manifest.json")) {
    throw StoreError("unknown_project", "unknown project '" + id + "'");
  }
  auto project = std::make_unique<Project>();
  try {
    project->manifest = manifest_from_json(json::parse(read_text(dir / "manifest.json")));
    std::istringstream sample(read_text(dir / "sample.jsonl"));
    std::string line;
    while (std::getline(sample, line)) {
      if (!line.empty()) project->items.push_back(item_from_json(json::parse(line)));
    }
  } catch (const StoreError&) {
    throw;
  } catch (const std::exception& e) {
    throw StoreError("corrupt_log", "project '" + id + "': " + e.what());
  }
  for (std::size_t i = 0; i < project->items.size(); ++i) {
    project->index_of[project->items[i].id] = i;
  }
  project->log_path = dir / "log.jsonl";
  if (fs::exists(project->log_path)) {
    project->records = parse_log(read_text(project->log_path), project->log_path.string());
  }
  auto& ref = *project;
  projects_.emplace(id, std::move(project));
  return ref;
}

ProjectManifest AnnotationStore::manifest(const std::string& id) const {
  return open(id).manifest;
}

std::vector<StoredItem> AnnotationStore::items(const std::string& id) const {
  return open(id).items;
}

std::vector<AnnotationRecord> AnnotationStore::log(const std::string& id) const {
  auto& p = open(id);
  std::shared_lock lock(p.mutex);
  return p.records;
}

std::vector<StoredItem> AnnotationStore::next_items(const std::string& id,
                                                    const std::string& rater,
                                                    std::size_t limit) const {
  auto& p = open(id);
  std::shared_lock lock(p.mutex);
  std::set<std::string> done;
  for (const auto& r : p.records) {
    if (r.rater_id == rater) done.insert(r.item_id);
  }
  std::vector<StoredItem> out;
  for (const auto& item : p.items) {
    if (out.size() >= limit) break;
    if (!done.count(item.id)) out.push_back(item);
  }
  return out;
}

AnnotationRecord AnnotationStore::submit(const std::string& id, AnnotationRecord record) {
  auto& p = open(id);
  AnnotationRegistry registry;
  for (const auto& item : p.items) registry.item_ids.insert(item.id);
  ValidationContext ctx{p.manifest.kind, false, &registry};
  if (auto violations = validate_annotation(record, ctx); !violations.empty()) {
    std::string message;
    for (const auto& v : violations) message += (message.empty() ? "" : "; ") + v.message;
    throw StoreError("invalid_annotation", message, std::move(violations));
  }

  std::unique_lock lock(p.mutex);
  record.timestamp = clock_();
  const std::string line = log_line(record);
  const int fd = ::open(p.log_path.c_str(), O_WRONLY | O_APPEND | O_CREAT | O_CLOEXEC, 0644);
  if (fd < 0) throw StoreError("io_error", "cannot open log: " + std::string(std::strerror(errno)));
  const auto written = ::write(fd, line.data(), line.size());
  const int sync_rc = ::fdatasync(fd);
  ::close(fd);
  if (written != static_cast<ssize_t>(line.size()) || sync_rc != 0) {
    throw StoreError("io_error", "append to " + p.log_path.string() + " failed");
  }
  p.records.push_back(record);
  return record;
}

Progress AnnotationStore::progress(const std::string& id) const {
  auto& p = open(id);
  std::shared_lock lock(p.mutex);
  Progress out;
  out.n_items = p.items.size();
  out.records = p.records.size();
  std::map<std::string, std::map<std::string, Label>> latest;  // rater -> item -> label
  std::map<std::string, std::map<std::string, std::int64_t>> when;
  for (const auto& r : p.records) {
    auto& ts = when[r.rater_id];
    auto it = ts.find(r.item_id);
    if (it == ts.end() || r.timestamp >= it->second) {
      ts[r.item_id] = r.timestamp;
      latest[r.rater_id][r.item_id] = r.label;
    }
  }
  for (const auto& [rater, labels] : latest) {
    auto& entry = out.raters[rater];
    entry.labeled = labels.size();
    entry.remaining = out.n_items - std::min<std::uint64_t>(out.n_items, labels.size());
    for (const auto& [item, label] : labels) {
      const std::string name(render_label(label));
      ++entry.by_label[name];
      ++out.by_label[name];
    }
  }
  return out;
}

ExportResult AnnotationStore::export_project(const std::string& id) const {
  auto& p = open(id);
  std::shared_lock lock(p.mutex);
  return export_log(p.manifest, p.items, p.records);
}

}  // namespace corpaudit
