#include "corpaudit/corpus_io.hpp"

#include <zlib.h>

#include <algorithm>
#include <cstdio>
#include <cstring>
#include <filesystem>

#include "corpaudit/utf8.hpp"

namespace corpaudit {

std::string_view to_string(CorpusKind kind) {
  return kind == CorpusKind::parallel ? "parallel" : "mono";
}

CorpusKind parse_corpus_kind(std::string_view s) {
  if (s == "mono" || s == "monolingual") return CorpusKind::monolingual;
  if (s == "parallel") return CorpusKind::parallel;
  throw std::invalid_argument("unknown corpus kind '" + std::string(s) +
                              "' (expected mono or parallel)");
}

namespace {

bool ends_with(std::string_view s, std::string_view suffix) {
  return s.size() >= suffix.size() && s.substr(s.size() - suffix.size()) == suffix;
}

bool is_blank(std::string_view line) {
  for (char c : line) {
    if (c != ' ' && c != '\t' && c != '\r' && c != '\v' && c != '\f') return false;
  }
  return true;
}

void check_utf8(const LineReader& reader, std::string_view line) {
  if (auto bad = utf8::find_invalid(line)) {
    throw CorpusError(reader.path() + ": invalid UTF-8 at byte offset " +
                      std::to_string(reader.line_offset() + *bad) + " (line " +
                      std::to_string(reader.line_index() + 1) + ")");
  }
}

std::string make_id(const std::string& corpus_id, std::uint64_t index) {
  return corpus_id + ":" + std::to_string(index);
}

}  // namespace

struct LineReader::Impl {
  std::FILE* file = nullptr;
  gzFile gz = nullptr;
  std::vector<char> buf = std::vector<char>(1 << 16);
  std::size_t pos = 0;
  std::size_t len = 0;
  bool eof = false;

  ~Impl() {
    if (file) std::fclose(file);
    if (gz) gzclose(gz);
  }

  // Refills the buffer; returns false at end of input.
  bool fill(const std::string& path) {
    if (eof) return false;
    pos = 0;
    if (gz) {
      const int n = gzread(gz, buf.data(), static_cast<unsigned>(buf.size()));
      if (n < 0) {
        int errnum = 0;
        const char* msg = gzerror(gz, &errnum);
        throw CorpusError(path + ": gzip read error: " + (msg ? msg : "unknown"));
      }
      len = static_cast<std::size_t>(n);
    } else {
      len = std::fread(buf.data(), 1, buf.size(), file);
      if (len == 0 && std::ferror(file)) throw CorpusError(path + ": read error");
    }
    if (len == 0) eof = true;
    return len > 0;
  }
};

LineReader::LineReader(const std::string& path) : impl_(std::make_unique<Impl>()), path_(path) {
  if (!std::filesystem::exists(path)) throw CorpusError("no such file: " + path);
  if (ends_with(path, ".gz")) {
    impl_->gz = gzopen(path.c_str(), "rb");
    if (!impl_->gz) throw CorpusError("cannot open " + path);
  } else {
    impl_->file = std::fopen(path.c_str(), "rb");
    if (!impl_->file) throw CorpusError("cannot open " + path);
  }
}

LineReader::~LineReader() = default;
LineReader::LineReader(LineReader&&) noexcept = default;
LineReader& LineReader::operator=(LineReader&&) noexcept = default;

bool LineReader::next(std::string& line) {
  line.clear();
  bool got_any = false;
  for (;;) {
    if (impl_->pos == impl_->len && !impl_->fill(path_)) break;
    got_any = true;
    const char* begin = impl_->buf.data() + impl_->pos;
    const char* end = impl_->buf.data() + impl_->len;
    const char* nl = static_cast<const char*>(std::memchr(begin, '\n', end - begin));
    if (nl) {
      line.append(begin, nl);
      impl_->pos += static_cast<std::size_t>(nl - begin) + 1;
      break;
    }
    line.append(begin, end);
    impl_->pos = impl_->len;
  }
  if (!got_any) return false;
  if (started_) ++line_index_;
  started_ = true;
  line_offset_ = next_offset_;
  // Trailing '\n' is counted even if the file ends without one; offsets past
  // the last line are never reported.
  next_offset_ += line.size() + 1;
  return true;
}

std::string corpus_id_from_path(const std::string& path) {
  std::string name = std::filesystem::path(path).filename().string();
  for (std::string_view ext : {".gz", ".txt", ".tsv"}) {
    if (ends_with(name, ext)) name.resize(name.size() - ext.size());
  }
  return name;
}

MonolingualReader::MonolingualReader(const std::string& path, std::string lang,
                                     std::string corpus_id)
    : lines_(path),
      lang_(std::move(lang)),
      corpus_id_(corpus_id.empty() ? corpus_id_from_path(path) : std::move(corpus_id)) {
  if (lang_.empty()) throw CorpusError("declared language tag must be non-empty");
}

std::optional<SentenceItem> MonolingualReader::next() {
  std::string line;
  while (lines_.next(line)) {
    check_utf8(lines_, line);
    if (is_blank(line)) {
      ++skipped_;
      continue;
    }
    return SentenceItem{make_id(corpus_id_, lines_.line_index()), lang_, std::move(line),
                        std::nullopt};
  }
  return std::nullopt;
}

ParallelReader::ParallelReader(const std::string& path, std::string src_lang,
                               std::string tgt_lang, std::string corpus_id)
    : lines_(path),
      src_lang_(std::move(src_lang)),
      tgt_lang_(std::move(tgt_lang)),
      corpus_id_(corpus_id.empty() ? corpus_id_from_path(path) : std::move(corpus_id)) {
  if (src_lang_.empty() || tgt_lang_.empty()) {
    throw CorpusError("declared language tags must be non-empty");
  }
}

std::optional<SentencePair> ParallelReader::next() {
  std::string line;
  while (lines_.next(line)) {
    check_utf8(lines_, line);
    if (is_blank(line)) {
      ++skipped_;
      continue;
    }
    const auto tab = line.find('\t');
    const std::size_t tabs =
        static_cast<std::size_t>(std::count(line.begin(), line.end(), '\t'));
    if (tabs != 1) {
      throw CorpusError(lines_.path() + ":" + std::to_string(lines_.line_index() + 1) +
                        ": expected 2 tab-separated columns, found " +
                        std::to_string(tabs + 1));
    }
    SentencePair pair;
    pair.id = make_id(corpus_id_, lines_.line_index());
    pair.src_lang = src_lang_;
    pair.tgt_lang = tgt_lang_;
    pair.src_text = line.substr(0, tab);
    pair.tgt_text = line.substr(tab + 1);
    return pair;
  }
  return std::nullopt;
}

MonolingualCorpus read_monolingual(const std::string& path, const std::string& lang,
                                   const std::string& corpus_id) {
  MonolingualReader reader(path, lang, corpus_id);
  MonolingualCorpus corpus;
  while (auto item = reader.next()) corpus.items.push_back(std::move(*item));
  corpus.skipped = reader.skipped();
  return corpus;
}

ParallelCorpus read_parallel(const std::string& path, const std::string& src_lang,
                             const std::string& tgt_lang, const std::string& corpus_id) {
  ParallelReader reader(path, src_lang, tgt_lang, corpus_id);
  ParallelCorpus corpus;
  if (src_lang == tgt_lang) {
    corpus.warnings.push_back("source and target are both declared as '" + src_lang + "'");
  }
  while (auto pair = reader.next()) corpus.pairs.push_back(std::move(*pair));
  corpus.skipped = reader.skipped();
  return corpus;
}

namespace {

bool is_terminal_punct(char32_t cp) {
  switch (cp) {
    case U'.': case U'!': case U'?':
    case 0x0589:  // Armenian full stop
    case 0x3002:  // ideographic full stop
    case 0x061F:  // Arabic question mark
    case 0x0964:  // Devanagari danda
      return true;
    default:
      return false;
  }
}

void flush_segment(std::vector<std::string>& out, const std::vector<char32_t>& cps,
                   std::size_t begin, std::size_t end) {
  while (begin < end && utf8::is_space(cps[begin])) ++begin;
  while (end > begin && utf8::is_space(cps[end - 1])) --end;
  if (begin == end) return;
  std::string s;
  for (std::size_t i = begin; i < end; ++i) utf8::append(s, cps[i]);
  out.push_back(std::move(s));
}

}  // namespace

std::vector<std::string> split_sentences(std::string_view document) {
  std::vector<std::string> out;
  const auto cps = utf8::decode(document);
  std::size_t start = 0;
  for (std::size_t i = 0; i < cps.size(); ++i) {
    if (cps[i] == U'\n') {
      flush_segment(out, cps, start, i);
      start = i + 1;
    } else if (utf8::is_space(cps[i]) && i > start && is_terminal_punct(cps[i - 1])) {
      flush_segment(out, cps, start, i);
      start = i + 1;
    }
  }
  flush_segment(out, cps, start, cps.size());
  return out;
}

std::string dedup_key(std::string_view text) { return utf8::collapse_whitespace(text); }

bool Deduplicator::admit(std::string_view text) {
  if (seen_.insert(dedup_key(text)).second) return true;
  ++removed_;
  return false;
}

DedupResult deduplicate(std::vector<SentenceItem> items) {
  Deduplicator dedup;
  DedupResult result;
  result.items.reserve(items.size());
  for (auto& item : items) {
    if (dedup.admit(item.text)) result.items.push_back(std::move(item));
  }
  result.removed = dedup.removed();
  return result;
}

}  // namespace corpaudit
