#include "corpaudit/langid.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <iomanip>
#include <istream>
#include <numeric>
#include <ostream>
#include <set>
#include <sstream>

#include "corpaudit/csv.hpp"
#include "corpaudit/langtags.hpp"
#include "corpaudit/utf8.hpp"

namespace corpaudit {

namespace {

constexpr char32_t kBos = 0x0002;

// Simple case folding for Basic Latin, Latin-1, Greek and Cyrillic capitals.
char32_t fold(char32_t c) {
  if (c >= U'A' && c <= U'Z') return c + 0x20;
  if (c >= 0xC0 && c <= 0xDE && c != 0xD7) return c + 0x20;
  if (c >= 0x391 && c <= 0x3A9 && c != 0x3A2) return c + 0x20;
  if (c >= 0x410 && c <= 0x42F) return c + 0x20;
  if (c >= 0x400 && c <= 0x40F) return c + 0x50;
  return c;
}

std::string hex_codepoints(const std::u32string& s) {
  std::ostringstream out;
  out << std::hex;
  for (std::size_t i = 0; i < s.size(); ++i) {
    if (i) out << ' ';
    out << static_cast<std::uint32_t>(s[i]);
  }
  return out.str();
}

std::u32string parse_codepoints(const std::string& s) {
  std::u32string out;
  std::istringstream in(s);
  std::uint32_t cp;
  while (in >> std::hex >> cp) out.push_back(static_cast<char32_t>(cp));
  return out;
}

std::string format_double(double v) {
  std::ostringstream out;
  out << std::setprecision(17) << v;
  return out.str();
}

}  // namespace

std::u32string normalize_for_langid(std::string_view text) {
  const auto collapsed = utf8::collapse_whitespace(text);
  std::u32string out;
  for (char32_t c : utf8::decode(collapsed)) out.push_back(fold(c));
  return out;
}

LangIdModel LangIdModel::train(
    const std::vector<std::pair<std::string, std::vector<std::string>>>& corpora,
    const LangIdOptions& options) {
  if (options.alpha <= 0) throw LangIdError("alpha must be positive");
  if (options.max_order < 1) throw LangIdError("max_order must be at least 1");
  if (corpora.size() < 2) throw LangIdError("training needs at least two languages");
  LangIdModel model;
  model.options_ = options;
  for (const auto& [lang, sentences] : corpora) {
    if (lang.empty()) throw LangIdError("empty language key");
    if (model.tables_.count(lang)) throw LangIdError("duplicate language '" + lang + "'");
    Table t;
    t.ngrams.resize(options.max_order);
    t.contexts.resize(options.max_order);
    std::size_t chars = 0;
    for (const auto& sentence : sentences) {
      const auto text = normalize_for_langid(sentence);
      if (text.empty()) continue;
      chars += text.size();
      std::u32string padded(options.max_order - 1, kBos);
      padded += text;
      const std::size_t offset = options.max_order - 1;
      for (std::size_t pos = offset; pos < padded.size(); ++pos) {
        for (int k = 1; k <= options.max_order; ++k) {
          t.ngrams[k - 1][padded.substr(pos - (k - 1), k)] += 1;
        }
      }
    }
    if (chars < options.min_training_chars) {
      throw LangIdError("language '" + lang + "' has " + std::to_string(chars) +
                        " characters of training text, need at least " +
                        std::to_string(options.min_training_chars));
    }
    model.tables_.emplace(lang, std::move(t));
  }
  model.finalize();
  return model;
}

void LangIdModel::finalize() {
  std::set<char32_t> vocab;
  for (auto& [lang, t] : tables_) {
    t.contexts.assign(options_.max_order, {});
    for (int k = 1; k <= options_.max_order; ++k) {
      for (const auto& [gram, n] : t.ngrams[k - 1]) {
        t.contexts[k - 1][gram.substr(0, gram.size() - 1)] += n;
        if (k == 1) vocab.insert(gram[0]);
      }
    }
  }
  vocab_size_ = vocab.size() + 1;
}

const LangIdModel::Table& LangIdModel::table(std::string_view lang) const {
  auto it = tables_.find(lang);
  if (it == tables_.end()) throw LangIdError("language '" + std::string(lang) + "' not in model");
  return it->second;
}

double LangIdModel::conditional(std::string_view lang, int order, std::u32string_view context,
                                char32_t c) const {
  if (order < 1 || order > options_.max_order) throw LangIdError("order out of range");
  if (context.size() != static_cast<std::size_t>(order - 1)) {
    throw LangIdError("context length must be order - 1");
  }
  const auto& t = table(lang);
  std::u32string gram(context);
  gram.push_back(c);
  auto g = t.ngrams[order - 1].find(gram);
  auto h = t.contexts[order - 1].find(std::u32string(context));
  const double num = (g == t.ngrams[order - 1].end() ? 0.0 : static_cast<double>(g->second));
  const double den = (h == t.contexts[order - 1].end() ? 0.0 : static_cast<double>(h->second));
  return (num + options_.alpha) / (den + options_.alpha * static_cast<double>(vocab_size_));
}

double LangIdModel::char_logprob(const Table& t, const std::u32string& padded,
                                 std::size_t pos) const {
  double sum = 0;
  const double denom_alpha = options_.alpha * static_cast<double>(vocab_size_);
  for (int k = 1; k <= options_.max_order; ++k) {
    const auto& grams = t.ngrams[k - 1];
    const auto& ctxs = t.contexts[k - 1];
    std::u32string gram = padded.substr(pos - (k - 1), k);
    auto g = grams.find(gram);
    gram.pop_back();
    auto h = ctxs.find(gram);
    const double num = g == grams.end() ? 0.0 : static_cast<double>(g->second);
    const double den = h == ctxs.end() ? 0.0 : static_cast<double>(h->second);
    sum += (num + options_.alpha) / (den + denom_alpha);
  }
  return std::log(sum / options_.max_order);
}

double LangIdModel::score(std::string_view lang, std::string_view text) const {
  const auto& t = table(lang);
  const auto norm = normalize_for_langid(text);
  if (norm.empty()) throw LangIdError("cannot score empty text");
  std::u32string padded(options_.max_order - 1, kBos);
  padded += norm;
  double total = 0;
  for (std::size_t pos = options_.max_order - 1; pos < padded.size(); ++pos) {
    total += char_logprob(t, padded, pos);
  }
  return total / static_cast<double>(norm.size());
}

Prediction LangIdModel::predict(std::string_view text) const {
  const auto norm = normalize_for_langid(text);
  if (norm.empty()) throw LangIdError("cannot identify the language of empty text");
  std::u32string padded(options_.max_order - 1, kBos);
  padded += norm;
  Prediction best;
  bool first = true;
  for (const auto& [lang, t] : tables_) {
    double total = 0;
    for (std::size_t pos = options_.max_order - 1; pos < padded.size(); ++pos) {
      total += char_logprob(t, padded, pos);
    }
    const double s = total / static_cast<double>(norm.size());
    if (first || s > best.score) {
      best.lang = lang;
      best.score = s;
      first = false;
    }
  }
  best.low_confidence = norm.size() < options_.min_text_length;
  return best;
}

std::vector<std::string> LangIdModel::languages() const {
  std::vector<std::string> out;
  for (const auto& [lang, t] : tables_) out.push_back(lang);
  return out;
}

// Format:
//   #corpaudit-langid <TAB> 1
//   alpha <TAB> a
//   max_order <TAB> K
//   min_text_length <TAB> m
//   min_training_chars <TAB> m
//   lang <TAB> code <TAB> number of n-gram lines
//   <order> <TAB> <hex code points separated by spaces> <TAB> count
void LangIdModel::save(std::ostream& out) const {
  out << "#corpaudit-langid\t" << kFormatVersion << '\n';
  out << "alpha\t" << format_double(options_.alpha) << '\n';
  out << "max_order\t" << options_.max_order << '\n';
  out << "min_text_length\t" << options_.min_text_length << '\n';
  out << "min_training_chars\t" << options_.min_training_chars << '\n';
  for (const auto& [lang, t] : tables_) {
    std::size_t n = 0;
    for (const auto& m : t.ngrams) n += m.size();
    out << "lang\t" << lang << '\t' << n << '\n';
    for (int k = 1; k <= options_.max_order; ++k) {
      for (const auto& [gram, count] : t.ngrams[k - 1]) {
        out << k << '\t' << hex_codepoints(gram) << '\t' << count << '\n';
      }
    }
  }
}

LangIdModel LangIdModel::load(std::istream& in) {
  auto fail = [](std::size_t line, const std::string& msg) {
    return LangIdError("model line " + std::to_string(line) + ": " + msg);
  };
  std::string line;
  std::size_t lineno = 0;
  auto next_fields = [&]() -> std::vector<std::string> {
    if (!std::getline(in, line)) throw fail(lineno + 1, "unexpected end of model file");
    ++lineno;
    std::vector<std::string> f;
    std::size_t start = 0;
    for (std::size_t i = 0; i <= line.size(); ++i) {
      if (i == line.size() || line[i] == '\t') {
        f.push_back(line.substr(start, i - start));
        start = i + 1;
      }
    }
    return f;
  };
  auto header = next_fields();
  if (header.size() != 2 || header[0] != "#corpaudit-langid") {
    throw fail(lineno, "not a corpaudit langid model");
  }
  if (header[1] != std::to_string(kFormatVersion)) {
    throw fail(lineno, "unsupported model version " + header[1]);
  }
  LangIdModel model;
  auto expect = [&](const char* key) {
    auto f = next_fields();
    if (f.size() != 2 || f[0] != key) throw fail(lineno, std::string("expected ") + key);
    return f[1];
  };
  model.options_.alpha = std::stod(expect("alpha"));
  model.options_.max_order = std::stoi(expect("max_order"));
  model.options_.min_text_length = std::stoull(expect("min_text_length"));
  model.options_.min_training_chars = std::stoull(expect("min_training_chars"));
  if (model.options_.max_order < 1) throw fail(lineno, "max_order must be at least 1");
  while (std::getline(in, line)) {
    ++lineno;
    if (line.empty()) continue;
    std::istringstream hs(line);
    std::string tag, lang;
    std::size_t n = 0;
    std::getline(hs, tag, '\t');
    std::getline(hs, lang, '\t');
    hs >> n;
    if (tag != "lang" || lang.empty()) throw fail(lineno, "expected a lang line");
    Table t;
    t.ngrams.resize(model.options_.max_order);
    for (std::size_t i = 0; i < n; ++i) {
      auto f = next_fields();
      if (f.size() != 3) throw fail(lineno, "expected order, n-gram and count");
      const int k = std::stoi(f[0]);
      auto gram = parse_codepoints(f[1]);
      if (k < 1 || k > model.options_.max_order || gram.size() != static_cast<std::size_t>(k)) {
        throw fail(lineno, "n-gram does not match its order");
      }
      t.ngrams[k - 1][gram] = std::stoull(f[2]);
    }
    if (!model.tables_.emplace(lang, std::move(t)).second) {
      throw fail(lineno, "duplicate language '" + lang + "'");
    }
  }
  if (model.tables_.size() < 2) throw LangIdError("model has fewer than two languages");
  model.finalize();
  return model;
}

void LangIdModel::save_file(const std::string& path) const {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw std::runtime_error("cannot write " + path);
  save(out);
}

LangIdModel LangIdModel::load_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw std::runtime_error("cannot open model " + path);
  return load(in);
}

namespace {

std::optional<std::string> declared_base(const std::string& declared, const RulesDatabase* rules,
                                         std::string_view dataset) {
  std::optional<std::string> tag;
  if (rules) {
    tag = rules->corrected_tag(declared, dataset);
  } else if (auto parsed = try_parse_tag(declared)) {
    tag = normalize_tag(*parsed);
  }
  if (!tag) return std::nullopt;
  auto parsed = try_parse_tag(*tag);
  if (!parsed) return std::nullopt;
  return parsed->language;
}

}  // namespace

FilterDecision filter_pair(const LanguageClassifier& model, const SentencePair& pair,
                           const RulesDatabase* rules, std::string_view dataset) {
  FilterDecision d;
  d.id = pair.id;
  d.declared_src = pair.src_lang;
  d.declared_tgt = pair.tgt_lang;
  const auto langs = model.languages();
  const auto modeled = [&](const std::optional<std::string>& base) {
    return base && std::find(langs.begin(), langs.end(), *base) != langs.end();
  };
  const auto src = declared_base(pair.src_lang, rules, dataset);
  const auto tgt = declared_base(pair.tgt_lang, rules, dataset);
  d.evaluable = modeled(src) && modeled(tgt);
  const auto guess = [&](const std::string& text) {
    if (utf8::trim(text).empty()) return Prediction{{}, 0, true};
    return model.predict(text);
  };
  d.src = guess(pair.src_text);
  d.tgt = guess(pair.tgt_text);
  d.kept = d.evaluable && !d.src.low_confidence && !d.tgt.low_confidence &&
           d.src.lang == *src && d.tgt.lang == *tgt;
  return d;
}

std::vector<FilterDecision> filter_corpus(const LanguageClassifier& model,
                                          const std::vector<SentencePair>& pairs,
                                          const RulesDatabase* rules, std::string_view dataset) {
  std::vector<FilterDecision> out;
  out.reserve(pairs.size());
  for (const auto& p : pairs) out.push_back(filter_pair(model, p, rules, dataset));
  return out;
}

namespace {

std::optional<double> ratio(std::size_t num, std::size_t den) {
  if (den == 0) return std::nullopt;
  return static_cast<double>(num) / static_cast<double>(den);
}

}  // namespace

std::optional<double> FilterCounts::detection_precision() const {
  return ratio(kept_positive, kept);
}
std::optional<double> FilterCounts::detection_recall() const {
  return ratio(kept_positive, positive);
}
std::optional<double> FilterCounts::retention_precision() const {
  return ratio(kept_correct, kept);
}
std::optional<double> FilterCounts::retention_recall() const {
  return ratio(kept_correct, correct);
}
std::optional<double> FilterCounts::prefilter_correct() const { return ratio(correct, pairs); }

std::optional<double> median(std::vector<double> values) {
  if (values.empty()) return std::nullopt;
  std::sort(values.begin(), values.end());
  const auto n = values.size();
  return n % 2 ? values[n / 2] : (values[n / 2 - 1] + values[n / 2]) / 2;
}

FilterMetrics filter_eval(const std::map<std::string, AnnotationRecord>& annotations,
                          const std::vector<FilterDecision>& decisions) {
  FilterMetrics m;
  std::set<std::string> seen;
  for (const auto& d : decisions) {
    if (!seen.insert(d.id).second) throw LangIdError("duplicate decision for '" + d.id + "'");
    auto it = annotations.find(d.id);
    if (it == annotations.end()) throw LangIdError("no annotation for pair '" + d.id + "'");
    if (!d.evaluable) {
      ++m.unevaluable;
      continue;
    }
    const Label label = it->second.label;
    if (label == Label::U) {
      ++m.unresolved;
      continue;
    }
    const bool correct = is_correct(label);
    const bool positive = correct || label == Label::X;
    for (FilterCounts* c : {&m.overall, &m.per_language[d.declared_tgt]}) {
      ++c->pairs;
      c->kept += d.kept;
      c->positive += positive;
      c->kept_positive += d.kept && positive;
      c->correct += correct;
      c->kept_correct += d.kept && correct;
    }
  }
  std::vector<double> pre, prec, rec, det;
  for (const auto& [lang, c] : m.per_language) {
    if (auto p = c.detection_precision()) det.push_back(*p);
    if (2 * c.correct >= c.pairs) continue;
    m.noisy.push_back(lang);
    pre.push_back(*c.prefilter_correct());
    if (auto p = c.retention_precision()) prec.push_back(*p);
    if (auto r = c.retention_recall()) rec.push_back(*r);
  }
  m.median_noisy_prefilter = median(pre);
  m.median_noisy_retention_precision = median(prec);
  m.median_noisy_retention_recall = median(rec);
  if (!det.empty()) {
    m.macro_detection_precision =
        std::accumulate(det.begin(), det.end(), 0.0) / static_cast<double>(det.size());
  }
  return m;
}

namespace {

std::string opt(const std::optional<double>& v) {
  if (!v) return "undefined";
  std::ostringstream out;
  out << std::fixed << std::setprecision(4) << *v;
  return out.str();
}

void write_counts(std::ostream& out, const std::string& lang, const FilterCounts& c, bool noisy) {
  csv::write_row(out, {lang, std::to_string(c.pairs), std::to_string(c.kept),
                       opt(c.prefilter_correct()), opt(c.detection_precision()),
                       opt(c.detection_recall()), opt(c.retention_precision()),
                       opt(c.retention_recall()), noisy ? "1" : "0"});
}

}  // namespace

void write_filter_report(std::ostream& out, const FilterMetrics& m) {
  csv::write_row(out, {"lang", "pairs", "kept", "prefilter_C", "detection_precision",
                       "detection_recall", "retention_precision", "retention_recall", "noisy"});
  for (const auto& [lang, c] : m.per_language) {
    const bool noisy = std::find(m.noisy.begin(), m.noisy.end(), lang) != m.noisy.end();
    write_counts(out, lang, c, noisy);
  }
  write_counts(out, "ALL", m.overall, false);
  out << "# unevaluable: " << m.unevaluable << '\n';
  out << "# unresolved: " << m.unresolved << '\n';
  out << "# macro_detection_precision: " << opt(m.macro_detection_precision) << '\n';
  out << "# median_noisy_prefilter_C: " << opt(m.median_noisy_prefilter) << '\n';
  out << "# median_noisy_retention_precision: " << opt(m.median_noisy_retention_precision)
      << '\n';
  out << "# median_noisy_retention_recall: " << opt(m.median_noisy_retention_recall) << '\n';
}

void write_decisions(std::ostream& out, const std::vector<FilterDecision>& decisions) {
  csv::write_row(out, {"id", "declared_src", "declared_tgt", "pred_src", "score_src", "pred_tgt",
                       "score_tgt", "evaluable", "kept"});
  auto pred = [](const Prediction& p) { return p.low_confidence ? p.lang + "?" : p.lang; };
  auto num = [](double v) {
    std::ostringstream s;
    s << std::fixed << std::setprecision(4) << v;
    return s.str();
  };
  for (const auto& d : decisions) {
    csv::write_row(out, {d.id, d.declared_src, d.declared_tgt, pred(d.src), num(d.src.score),
                         pred(d.tgt), num(d.tgt.score), d.evaluable ? "1" : "0",
                         d.kept ? "1" : "0"});
  }
}

std::vector<FilterDecision> read_decisions(const std::string& path) {
  const auto table = csv::read_file(path);
  const auto c_id = table.require_column("id");
  const auto c_src = table.require_column("declared_src");
  const auto c_tgt = table.require_column("declared_tgt");
  const auto c_psrc = table.require_column("pred_src");
  const auto c_ssrc = table.require_column("score_src");
  const auto c_ptgt = table.require_column("pred_tgt");
  const auto c_stgt = table.require_column("score_tgt");
  const auto c_eval = table.require_column("evaluable");
  const auto c_kept = table.require_column("kept");
  auto pred = [](const std::string& lang, const std::string& score) {
    Prediction p;
    p.low_confidence = !lang.empty() && lang.back() == '?';
    p.lang = p.low_confidence ? lang.substr(0, lang.size() - 1) : lang;
    p.score = std::stod(score);
    return p;
  };
  std::vector<FilterDecision> out;
  for (const auto& row : table.rows) {
    FilterDecision d;
    d.id = row[c_id];
    d.declared_src = row[c_src];
    d.declared_tgt = row[c_tgt];
    d.src = pred(row[c_psrc], row[c_ssrc]);
    d.tgt = pred(row[c_ptgt], row[c_stgt]);
    d.evaluable = row[c_eval] == "1";
    d.kept = row[c_kept] == "1";
    out.push_back(std::move(d));
  }
  return out;
}

}  // namespace corpaudit
