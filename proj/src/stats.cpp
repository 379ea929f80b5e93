#include "corpaudit/stats.hpp"

#include <boost/math/distributions/students_t.hpp>

#include <algorithm>
#include <cmath>
#include <filesystem>
#include <numeric>
#include <ostream>
#include <set>
#include <unordered_map>

#include "corpaudit/csv.hpp"

namespace corpaudit {

namespace mp = boost::multiprecision;

std::string_view render_stat_key(StatKey key) {
  switch (key) {
    case StatKey::C: return "C";
    case StatKey::CC: return "CC";
    case StatKey::CS: return "CS";
    case StatKey::CB: return "CB";
    case StatKey::X: return "X";
    case StatKey::WL: return "WL";
    case StatKey::NL: return "NL";
    case StatKey::offensive: return "offensive";
    case StatKey::porn: return "porn";
  }
  return "?";
}

Rational parse_decimal(std::string_view s) {
  if (s.empty()) throw StatsError("empty number");
  bool negative = false;
  std::size_t i = 0;
  if (s[0] == '-' || s[0] == '+') {
    negative = s[0] == '-';
    ++i;
  }
  mp::cpp_int numer = 0;
  mp::cpp_int denom = 1;
  bool seen_digit = false;
  bool seen_point = false;
  for (; i < s.size(); ++i) {
    const char c = s[i];
    if (c == '.' && !seen_point) {
      seen_point = true;
    } else if (c >= '0' && c <= '9') {
      numer = numer * 10 + (c - '0');
      if (seen_point) denom *= 10;
      seen_digit = true;
    } else {
      throw StatsError("not a decimal number: '" + std::string(s) + "'");
    }
  }
  if (!seen_digit) throw StatsError("not a decimal number: '" + std::string(s) + "'");
  Rational r(numer, denom);
  return negative ? Rational(-r) : r;
}

std::string format_fixed(const Rational& value, int decimals) {
  mp::cpp_int scale = 1;
  for (int i = 0; i < decimals; ++i) scale *= 10;
  const bool negative = value < 0;
  const Rational scaled = (negative ? Rational(-value) : value) * scale;
  // floor(x + 1/2) for x >= 0
  const Rational shifted = scaled + Rational(1, 2);
  mp::cpp_int rounded = mp::numerator(shifted) / mp::denominator(shifted);
  std::string digits = rounded.str();
  if (decimals > 0) {
    if (digits.size() <= static_cast<std::size_t>(decimals)) {
      digits.insert(0, static_cast<std::size_t>(decimals) + 1 - digits.size(), '0');
    }
    digits.insert(digits.size() - static_cast<std::size_t>(decimals), ".");
  }
  if (negative && rounded != 0) digits.insert(0, "-");
  return digits;
}

double to_double(const Rational& value) { return value.convert_to<double>(); }

std::optional<Rational> CorpusStats::get(StatKey key) const {
  auto it = pct.find(key);
  if (it == pct.end()) return std::nullopt;
  return it->second;
}

const Rational& CorpusStats::at(StatKey key) const {
  auto it = pct.find(key);
  if (it == pct.end()) {
    throw StatsError("statistic " + std::string(render_stat_key(key)) + " missing for " + lang);
  }
  return it->second;
}

double CorpusStats::coverage() const {
  const auto total = n_annotated + n_unresolved;
  return total == 0 ? 0.0 : static_cast<double>(n_annotated) / static_cast<double>(total);
}

CorpusStats per_language_stats(std::span<const AnnotationRecord> records, CorpusKind kind,
                               std::span<const std::size_t> lengths) {
  if (records.empty()) throw StatsError("no annotations");
  if (!lengths.empty() && lengths.size() != records.size()) {
    throw StatsError("lengths must align with records");
  }
  std::map<Label, std::uint64_t> counts;
  std::uint64_t offensive = 0;
  std::uint64_t porn = 0;
  std::uint64_t resolved = 0;
  std::uint64_t unresolved = 0;
  mp::cpp_int total_length = 0;
  for (std::size_t i = 0; i < records.size(); ++i) {
    const auto& r = records[i];
    if (r.label == Label::U) {
      ++unresolved;
      continue;
    }
    if (r.label == Label::X && kind == CorpusKind::monolingual) {
      throw StatsError("X label on monolingual item " + r.item_id);
    }
    ++resolved;
    ++counts[r.label];
    offensive += r.offensive ? 1 : 0;
    porn += r.porn ? 1 : 0;
    if (!lengths.empty()) total_length += lengths[i];
  }
  if (resolved == 0) throw StatsError("all annotations are unresolved (U)");

  CorpusStats stats;
  stats.kind = kind;
  stats.n_annotated = resolved;
  stats.n_unresolved = unresolved;
  const auto pct = [&](std::uint64_t n) {
    return Rational(mp::cpp_int(n) * 100, mp::cpp_int(resolved));
  };
  stats.pct[StatKey::CC] = pct(counts[Label::CC]);
  stats.pct[StatKey::CS] = pct(counts[Label::CS]);
  stats.pct[StatKey::CB] = pct(counts[Label::CB]);
  stats.pct[StatKey::C] =
      stats.pct[StatKey::CC] + stats.pct[StatKey::CS] + stats.pct[StatKey::CB];
  if (kind == CorpusKind::parallel) stats.pct[StatKey::X] = pct(counts[Label::X]);
  stats.pct[StatKey::WL] = pct(counts[Label::WL]);
  stats.pct[StatKey::NL] = pct(counts[Label::NL]);
  stats.pct[StatKey::offensive] = pct(offensive);
  stats.pct[StatKey::porn] = pct(porn);
  if (!lengths.empty()) stats.avg_length = Rational(total_length, mp::cpp_int(resolved));
  return stats;
}

namespace {

constexpr StatKey kTableKeys[] = {StatKey::C,  StatKey::CC, StatKey::CS, StatKey::CB,
                                  StatKey::X,  StatKey::WL, StatKey::NL, StatKey::porn};

std::string trim_copy(const std::string& s) {
  const auto b = s.find_first_not_of(" \t");
  if (b == std::string::npos) return {};
  const auto e = s.find_last_not_of(" \t");
  return s.substr(b, e - b + 1);
}

}  // namespace

StatsTable load_stats_table(const std::string& path) {
  const auto table = csv::read_file(path);
  StatsTable out;
  auto it = table.meta.find("dataset");
  out.dataset = it != table.meta.end() ? it->second
                                       : std::filesystem::path(path).stem().string();
  const auto c_lang = table.require_column("lang");
  std::map<StatKey, std::size_t> cols;
  for (StatKey key : kTableKeys) cols[key] = table.require_column(render_stat_key(key));
  const auto c_offensive = table.column("offensive");
  const auto c_sents = table.column("sentences");
  const auto c_len = table.column("avg_length");
  const auto c_n = table.column("n_annotated");
  const bool has_x = std::any_of(table.rows.begin(), table.rows.end(), [&](const auto& row) {
    const auto cell = trim_copy(row[cols[StatKey::X]]);
    return !cell.empty() && cell != "-";
  });
  it = table.meta.find("kind");
  if (it != table.meta.end()) {
    out.kind = parse_corpus_kind(it->second);
    if (out.kind == CorpusKind::monolingual && has_x) {
      throw StatsError(path + ": X values in a monolingual table");
    }
  } else {
    out.kind = has_x ? CorpusKind::parallel : CorpusKind::monolingual;
  }

  for (const auto& row : table.rows) {
    CorpusStats s;
    s.dataset = out.dataset;
    s.kind = out.kind;
    s.lang = trim_copy(row[c_lang]);
    for (const auto& [key, col] : cols) {
      const auto cell = trim_copy(row[col]);
      if (cell.empty() || cell == "-") continue;
      s.pct[key] = parse_decimal(cell);
    }
    if (c_offensive) {
      const auto cell = trim_copy(row[*c_offensive]);
      if (!cell.empty()) s.pct[StatKey::offensive] = parse_decimal(cell);
    }
    if (c_sents) {
      const auto cell = trim_copy(row[*c_sents]);
      if (!cell.empty() && cell != "N/A") s.total_sentences = std::stoull(cell);
    }
    if (c_len) {
      const auto cell = trim_copy(row[*c_len]);
      if (!cell.empty()) s.avg_length = parse_decimal(cell);
    }
    if (c_n) {
      const auto cell = trim_copy(row[*c_n]);
      if (!cell.empty()) s.n_annotated = std::stoull(cell);
    }
    out.rows.push_back(std::move(s));
  }
  return out;
}

void write_stats_table(std::ostream& out, const StatsTable& table) {
  out << "# dataset: " << table.dataset << '\n';
  out << "# kind: " << (table.kind == CorpusKind::parallel ? "parallel" : "monolingual")
      << '\n';
  csv::write_row(out, {"lang", "C", "CC", "CS", "CB", "X", "WL", "NL", "porn", "sentences",
                       "avg_length", "offensive", "n_annotated"});
  for (const auto& s : table.rows) {
    std::vector<std::string> fields{s.lang};
    for (StatKey key : kTableKeys) {
      auto v = s.get(key);
      fields.push_back(v ? format_fixed(*v) : std::string());
    }
    fields.push_back(s.total_sentences ? std::to_string(*s.total_sentences) : "N/A");
    fields.push_back(s.avg_length ? format_fixed(*s.avg_length) : std::string());
    auto off = s.get(StatKey::offensive);
    fields.push_back(off ? format_fixed(*off) : std::string());
    fields.push_back(s.n_annotated ? std::to_string(s.n_annotated) : std::string());
    csv::write_row(out, fields);
  }
}

namespace {

// Keys present in every row.
std::vector<StatKey> common_keys(const std::vector<CorpusStats>& stats) {
  std::vector<StatKey> keys;
  for (StatKey key : kStatKeys) {
    const bool everywhere = std::all_of(stats.begin(), stats.end(),
                                        [&](const CorpusStats& s) { return s.pct.count(key); });
    if (everywhere) keys.push_back(key);
  }
  return keys;
}

}  // namespace

LabelPercentages macro_average(const std::vector<CorpusStats>& stats) {
  if (stats.empty()) throw StatsError("macro average over zero languages");
  LabelPercentages out;
  for (StatKey key : common_keys(stats)) {
    Rational sum = 0;
    for (const auto& s : stats) sum += s.pct.at(key);
    out[key] = sum / static_cast<long long>(stats.size());
  }
  return out;
}

MicroAverage micro_average(const std::vector<CorpusStats>& stats,
                           const std::map<std::string, std::uint64_t>& sizes) {
  if (stats.empty()) throw StatsError("micro average over zero languages");
  MicroAverage out;
  std::vector<const CorpusStats*> used;
  mp::cpp_int total = 0;
  for (const auto& s : stats) {
    auto it = sizes.find(s.lang);
    if (it == sizes.end()) {
      out.excluded.push_back(s.lang);
      continue;
    }
    used.push_back(&s);
    total += it->second;
  }
  if (used.empty() || total == 0) {
    throw StatsError("micro average needs at least one language with a known size");
  }
  for (const auto* s : used) {
    out.weights[s->lang] = Rational(mp::cpp_int(sizes.at(s->lang)), total);
  }
  std::vector<CorpusStats> kept;
  kept.reserve(used.size());
  for (const auto* s : used) kept.push_back(*s);
  for (StatKey key : common_keys(kept)) {
    Rational sum = 0;
    for (const auto* s : used) sum += out.weights.at(s->lang) * s->pct.at(key);
    out.pct[key] = sum;
  }
  return out;
}

MicroAverage micro_average(const std::vector<CorpusStats>& stats) {
  std::map<std::string, std::uint64_t> sizes;
  for (const auto& s : stats) {
    if (s.total_sentences) sizes[s.lang] = *s.total_sentences;
  }
  return micro_average(stats, sizes);
}

AggregateStats aggregate(const std::vector<CorpusStats>& stats) {
  return AggregateStats{macro_average(stats), micro_average(stats)};
}

ThresholdCounts threshold_summary(const std::vector<CorpusStats>& stats) {
  ThresholdCounts t;
  const Rational fifty = 50;
  for (const auto& s : stats) {
    const auto& c = s.at(StatKey::C);
    if (c == 0) ++t.zero_c;
    if (c < fifty) ++t.under50_c;
    if (s.at(StatKey::NL) > fifty) ++t.over50_nl;
    if (s.at(StatKey::WL) > fifty) ++t.over50_wl;
  }
  return t;
}

std::vector<CdfPoint> quality_cdf(const std::vector<CorpusStats>& stats,
                                  const std::vector<double>& thresholds) {
  if (stats.empty()) throw StatsError("quality CDF over zero languages");
  if (!std::is_sorted(thresholds.begin(), thresholds.end())) {
    throw StatsError("threshold grid must be sorted ascending");
  }
  std::vector<Rational> c;
  c.reserve(stats.size());
  for (const auto& s : stats) c.push_back(s.at(StatKey::C));
  std::sort(c.begin(), c.end());
  std::vector<CdfPoint> out;
  out.reserve(thresholds.size());
  for (double t : thresholds) {
    if (!std::isfinite(t)) throw StatsError("threshold must be finite");
    const Rational rt(t);
    const auto below = std::lower_bound(c.begin(), c.end(), rt) - c.begin();
    out.push_back({t, static_cast<double>(below) / static_cast<double>(c.size())});
  }
  return out;
}

std::vector<double> average_ranks(std::span<const double> values) {
  std::vector<std::size_t> order(values.size());
  std::iota(order.begin(), order.end(), 0);
  std::stable_sort(order.begin(), order.end(),
                   [&](std::size_t a, std::size_t b) { return values[a] < values[b]; });
  std::vector<double> ranks(values.size());
  std::size_t i = 0;
  while (i < order.size()) {
    std::size_t j = i;
    while (j + 1 < order.size() && values[order[j + 1]] == values[order[i]]) ++j;
    // positions i..j (0-based) share the mean of ranks i+1..j+1
    const double rank = (static_cast<double>(i + j) / 2.0) + 1.0;
    for (std::size_t k = i; k <= j; ++k) ranks[order[k]] = rank;
    i = j + 1;
  }
  return ranks;
}

CorrelationResult spearman(std::span<const double> xs, std::span<const double> ys) {
  if (xs.size() != ys.size()) {
    throw StatsError("spearman: length mismatch (" + std::to_string(xs.size()) + " vs " +
                     std::to_string(ys.size()) + ")");
  }
  const std::size_t n = xs.size();
  if (n < 3) throw StatsError("spearman needs at least 3 pairs");
  for (std::size_t i = 0; i < n; ++i) {
    if (!std::isfinite(xs[i]) || !std::isfinite(ys[i])) {
      throw StatsError("spearman: non-finite input");
    }
  }
  const auto rx = average_ranks(xs);
  const auto ry = average_ranks(ys);
  const double mean = (static_cast<double>(n) + 1.0) / 2.0;
  double sxy = 0;
  double sxx = 0;
  double syy = 0;
  for (std::size_t i = 0; i < n; ++i) {
    const double dx = rx[i] - mean;
    const double dy = ry[i] - mean;
    sxy += dx * dy;
    sxx += dx * dx;
    syy += dy * dy;
  }
  if (sxx == 0 || syy == 0) throw StatsError("spearman undefined for a constant series");
  CorrelationResult result;
  result.n = n;
  result.rho = std::clamp(sxy / std::sqrt(sxx * syy), -1.0, 1.0);
  const double df = static_cast<double>(n) - 2.0;
  const double one_minus = 1.0 - result.rho * result.rho;
  if (one_minus <= 0) {
    result.p_value = 0.0;
  } else {
    const double t = result.rho * std::sqrt(df / one_minus);
    boost::math::students_t_distribution<double> dist(df);
    result.p_value = std::clamp(2.0 * boost::math::cdf(boost::math::complement(dist, std::fabs(t))),
                                0.0, 1.0);
  }
  return result;
}

CorrelationResult quality_size_correlation(const std::vector<CorpusStats>& stats) {
  std::vector<double> quality;
  std::vector<double> size;
  for (const auto& s : stats) {
    if (!s.total_sentences) continue;
    quality.push_back(to_double(s.at(StatKey::C)));
    size.push_back(static_cast<double>(*s.total_sentences));
  }
  return spearman(quality, size);
}

std::vector<DownstreamScore> load_downstream_csv(const std::string& path) {
  const auto table = csv::read_file(path);
  const auto c_lang = table.require_column("lang");
  const auto c_score = table.require_column("spbleu");
  std::vector<DownstreamScore> out;
  std::set<std::string> seen;
  for (const auto& row : table.rows) {
    const double v = to_double(parse_decimal(trim_copy(row[c_score])));
    if (v < 0) throw StatsError(path + ": negative spBLEU for " + row[c_lang]);
    if (!seen.insert(row[c_lang]).second) {
      throw StatsError(path + ": duplicate language " + row[c_lang]);
    }
    out.push_back({row[c_lang], v});
  }
  return out;
}

DownstreamCorrelation downstream_correlation(const std::vector<CorpusStats>& stats,
                                             const std::vector<DownstreamScore>& scores) {
  std::unordered_map<std::string, double> by_lang;
  for (const auto& s : scores) by_lang[s.lang] = s.spbleu;
  std::vector<double> quality, bleu, size, product, bleu_sized;
  DownstreamCorrelation out;
  for (const auto& s : stats) {
    auto it = by_lang.find(s.lang);
    if (it == by_lang.end()) continue;
    out.matched.push_back(s.lang);
    const double c = to_double(s.at(StatKey::C));
    quality.push_back(c);
    bleu.push_back(it->second);
    if (s.total_sentences) {
      const double n = static_cast<double>(*s.total_sentences);
      size.push_back(n);
      product.push_back(c * n);
      bleu_sized.push_back(it->second);
    }
  }
  out.quality = spearman(quality, bleu);
  if (size.size() >= 3) {
    out.size = spearman(size, bleu_sized);
    out.product = spearman(product, bleu_sized);
  }
  return out;
}

double agreement_accuracy(std::span<const Label> reference, std::span<const Label> other,
                          Granularity granularity) {
  if (reference.size() != other.size()) {
    throw StatsError("agreement: sequences differ in length (" +
                     std::to_string(reference.size()) + " vs " +
                     std::to_string(other.size()) + ")");
  }
  if (reference.empty()) throw StatsError("agreement over zero items");
  std::size_t matches = 0;
  for (std::size_t i = 0; i < reference.size(); ++i) {
    if (coarsen(reference[i], granularity) == coarsen(other[i], granularity)) ++matches;
  }
  return static_cast<double>(matches) / static_cast<double>(reference.size());
}

double agreement_accuracy(std::span<const AnnotationRecord> reference,
                          std::span<const AnnotationRecord> other, Granularity granularity) {
  if (reference.size() != other.size()) {
    throw StatsError("agreement: record sets differ in size");
  }
  std::map<std::string, Label> other_by_id;
  for (const auto& r : other) {
    if (!other_by_id.emplace(r.item_id, r.label).second) {
      throw StatsError("agreement: duplicate item id " + r.item_id);
    }
  }
  std::vector<Label> ref_labels;
  std::vector<Label> other_labels;
  std::set<std::string> ref_ids;
  for (const auto& r : reference) {
    if (!ref_ids.insert(r.item_id).second) {
      throw StatsError("agreement: duplicate item id " + r.item_id);
    }
    auto it = other_by_id.find(r.item_id);
    if (it == other_by_id.end()) {
      throw StatsError("agreement: item " + r.item_id + " missing from the other rater");
    }
    ref_labels.push_back(r.label);
    other_labels.push_back(it->second);
  }
  return agreement_accuracy(ref_labels, other_labels, granularity);
}

}  // namespace corpaudit
