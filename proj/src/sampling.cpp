#include "corpaudit/sampling.hpp"

#include <algorithm>
#include <cctype>
#include <set>
#include <unordered_set>

#include "corpaudit/csv.hpp"

namespace corpaudit {

std::uint64_t SplitMix64::next() {
  std::uint64_t z = (state_ += 0x9E3779B97F4A7C15ULL);
  z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ULL;
  z = (z ^ (z >> 27)) * 0x94D049BB133111EBULL;
  return z ^ (z >> 31);
}

std::uint64_t SplitMix64::uniform(std::uint64_t bound) {
  // 2^64 mod bound, computed without 128-bit arithmetic.
  const std::uint64_t threshold = (0 - bound) % bound;
  for (;;) {
    const std::uint64_t r = next();
    if (r >= threshold) return r % bound;
  }
}

std::vector<std::uint64_t> sample_indices(std::uint64_t total, std::uint64_t n,
                                          std::uint64_t seed) {
  if (n == 0) throw SamplingError("sample size must be at least 1");
  if (total == 0) throw SamplingError("cannot sample from an empty corpus");
  std::vector<std::uint64_t> out;
  if (total <= n) {
    out.resize(total);
    for (std::uint64_t i = 0; i < total; ++i) out[i] = i;
    return out;
  }
  // Floyd: for j = total-n .. total-1 pick t in [0, j]; insert t, or j if t
  // is already taken. Every n-subset is equally likely.
  SplitMix64 rng(seed);
  std::unordered_set<std::uint64_t> chosen;
  chosen.reserve(n * 2);
  for (std::uint64_t j = total - n; j < total; ++j) {
    const std::uint64_t t = rng.uniform(j + 1);
    if (!chosen.insert(t).second) chosen.insert(j);
  }
  out.assign(chosen.begin(), chosen.end());
  std::sort(out.begin(), out.end());
  return out;
}

std::uint64_t count_items(const std::string& path, CorpusKind kind) {
  std::uint64_t n = 0;
  if (kind == CorpusKind::monolingual) {
    MonolingualReader reader(path, "und");
    while (reader.next()) ++n;
  } else {
    ParallelReader reader(path, "und", "und");
    while (reader.next()) ++n;
  }
  return n;
}

std::vector<std::string> select_languages(const std::map<std::string, std::uint64_t>& sizes,
                                          std::size_t k, const std::vector<std::string>& extra) {
  if (sizes.empty()) throw SamplingError("no language sizes given");
  for (const auto& lang : extra) {
    if (!sizes.count(lang)) throw SamplingError("extra language '" + lang + "' has no size");
  }
  std::vector<std::pair<std::uint64_t, std::string>> by_size;
  by_size.reserve(sizes.size());
  for (const auto& [lang, count] : sizes) by_size.emplace_back(count, lang);
  std::sort(by_size.begin(), by_size.end());

  std::set<std::pair<std::uint64_t, std::string>> picked;
  for (std::size_t i = 0; i < std::min(k, by_size.size()); ++i) picked.insert(by_size[i]);
  for (const auto& lang : extra) picked.emplace(sizes.at(lang), lang);

  std::vector<std::string> out;
  out.reserve(picked.size());
  for (const auto& entry : picked) out.push_back(entry.second);
  return out;
}

std::vector<SizeRow> load_sizes_csv(const std::string& path) {
  const auto table = csv::read_file(path);
  const auto c_dataset = table.require_column("dataset");
  const auto c_lang = table.require_column("lang");
  const auto c_sents = table.require_column("sentences");
  std::vector<SizeRow> rows;
  rows.reserve(table.rows.size());
  for (const auto& r : table.rows) {
    SizeRow row{r[c_dataset], r[c_lang], std::nullopt};
    const std::string& s = r[c_sents];
    if (!s.empty() && s != "N/A") {
      std::size_t used = 0;
      const auto v = std::stoull(s, &used);
      if (used != s.size()) throw csv::CsvError(path + ": bad sentence count '" + s + "'");
      row.sentences = v;
    }
    rows.push_back(std::move(row));
  }
  return rows;
}

namespace {
std::string lower(std::string s) {
  for (auto& c : s) c = static_cast<char>(std::tolower(static_cast<unsigned char>(c)));
  return s;
}
}  // namespace

std::map<std::string, std::uint64_t> sizes_for(const std::vector<SizeRow>& rows,
                                               const std::string& dataset) {
  std::map<std::string, std::uint64_t> out;
  const std::string want = lower(dataset);
  for (const auto& row : rows) {
    if (!want.empty() && lower(row.dataset) != want) continue;
    if (row.sentences) out[row.lang] = *row.sentences;
  }
  return out;
}

}  // namespace corpaudit
