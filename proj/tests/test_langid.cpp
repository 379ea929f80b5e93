#include <doctest.h>

#include <cmath>
#include <fstream>
#include <random>
#include <set>
#include <sstream>

#include "corpaudit/langid.hpp"
#include "corpaudit/langtags.hpp"
#include "corpaudit/utf8.hpp"
#include "test_util.hpp"

using namespace corpaudit;
using testutil::data_path;
using testutil::TempDir;

namespace {

std::vector<std::string> lines_of(const std::string& path) {
  std::ifstream in(path);
  std::vector<std::string> out;
  for (std::string line; std::getline(in, line);) {
    if (!line.empty()) out.push_back(line);
  }
  return out;
}

using Corpora = std::vector<std::pair<std::string, std::vector<std::string>>>;

Corpora training(const std::vector<std::string>& langs) {
  Corpora c;
  for (const auto& l : langs) c.emplace_back(l, lines_of(data_path("langid/train/" + l + ".txt")));
  return c;
}

const LangIdModel& six_language_model() {
  static const LangIdModel m = LangIdModel::train(training({"de", "el", "en", "es", "fr", "ru"}));
  return m;
}

// Classifier with fixed answers, keyed by text.
class TableClassifier : public LanguageClassifier {
 public:
  std::map<std::string, std::string> answers;
  Prediction predict(std::string_view text) const override {
    auto it = answers.find(std::string(text));
    if (it == answers.end()) return {"", 0, true};
    return {it->second, -1.0, false};
  }
  std::vector<std::string> languages() const override { return {"de", "en", "fr"}; }
};

AnnotationRecord rec(const std::string& id, Label l) {
  return AnnotationRecord{id, "r", l, false, false, std::nullopt, 0};
}

FilterDecision decision(const std::string& id, const std::string& tgt, bool kept) {
  FilterDecision d;
  d.id = id;
  d.declared_src = "en";
  d.declared_tgt = tgt;
  d.kept = kept;
  return d;
}

}  // namespace

TEST_CASE("disjoint scripts are separated") {
  const auto m = LangIdModel::train(training({"en", "el"}));
  int right = 0, total = 0;
  for (const auto& l : {std::string("en"), std::string("el")}) {
    for (const auto& s : lines_of(data_path("langid/heldout/" + l + ".txt"))) {
      ++total;
      right += m.predict(s).lang == l;
    }
  }
  REQUIRE(total > 0);
  CHECK(static_cast<double>(right) / total >= 0.99);
}

TEST_CASE("training errors") {
  CHECK_THROWS_AS(LangIdModel::train(training({"en"})), LangIdError);
  CHECK_THROWS_AS(LangIdModel::train({{"en", {"too short"}}, {"de", {"zu kurz"}}}), LangIdError);
  auto dup = training({"en", "en"});
  CHECK_THROWS_AS(LangIdModel::train(dup), LangIdError);
  auto empty_key = training({"en", "de"});
  empty_key[1].first.clear();
  CHECK_THROWS_AS(LangIdModel::train(empty_key), LangIdError);
}

TEST_CASE("training is deterministic and serialization is byte-stable") {
  const auto a = LangIdModel::train(training({"en", "de", "fr"}));
  const auto b = LangIdModel::train(training({"en", "de", "fr"}));
  std::ostringstream sa, sb;
  a.save(sa);
  b.save(sb);
  CHECK(sa.str() == sb.str());

  std::istringstream in(sa.str());
  const auto c = LangIdModel::load(in);
  std::ostringstream sc;
  c.save(sc);
  CHECK(sc.str() == sa.str());
  const std::string probe = "Das ist ein ziemlich langer deutscher Satz.";
  CHECK(c.predict(probe).lang == a.predict(probe).lang);
  CHECK(c.score("de", probe) == a.score("de", probe));

  TempDir dir;
  a.save_file(dir.file("m.txt"));
  CHECK(testutil::read_file(dir.file("m.txt")) == sa.str());
  std::istringstream bad("#corpaudit-langid\t9\n");
  CHECK_THROWS_AS(LangIdModel::load(bad), LangIdError);
}

TEST_CASE("short texts are low-confidence") {
  const auto& m = six_language_model();
  CHECK(m.predict("Hello there").low_confidence);
  CHECK_THROWS_AS(m.predict(""), LangIdError);
  CHECK_FALSE(m.predict("This sentence is comfortably longer than twenty characters.")
                  .low_confidence);
}

TEST_CASE("trailing whitespace does not change the prediction") {
  const auto& m = six_language_model();
  for (const auto& s : lines_of(data_path("langid/heldout/fr.txt"))) {
    const auto a = m.predict(s);
    const auto b = m.predict(s + "   \t ");
    CHECK(a.lang == b.lang);
    CHECK(a.score == doctest::Approx(b.score));
  }
}

TEST_CASE("conditional distributions sum to one over the vocabulary") {
  const auto m = LangIdModel::train(training({"en", "de"}));
  // Collect the training vocabulary; the remaining mass goes to the single
  // unseen-character slot.
  std::set<char32_t> vocab;
  for (const auto& [lang, lines] : training({"en", "de"})) {
    for (const auto& l : lines) {
      for (char32_t c : normalize_for_langid(l)) vocab.insert(c);
    }
  }
  REQUIRE(vocab.size() + 1 == m.vocabulary_size());
  char32_t unseen = 0x4E00;
  while (vocab.count(unseen)) ++unseen;
  for (int order = 1; order <= 4; ++order) {
    for (const std::u32string ctx : {U"the", U"ein", U"qzx"}) {
      const auto h = std::u32string_view(ctx).substr(4 - static_cast<std::size_t>(order));
      double total = m.conditional("en", order, h, unseen);
      for (char32_t c : vocab) total += m.conditional("en", order, h, c);
      CHECK(total == doctest::Approx(1.0).epsilon(1e-9));
    }
  }
}

TEST_CASE("six-language model reaches high held-out accuracy") {
  const auto& m = six_language_model();
  int right = 0, total = 0;
  for (const auto& l : m.languages()) {
    for (const auto& s : lines_of(data_path("langid/heldout/" + l + ".txt"))) {
      ++total;
      right += m.predict(s).lang == l;
    }
  }
  CHECK(total == 120);
  CHECK(static_cast<double>(right) / total >= 0.95);
}

TEST_CASE("filter_pair keeps pairs whose predictions match the declared languages") {
  TableClassifier m;
  m.answers = {{"hello", "en"}, {"hallo", "de"}, {"bonjour", "fr"}};
  auto d = filter_pair(m, {"c:0", "en", "de", "hello", "hallo"});
  CHECK(d.evaluable);
  CHECK(d.kept);
  d = filter_pair(m, {"c:1", "en", "de", "hello", "bonjour"});
  CHECK(d.evaluable);
  CHECK_FALSE(d.kept);
  // Low confidence never matches.
  d = filter_pair(m, {"c:2", "en", "de", "hello", "unknown text"});
  CHECK_FALSE(d.kept);
  // Region subtags are compared on the base language.
  d = filter_pair(m, {"c:3", "en", "de_DE", "hello", "hallo"});
  CHECK(d.kept);
  // A declared language outside the model cannot be evaluated.
  d = filter_pair(m, {"c:4", "en", "sw", "hello", "hallo"});
  CHECK_FALSE(d.evaluable);
  CHECK_FALSE(d.kept);
}

TEST_CASE("filter_pair applies rules corrections to declared tags") {
  TableClassifier m;
  m.answers = {{"hello", "en"}, {"hallo", "de"}};
  const auto rules = RulesDatabase::load(data_path("codes/rules.tsv"));
  // zsl is published for data that is actually English.
  auto d = filter_pair(m, {"j:0", "en", "zsl", "hello", "hello"}, &rules, "JW300");
  CHECK(d.evaluable);
  CHECK(d.kept);
  d = filter_pair(m, {"j:1", "en", "zsl", "hello", "hello"});
  CHECK_FALSE(d.evaluable);
}

TEST_CASE("filter_eval worked examples") {
  std::map<std::string, AnnotationRecord> ann = {
      {"a", rec("a", Label::CC)}, {"b", rec("b", Label::WL)},
      {"c", rec("c", Label::CS)}, {"d", rec("d", Label::NL)}};
  std::vector<FilterDecision> ds = {decision("a", "de", true), decision("b", "de", true),
                                    decision("c", "de", false), decision("d", "de", false)};
  auto m = filter_eval(ann, ds);
  CHECK(*m.overall.retention_precision() == doctest::Approx(0.5));
  CHECK(*m.overall.retention_recall() == doctest::Approx(0.5));
  CHECK(*m.overall.detection_precision() == doctest::Approx(0.5));
  CHECK(*m.overall.detection_recall() == doctest::Approx(0.5));

  // All kept, all correct.
  for (auto& d : ds) d.kept = true;
  for (auto& [id, r] : ann) r.label = Label::CC;
  m = filter_eval(ann, ds);
  CHECK(*m.overall.retention_precision() == 1.0);
  CHECK(*m.overall.retention_recall() == 1.0);

  // Nothing kept: precision is undefined, not zero.
  for (auto& d : ds) d.kept = false;
  m = filter_eval(ann, ds);
  CHECK_FALSE(m.overall.retention_precision().has_value());
  CHECK_FALSE(m.overall.detection_precision().has_value());
  CHECK(*m.overall.retention_recall() == 0.0);
}

TEST_CASE("filter_eval errors and exclusions") {
  std::map<std::string, AnnotationRecord> ann = {{"a", rec("a", Label::CC)},
                                                 {"u", rec("u", Label::U)}};
  CHECK_THROWS_AS(filter_eval(ann, {decision("zzz", "de", true)}), LangIdError);
  CHECK_THROWS_AS(filter_eval(ann, {decision("a", "de", true), decision("a", "de", true)}),
                  LangIdError);
  auto skipped = decision("a", "de", false);
  skipped.evaluable = false;
  const auto m = filter_eval(ann, {skipped, decision("u", "de", true)});
  CHECK(m.unevaluable == 1);
  CHECK(m.unresolved == 1);
  CHECK(m.overall.pairs == 0);
}

TEST_CASE("filter_eval matches a brute-force confusion-matrix oracle") {
  std::mt19937_64 rng(2024);
  const Label labels[] = {Label::CC, Label::CS, Label::CB, Label::X, Label::WL, Label::NL};
  for (int trial = 0; trial < 100; ++trial) {
    const int n = 1 + static_cast<int>(rng() % 1000);
    std::map<std::string, AnnotationRecord> ann;
    std::vector<FilterDecision> ds;
    for (int i = 0; i < n; ++i) {
      const std::string id = "p" + std::to_string(i);
      ann.emplace(id, rec(id, labels[rng() % 6]));
      ds.push_back(decision(id, rng() % 2 ? "de" : "fr", rng() % 3 != 0));
    }
    const auto m = filter_eval(ann, ds);

    // Oracle: enumerate every (kept, truth) cell.
    double tp = 0, fp = 0, fn = 0, kc = 0, kn = 0, dc = 0;
    for (const auto& d : ds) {
      const Label l = ann.at(d.id).label;
      const bool c = l == Label::CC || l == Label::CS || l == Label::CB;
      const bool pos = c || l == Label::X;
      if (d.kept && pos) ++tp;
      if (d.kept && !pos) ++fp;
      if (!d.kept && pos) ++fn;
      if (d.kept && c) ++kc;
      if (d.kept && !c) ++kn;
      if (!d.kept && c) ++dc;
    }
    auto same = [](std::optional<double> got, double num, double den) {
      if (den == 0) return !got.has_value();
      return got.has_value() && std::abs(*got - num / den) < 1e-12;
    };
    CHECK(same(m.overall.detection_precision(), tp, tp + fp));
    CHECK(same(m.overall.detection_recall(), tp, tp + fn));
    CHECK(same(m.overall.retention_precision(), kc, kc + kn));
    CHECK(same(m.overall.retention_recall(), kc, kc + dc));
    CHECK(m.overall.pairs == static_cast<std::size_t>(n));
  }
}

TEST_CASE("noisy-language medians") {
  std::map<std::string, AnnotationRecord> ann;
  std::vector<FilterDecision> ds;
  auto add = [&](const std::string& id, const std::string& tgt, Label l, bool kept) {
    ann.emplace(id, rec(id, l));
    ds.push_back(decision(id, tgt, kept));
  };
  // de: 1 of 4 correct (noisy); fr: 3 of 4 correct (clean); es: 0 of 2 (noisy).
  add("d1", "de", Label::CC, true);
  add("d2", "de", Label::WL, true);
  add("d3", "de", Label::NL, false);
  add("d4", "de", Label::NL, false);
  add("f1", "fr", Label::CC, true);
  add("f2", "fr", Label::CC, true);
  add("f3", "fr", Label::CS, true);
  add("f4", "fr", Label::NL, true);
  add("e1", "es", Label::NL, false);
  add("e2", "es", Label::WL, true);
  const auto m = filter_eval(ann, ds);
  CHECK(m.noisy == std::vector<std::string>{"de", "es"});
  CHECK(*m.median_noisy_prefilter == doctest::Approx(0.125));
  CHECK(*m.median_noisy_retention_precision == doctest::Approx(0.25));
  // es has no correct pairs, so its recall is undefined and left out.
  CHECK(*m.median_noisy_retention_recall == doctest::Approx(1.0));

  std::ostringstream out;
  write_filter_report(out, m);
  CHECK(out.str().find("undefined") != std::string::npos);
}

TEST_CASE("median") {
  CHECK_FALSE(median({}).has_value());
  CHECK(*median({3, 1, 2}) == 2);
  CHECK(*median({4, 1, 2, 3}) == 2.5);
}

TEST_CASE("decisions round trip through CSV") {
  TempDir dir;
  TableClassifier m;
  m.answers = {{"hello", "en"}, {"hallo", "de"}};
  const auto ds = filter_corpus(m, {{"c:0", "en", "de", "hello", "hallo"},
                                    {"c:1", "en", "de", "hello, \"quoted\"", "hallo"}});
  {
    std::ofstream out(dir.file("d.csv"));
    write_decisions(out, ds);
  }
  const auto back = read_decisions(dir.file("d.csv"));
  REQUIRE(back.size() == 2);
  CHECK(back[0].id == "c:0");
  CHECK(back[0].kept);
  CHECK_FALSE(back[1].kept);
  CHECK(back[1].declared_tgt == "de");
}
