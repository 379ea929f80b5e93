#include <doctest.h>

#include <algorithm>
#include <random>
#include <sstream>

#include "corpaudit/langtags.hpp"
#include "test_util.hpp"

using namespace corpaudit;
using testutil::data_path;

namespace {

const RulesDatabase& rules() {
  static const RulesDatabase db = RulesDatabase::load(data_path("codes/rules.tsv"));
  return db;
}

const Iso639Registry& registry() {
  static const Iso639Registry reg = Iso639Registry::load(data_path("codes/iso639.tsv"));
  return reg;
}

LintReport lint_list(const std::string& name, const std::string& dataset) {
  return lint_codes(rules(), read_code_list(data_path("codes/lists/" + name + ".txt")), dataset,
                    &registry());
}

}  // namespace

TEST_CASE("parse_tag examples") {
  auto t = parse_tag("hi-Latn");
  CHECK(t.language == "hi");
  CHECK(t.script == "Latn");
  CHECK_FALSE(t.region.has_value());

  t = parse_tag("fr-CA");
  CHECK(t.language == "fr");
  CHECK(t.region == "CA");
  CHECK_FALSE(t.script.has_value());

  t = parse_tag("en");
  CHECK(t.language == "en");
  CHECK_FALSE(t.script.has_value());
  CHECK_FALSE(t.region.has_value());
  CHECK(t.private_use.empty());

  t = parse_tag("es-419");
  CHECK(t.region == "419");
}

TEST_CASE("normalize_tag examples") {
  CHECK(normalize_tag("EN-latn") == "en-Latn");
  const auto pt = parse_tag("pt_PT");
  CHECK(pt.underscore_separators);
  CHECK(normalize_tag(pt) == "pt-PT");
  CHECK(normalize_tag("naq_x_dmr") == "naq-x-dmr");
  CHECK(normalize_tag("ZH-hant-tw") == "zh-Hant-TW");
}

TEST_CASE("parse_tag errors name the component") {
  auto component = [](std::string_view s) {
    try {
      parse_tag(s);
    } catch (const TagError& e) {
      return e.component();
    }
    return std::string("none");
  };
  CHECK(component("") == "tag");
  CHECK(component("e") == "language");
  CHECK(component("engl") == "language");
  CHECK(component("en-Latn-USA") == "script/region");
  CHECK(component("en-x") == "private-use");
  CHECK(component("en-x-toolongtag") == "private-use");
  CHECK(component("en-") != "none");
  std::string err;
  CHECK_FALSE(try_parse_tag("12", &err).has_value());
  CHECK_FALSE(err.empty());
}

TEST_CASE("normalize is idempotent and closed under parsing") {
  std::mt19937 rng(17);
  const std::vector<std::string> langs = {"en", "EN", "hbs", "Zh", "naq"};
  const std::vector<std::string> scripts = {"", "latn", "CYRL", "Hant"};
  const std::vector<std::string> regions = {"", "us", "419", "Pt"};
  const std::vector<std::string> privs = {"", "x-dmr", "X-ab-CD12"};
  for (int i = 0; i < 300; ++i) {
    const char sep = rng() % 2 ? '-' : '_';
    std::string s = langs[rng() % langs.size()];
    for (const auto* part : {&scripts[rng() % scripts.size()], &regions[rng() % regions.size()],
                             &privs[rng() % privs.size()]}) {
      if (part->empty()) continue;
      std::string p = *part;
      if (sep == '_') std::replace(p.begin(), p.end(), '-', '_');
      s += sep + p;
    }
    const auto once = normalize_tag(s);
    CHECK(normalize_tag(once) == once);
    CHECK(try_parse_tag(once).has_value());
    CHECK(once.find('_') == std::string::npos);
  }
}

TEST_CASE("check_code examples") {
  auto c = rules().check_code("zz", "CCAligned");
  REQUIRE(c.issues.size() == 1);
  CHECK(c.issues[0].category == IssueCategory::NONSTANDARD);
  CHECK(c.issues[0].suggestions == std::vector<std::string>{"zza"});

  c = rules().check_code("iw", "mC4");
  REQUIRE(c.issues.size() == 1);
  CHECK(c.issues[0].category == IssueCategory::DEPRECATED);
  CHECK(c.issues[0].suggestions == std::vector<std::string>{"he"});

  c = rules().check_code("als", "OSCAR");
  REQUIRE(c.issues.size() == 1);
  CHECK(c.issues[0].category == IssueCategory::NONSTANDARD);
  CHECK(c.issues[0].suggestions == std::vector<std::string>{"gsw"});
  CHECK(c.issues[0].note.find("Alemannic") != std::string::npos);

  c = rules().check_code("en", "mC4");
  CHECK(c.issues.empty());
  CHECK(c.warnings.empty());
}

TEST_CASE("check_code on an unknown dataset applies every rule with a warning") {
  const auto c = rules().check_code("zz", "SomeNewCorpus");
  CHECK_FALSE(c.warnings.empty());
  REQUIRE_FALSE(c.issues.empty());
  CHECK(c.issues[0].suggestions.front() == "zza");
}

TEST_CASE("dataset names are matched loosely") {
  CHECK(dataset_key("Wiki Matrix") == "wikimatrix");
  CHECK(rules().knows_dataset("wikimatrix"));
  CHECK(rules().check_code("zz", "ccaligned").issues.size() == 1);
}

TEST_CASE("rules keyed on the base subtag apply to regional variants") {
  const auto c = rules().check_code("iw_IL", "mC4");
  REQUIRE(c.issues.size() == 1);
  CHECK(c.issues[0].suggestions.front() == "he");
  CHECK(rules().corrected_tag("iw_IL", "mC4") == "he-IL");
}

TEST_CASE("deprecated daf lists both candidates") {
  const auto c = rules().check_code("daf", "JW300");
  REQUIRE(c.issues.size() == 1);
  CHECK(c.issues[0].suggestions == std::vector<std::string>{"dnj", "lda"});
}

TEST_CASE("unresolved private-use extensions carry no suggestion") {
  const auto c = rules().check_code("rmy_AR", "JW300");
  REQUIRE(c.issues.size() == 1);
  CHECK(c.issues[0].category == IssueCategory::MALFORMED_PRIVATE_USE);
  CHECK(c.issues[0].suggestions.empty());
}

TEST_CASE("superset_conflicts examples") {
  auto issues = rules().superset_conflicts({"sr", "hr", "bs", "sh"}, "WikiMatrix");
  REQUIRE(issues.size() == 1);
  CHECK(issues[0].observed == "sh");
  CHECK(issues[0].category == IssueCategory::SUPERSET_AMBIGUOUS);
  for (const char* sub : {"bs", "hr", "sr"}) CHECK(issues[0].note.find(sub) != std::string::npos);

  issues = rules().superset_conflicts({"ar", "arz"}, "OSCAR");
  REQUIRE(issues.size() == 1);
  CHECK(issues[0].observed == "ar");

  CHECK(rules().superset_conflicts({"en", "fr"}, "OSCAR").empty());
  // The subcode must actually be present.
  CHECK(rules().superset_conflicts({"ar", "en"}, "OSCAR").empty());
}

TEST_CASE("check_sign_language examples") {
  auto s = rules().check_sign_language("zsl", "JW300");
  REQUIRE(s.has_value());
  CHECK(s->category == IssueCategory::SIGN_LANGUAGE_MISLABEL);
  CHECK(s->suggestions.front() == "en");
  s = rules().check_sign_language("csl", "JW300");
  REQUIRE(s.has_value());
  CHECK(s->suggestions.front() == "zh");
  CHECK_FALSE(rules().check_sign_language("en", "JW300").has_value());
}

TEST_CASE("corrected_tag") {
  CHECK(rules().corrected_tag("zz", "CCAligned") == "zza");
  CHECK(rules().corrected_tag("zsl", "JW300") == "en");
  CHECK(rules().corrected_tag("DE_de", "CCAligned") == "de-DE");
  CHECK_FALSE(rules().corrected_tag("not a tag", "CCAligned").has_value());
}

TEST_CASE("every suggestion in the shipped rules parses") {
  REQUIRE(rules().rules().size() > 50);
  for (const auto& r : rules().rules()) {
    for (const auto& s : r.suggestions) CHECK_MESSAGE(try_parse_tag(s).has_value(), s);
  }
}

TEST_CASE("rules round trip through serialization") {
  std::ostringstream out;
  rules().save(out);
  std::istringstream in(out.str());
  const auto again = RulesDatabase::parse(in, "roundtrip");
  REQUIRE(again.rules().size() == rules().rules().size());
  for (std::size_t i = 0; i < again.rules().size(); ++i) {
    const auto& a = rules().rules()[i];
    const auto& b = again.rules()[i];
    CHECK(a.dataset == b.dataset);
    CHECK(a.observed == b.observed);
    CHECK(a.category == b.category);
    CHECK(a.suggestions == b.suggestions);
    CHECK(a.related == b.related);
    CHECK(a.note == b.note);
  }
  std::ostringstream out2;
  again.save(out2);
  CHECK(out2.str() == out.str());
}

TEST_CASE("rules files are validated at load") {
  std::istringstream wrong_version("#corpaudit-rules\t2\n");
  CHECK_THROWS(RulesDatabase::parse(wrong_version, "v2"));
  std::istringstream bad_suggestion(
      "#corpaudit-rules\t1\ndataset\tobserved\tcategory\tsuggestion\trelated\tnote\n"
      "X\tab\tNONSTANDARD\tnot-a-tag!\t\t\n");
  CHECK_THROWS(RulesDatabase::parse(bad_suggestion, "bad"));
  std::istringstream bad_category(
      "#corpaudit-rules\t1\ndataset\tobserved\tcategory\tsuggestion\trelated\tnote\n"
      "X\tab\tWRONG\t\t\t\n");
  CHECK_THROWS(RulesDatabase::parse(bad_category, "bad"));
}

TEST_CASE("linting the shipped code lists") {
  CHECK(lint_list("ccaligned", "CCAligned").nonstandard_codes() == 8);
  CHECK(lint_list("oscar", "OSCAR").nonstandard_codes() == 3);
  CHECK(lint_list("mc4", "mC4").nonstandard_codes() == 1);
  CHECK(lint_list("wikimatrix", "WikiMatrix").nonstandard_codes() == 1);

  std::size_t supersets = 0;
  for (const auto& [list, ds] : std::vector<std::pair<std::string, std::string>>{
           {"ccaligned", "CCAligned"}, {"oscar", "OSCAR"}, {"mc4", "mC4"},
           {"wikimatrix", "WikiMatrix"}, {"paracrawl", "ParaCrawl"}, {"jw300", "JW300"}}) {
    supersets += lint_list(list, ds).count(IssueCategory::SUPERSET_AMBIGUOUS);
  }
  CHECK(supersets == 15);
  CHECK(lint_list("jw300", "JW300").codes_with(IssueCategory::SIGN_LANGUAGE_MISLABEL) == 48);
}

TEST_CASE("a clean list has no findings") {
  const auto report = lint_list("clean", "mC4");
  CHECK(report.findings.empty());
  CHECK(report.codes.size() > 10);
}

TEST_CASE("lint output formats") {
  const auto report = lint_codes(rules(), {"zz", "en", "sz"}, "CCAligned", &registry());
  std::ostringstream csv, md;
  write_lint_csv(csv, report);
  write_lint_markdown(md, report);
  CHECK(csv.str().find("CCAligned,zz,NONSTANDARD,zza") != std::string::npos);
  CHECK(md.str().find("| zz |") != std::string::npos);
}
