#pragma once

#include <map>
#include <optional>
#include <set>
#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

namespace corpaudit {

// language[-script][-region][-x-private...]; the subset of BCP-47 needed to
// describe corpus language codes. Extlang, variants and extensions are not
// supported.
struct LanguageTag {
  std::string language;                // lowercase, 2-3 letters
  std::optional<std::string> script;   // title case, 4 letters
  std::optional<std::string> region;   // uppercase 2 letters or 3 digits
  std::vector<std::string> private_use;  // lowercase, 1-8 alphanumerics each
  std::string raw;
  bool underscore_separators = false;
};

class TagError : public std::invalid_argument {
 public:
  TagError(std::string component, const std::string& message)
      : std::invalid_argument(message), component_(std::move(component)) {}
  // "tag", "language", "script/region", "private-use"
  const std::string& component() const { return component_; }

 private:
  std::string component_;
};

// Case-insensitive; '_' is accepted as a separator (recorded in the tag).
LanguageTag parse_tag(std::string_view s);
std::optional<LanguageTag> try_parse_tag(std::string_view s, std::string* error = nullptr);

// Canonical rendering: en-Latn-US, naq-x-dmr.
std::string normalize_tag(const LanguageTag& tag);
// parse_tag + normalize_tag.
std::string normalize_tag(std::string_view s);

// Registered base subtags: ISO 639-1, ISO 639-3 and ISO 639-5 codes.
class Iso639Registry {
 public:
  static Iso639Registry load(const std::string& path);

  bool contains(std::string_view code) const;
  // The two-letter equivalent of a three-letter code, if any.
  std::optional<std::string> alpha2_for(std::string_view alpha3) const;
  std::optional<std::string> name(std::string_view code) const;
  std::size_t size() const { return names_.size(); }

 private:
  std::map<std::string, std::string, std::less<>> names_;
  std::map<std::string, std::string, std::less<>> alpha2_of_;
};

enum class IssueCategory {
  NONSTANDARD,
  DEPRECATED,
  SUPERSET_AMBIGUOUS,
  SIGN_LANGUAGE_MISLABEL,
  MALFORMED_PRIVATE_USE,
  ISO3_FOR_ISO2,
  EQUIVALENT_DUPLICATE,
};

std::string_view render_category(IssueCategory category);
IssueCategory parse_category(std::string_view s);

struct CodeIssue {
  IssueCategory category = IssueCategory::NONSTANDARD;
  std::string observed;
  std::vector<std::string> suggestions;  // canonical tags; may be empty
  std::string note;
  std::string source;  // "<rules file>:<line>"
};

struct CodeRule {
  std::string dataset;   // canonical dataset key, or "*" for every dataset
  std::string observed;  // as written in the rules file
  IssueCategory category = IssueCategory::NONSTANDARD;
  std::vector<std::string> suggestions;
  std::vector<std::string> related;  // subcodes for superset rules
  std::string note;
  std::string source;
};

struct CodeCheck {
  std::vector<CodeIssue> issues;
  std::vector<std::string> warnings;
};

// Curated code-issue rules, loaded from a versioned tab-separated file:
//
//   #corpaudit-rules<TAB>1
//   dataset  observed  category  suggestion  related  note
//
// Multiple suggestions are separated by '|', related codes by spaces.
class RulesDatabase {
 public:
  static constexpr int kFormatVersion = 1;

  static RulesDatabase load(const std::string& path);
  static RulesDatabase parse(std::istream& in, const std::string& source_name);
  void save(std::ostream& out) const;

  const std::vector<CodeRule>& rules() const { return rules_; }
  // Canonical dataset keys mentioned by any rule (excluding "*").
  std::set<std::string> datasets() const;
  bool knows_dataset(std::string_view dataset) const;

  // All issues for one code. Exact (whole-code) rules win over rules keyed
  // on the bare language subtag. Superset rules need the other codes of the
  // dataset and are handled by superset_conflicts.
  CodeCheck check_code(std::string_view code, std::string_view dataset) const;

  std::vector<CodeIssue> superset_conflicts(const std::set<std::string>& codes,
                                            std::string_view dataset) const;

  std::optional<CodeIssue> check_sign_language(std::string_view code,
                                               std::string_view dataset) const;

  // Declared tag with rules corrections applied: the first suggestion of a
  // NONSTANDARD/DEPRECATED/ISO3_FOR_ISO2/MALFORMED_PRIVATE_USE/
  // SIGN_LANGUAGE_MISLABEL issue, else the normalized tag itself.
  std::optional<std::string> corrected_tag(std::string_view code,
                                           std::string_view dataset) const;

 private:
  std::vector<const CodeRule*> rules_for(std::string_view dataset) const;

  std::vector<CodeRule> rules_;
  std::string version_;
};

// Lower-cased dataset name with spaces and punctuation removed, so
// "WikiMatrix" and "wikimatrix" name the same dataset.
std::string dataset_key(std::string_view dataset);

// Lowercase with '-' as separator; the key used to match codes to rules.
std::string code_key(std::string_view code);

struct LintFinding {
  std::string code;
  CodeIssue issue;
};

struct LintReport {
  std::string dataset;
  std::vector<std::string> codes;
  std::vector<LintFinding> findings;  // check_code and superset findings
  std::vector<std::string> warnings;

  std::size_t count(IssueCategory category) const;
  // Distinct codes with at least one non-superset finding.
  std::size_t nonstandard_codes() const;
  // Distinct codes carrying a finding of the category.
  std::size_t codes_with(IssueCategory category) const;
};

LintReport lint_codes(const RulesDatabase& rules, const std::vector<std::string>& codes,
                      std::string_view dataset, const Iso639Registry* registry = nullptr);

// One code per line; blank lines and '#' comments ignored.
std::vector<std::string> read_code_list(const std::string& path);

void write_lint_csv(std::ostream& out, const LintReport& report);
void write_lint_markdown(std::ostream& out, const LintReport& report);

}  // namespace corpaudit
