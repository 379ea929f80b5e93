#include "corpaudit/langtags.hpp"

#include <algorithm>
#include <cctype>
#include <fstream>
#include <istream>
#include <ostream>
#include <sstream>

#include "corpaudit/csv.hpp"

namespace corpaudit {

namespace {

bool all_of(std::string_view s, int (*pred)(int)) {
  return !s.empty() && std::all_of(s.begin(), s.end(), [&](char c) {
    return pred(static_cast<unsigned char>(c)) != 0;
  });
}

std::string lower(std::string_view s) {
  std::string out(s);
  for (auto& c : out) c = static_cast<char>(std::tolower(static_cast<unsigned char>(c)));
  return out;
}

std::string upper(std::string_view s) {
  std::string out(s);
  for (auto& c : out) c = static_cast<char>(std::toupper(static_cast<unsigned char>(c)));
  return out;
}

std::string title(std::string_view s) {
  std::string out = lower(s);
  if (!out.empty()) out[0] = static_cast<char>(std::toupper(static_cast<unsigned char>(out[0])));
  return out;
}

std::vector<std::string> split_any(std::string_view s, std::string_view seps) {
  std::vector<std::string> out;
  std::size_t start = 0;
  for (std::size_t i = 0; i <= s.size(); ++i) {
    if (i == s.size() || seps.find(s[i]) != std::string_view::npos) {
      out.emplace_back(s.substr(start, i - start));
      start = i + 1;
    }
  }
  return out;
}

std::string join(const std::vector<std::string>& parts, std::string_view sep) {
  std::string out;
  for (std::size_t i = 0; i < parts.size(); ++i) {
    if (i) out += sep;
    out += parts[i];
  }
  return out;
}

}  // namespace

LanguageTag parse_tag(std::string_view s) {
  if (s.empty()) throw TagError("tag", "empty language tag");
  LanguageTag tag;
  tag.raw = std::string(s);
  tag.underscore_separators = s.find('_') != std::string_view::npos;
  const auto parts = split_any(s, "-_");
  for (const auto& p : parts) {
    if (p.empty()) throw TagError("tag", "empty subtag in '" + std::string(s) + "'");
  }
  std::size_t i = 0;
  const auto& lang = parts[i];
  if (!(lang.size() >= 2 && lang.size() <= 3 && all_of(lang, std::isalpha))) {
    throw TagError("language", "language subtag '" + lang + "' must be 2-3 letters");
  }
  tag.language = lower(lang);
  ++i;
  if (i < parts.size() && parts[i].size() == 4 && all_of(parts[i], std::isalpha)) {
    tag.script = title(parts[i]);
    ++i;
  }
  if (i < parts.size()) {
    const auto& p = parts[i];
    if ((p.size() == 2 && all_of(p, std::isalpha)) || (p.size() == 3 && all_of(p, std::isdigit))) {
      tag.region = upper(p);
      ++i;
    }
  }
  if (i < parts.size() && lower(parts[i]) == "x") {
    ++i;
    if (i == parts.size()) {
      throw TagError("private-use", "private-use singleton 'x' without subtags");
    }
    for (; i < parts.size(); ++i) {
      const auto& p = parts[i];
      if (!(p.size() <= 8 && all_of(p, std::isalnum))) {
        throw TagError("private-use", "private-use subtag '" + p + "' must be 1-8 alphanumerics");
      }
      tag.private_use.push_back(lower(p));
    }
  }
  if (i < parts.size()) {
    throw TagError("script/region", "unexpected subtag '" + parts[i] + "' in '" + std::string(s) +
                                        "' (expected script, region or x- private use)");
  }
  return tag;
}

std::optional<LanguageTag> try_parse_tag(std::string_view s, std::string* error) {
  try {
    return parse_tag(s);
  } catch (const TagError& e) {
    if (error) *error = e.what();
    return std::nullopt;
  }
}

std::string normalize_tag(const LanguageTag& tag) {
  std::string out = tag.language;
  if (tag.script) out += "-" + *tag.script;
  if (tag.region) out += "-" + *tag.region;
  if (!tag.private_use.empty()) out += "-x-" + join(tag.private_use, "-");
  return out;
}

std::string normalize_tag(std::string_view s) { return normalize_tag(parse_tag(s)); }

Iso639Registry Iso639Registry::load(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw std::runtime_error("cannot open ISO 639 snapshot " + path);
  Iso639Registry reg;
  std::string line;
  while (std::getline(in, line)) {
    if (line.empty() || line[0] == '#') continue;
    const auto f = split_any(line, "\t");
    if (f.size() < 5) throw std::runtime_error(path + ": malformed line: " + line);
    reg.names_[f[0]] = f[4];
    if (!f[1].empty()) {
      reg.names_[f[1]] = f[4];
      reg.alpha2_of_[f[0]] = f[1];
    }
  }
  return reg;
}

bool Iso639Registry::contains(std::string_view code) const {
  return names_.find(lower(code)) != names_.end();
}

std::optional<std::string> Iso639Registry::alpha2_for(std::string_view alpha3) const {
  auto it = alpha2_of_.find(lower(alpha3));
  if (it == alpha2_of_.end()) return std::nullopt;
  return it->second;
}

std::optional<std::string> Iso639Registry::name(std::string_view code) const {
  auto it = names_.find(lower(code));
  if (it == names_.end()) return std::nullopt;
  return it->second;
}

std::string_view render_category(IssueCategory category) {
  switch (category) {
    case IssueCategory::NONSTANDARD: return "NONSTANDARD";
    case IssueCategory::DEPRECATED: return "DEPRECATED";
    case IssueCategory::SUPERSET_AMBIGUOUS: return "SUPERSET_AMBIGUOUS";
    case IssueCategory::SIGN_LANGUAGE_MISLABEL: return "SIGN_LANGUAGE_MISLABEL";
    case IssueCategory::MALFORMED_PRIVATE_USE: return "MALFORMED_PRIVATE_USE";
    case IssueCategory::ISO3_FOR_ISO2: return "ISO3_FOR_ISO2";
    case IssueCategory::EQUIVALENT_DUPLICATE: return "EQUIVALENT_DUPLICATE";
  }
  return "?";
}

IssueCategory parse_category(std::string_view s) {
  for (auto c : {IssueCategory::NONSTANDARD, IssueCategory::DEPRECATED,
                 IssueCategory::SUPERSET_AMBIGUOUS, IssueCategory::SIGN_LANGUAGE_MISLABEL,
                 IssueCategory::MALFORMED_PRIVATE_USE, IssueCategory::ISO3_FOR_ISO2,
                 IssueCategory::EQUIVALENT_DUPLICATE}) {
    if (render_category(c) == s) return c;
  }
  throw std::invalid_argument("unknown issue category '" + std::string(s) + "'");
}

std::string dataset_key(std::string_view dataset) {
  std::string out;
  for (char c : dataset) {
    if (std::isalnum(static_cast<unsigned char>(c))) {
      out.push_back(static_cast<char>(std::tolower(static_cast<unsigned char>(c))));
    } else if (c == '*') {
      out.push_back('*');
    }
  }
  return out;
}

std::string code_key(std::string_view code) {
  std::string out = lower(code);
  std::replace(out.begin(), out.end(), '_', '-');
  return out;
}

RulesDatabase RulesDatabase::load(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw std::runtime_error("cannot open rules file " + path);
  return parse(in, path);
}

RulesDatabase RulesDatabase::parse(std::istream& in, const std::string& source_name) {
  RulesDatabase db;
  std::string line;
  std::size_t lineno = 0;
  bool header_seen = false;
  const std::string name = source_name.substr(source_name.find_last_of('/') + 1);
  while (std::getline(in, line)) {
    ++lineno;
    if (!line.empty() && line.back() == '\r') line.pop_back();
    if (lineno == 1) {
      const auto f = split_any(line, "\t");
      if (f.size() != 2 || f[0] != "#corpaudit-rules") {
        throw std::runtime_error(source_name + ": missing '#corpaudit-rules' version line");
      }
      if (f[1] != std::to_string(kFormatVersion)) {
        throw std::runtime_error(source_name + ": unsupported rules format version " + f[1]);
      }
      db.version_ = f[1];
      continue;
    }
    if (line.empty() || line[0] == '#') continue;
    const auto f = split_any(line, "\t");
    if (!header_seen) {
      if (f != std::vector<std::string>{"dataset", "observed", "category", "suggestion",
                                        "related", "note"}) {
        throw std::runtime_error(source_name + ":" + std::to_string(lineno) +
                                 ": unexpected header");
      }
      header_seen = true;
      continue;
    }
    if (f.size() != 6) {
      throw std::runtime_error(source_name + ":" + std::to_string(lineno) + ": expected 6 fields");
    }
    CodeRule rule;
    rule.dataset = f[0];
    rule.observed = f[1];
    rule.category = parse_category(f[2]);
    if (!f[3].empty()) rule.suggestions = split_any(f[3], "|");
    for (auto& s : rule.suggestions) {
      std::string err;
      if (!try_parse_tag(s, &err)) {
        throw std::runtime_error(source_name + ":" + std::to_string(lineno) +
                                 ": suggestion does not parse: " + err);
      }
      s = normalize_tag(s);
    }
    if (!f[4].empty()) {
      for (auto& r : split_any(f[4], " ")) {
        if (!r.empty()) rule.related.push_back(r);
      }
    }
    rule.note = f[5];
    rule.source = name + ":" + std::to_string(lineno);
    if (rule.observed.empty()) {
      throw std::runtime_error(source_name + ":" + std::to_string(lineno) + ": empty code");
    }
    db.rules_.push_back(std::move(rule));
  }
  if (!header_seen) throw std::runtime_error(source_name + ": missing header");
  return db;
}

void RulesDatabase::save(std::ostream& out) const {
  out << "#corpaudit-rules\t" << kFormatVersion << '\n';
  out << "dataset\tobserved\tcategory\tsuggestion\trelated\tnote\n";
  for (const auto& r : rules_) {
    out << r.dataset << '\t' << r.observed << '\t' << render_category(r.category) << '\t'
        << join(r.suggestions, "|") << '\t' << join(r.related, " ") << '\t' << r.note << '\n';
  }
}

std::set<std::string> RulesDatabase::datasets() const {
  std::set<std::string> out;
  for (const auto& r : rules_) {
    if (r.dataset != "*") out.insert(dataset_key(r.dataset));
  }
  return out;
}

bool RulesDatabase::knows_dataset(std::string_view dataset) const {
  return datasets().count(dataset_key(dataset)) > 0;
}

std::vector<const CodeRule*> RulesDatabase::rules_for(std::string_view dataset) const {
  const std::string key = dataset_key(dataset);
  const bool known = knows_dataset(dataset);
  std::vector<const CodeRule*> out;
  for (const auto& r : rules_) {
    if (r.dataset == "*" || !known || dataset_key(r.dataset) == key) out.push_back(&r);
  }
  return out;
}

namespace {

CodeIssue issue_from(const CodeRule& rule, std::string_view code) {
  return CodeIssue{rule.category, std::string(code), rule.suggestions, rule.note, rule.source};
}

void add_unique(std::vector<CodeIssue>& issues, CodeIssue issue) {
  for (const auto& existing : issues) {
    if (existing.category == issue.category && existing.suggestions == issue.suggestions) return;
  }
  issues.push_back(std::move(issue));
}

}  // namespace

CodeCheck RulesDatabase::check_code(std::string_view code, std::string_view dataset) const {
  CodeCheck out;
  if (!knows_dataset(dataset)) {
    out.warnings.push_back("unknown dataset '" + std::string(dataset) +
                           "': applying the rules of every dataset");
  }
  const std::string key = code_key(code);
  const auto candidates = rules_for(dataset);

  // Dataset-specific rules are listed before "*" rules so that they win the
  // de-duplication below.
  std::vector<const CodeRule*> ordered;
  for (const auto* r : candidates) {
    if (r->dataset != "*") ordered.push_back(r);
  }
  for (const auto* r : candidates) {
    if (r->dataset == "*") ordered.push_back(r);
  }

  bool exact = false;
  for (const auto* r : ordered) {
    if (r->category == IssueCategory::SUPERSET_AMBIGUOUS) continue;
    if (code_key(r->observed) == key) {
      add_unique(out.issues, issue_from(*r, code));
      exact = true;
    }
  }
  std::string error;
  const auto tag = try_parse_tag(code, &error);
  if (!tag) {
    out.warnings.push_back("'" + std::string(code) + "' is not a well-formed tag: " + error);
  } else if (tag->underscore_separators) {
    out.warnings.push_back("'" + std::string(code) + "' uses '_' separators; canonical form is " +
                           normalize_tag(*tag));
  }
  if (!exact && tag && key != tag->language) {
    for (const auto* r : ordered) {
      if (r->category == IssueCategory::SUPERSET_AMBIGUOUS) continue;
      if (code_key(r->observed) == tag->language) add_unique(out.issues, issue_from(*r, code));
    }
  }
  return out;
}

std::vector<CodeIssue> RulesDatabase::superset_conflicts(const std::set<std::string>& codes,
                                                         std::string_view dataset) const {
  // Match on the base language subtag so "zh_CN" counts as "zh".
  std::map<std::string, std::string> present;  // language key -> first observed code
  for (const auto& c : codes) {
    std::string base = code_key(c);
    if (auto tag = try_parse_tag(c)) base = tag->language;
    present.emplace(base, c);
  }
  std::vector<CodeIssue> out;
  for (const auto* r : rules_for(dataset)) {
    if (r->category != IssueCategory::SUPERSET_AMBIGUOUS) continue;
    auto sup = present.find(code_key(r->observed));
    if (sup == present.end()) continue;
    std::vector<std::string> co_present;
    for (const auto& sub : r->related) {
      if (present.count(code_key(sub))) co_present.push_back(sub);
    }
    if (co_present.empty()) continue;
    CodeIssue issue = issue_from(*r, sup->second);
    issue.note = "superset of co-present " + join(co_present, ", ") +
                 (r->note.empty() ? std::string() : "; " + r->note);
    out.push_back(std::move(issue));
  }
  return out;
}

std::optional<CodeIssue> RulesDatabase::check_sign_language(std::string_view code,
                                                            std::string_view dataset) const {
  const std::string key = code_key(code);
  for (const auto* r : rules_for(dataset)) {
    if (r->category == IssueCategory::SIGN_LANGUAGE_MISLABEL && code_key(r->observed) == key) {
      return issue_from(*r, code);
    }
  }
  return std::nullopt;
}

std::optional<std::string> RulesDatabase::corrected_tag(std::string_view code,
                                                        std::string_view dataset) const {
  const auto check = check_code(code, dataset);
  const std::string key = code_key(code);
  bool exact = false;
  for (const auto* r : rules_for(dataset)) {
    if (r->category != IssueCategory::SUPERSET_AMBIGUOUS && code_key(r->observed) == key) exact = true;
  }
  for (const auto& issue : check.issues) {
    if (issue.suggestions.empty()) continue;
    switch (issue.category) {
      case IssueCategory::NONSTANDARD:
      case IssueCategory::DEPRECATED:
      case IssueCategory::ISO3_FOR_ISO2:
      case IssueCategory::MALFORMED_PRIVATE_USE:
      case IssueCategory::SIGN_LANGUAGE_MISLABEL:
      case IssueCategory::EQUIVALENT_DUPLICATE: {
        // Keep region/script/private-use of the observed tag when the rule
        // only replaced the base subtag.
        auto tag = try_parse_tag(code);
        auto suggestion = parse_tag(issue.suggestions.front());
        if (tag && !exact && !suggestion.region &&
            !suggestion.script && suggestion.private_use.empty()) {
          tag->language = suggestion.language;
          return normalize_tag(*tag);
        }
        return normalize_tag(suggestion);
      }
      case IssueCategory::SUPERSET_AMBIGUOUS:
        break;
    }
  }
  if (auto tag = try_parse_tag(code)) return normalize_tag(*tag);
  return std::nullopt;
}

std::size_t LintReport::count(IssueCategory category) const {
  return static_cast<std::size_t>(std::count_if(
      findings.begin(), findings.end(),
      [&](const LintFinding& f) { return f.issue.category == category; }));
}

std::size_t LintReport::nonstandard_codes() const {
  std::set<std::string> codes;
  for (const auto& f : findings) {
    if (f.issue.category != IssueCategory::SUPERSET_AMBIGUOUS) codes.insert(f.code);
  }
  return codes.size();
}

std::size_t LintReport::codes_with(IssueCategory category) const {
  std::set<std::string> codes;
  for (const auto& f : findings) {
    if (f.issue.category == category) codes.insert(f.code);
  }
  return codes.size();
}

LintReport lint_codes(const RulesDatabase& rules, const std::vector<std::string>& codes,
                      std::string_view dataset, const Iso639Registry* registry) {
  LintReport report;
  report.dataset = std::string(dataset);
  report.codes = codes;
  if (!rules.knows_dataset(dataset)) {
    report.warnings.push_back("unknown dataset '" + std::string(dataset) +
                              "': applying the rules of every dataset");
  }
  std::set<std::string> seen;
  for (const auto& code : codes) {
    if (!seen.insert(code).second) {
      report.warnings.push_back("'" + code + "' listed more than once");
      continue;
    }
    auto check = rules.check_code(code, dataset);
    for (auto& issue : check.issues) report.findings.push_back({code, std::move(issue)});
    for (auto& w : check.warnings) {
      if (w.rfind("unknown dataset", 0) == 0) continue;
      report.warnings.push_back(std::move(w));
    }
    if (registry) {
      if (auto tag = try_parse_tag(code); tag && !registry->contains(tag->language)) {
        report.warnings.push_back("'" + code + "': base subtag '" + tag->language +
                                  "' is not in the ISO 639 snapshot");
      }
    }
  }
  for (auto& issue : rules.superset_conflicts(seen, dataset)) {
    std::string code = issue.observed;
    report.findings.push_back({std::move(code), std::move(issue)});
  }
  return report;
}

std::vector<std::string> read_code_list(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw std::runtime_error("cannot open code list " + path);
  std::vector<std::string> out;
  std::string line;
  while (std::getline(in, line)) {
    if (!line.empty() && line.back() == '\r') line.pop_back();
    const auto b = line.find_first_not_of(" \t");
    if (b == std::string::npos || line[b] == '#') continue;
    const auto e = line.find_last_not_of(" \t");
    out.push_back(line.substr(b, e - b + 1));
  }
  return out;
}

void write_lint_csv(std::ostream& out, const LintReport& report) {
  csv::write_row(out, {"dataset", "code", "category", "suggestion", "note", "source"});
  for (const auto& f : report.findings) {
    csv::write_row(out, {report.dataset, f.code, std::string(render_category(f.issue.category)),
                         join(f.issue.suggestions, "|"), f.issue.note, f.issue.source});
  }
}

void write_lint_markdown(std::ostream& out, const LintReport& report) {
  out << "# Language-code lint: " << report.dataset << "\n\n";
  out << "- codes checked: " << report.codes.size() << "\n";
  out << "- codes with non-superset findings: " << report.nonstandard_codes() << "\n";
  out << "- superset conflicts: " << report.count(IssueCategory::SUPERSET_AMBIGUOUS) << "\n\n";
  if (!report.findings.empty()) {
    out << "| code | category | suggestion | note |\n|---|---|---|---|\n";
    for (const auto& f : report.findings) {
      out << "| " << f.code << " | " << render_category(f.issue.category) << " | "
          << join(f.issue.suggestions, " / ") << " | " << f.issue.note << " |\n";
    }
    out << '\n';
  }
  if (!report.warnings.empty()) {
    out << "## Warnings\n\n";
    for (const auto& w : report.warnings) out << "- " << w << '\n';
  }
}

}  // namespace corpaudit
