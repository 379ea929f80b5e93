#pragma once

#include <cstdint>
#include <optional>
#include <set>
#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

#include "corpaudit/corpus_io.hpp"

namespace corpaudit {

// Assignable audit labels. C is the union {CC, CS, CB} and is not assignable.
enum class Label { CC, CS, CB, X, WL, NL, U };

inline constexpr Label kAllLabels[] = {Label::CC, Label::CS, Label::CB, Label::X,
                                       Label::WL, Label::NL, Label::U};

class LabelError : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

// Case-insensitive; no aliases.
Label parse_label(std::string_view token);
std::string_view render_label(Label label);

inline bool is_correct(Label label) {
  return label == Label::CC || label == Label::CS || label == Label::CB;
}

enum class Granularity { two = 2, four = 4, six = 6 };

Granularity parse_granularity(int n);

// Label after merging classes. six keeps CC/CS/CB/X/WL/NL; four folds the
// correct subclasses into C; two is C versus NotC.
enum class CoarseLabel { CC, CS, CB, C, X, WL, NL, NotC };

std::string_view render_coarse(CoarseLabel label);

// Throws LabelError for U.
CoarseLabel coarsen(Label label, Granularity granularity);

struct AnnotationRecord {
  std::string item_id;
  std::string rater_id;
  Label label = Label::CC;
  bool offensive = false;
  bool porn = false;
  std::optional<std::string> note;
  std::int64_t timestamp = 0;  // UTC seconds
};

struct Violation {
  std::string code;     // machine-readable, e.g. "x_on_monolingual"
  std::string message;  // e.g. "X illegal for monolingual"
};

// Known ids of a project. Empty sets mean "not checked".
struct AnnotationRegistry {
  std::set<std::string> item_ids;
  std::set<std::string> rater_ids;
};

struct ValidationContext {
  CorpusKind kind = CorpusKind::monolingual;
  bool at_export = false;
  const AnnotationRegistry* registry = nullptr;
};

std::vector<Violation> validate_annotation(const AnnotationRecord& record,
                                           const ValidationContext& context);

}  // namespace corpaudit
