#include "corpaudit/taxonomy.hpp"

#include <cctype>

namespace corpaudit {

Label parse_label(std::string_view token) {
  std::string upper(token);
  for (auto& c : upper) c = static_cast<char>(std::toupper(static_cast<unsigned char>(c)));
  for (Label label : kAllLabels) {
    if (render_label(label) == upper) return label;
  }
  throw LabelError("unknown label '" + std::string(token) +
                   "' (valid: CC, CS, CB, X, WL, NL, U)");
}

std::string_view render_label(Label label) {
  switch (label) {
    case Label::CC: return "CC";
    case Label::CS: return "CS";
    case Label::CB: return "CB";
    case Label::X: return "X";
    case Label::WL: return "WL";
    case Label::NL: return "NL";
    case Label::U: return "U";
  }
  return "?";
}

Granularity parse_granularity(int n) {
  switch (n) {
    case 2: return Granularity::two;
    case 4: return Granularity::four;
    case 6: return Granularity::six;
    default:
      throw LabelError("granularity must be 2, 4 or 6, got " + std::to_string(n));
  }
}

std::string_view render_coarse(CoarseLabel label) {
  switch (label) {
    case CoarseLabel::CC: return "CC";
    case CoarseLabel::CS: return "CS";
    case CoarseLabel::CB: return "CB";
    case CoarseLabel::C: return "C";
    case CoarseLabel::X: return "X";
    case CoarseLabel::WL: return "WL";
    case CoarseLabel::NL: return "NL";
    case CoarseLabel::NotC: return "not-C";
  }
  return "?";
}

CoarseLabel coarsen(Label label, Granularity granularity) {
  if (label == Label::U) throw LabelError("unresolved label U cannot be coarsened");
  if (granularity == Granularity::two) {
    return is_correct(label) ? CoarseLabel::C : CoarseLabel::NotC;
  }
  if (granularity == Granularity::four && is_correct(label)) return CoarseLabel::C;
  switch (label) {
    case Label::CC: return CoarseLabel::CC;
    case Label::CS: return CoarseLabel::CS;
    case Label::CB: return CoarseLabel::CB;
    case Label::X: return CoarseLabel::X;
    case Label::WL: return CoarseLabel::WL;
    case Label::NL: return CoarseLabel::NL;
    case Label::U: break;
  }
  throw LabelError("unreachable");
}

std::vector<Violation> validate_annotation(const AnnotationRecord& record,
                                           const ValidationContext& context) {
  std::vector<Violation> out;
  if (record.label == Label::X && context.kind == CorpusKind::monolingual) {
    out.push_back({"x_on_monolingual", "X illegal for monolingual"});
  }
  if (record.label == Label::U && context.at_export) {
    out.push_back({"unresolved_u", "unresolved U"});
  }
  if (record.rater_id.empty()) {
    out.push_back({"missing_rater", "rater id is empty"});
  }
  if (const auto* reg = context.registry) {
    if (!reg->item_ids.empty() && !reg->item_ids.count(record.item_id)) {
      out.push_back({"unknown_item", "unknown item id '" + record.item_id + "'"});
    }
    if (!reg->rater_ids.empty() && !reg->rater_ids.count(record.rater_id)) {
      out.push_back({"unknown_rater", "unknown rater id '" + record.rater_id + "'"});
    }
  }
  return out;
}

}  // namespace corpaudit
