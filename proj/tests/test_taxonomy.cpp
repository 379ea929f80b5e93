#include <doctest.h>

#include "corpaudit/taxonomy.hpp"

using namespace corpaudit;

TEST_CASE("parse_label is case-insensitive and lists valid tokens on error") {
  CHECK(parse_label("CC") == Label::CC);
  CHECK(parse_label("wl") == Label::WL);
  CHECK(parse_label("u") == Label::U);
  try {
    parse_label("C");
    FAIL("C is not assignable");
  } catch (const LabelError& e) {
    CHECK(std::string(e.what()).find("CC, CS, CB, X, WL, NL, U") != std::string::npos);
  }
  CHECK_THROWS_AS(parse_label(""), LabelError);
  for (Label l : kAllLabels) CHECK(parse_label(render_label(l)) == l);
}

TEST_CASE("coarsen at every granularity") {
  CHECK(coarsen(Label::CS, Granularity::two) == CoarseLabel::C);
  CHECK(coarsen(Label::X, Granularity::two) == CoarseLabel::NotC);
  CHECK(coarsen(Label::NL, Granularity::two) == CoarseLabel::NotC);
  CHECK(coarsen(Label::CB, Granularity::four) == CoarseLabel::C);
  CHECK(coarsen(Label::WL, Granularity::four) == CoarseLabel::WL);
  CHECK(coarsen(Label::CB, Granularity::six) == CoarseLabel::CB);
  CHECK(coarsen(Label::X, Granularity::six) == CoarseLabel::X);
  CHECK_THROWS_AS(coarsen(Label::U, Granularity::six), LabelError);
  CHECK(parse_granularity(4) == Granularity::four);
  CHECK_THROWS_AS(parse_granularity(3), LabelError);
}

TEST_CASE("coarser granularities only merge classes") {
  const Label labels[] = {Label::CC, Label::CS, Label::CB, Label::X, Label::WL, Label::NL};
  for (Label a : labels) {
    for (Label b : labels) {
      const bool eq6 = coarsen(a, Granularity::six) == coarsen(b, Granularity::six);
      const bool eq4 = coarsen(a, Granularity::four) == coarsen(b, Granularity::four);
      const bool eq2 = coarsen(a, Granularity::two) == coarsen(b, Granularity::two);
      CHECK((!eq6 || eq4));
      CHECK((!eq4 || eq2));
    }
  }
}

TEST_CASE("validate_annotation") {
  AnnotationRecord r{"c:1", "rater1", Label::X, false, false, std::nullopt, 0};
  ValidationContext mono{CorpusKind::monolingual, false, nullptr};
  auto v = validate_annotation(r, mono);
  REQUIRE(v.size() == 1);
  CHECK(v[0].code == "x_on_monolingual");
  CHECK(v[0].message == "X illegal for monolingual");

  ValidationContext par{CorpusKind::parallel, false, nullptr};
  CHECK(validate_annotation(r, par).empty());

  r.label = Label::U;
  CHECK(validate_annotation(r, par).empty());
  ValidationContext at_export{CorpusKind::parallel, true, nullptr};
  v = validate_annotation(r, at_export);
  REQUIRE(v.size() == 1);
  CHECK(v[0].message == "unresolved U");

  r.label = Label::CC;
  r.rater_id.clear();
  CHECK(validate_annotation(r, par)[0].code == "missing_rater");

  AnnotationRegistry reg{{"c:1"}, {"alice"}};
  ValidationContext checked{CorpusKind::parallel, false, &reg};
  AnnotationRecord unknown{"c:9", "bob", Label::CC, false, false, std::nullopt, 0};
  v = validate_annotation(unknown, checked);
  REQUIRE(v.size() == 2);
  CHECK(v[0].code == "unknown_item");
  CHECK(v[1].code == "unknown_rater");
}
