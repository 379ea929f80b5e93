#include <doctest.h>
#include <json.hpp>

#include <algorithm>
#include <map>

#include "test_util.hpp"

using json = nlohmann::json;
using testutil::data_path;
using testutil::read_file;
using testutil::run_cli;
using testutil::TempDir;
using testutil::write_file;

namespace {

std::string q(const std::string& s) { return "'" + s + "'"; }

}  // namespace

TEST_CASE("--help documents every flag of every subcommand") {
  TempDir dir;
  const std::map<std::string, std::vector<std::string>> flags = {
      {"sample", {"--corpus", "--kind", "--lang", "--src-lang", "--tgt-lang", "-n", "--seed",
                  "--out", "--sizes", "--dataset", "-k", "--extra"}},
      {"serve", {"--root", "--host", "--port"}},
      {"stats", {"--annotations", "--sizes", "--downstream", "--out", "--dataset", "--rater",
                 "--cdf"}},
      {"agreement", {"--ref", "--other", "-n", "--ref-rater", "--other-rater"}},
      {"codes", {"--dataset", "--list", "--rules", "--iso", "--format", "--out"}},
      {"langid train", {"--input", "--alpha", "--order", "--min-length", "--min-chars", "--out"}},
      {"langid predict", {"--model", "--input"}},
      {"langid filter", {"--model", "--pairs", "--src-lang", "--tgt-lang", "--dataset", "--rules",
                         "--out"}},
      {"langid eval", {"--decisions", "--annotations", "--rater", "--out"}},
      {"report", {"--tables", "--sizes", "--downstream", "--lists", "--rules", "--iso", "--out",
                  "--cdf"}},
  };
  for (const auto& [cmd, expected] : flags) {
    const auto r = run_cli(cmd + " --help", dir.path().string());
    CHECK_MESSAGE(r.status == 0, cmd);
    for (const auto& f : expected) {
      CHECK_MESSAGE(r.out.find(f) != std::string::npos, (cmd + " " + f));
    }
  }
}

TEST_CASE("usage errors exit 2 with a JSON error") {
  TempDir dir;
  auto r = run_cli("sample --bogus", dir.path().string());
  CHECK(r.status == 2);
  CHECK(json::parse(r.err).contains("error"));
  r = run_cli("sample --corpus x --sizes y -k 1", dir.path().string());
  CHECK(r.status == 2);
}

TEST_CASE("runtime errors exit 1 with a JSON error") {
  TempDir dir;
  const auto r = run_cli("sample --corpus " + q(dir.file("missing.txt")) + " --lang en",
                         dir.path().string());
  CHECK(r.status == 1);
  const auto j = json::parse(r.err);
  CHECK(j.contains("error"));
  CHECK(j.contains("message"));
}

TEST_CASE("sample is reproducible") {
  TempDir dir;
  std::string content;
  for (int i = 0; i < 500; ++i) content += "line " + std::to_string(i) + "\n";
  write_file(dir.file("c.txt"), content);
  const std::string args = "sample --corpus " + q(dir.file("c.txt")) + " --lang en -n 100 --seed 7";
  const auto a = run_cli(args + " --out " + q(dir.file("a.jsonl")), dir.path().string());
  const auto b = run_cli(args + " --out " + q(dir.file("b.jsonl")), dir.path().string());
  REQUIRE(a.status == 0);
  REQUIRE(b.status == 0);
  const auto sa = read_file(dir.file("a.jsonl"));
  CHECK(sa == read_file(dir.file("b.jsonl")));
  CHECK(std::count(sa.begin(), sa.end(), '\n') == 100);
  const auto first = json::parse(sa.substr(0, sa.find('\n')));
  CHECK(first.at("lang") == "en");
  CHECK(first.at("id").get<std::string>().rfind("c:", 0) == 0);
}

TEST_CASE("agreement on identical files is 1.00") {
  TempDir dir;
  std::string jsonl;
  const char* labels[] = {"CC", "CS", "WL", "NL", "X", "CB"};
  for (int i = 0; i < 12; ++i) {
    jsonl += json{{"id", "c:" + std::to_string(i)}, {"corpus", "c"}, {"lang", "en-de"},
                  {"src", "s"}, {"tgt", "t"}, {"label", labels[i % 6]}, {"porn", false},
                  {"offensive", false}, {"rater", "a"}, {"ts", i}, {"note", nullptr}}
                 .dump() +
             "\n";
  }
  write_file(dir.file("a.jsonl"), jsonl);
  const auto r = run_cli("agreement --ref " + q(dir.file("a.jsonl")) + " --other " +
                             q(dir.file("a.jsonl")) + " -n 2",
                         dir.path().string());
  REQUIRE(r.status == 0);
  CHECK(r.out == "Acc-2\t1.00\n");
}

TEST_CASE("codes on the CCAligned list finds 8 nonstandard codes") {
  TempDir dir;
  const auto r = run_cli("codes --dataset ccaligned --list " +
                             q(data_path("codes/lists/ccaligned.txt")) + " --format csv",
                         dir.path().string());
  REQUIRE(r.status == 0);
  CHECK(r.out.rfind("dataset,code,category", 0) == 0);
  const auto summary = json::parse(r.err);
  CHECK(summary.at("nonstandard_codes") == 8);
}

TEST_CASE("stats over the shipped tables writes the aggregate CSV") {
  TempDir dir;
  const auto r = run_cli("stats --annotations " + q(data_path("audit")) + " --out " +
                             q(dir.file("out")),
                         dir.path().string());
  REQUIRE(r.status == 0);
  const auto agg = read_file(dir.file("out/aggregate.csv"));
  for (const char* ds : {"CCAligned,macro,", "OSCAR,macro,", "mC4,macro,", "WikiMatrix,macro,"}) {
    CHECK(agg.find(ds) != std::string::npos);
  }
}

TEST_CASE("langid train, predict, filter and eval from the command line") {
  TempDir dir;
  std::string inputs;
  for (const char* l : {"en", "de", "fr"}) {
    inputs += std::string(" --input ") + l + "=" + q(data_path(std::string("langid/train/") + l + ".txt"));
  }
  auto r = run_cli("langid train" + inputs + " --out " + q(dir.file("m.txt")), dir.path().string());
  REQUIRE(r.status == 0);
  r = run_cli("langid predict --model " + q(dir.file("m.txt")) +
                  " 'Die Katze schläft den ganzen Nachmittag auf dem Sofa.'",
              dir.path().string());
  REQUIRE(r.status == 0);
  CHECK(r.out.rfind("de\t", 0) == 0);

  write_file(dir.file("p.tsv"),
             "The weather is lovely today in the park.\tDas Wetter ist heute im Park herrlich.\n"
             "The weather is lovely today in the park.\tThe weather is lovely today in the park.\n");
  r = run_cli("langid filter --model " + q(dir.file("m.txt")) + " --pairs " + q(dir.file("p.tsv")) +
                  " --src-lang en --tgt-lang de --out " + q(dir.file("d.csv")),
              dir.path().string());
  REQUIRE(r.status == 0);

  std::string ann;
  const char* labels[] = {"CC", "WL"};
  for (int i = 0; i < 2; ++i) {
    ann += json{{"id", "p:" + std::to_string(i)}, {"corpus", "p"}, {"lang", "en-de"},
                {"src", "s"}, {"tgt", "t"}, {"label", labels[i]}, {"porn", false},
                {"offensive", false}, {"rater", "a"}, {"ts", 1}, {"note", nullptr}}
               .dump() +
           "\n";
  }
  write_file(dir.file("a.jsonl"), ann);
  r = run_cli("langid eval --decisions " + q(dir.file("d.csv")) + " --annotations " +
                  q(dir.file("a.jsonl")),
              dir.path().string());
  REQUIRE(r.status == 0);
  CHECK(r.out.find("ALL,2,1,") != std::string::npos);
}
