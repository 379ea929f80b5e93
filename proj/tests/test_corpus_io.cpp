#include <doctest.h>
#include <zlib.h>

#include <algorithm>
#include <random>

#include "corpaudit/corpus_io.hpp"
#include "corpaudit/utf8.hpp"
#include "test_util.hpp"

using namespace corpaudit;
using testutil::TempDir;
using testutil::write_file;

namespace {

void write_gzip(const std::string& path, const std::string& content) {
  gzFile gz = gzopen(path.c_str(), "wb");
  REQUIRE(gz != nullptr);
  gzwrite(gz, content.data(), static_cast<unsigned>(content.size()));
  gzclose(gz);
}

}  // namespace

TEST_CASE("read_monolingual enumerates non-empty lines in order") {
  TempDir dir;
  write_file(dir.file("c.txt"), "one\ntwo\nthree\n");
  const auto corpus = read_monolingual(dir.file("c.txt"), "en");
  REQUIRE(corpus.items.size() == 3);
  CHECK(corpus.items[0].id == "c:0");
  CHECK(corpus.items[1].id == "c:1");
  CHECK(corpus.items[2].id == "c:2");
  CHECK(corpus.items[2].text == "three");
  CHECK(corpus.items[0].lang == "en");
  CHECK(corpus.skipped == 0);
}

TEST_CASE("empty lines are skipped and counted; ids keep the line index") {
  TempDir dir;
  write_file(dir.file("c.txt"), "a\nb\n\nc\nd");
  const auto corpus = read_monolingual(dir.file("c.txt"), "en");
  REQUIRE(corpus.items.size() == 4);
  CHECK(corpus.skipped == 1);
  CHECK(corpus.items[2].id == "c:3");
  CHECK(corpus.items[3].text == "d");
}

TEST_CASE("gzip input reads identically to its uncompressed twin") {
  TempDir dir;
  std::mt19937 rng(11);
  std::string content;
  for (int i = 0; i < 1000; ++i) {
    content += "line " + std::to_string(i) + " \xCE\xB1 " + std::to_string(rng()) + "\n";
  }
  write_file(dir.file("big.txt"), content);
  write_gzip(dir.file("big.txt.gz"), content);
  const auto plain = read_monolingual(dir.file("big.txt"), "en");
  const auto gz = read_monolingual(dir.file("big.txt.gz"), "en");
  REQUIRE(plain.items.size() == 1000);
  REQUIRE(gz.items.size() == 1000);
  for (std::size_t i = 0; i < plain.items.size(); ++i) {
    CHECK(plain.items[i].id == gz.items[i].id);
    CHECK(plain.items[i].text == gz.items[i].text);
  }
}

TEST_CASE("invalid UTF-8 is an error naming the byte offset") {
  TempDir dir;
  write_file(dir.file("bad.txt"), "ok\nab\xFFz\n");
  try {
    read_monolingual(dir.file("bad.txt"), "en");
    FAIL("expected CorpusError");
  } catch (const CorpusError& e) {
    // "ok\n" is 3 bytes, then "ab" → offset 5.
    CHECK(std::string(e.what()).find("byte offset 5") != std::string::npos);
  }
}

TEST_CASE("missing files are errors") {
  CHECK_THROWS_AS(read_monolingual("/nonexistent/corpus.txt", "en"), CorpusError);
}

TEST_CASE("read_parallel splits exactly one tab") {
  TempDir dir;
  write_file(dir.file("p.tsv"), "hello\thallo\nyes\tja\n");
  const auto corpus = read_parallel(dir.file("p.tsv"), "en", "de_DE");
  REQUIRE(corpus.pairs.size() == 2);
  CHECK(corpus.pairs[0].src_text == "hello");
  CHECK(corpus.pairs[0].tgt_text == "hallo");
  CHECK(corpus.pairs[1].src_lang == "en");
  CHECK(corpus.pairs[1].tgt_lang == "de_DE");
  CHECK(corpus.warnings.empty());
}

TEST_CASE("read_parallel reports the offending line on a wrong column count") {
  TempDir dir;
  write_file(dir.file("p.tsv"), "a\tb\nc\td\te\tf\n");
  try {
    read_parallel(dir.file("p.tsv"), "en", "de");
    FAIL("expected CorpusError");
  } catch (const CorpusError& e) {
    CHECK(std::string(e.what()).find("p.tsv:2") != std::string::npos);
  }
}

TEST_CASE("identical declared languages produce a warning") {
  TempDir dir;
  write_file(dir.file("p.tsv"), "a\tb\n");
  CHECK(read_parallel(dir.file("p.tsv"), "en", "en").warnings.size() == 1);
}

TEST_CASE("a 100-line en-de fixture gives 100 pairs with declared tags") {
  TempDir dir;
  std::string content;
  for (int i = 0; i < 100; ++i) {
    content += "sentence " + std::to_string(i) + "\tSatz " + std::to_string(i) + "\n";
  }
  write_file(dir.file("ccaligned.en-de.tsv"), content);
  const auto corpus = read_parallel(dir.file("ccaligned.en-de.tsv"), "en", "de_DE");
  CHECK(corpus.pairs.size() == 100);
  CHECK(std::all_of(corpus.pairs.begin(), corpus.pairs.end(), [](const SentencePair& p) {
    return p.src_lang == "en" && p.tgt_lang == "de_DE";
  }));
}

TEST_CASE("reading then re-serializing reproduces non-empty lines") {
  TempDir dir;
  const std::string content = "first line\n\n  spaced  \nlast";
  write_file(dir.file("r.txt"), content);
  std::string rebuilt;
  for (const auto& item : read_monolingual(dir.file("r.txt"), "en").items) {
    rebuilt += item.text + "\n";
  }
  CHECK(rebuilt == "first line\n  spaced  \nlast\n");
}

TEST_CASE("split_sentences examples") {
  CHECK(split_sentences("A. B? C!") == std::vector<std::string>{"A.", "B?", "C!"});
  CHECK(split_sentences("").empty());
  CHECK(split_sentences("No terminal punctuation") ==
        std::vector<std::string>{"No terminal punctuation"});
  CHECK(split_sentences("line one\nline two") ==
        std::vector<std::string>{"line one", "line two"});
  CHECK(split_sentences("3.14 is pi") == std::vector<std::string>{"3.14 is pi"});
  // Ideographic full stop, danda, Arabic question mark, Armenian full stop.
  CHECK(split_sentences("\xE4\xB8\x80\xE3\x80\x82 \xE4\xBA\x8C").size() == 2);
  CHECK(split_sentences("\xE0\xA4\x95\xE0\xA5\xA4 \xE0\xA4\x96").size() == 2);
  CHECK(split_sentences("\xD8\xA7\xD8\x9F \xD8\xA8").size() == 2);
  CHECK(split_sentences("\xD5\xA1\xD6\x89 \xD5\xA2").size() == 2);
}

TEST_CASE("split_sentences never emits empty strings and keeps non-whitespace") {
  std::mt19937 rng(5);
  const std::vector<std::string> pieces = {"a", "b", ".", "!", "?", " ", "  ", "\n",
                                           "\xE3\x80\x82", "\xC2\xA0", "x.y", "\t"};
  for (int trial = 0; trial < 500; ++trial) {
    std::string doc;
    const int len = static_cast<int>(rng() % 30);
    for (int i = 0; i < len; ++i) doc += pieces[rng() % pieces.size()];
    const auto parts = split_sentences(doc);
    std::string joined_parts;
    for (const auto& p : parts) {
      CHECK_FALSE(p.empty());
      joined_parts += p;
    }
    auto strip = [](const std::string& s) {
      std::string out;
      for (char32_t c : utf8::decode(s)) {
        if (!utf8::is_space(c)) utf8::append(out, c);
      }
      return out;
    };
    CHECK(strip(joined_parts) == strip(doc));
  }
}

namespace {

std::vector<SentenceItem> items_of(const std::vector<std::string>& texts) {
  std::vector<SentenceItem> out;
  for (std::size_t i = 0; i < texts.size(); ++i) {
    out.push_back({"c:" + std::to_string(i), "en", texts[i], std::nullopt});
  }
  return out;
}

std::vector<std::string> texts_of(const std::vector<SentenceItem>& items) {
  std::vector<std::string> out;
  for (const auto& i : items) out.push_back(i.text);
  return out;
}

}  // namespace

TEST_CASE("deduplicate examples") {
  auto r = deduplicate(items_of({"a", "a", "b"}));
  CHECK(texts_of(r.items) == std::vector<std::string>{"a", "b"});
  CHECK(r.removed == 1);
  r = deduplicate(items_of({"a ", " a"}));
  CHECK(texts_of(r.items) == std::vector<std::string>{"a "});
  r = deduplicate({});
  CHECK(r.items.empty());
  CHECK(r.removed == 0);
  // No case folding.
  CHECK(deduplicate(items_of({"A", "a"})).items.size() == 2);
}

TEST_CASE("deduplicate is idempotent and keeps first occurrences in order") {
  std::mt19937 rng(9);
  const std::vector<std::string> vocab = {"x", "x ", " x", "y  z", "y z", "Y z", "w"};
  for (int trial = 0; trial < 200; ++trial) {
    std::vector<std::string> texts;
    for (int i = 0, n = static_cast<int>(rng() % 20); i < n; ++i) {
      texts.push_back(vocab[rng() % vocab.size()]);
    }
    const auto once = deduplicate(items_of(texts));
    const auto twice = deduplicate(once.items);
    CHECK(texts_of(twice.items) == texts_of(once.items));
    CHECK(twice.removed == 0);
    // Oracle: keep the first text for each key, by linear scan.
    std::vector<std::string> expected, keys;
    for (const auto& t : texts) {
      const auto k = utf8::collapse_whitespace(t);
      if (std::find(keys.begin(), keys.end(), k) == keys.end()) {
        keys.push_back(k);
        expected.push_back(t);
      }
    }
    CHECK(texts_of(once.items) == expected);
    CHECK(once.removed == texts.size() - expected.size());
  }
}
