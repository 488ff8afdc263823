#include "doctest.h"

#include <random>

#include "rebus/allocation_io.hpp"
#include "synthetic_corpus.hpp"
#include "test_support.hpp"

using namespace rebus;

TEST_CASE("allocation text format") {
  const Vocabulary vocab({"black", "white", "søster", "he"});
  const FeatureAllocation f(4, {{0, 1}, {2}, {1, 3, 0}, {0, 1}});
  const std::string text = export_allocation(f, vocab);
  CHECK(text ==
        "# rebus feature allocation: 4 blocks over 4 elements\n"
        "black white\n"
        "søster\n"
        "black white he\n"
        "black white\n");

  const LabelledAllocation back = import_allocation(text);
  CHECK(back.allocation == f);
  CHECK(back.vocabulary == vocab);

  SUBCASE("comments, blank lines and CRLF are tolerated") {
    const auto a = import_allocation("# header\r\n\r\nx y\r\n# note\ny\n");
    CHECK(a.vocabulary.words() == std::vector<std::string>{"x", "y"});
    CHECK(a.allocation.blocks() == testing::Blocks{{0, 1}, {1}});
  }
  SUBCASE("ids follow first occurrence") {
    const auto a = import_allocation("c a\nb a\n");
    CHECK(a.vocabulary.words() == std::vector<std::string>{"c", "a", "b"});
    CHECK(a.allocation.blocks() == testing::Blocks{{0, 1}, {1, 2}});
  }
  SUBCASE("empty input") {
    const auto a = import_allocation("");
    CHECK(a.allocation.empty());
    CHECK(a.vocabulary.size() == 0);
  }
}

TEST_CASE("allocation import errors carry the line number") {
  auto line_of = [](std::string_view text) -> std::size_t {
    try {
      import_allocation(text);
    } catch (const ParseError& e) {
      return e.line();
    }
    return 0;
  };
  CHECK(line_of("a b\na  b\n") == 2);   // doubled space
  CHECK(line_of("a b\n\n b\n") == 3);   // leading space
  CHECK(line_of("a b a\n") == 1);       // repeated word
  CHECK(line_of("a\tb\n") == 1);        // tab inside a token
  CHECK(line_of("ok\n\xff\xfe\n") == 2);  // invalid UTF-8
}

TEST_CASE("allocation export rejects words it could not read back") {
  const FeatureAllocation f(1, {{0}});
  for (const char* bad : {"", "#tag", "two words", "tab\there", "bad\xff"})
    CHECK_THROWS_AS(export_allocation(f, Vocabulary({bad})), std::invalid_argument);
  CHECK_THROWS_AS(export_allocation(FeatureAllocation(2, {{0, 1}}), Vocabulary({"a"})),
                  std::invalid_argument);
}

TEST_CASE("property: export then import is the identity") {
  std::mt19937_64 rng(41);
  for (int trial = 0; trial < 100; ++trial) {
    const std::size_t n = 1 + rng() % 40;
    std::vector<std::string> words;
    for (std::size_t i = 0; i < n; ++i) words.push_back(testing::pseudo_word(i * 7 + rng() % 7));
    std::sort(words.begin(), words.end());
    words.erase(std::unique(words.begin(), words.end()), words.end());
    const std::size_t m = words.size();
    auto blocks = testing::random_blocks(rng, m, 1 + rng() % 30, 0.2);
    // Relabel by first occurrence so every id is used and in import order.
    std::vector<ElementId> rename(m, ~ElementId{0});
    ElementId next = 0;
    for (auto& b : blocks)
      for (auto e : b)
        if (rename[e] == ~ElementId{0}) rename[e] = next++;
    std::vector<std::string> ordered(next);
    for (std::size_t e = 0; e < m; ++e)
      if (rename[e] != ~ElementId{0}) ordered[rename[e]] = words[e];
    for (auto& b : blocks)
      for (auto& e : b) e = rename[e];

    const FeatureAllocation f(next, blocks);
    const Vocabulary vocab(ordered);
    const auto back = import_allocation(export_allocation(f, vocab));
    CHECK(back.allocation == f);
    CHECK(back.vocabulary == vocab);
  }
}

TEST_CASE("a tokenized corpus round-trips through the text format") {
  const auto paragraphs = testing::synthetic_paragraphs({300, 2000, 40, 3});
  const Corpus c = build_allocation(paragraphs, TokenizerConfig{});
  const auto back = import_allocation(export_allocation(c.allocation, c.vocabulary));
  CHECK(back.allocation == c.allocation);
  CHECK(back.vocabulary == c.vocabulary);
}
