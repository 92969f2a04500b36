#include "cmx/datagen.h"

#include <gtest/gtest.h>

#include <cmath>
#include <sstream>

#include "cmx/error.h"

namespace cmx {
namespace {

const LanguageRegistry kRegistry({"en", "es", "hi"});

MonolingualStore sample_store() {
  std::istringstream in(
      "en\tthe cat sat on the mat today\n"
      "en\tshe reads books\n"
      "en\tone two three four five six seven eight nine ten\n"
      "es\tel gato duerme\n"
      "es\tdame ese libro por favor\n"
      "hi\tmera naam raj hai\n"
      "hi\taap kaise ho\n");
  return ingest(in, kRegistry);
}

TEST(Store, ChunksLongLines) {
  const auto store = sample_store();
  const auto& en = store.phrases(0);
  ASSERT_EQ(en.size(), 4u);
  EXPECT_EQ(en[2].size(), 8u);
  EXPECT_EQ(en[3], (std::vector<std::string>{"nine", "ten"}));
}

TEST(Store, UnknownLanguageWarns) {
  std::istringstream in("en\thi there\nzz\tnope\n");
  int warnings = 0;
  const auto store = ingest(in, kRegistry, [&](const std::string&) { ++warnings; });
  EXPECT_EQ(warnings, 1);
  EXPECT_EQ(store.phrases(0).size(), 1u);
}

TEST(Generator, MissingPhrasesIsDataError) {
  MonolingualStore store(3);
  store.add_phrase(0, {"a", "b"});
  EXPECT_THROW(SyntheticGenerator(store, {{0, 1}}, 1), DataError);
}

TEST(Generator, ExamplesSatisfyInvariants) {
  const auto store = sample_store();
  const std::vector<LanguagePair> pairs{{0, 1}, {0, 2}};
  const auto examples = generate(store, pairs, 2000, 5);
  for (const auto& ex : examples) {
    ASSERT_EQ(check_example(ex), "") << ex.tokens.size();
    const auto& p = pairs[ex.pair_index];
    EXPECT_TRUE((ex.pair == p) || (ex.pair == LanguagePair{p.second, p.first}));
  }
}

TEST(Generator, EitherLanguageCanLeadOrDominate) {
  const auto store = sample_store();
  const auto examples = generate(store, {{0, 1}}, 400, 6);
  int lead[2][2] = {};
  for (const auto& ex : examples) {
    ++lead[ex.pattern == MixPattern::kInter][ex.pair.first == 0];
  }
  for (auto& row : lead) {
    for (int c : row) EXPECT_GT(c, 50);
  }
}

TEST(Generator, DependsOnlyOnSeedAndIndex) {
  const auto store = sample_store();
  const SyntheticGenerator gen(store, {{0, 1}, {0, 2}}, 77);
  const auto batch = generate(store, {{0, 1}, {0, 2}}, 50, 77);
  for (std::uint64_t i = 0; i < 50; ++i) {
    const auto ex = gen.generate(i);
    EXPECT_EQ(ex.tokens, batch[i].tokens);
    EXPECT_EQ(ex.labels, batch[i].labels);
  }
  const auto other = generate(store, {{0, 1}, {0, 2}}, 50, 78);
  int same = 0;
  for (std::size_t i = 0; i < 50; ++i) same += other[i].tokens == batch[i].tokens;
  EXPECT_LT(same, 10);
}

TEST(Generator, PairsAndPatternsAreUniform) {
  const auto store = sample_store();
  const std::vector<LanguagePair> pairs{{0, 1}, {0, 2}, {1, 2}};
  const std::size_t n = 9000;
  const auto examples = generate(store, pairs, n, 8);
  std::vector<double> counts(pairs.size(), 0.0);
  double inter = 0.0;
  for (const auto& ex : examples) {
    counts[ex.pair_index] += 1;
    inter += ex.pattern == MixPattern::kInter;
  }
  const double p = 1.0 / pairs.size();
  for (double c : counts) {
    EXPECT_LT(std::abs(c - n * p), 3 * std::sqrt(n * p * (1 - p)));
  }
  EXPECT_LT(std::abs(inter - n * 0.5), 3 * std::sqrt(n * 0.25));
}

TEST(CheckExample, DetectsViolations) {
  SyntheticExample ex;
  ex.pair = {0, 1};
  ex.pattern = MixPattern::kInter;
  ex.tokens = {"a", "b", "c"};
  ex.labels = {0, 1, 0};
  EXPECT_EQ(check_example(ex), "");
  ex.labels = {1, 0, 0};
  EXPECT_NE(check_example(ex), "");  // span at the edge
  ex.labels = {0, 2, 0};
  EXPECT_NE(check_example(ex), "");
  ex.pattern = MixPattern::kIntra;
  ex.labels = {0, 1, 1};
  EXPECT_EQ(check_example(ex), "");
  ex.labels = {0, 1, 0};
  EXPECT_NE(check_example(ex), "");
  ex.tokens.assign(9, "x");
  ex.labels.assign(9, 0);
  EXPECT_NE(check_example(ex), "");
}

TEST(SyntheticExample, ToLabeled) {
  SyntheticExample ex;
  ex.tokens = {"Dame", "ese", "book"};
  ex.labels = {1, 1, 0};
  const auto l = ex.to_labeled();
  EXPECT_EQ(l.sentence.tokens[0].text, "dame");
  EXPECT_EQ(l.sentence.raw_char_count, 11u);
  EXPECT_EQ(l.labels, ex.labels);
}

}  // namespace
}  // namespace cmx
