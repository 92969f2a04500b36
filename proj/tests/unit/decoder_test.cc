#include "cmx/decoder.h"

#include <gtest/gtest.h>

#include <cmath>
#include <random>
#include <set>
#include <sstream>

#include "cmx/error.h"
#include "oracles.h"

namespace cmx {
namespace {

std::vector<TokenScores> scores_from(std::vector<std::vector<double>> probs) {
  std::vector<TokenScores> out;
  for (const auto& row : probs) {
    TokenScores s;
    for (double p : row) s.log_probs.push_back(static_cast<float>(std::log(p)));
    out.push_back(std::move(s));
  }
  return out;
}

const LanguageRegistry kEnEsFr({"en", "es", "fr"});

TEST(Greedy, ArgmaxPerToken) {
  const auto s = scores_from({{0.2, 0.7, 0.1}, {0.6, 0.3, 0.1}});
  EXPECT_EQ(decode_greedy(s).labels, (std::vector<LanguageId>{1, 0}));
}

TEST(Greedy, TiesGoToLowestId) {
  const auto s = scores_from({{0.25, 0.5, 0.25}, {0.4, 0.2, 0.4}});
  EXPECT_EQ(decode_greedy(s).labels, (std::vector<LanguageId>{1, 0}));
}

TEST(Greedy, RejectsEmptyOrRagged) {
  EXPECT_THROW(decode_greedy({}), std::invalid_argument);
  auto s = scores_from({{0.5, 0.5}, {1.0}});
  EXPECT_THROW(decode_greedy(s), std::invalid_argument);
}

TEST(SwitchPenalty, SmoothsIsolatedSwitch) {
  // Greedy switches for one token; at p = 0.5 two switches cost more than
  // the token's gain.
  const auto s = scores_from({{0.9, 0.1}, {0.45, 0.55}, {0.9, 0.1}});
  EXPECT_EQ(decode_greedy(s).labels, (std::vector<LanguageId>{0, 1, 0}));
  EXPECT_EQ(decode_switch_penalty(s, 0.5).labels, (std::vector<LanguageId>{0, 0, 0}));
}

TEST(SwitchPenalty, NoPenaltyEqualsGreedy) {
  std::mt19937_64 rng(3);
  for (int i = 0; i < 200; ++i) {
    const auto inst = testing::random_decoder_instance(rng, false);
    EXPECT_EQ(decode_switch_penalty(inst.scores, 1.0).labels, decode_greedy(inst.scores).labels);
  }
}

TEST(SwitchPenalty, IdenticalColumnsTieToLowestId) {
  const auto s = scores_from({{0.3, 0.3, 0.3}, {0.6, 0.6, 0.1}, {0.2, 0.2, 0.7}});
  EXPECT_EQ(decode_switch_penalty(s, 0.1).labels, (std::vector<LanguageId>{0, 0, 0}));
}

TEST(SwitchPenalty, RejectsBadProbability) {
  const auto s = scores_from({{0.5, 0.5}});
  EXPECT_THROW(decode_switch_penalty(s, 0.0), std::invalid_argument);
  EXPECT_THROW(decode_switch_penalty(s, 1.5), std::invalid_argument);
}

TEST(SwitchPenalty, MatchesExhaustiveSearch) {
  std::mt19937_64 rng(11);
  std::uniform_real_distribution<double> prob(0.05, 1.0);
  for (int i = 0; i < 300; ++i) {
    const auto inst = testing::random_decoder_instance(rng, false);
    const double p = prob(rng);
    const auto got = decode_switch_penalty(inst.scores, p);
    const auto want = testing::brute_force_switch_penalty(inst.scores, p);
    ASSERT_EQ(got.labels, want.labels) << "instance " << i;
    EXPECT_NEAR(got.total_log_prob, want.total_log_prob, 1e-9);
  }
}

TEST(SwitchPenalty, OptimalValueUnderTies) {
  std::mt19937_64 rng(12);
  for (int i = 0; i < 300; ++i) {
    const auto inst = testing::random_decoder_instance(rng, true);
    const auto got = decode_switch_penalty(inst.scores, 0.5);
    const auto want = testing::brute_force_switch_penalty(inst.scores, 0.5);
    EXPECT_NEAR(got.total_log_prob, want.total_log_prob, 1e-9) << "instance " << i;
  }
}

TEST(Constrained, WorkedExample) {
  // en/fr pair beats every singleton and the other pairs: -0.1 + -0.1.
  const auto s = scores_from({{std::exp(-0.1), 0.0001, 0.0001}, {0.0001, 0.0001, std::exp(-0.1)}});
  const auto constraints = ConstraintSet::default_for(kEnEsFr);
  const auto d = decode_constrained(s, constraints);
  EXPECT_EQ(d.labels, (std::vector<LanguageId>{0, 2}));
  EXPECT_NEAR(d.total_log_prob, -0.2, 1e-6);
  ASSERT_TRUE(d.chosen_set.has_value());
  EXPECT_EQ(constraints.sets()[*d.chosen_set], LanguageSet::pair(0, 2));
}

TEST(Constrained, DisallowedPairFallsBack) {
  // es + fr is not allowed, so the decoder must pick a set containing en.
  const auto s = scores_from({{0.2, 0.7, 0.1}, {0.2, 0.1, 0.7}});
  const auto d = decode_constrained(s, ConstraintSet::default_for(kEnEsFr));
  const std::set<LanguageId> used(d.labels.begin(), d.labels.end());
  EXPECT_FALSE(used.count(1) && used.count(2));
}

TEST(Constrained, SingletonBeatsPairOnTie) {
  const auto s = scores_from({{0.5, 0.5}, {0.5, 0.5}});
  const ConstraintSet c({LanguageSet::pair(0, 1), LanguageSet::single(1)});
  const auto d = decode_constrained(s, c);
  EXPECT_EQ(d.labels, (std::vector<LanguageId>{1, 1}));
  EXPECT_EQ(d.chosen_set, 1u);
}

TEST(Constrained, EarlierSetWinsFullTie) {
  const auto s = scores_from({{0.5, 0.5, 0.0001}});
  const ConstraintSet c({LanguageSet::single(1), LanguageSet::single(0)});
  EXPECT_EQ(decode_constrained(s, c).labels, (std::vector<LanguageId>{1}));
}

TEST(Constrained, MatchesExhaustiveSearch) {
  std::mt19937_64 rng(21);
  for (bool quantized : {false, true}) {
    for (int i = 0; i < 300; ++i) {
      const auto inst = testing::random_decoder_instance(rng, quantized);
      const auto got = decode_constrained(inst.scores, inst.constraints);
      const auto want = testing::brute_force_constrained(inst.scores, inst.constraints);
      ASSERT_EQ(got.labels, want.labels) << "instance " << i << " quantized " << quantized;
      EXPECT_EQ(got.chosen_set, want.chosen_set);
      EXPECT_EQ(got.total_log_prob, want.total_log_prob);
    }
  }
}

TEST(Constrained, LabelsStayInsideChosenSet) {
  std::mt19937_64 rng(22);
  for (int i = 0; i < 300; ++i) {
    const auto inst = testing::random_decoder_instance(rng, false);
    const auto d = decode_constrained(inst.scores, inst.constraints);
    const auto& set = inst.constraints.sets()[*d.chosen_set];
    for (auto l : d.labels) EXPECT_TRUE(set.contains(l));
    EXPECT_LE(std::set<LanguageId>(d.labels.begin(), d.labels.end()).size(), 2u);
    EXPECT_LE(d.total_log_prob, decode_greedy(inst.scores).total_log_prob + 1e-12);
  }
}

TEST(Constrained, RejectsEmptyOrForeignSets) {
  const auto s = scores_from({{0.5, 0.5}});
  EXPECT_THROW(decode_constrained(s, ConstraintSet{}), std::invalid_argument);
  EXPECT_THROW(decode_constrained(s, ConstraintSet({LanguageSet::single(4)})),
               std::invalid_argument);
}

TEST(SentenceLanguage, ArgmaxOfSummedLogProbs) {
  // Token-wise majority is es, but en has the larger total log-probability.
  const auto s = scores_from({{0.45, 0.55}, {0.45, 0.55}, {0.99, 0.01}});
  EXPECT_EQ(sentence_language(s), 0u);
}

TEST(ConstraintSet, DefaultForHundredLanguages) {
  const auto c = ConstraintSet::default_for(LanguageRegistry::default_registry());
  EXPECT_EQ(c.size(), 199u);
  std::size_t pairs_with_en = 0;
  for (const auto& set : c.sets()) pairs_with_en += set.size == 2 && set.contains(0);
  EXPECT_EQ(pairs_with_en, 99u);
}

TEST(ConstraintSet, AnchorFallsBackToFirstLanguage) {
  const auto c = ConstraintSet::default_for(LanguageRegistry({"es", "fr", "de"}));
  EXPECT_EQ(c.size(), 5u);
  EXPECT_EQ(c.sets()[3], LanguageSet::pair(0, 1));
  EXPECT_EQ(c.sets()[4], LanguageSet::pair(0, 2));
}

TEST(ConstraintSet, PairsAreNormalizedAndDeduplicated) {
  EXPECT_EQ(LanguageSet::pair(3, 1).members[0], 1u);
  EXPECT_EQ(LanguageSet::pair(2, 2).size, 1u);
  const ConstraintSet c({LanguageSet::pair(1, 0), LanguageSet::pair(0, 1), LanguageSet::single(0),
                         LanguageSet::single(0)});
  EXPECT_EQ(c.size(), 2u);
}

TEST(ConstraintSet, ReadPairsFile) {
  std::istringstream in("# pairs\nen es\n\nes fr  # trailing comment\n");
  const auto c = ConstraintSet::read(in, kEnEsFr);
  EXPECT_EQ(c.size(), 5u);
  EXPECT_EQ(c.sets()[4], LanguageSet::pair(1, 2));
}

TEST(ConstraintSet, ReadErrorsNameTheLine) {
  std::istringstream unknown("en es\nen xx\n");
  try {
    ConstraintSet::read(unknown, kEnEsFr);
    FAIL();
  } catch (const DataError& e) {
    EXPECT_NE(std::string(e.what()).find("line 2"), std::string::npos);
  }
  std::istringstream three("en es fr\n");
  EXPECT_THROW(ConstraintSet::read(three, kEnEsFr), DataError);
}

}  // namespace
}  // namespace cmx
