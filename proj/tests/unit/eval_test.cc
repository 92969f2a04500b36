#include "cmx/eval.h"

#include <gtest/gtest.h>

#include <algorithm>
#include <random>

#include "cmx/unicode.h"

namespace cmx {
namespace {

std::size_t levenshtein(const std::u32string& a, const std::u32string& b) {
  std::vector<std::size_t> row(b.size() + 1);
  for (std::size_t j = 0; j <= b.size(); ++j) row[j] = j;
  for (std::size_t i = 1; i <= a.size(); ++i) {
    std::size_t diag = row[0];
    row[0] = i;
    for (std::size_t j = 1; j <= b.size(); ++j) {
      const std::size_t up = row[j];
      row[j] = std::min({row[j] + 1, row[j - 1] + 1, diag + (a[i - 1] != b[j - 1])});
      diag = up;
    }
  }
  return row[b.size()];
}

TEST(Metrics, TokenAccuracy) {
  const std::vector<LabelSequence> gold{{0, 0, 1}, {2}};
  const std::vector<LabelSequence> pred{{0, 1, 1}, {2}};
  EXPECT_DOUBLE_EQ(token_accuracy(gold, pred), 0.75);
  EXPECT_DOUBLE_EQ(token_accuracy(gold, gold), 1.0);
}

TEST(Metrics, TokenAccuracyIsOrderInvariant) {
  std::vector<LabelSequence> gold{{0, 0, 1}, {2}, {1, 1}};
  std::vector<LabelSequence> pred{{0, 1, 1}, {0}, {1, 1}};
  const double a = token_accuracy(gold, pred);
  std::swap(gold[0], gold[2]);
  std::swap(pred[0], pred[2]);
  EXPECT_DOUBLE_EQ(token_accuracy(gold, pred), a);
}

TEST(Metrics, MismatchedInputsThrow) {
  const std::vector<LabelSequence> gold{{0, 0}};
  const std::vector<LabelSequence> pred{{0}};
  EXPECT_THROW(token_accuracy(gold, pred), std::invalid_argument);
  EXPECT_THROW(token_accuracy(std::vector<LabelSequence>{}, std::vector<LabelSequence>{}),
               std::invalid_argument);
  const std::vector<LanguageId> a{0, 1};
  const std::vector<LanguageId> b{0};
  EXPECT_THROW(sentence_accuracy(a, b), std::invalid_argument);
}

TEST(Metrics, SentenceAccuracy) {
  const std::vector<LanguageId> gold{0, 1, 1, 2};
  const std::vector<LanguageId> pred{0, 1, 2, 2};
  EXPECT_DOUBLE_EQ(sentence_accuracy(gold, pred), 0.75);
}

TEST(Metrics, AverageLanguagesPerSentence) {
  const std::vector<LabelSequence> seqs{{0, 0, 1}, {2}, {0, 1, 2, 1}};
  EXPECT_DOUBLE_EQ(avg_languages_per_sentence(seqs), 2.0);
  EXPECT_EQ(avg_languages_per_sentence({}), 0.0);
}

TEST(Metrics, MajorityLabelTiesToLowestId) {
  const std::vector<LanguageId> a{2, 1, 2, 1};
  EXPECT_EQ(majority_label(a), 1u);
  const std::vector<LanguageId> b{3, 0, 3};
  EXPECT_EQ(majority_label(b), 3u);
}

TEST(Curve, CumulativeBuckets) {
  const std::vector<std::size_t> chars{5, 15, 25, 15};
  const std::vector<LanguageId> gold{0, 1, 1, 0};
  const std::vector<LanguageId> pred{0, 0, 1, 0};
  const auto curve = cumulative_accuracy_by_length(chars, gold, pred, {20, 4, 10, 20});
  ASSERT_EQ(curve.size(), 3u);
  EXPECT_EQ(curve[0].max_chars, 4u);
  EXPECT_FALSE(curve[0].accuracy.has_value());
  EXPECT_EQ(curve[1].sentences, 1u);
  EXPECT_DOUBLE_EQ(*curve[1].accuracy, 1.0);
  EXPECT_EQ(curve[2].sentences, 3u);
  EXPECT_DOUBLE_EQ(*curve[2].accuracy, 2.0 / 3.0);
}

TEST(Misspell, EditDistanceWithinBudget) {
  std::vector<std::string> words{"english", "language", "привет", "αλφάβητο", "नमस्ते", "ab"};
  for (std::size_t max_edits : {1u, 2u}) {
    MisspellOptions o;
    o.min_edits = 1;
    o.max_edits = max_edits;
    const auto out = make_misspelled_set(words, 42, o);
    ASSERT_EQ(out.size(), words.size());
    for (std::size_t i = 0; i < words.size(); ++i) {
      const auto d = levenshtein(utf8_decode(words[i]), utf8_decode(out[i]));
      EXPECT_LE(d, max_edits) << out[i];
      if (max_edits == 1) {
        EXPECT_EQ(d, 1u) << out[i];
      }
    }
  }
}

TEST(Misspell, ProtectedCharactersSurvive) {
  MisspellOptions o;
  o.protected_chars = U"ñ";
  std::vector<std::string> words(200, "niño");
  const auto out = make_misspelled_set(words, 7, o);
  for (const auto& w : out) {
    const auto chars = utf8_decode(w);
    EXPECT_EQ(std::count(chars.begin(), chars.end(), U'ñ'), 1) << w;
  }
  std::vector<std::string> only{"ñ"};
  EXPECT_EQ(make_misspelled_set(only, 1, o)[0], "ñ");
}

TEST(Misspell, SubstitutionsStayInScript) {
  std::vector<std::string> words(100, "привет");
  words.resize(200, "नमस्ते");
  const auto out = make_misspelled_set(words, 9);
  for (std::size_t i = 0; i < out.size(); ++i) {
    const Script want = i < 100 ? Script::kCyrillic : Script::kDevanagari;
    for (char32_t c : utf8_decode(out[i])) {
      const Script s = script_of_char(c);
      if (s != Script::kOther) {
        EXPECT_EQ(s, want) << out[i];
      }
    }
  }
}

TEST(Misspell, DeterministicAndZeroEditIdentity) {
  std::vector<std::string> words{"english", "words", "here"};
  EXPECT_EQ(make_misspelled_set(words, 3), make_misspelled_set(words, 3));
  MisspellOptions none;
  none.min_edits = 0;
  none.max_edits = 0;
  EXPECT_EQ(make_misspelled_set(words, 3, none), words);
  MisspellOptions bad;
  bad.min_edits = 3;
  bad.max_edits = 1;
  EXPECT_THROW(make_misspelled_set(words, 3, bad), std::invalid_argument);
}

TEST(Report, CsvHasEmptyAccuracyForEmptyBuckets) {
  EvalReport r;
  r.cumulative_accuracy = {{10, 0, std::nullopt}, {20, 2, 0.5}};
  EXPECT_EQ(r.curve_csv(), "max_chars,sentences,accuracy\n10,0,\n20,2,0.5\n");
}

}  // namespace
}  // namespace cmx
