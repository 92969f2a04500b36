// Synthetic three-language world used by the acceptance suite and the
// benchmarks: Latin-script languages built from a shared syllable inventory,
// each with its own vocabulary, one language-unique letter, and a handful of
// function words shared by all languages.
#ifndef CMX_TESTS_SUPPORT_TOY_WORLD_H_
#define CMX_TESTS_SUPPORT_TOY_WORLD_H_

#include <cstdint>
#include <string>
#include <vector>

#include "cmx/corpus.h"
#include "cmx/datagen.h"
#include "cmx/decoder.h"
#include "cmx/language.h"
#include "cmx/lexicon.h"

namespace cmx::testing {

struct ToyLanguage {
  std::string code;
  char32_t unique_char = 0;
  std::vector<std::string> vocabulary;  // Zipf-ranked
};

class ToyWorld {
 public:
  explicit ToyWorld(std::uint64_t seed, std::size_t vocabulary_size = 200);

  const LanguageRegistry& registry() const { return registry_; }
  const std::vector<ToyLanguage>& languages() const { return languages_; }
  const std::vector<std::string>& shared_words() const { return shared_; }
  std::u32string unique_chars() const;

  // "code<TAB>text" monolingual lines, `per_language` sentences each.
  std::vector<std::string> monolingual_lines(std::size_t per_language,
                                             std::uint64_t seed) const;

 private:
  std::string sample_word(LanguageId language, std::uint64_t& state) const;

  LanguageRegistry registry_;
  std::vector<ToyLanguage> languages_;
  std::vector<std::string> shared_;
  std::vector<double> zipf_cdf_;
};

struct ToySetup {
  Lexicon lexicon;
  std::vector<LanguagePair> pairs;
  ConstraintSet constraints;
  std::vector<LabeledSentence> train;
  std::vector<LabeledSentence> test;
  std::vector<std::string> test_lines;  // raw text of the test sentences
};

std::size_t count_tokens(const std::vector<LabeledSentence>& data);

// Lexicon from a monolingual corpus, then train/test sets that mix synthetic
// codemixed examples with monolingual phrases half and half.
ToySetup make_toy_setup(const ToyWorld& world, std::size_t train_tokens,
                        std::size_t test_tokens, std::uint64_t seed);

}  // namespace cmx::testing

#endif  // CMX_TESTS_SUPPORT_TOY_WORLD_H_
