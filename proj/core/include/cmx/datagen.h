#ifndef CMX_DATAGEN_H_
#define CMX_DATAGEN_H_

#include <cstdint>
#include <istream>
#include <string>
#include <utility>
#include <vector>

#include "cmx/corpus.h"
#include "cmx/language.h"

namespace cmx {

inline constexpr std::size_t kMaxExampleTokens = 8;
inline constexpr std::size_t kMaxMinoritySpan = 2;

// Phrases (token sequences of at most kMaxExampleTokens) per language.
class MonolingualStore {
 public:
  explicit MonolingualStore(std::size_t num_languages = 0) : phrases_(num_languages) {}

  // Tokenizes `text` and stores it in chunks of at most kMaxExampleTokens.
  void add(LanguageId language, std::string_view text);
  void add_phrase(LanguageId language, std::vector<std::string> tokens);

  std::size_t num_languages() const { return phrases_.size(); }
  const std::vector<std::vector<std::string>>& phrases(LanguageId language) const {
    return phrases_.at(language);
  }

 private:
  std::vector<std::vector<std::vector<std::string>>> phrases_;
};

MonolingualStore ingest(std::istream& corpus, const LanguageRegistry& registry,
                        const WarningSink& warn = {});

enum class MixPattern { kIntra, kInter };

struct SyntheticExample {
  std::vector<std::string> tokens;
  std::vector<LanguageId> labels;
  MixPattern pattern = MixPattern::kIntra;
  // For inter-mix the first member is the framing (dominant) language; for
  // intra-mix it is the leading language.
  std::pair<LanguageId, LanguageId> pair{};
  std::size_t pair_index = 0;

  LabeledSentence to_labeled() const;
};

using LanguagePair = std::pair<LanguageId, LanguageId>;

// Draws synthetic codemixed examples. Example i depends only on (seed, i).
class SyntheticGenerator {
 public:
  // Throws DataError naming the pair when a side has no usable phrases.
  SyntheticGenerator(const MonolingualStore& store, std::vector<LanguagePair> pairs,
                     std::uint64_t seed);

  SyntheticExample generate(std::uint64_t index) const;

 private:
  const MonolingualStore& store_;
  std::vector<LanguagePair> pairs_;
  std::uint64_t seed_;
  // Per language, indices of phrases with at least two tokens.
  std::vector<std::vector<std::size_t>> long_phrases_;
};

std::vector<SyntheticExample> generate(const MonolingualStore& store,
                                       const std::vector<LanguagePair>& pairs,
                                       std::size_t count, std::uint64_t seed);

// Empty string when the example satisfies every structural invariant,
// otherwise a description of the first violation.
std::string check_example(const SyntheticExample& example);

}  // namespace cmx

#endif  // CMX_DATAGEN_H_
