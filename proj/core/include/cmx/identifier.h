#ifndef CMX_IDENTIFIER_H_
#define CMX_IDENTIFIER_H_

#include <memory>
#include <optional>
#include <string_view>
#include <vector>

#include "cmx/decoder.h"
#include "cmx/features.h"
#include "cmx/lexicon.h"
#include "cmx/model.h"
#include "cmx/tokenizer.h"

namespace cmx {

// Tokenize -> extract features -> score every token -> decode.
class LanguageIdentifier {
 public:
  struct Result {
    Sentence sentence;
    std::vector<TokenScores> scores;
    DecodedSequence decoded;
  };

  // `lexicon` is required iff the model uses lexicon features. An empty
  // `constraints` selects ConstraintSet::default_for(registry).
  LanguageIdentifier(Model model, std::optional<Lexicon> lexicon,
                     ConstraintSet constraints = {},
                     double switch_probability = kDefaultSwitchPenalty);

  const Model& model() const { return model_; }
  const LanguageRegistry& registry() const { return model_.config().registry; }
  const ConstraintSet& constraints() const { return constraints_; }
  const FeatureExtractor& extractor() const { return *extractor_; }

  std::vector<TokenScores> score(const Sentence& sentence) const;
  DecodedSequence decode(std::span<const TokenScores> scores, DecodeMode mode) const;

  // An empty sentence yields an empty result.
  Result identify(const Sentence& sentence, DecodeMode mode) const;
  Result identify(std::string_view text, DecodeMode mode) const;

 private:
  Model model_;
  std::unique_ptr<Lexicon> lexicon_;
  std::unique_ptr<FeatureExtractor> extractor_;
  ConstraintSet constraints_;
  double switch_probability_;
};

}  // namespace cmx

#endif  // CMX_IDENTIFIER_H_
