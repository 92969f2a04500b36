#include "cmx/identifier.h"

#include <stdexcept>

namespace cmx {

LanguageIdentifier::LanguageIdentifier(Model model, std::optional<Lexicon> lexicon,
                                       ConstraintSet constraints,
                                       double switch_probability)
    : model_(std::move(model)),
      constraints_(std::move(constraints)),
      switch_probability_(switch_probability) {
  if (model_.config().include_lexicon()) {
    if (!lexicon) throw std::invalid_argument("this model needs a lexicon");
    if (lexicon->num_languages() != model_.config().num_languages()) {
      throw std::invalid_argument("lexicon and model disagree on the language count");
    }
    lexicon_ = std::make_unique<Lexicon>(std::move(*lexicon));
  }
  extractor_ = std::make_unique<FeatureExtractor>(model_.config().layout, lexicon_.get());
  if (constraints_.empty()) constraints_ = ConstraintSet::default_for(registry());
  if (!(switch_probability_ > 0.0 && switch_probability_ <= 1.0)) {
    throw std::invalid_argument("switch probability must be in (0, 1]");
  }
}

std::vector<TokenScores> LanguageIdentifier::score(const Sentence& sentence) const {
  const auto features = extractor_->extract_sentence(sentence);
  std::vector<TokenScores> scores(features.size());
  ForwardState<float> state;
  for (std::size_t i = 0; i < features.size(); ++i) {
    model_.score(features[i], state, scores[i]);
  }
  return scores;
}

DecodedSequence LanguageIdentifier::decode(std::span<const TokenScores> scores,
                                           DecodeMode mode) const {
  switch (mode) {
    case DecodeMode::kGreedy:
      return decode_greedy(scores);
    case DecodeMode::kSwitchPenalty:
      return decode_switch_penalty(scores, switch_probability_);
    case DecodeMode::kConstrained:
      return decode_constrained(scores, constraints_);
    case DecodeMode::kSentence: {
      DecodedSequence out;
      const LanguageId language = sentence_language(scores);
      out.labels.assign(scores.size(), language);
      for (const auto& s : scores) out.total_log_prob += s.log_probs[language];
      return out;
    }
  }
  throw std::invalid_argument("unknown decode mode");
}

LanguageIdentifier::Result LanguageIdentifier::identify(const Sentence& sentence,
                                                        DecodeMode mode) const {
  Result result;
  result.sentence = sentence;
  if (sentence.empty()) return result;
  result.scores = score(sentence);
  result.decoded = decode(result.scores, mode);
  return result;
}

LanguageIdentifier::Result LanguageIdentifier::identify(std::string_view text,
                                                        DecodeMode mode) const {
  return identify(tokenize(text), mode);
}

}  // namespace cmx
