#ifndef CMX_DECODER_H_
#define CMX_DECODER_H_

#include <array>
#include <filesystem>
#include <istream>
#include <optional>
#include <span>
#include <vector>

#include "cmx/language.h"
#include "cmx/model.h"

namespace cmx {

// A permitted label set: one language, or an unordered pair.
struct LanguageSet {
  std::array<LanguageId, 2> members{};
  std::size_t size = 1;

  static LanguageSet single(LanguageId a) { return {{a, a}, 1}; }
  // Normalized so members[0] < members[1]; a == b yields a singleton.
  static LanguageSet pair(LanguageId a, LanguageId b);

  bool contains(LanguageId id) const {
    return members[0] == id || (size == 2 && members[1] == id);
  }
  friend bool operator==(const LanguageSet& x, const LanguageSet& y) {
    return x.size == y.size && x.members[0] == y.members[0] &&
           (x.size == 1 || x.members[1] == y.members[1]);
  }
};

// Ordered, deduplicated list of allowed label sets.
class ConstraintSet {
 public:
  ConstraintSet() = default;
  explicit ConstraintSet(std::vector<LanguageSet> sets);

  // Every singleton plus anchor x each other language, where the anchor is
  // "en" when present and otherwise the language with id 0.
  static ConstraintSet default_for(const LanguageRegistry& registry);
  // Every singleton plus the pairs listed as "code code" lines ('#' starts a
  // comment). Throws DataError naming the line for unknown codes.
  static ConstraintSet read(std::istream& in, const LanguageRegistry& registry);
  static ConstraintSet load(const std::filesystem::path& path,
                            const LanguageRegistry& registry);
  static ConstraintSet singletons(std::size_t num_languages);

  const std::vector<LanguageSet>& sets() const { return sets_; }
  std::size_t size() const { return sets_.size(); }
  bool empty() const { return sets_.empty(); }

 private:
  std::vector<LanguageSet> sets_;
};

struct DecodedSequence {
  std::vector<LanguageId> labels;
  double total_log_prob = 0.0;
  // Index into ConstraintSet::sets() of the winning set (constrained only).
  std::optional<std::size_t> chosen_set;
};

enum class DecodeMode { kGreedy, kSwitchPenalty, kConstrained, kSentence };

inline constexpr double kDefaultSwitchPenalty = 0.5;

// Per-token argmax, ties to the lower language id.
DecodedSequence decode_greedy(std::span<const TokenScores> scores);

// Viterbi with a log(p) charge per adjacent language change. On equal
// scores, staying in the same language beats switching and lower ids beat
// higher ones. Throws std::invalid_argument unless 0 < p <= 1.
DecodedSequence decode_switch_penalty(std::span<const TokenScores> scores,
                                      double switch_probability);

// Best assignment over all allowed sets; each set is solved by per-token
// argmax within the set. Ties between sets go to the smaller set, then the
// earlier one. O(N * |sets|) time, O(N) extra memory.
DecodedSequence decode_constrained(std::span<const TokenScores> scores,
                                   const ConstraintSet& constraints);

// Single language for the sentence: argmax over l of Σ_t log p_t(l).
LanguageId sentence_language(std::span<const TokenScores> scores);

}  // namespace cmx

#endif  // CMX_DECODER_H_
