#ifndef CMX_EVAL_H_
#define CMX_EVAL_H_

#include <cstdint>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "cmx/corpus.h"
#include "cmx/decoder.h"
#include "cmx/identifier.h"

namespace cmx {

using LabelSequence = std::vector<LanguageId>;

// Matching tokens over all tokens. Throws std::invalid_argument on a length
// mismatch or an empty corpus.
double token_accuracy(std::span<const LabelSequence> gold,
                      std::span<const LabelSequence> predicted);

// Exact-match rate of one language code per sentence.
double sentence_accuracy(std::span<const LanguageId> gold,
                         std::span<const LanguageId> predicted);

struct CurvePoint {
  std::size_t max_chars = 0;
  std::size_t sentences = 0;
  // Absent when no sentence is short enough.
  std::optional<double> accuracy;
};

// For each threshold x: sentence accuracy over sentences with at most x
// non-whitespace characters. Thresholds are reported in ascending order.
std::vector<CurvePoint> cumulative_accuracy_by_length(
    std::span<const std::size_t> char_counts, std::span<const LanguageId> gold,
    std::span<const LanguageId> predicted, std::vector<std::size_t> thresholds);

// Mean number of distinct labels per sentence (0 for no sentences).
double avg_languages_per_sentence(std::span<const LabelSequence> sequences);

// Most frequent label, ties to the lower id.
LanguageId majority_label(std::span<const LanguageId> labels);

struct MisspellOptions {
  std::size_t min_edits = 1;
  std::size_t max_edits = 2;
  // Characters that must survive untouched (the language-unique ones).
  std::u32string protected_chars;
};

// Applies min..max edits per token; each edit duplicates or substitutes one
// unprotected character (substitutes come from the same script's alphabet).
std::vector<std::string> make_misspelled_set(std::span<const std::string> tokens,
                                             std::uint64_t seed,
                                             const MisspellOptions& options = {});

std::vector<std::size_t> default_length_thresholds();

struct EvalReport {
  std::size_t sentences = 0;
  std::size_t tokens = 0;
  double token_accuracy = 0.0;
  double sentence_accuracy = 0.0;
  double avg_langs_predicted = 0.0;
  double avg_langs_gold = 0.0;
  std::vector<std::string> languages;  // registry codes, confusion order
  std::vector<std::vector<std::uint64_t>> confusion;  // [gold][predicted]
  std::vector<CurvePoint> cumulative_accuracy;
  double chars_per_second = 0.0;

  std::string to_text() const;
  // Keys: sentences, tokens, token_accuracy, sentence_accuracy,
  // avg_langs_per_sentence{predicted,gold}, chars_per_second,
  // cumulative_accuracy[{max_chars,sentences,accuracy}],
  // confusion[{gold,predicted,count}].
  std::string to_json() const;
  // "max_chars,sentences,accuracy" rows; empty accuracy for absent buckets.
  std::string curve_csv() const;
};

// Decodes every sentence with `mode` and scores it against the gold labels.
// Sentence-level gold and predictions are majority labels per sentence.
EvalReport evaluate(const LanguageIdentifier& identifier,
                    std::span<const LabeledSentence> data, DecodeMode mode,
                    std::vector<std::size_t> thresholds = default_length_thresholds());

struct ThroughputResult {
  double chars_per_second = 0.0;
  double median_seconds = 0.0;
  std::size_t chars = 0;  // non-whitespace characters per repetition
};

// Full pipeline over raw text lines, timed single-threaded; the median of
// `repetitions` runs is reported. Throws std::invalid_argument when the
// corpus has no characters.
ThroughputResult benchmark_throughput(const LanguageIdentifier& identifier,
                                      std::span<const std::string> lines,
                                      std::size_t repetitions, DecodeMode mode);

}  // namespace cmx

#endif  // CMX_EVAL_H_
