#include "cmx/eval.h"

#include <algorithm>
#include <chrono>
#include <iomanip>
#include <random>
#include <sstream>
#include <stdexcept>

#include <json.hpp>

#include "cmx/unicode.h"

namespace cmx {

namespace {

std::size_t uniform_index(std::mt19937_64& rng, std::size_t n) {
  const std::uint64_t limit = UINT64_MAX - UINT64_MAX % n;
  std::uint64_t x;
  do {
    x = rng();
  } while (x >= limit);
  return static_cast<std::size_t>(x % n);
}

// Substitution alphabet for a script; empty means "reuse the token's own
// characters of that script".
std::u32string_view alphabet(Script script) {
  static const std::u32string latin = U"abcdefghijklmnopqrstuvwxyz";
  static const std::u32string cyrillic = U"абвгдежзийклмнопрстуфхцчшщъыьэюя";
  static const std::u32string greek = U"αβγδεζηθικλμνξοπρστυφχψω";
  switch (script) {
    case Script::kLatin: return latin;
    case Script::kCyrillic: return cyrillic;
    case Script::kGreek: return greek;
    default: return {};
  }
}

std::string misspell(std::u32string chars, std::mt19937_64& rng,
                     const MisspellOptions& options) {
  const auto is_protected = [&](char32_t c) {
    return options.protected_chars.find(c) != std::u32string::npos;
  };
  const std::size_t span = options.max_edits - options.min_edits + 1;
  const std::size_t edits = options.min_edits + uniform_index(rng, span);
  for (std::size_t e = 0; e < edits; ++e) {
    std::vector<std::size_t> editable;
    for (std::size_t i = 0; i < chars.size(); ++i) {
      if (!is_protected(chars[i])) editable.push_back(i);
    }
    if (editable.empty()) break;
    const std::size_t at = editable[uniform_index(rng, editable.size())];
    if (uniform_index(rng, 2) == 0) {
      chars.insert(chars.begin() + static_cast<std::ptrdiff_t>(at), chars[at]);
      continue;
    }
    const Script script = script_of_char(chars[at]);
    std::u32string pool(alphabet(script));
    if (pool.empty()) {
      for (char32_t c : chars) {
        if (!is_protected(c) && script_of_char(c) == script) pool.push_back(c);
      }
    }
    std::erase(pool, chars[at]);
    std::erase_if(pool, is_protected);
    if (pool.empty()) {
      chars.insert(chars.begin() + static_cast<std::ptrdiff_t>(at), chars[at]);
      continue;
    }
    chars[at] = pool[uniform_index(rng, pool.size())];
  }
  return utf8_encode(chars);
}

std::string format_accuracy(const std::optional<double>& a) {
  if (!a) return "";
  std::ostringstream out;
  out << std::setprecision(6) << *a;
  return out.str();
}

}  // namespace

double token_accuracy(std::span<const LabelSequence> gold,
                      std::span<const LabelSequence> predicted) {
  if (gold.size() != predicted.size()) {
    throw std::invalid_argument("gold and predicted sentence counts differ");
  }
  std::size_t total = 0;
  std::size_t correct = 0;
  for (std::size_t s = 0; s < gold.size(); ++s) {
    if (gold[s].size() != predicted[s].size()) {
      throw std::invalid_argument("sentence " + std::to_string(s) + " has mismatched lengths");
    }
    total += gold[s].size();
    for (std::size_t i = 0; i < gold[s].size(); ++i) correct += gold[s][i] == predicted[s][i];
  }
  if (total == 0) throw std::invalid_argument("token accuracy of an empty corpus");
  return static_cast<double>(correct) / static_cast<double>(total);
}

double sentence_accuracy(std::span<const LanguageId> gold,
                         std::span<const LanguageId> predicted) {
  if (gold.size() != predicted.size()) {
    throw std::invalid_argument("gold and predicted sentence counts differ");
  }
  if (gold.empty()) throw std::invalid_argument("sentence accuracy of an empty corpus");
  std::size_t correct = 0;
  for (std::size_t i = 0; i < gold.size(); ++i) correct += gold[i] == predicted[i];
  return static_cast<double>(correct) / static_cast<double>(gold.size());
}

std::vector<CurvePoint> cumulative_accuracy_by_length(
    std::span<const std::size_t> char_counts, std::span<const LanguageId> gold,
    std::span<const LanguageId> predicted, std::vector<std::size_t> thresholds) {
  if (char_counts.size() != gold.size() || gold.size() != predicted.size()) {
    throw std::invalid_argument("length, gold and predicted counts differ");
  }
  std::sort(thresholds.begin(), thresholds.end());
  thresholds.erase(std::unique(thresholds.begin(), thresholds.end()), thresholds.end());
  std::vector<CurvePoint> curve;
  for (std::size_t x : thresholds) {
    CurvePoint point;
    point.max_chars = x;
    std::size_t correct = 0;
    for (std::size_t i = 0; i < gold.size(); ++i) {
      if (char_counts[i] <= x) {
        ++point.sentences;
        correct += gold[i] == predicted[i];
      }
    }
    if (point.sentences > 0) {
      point.accuracy = static_cast<double>(correct) / static_cast<double>(point.sentences);
    }
    curve.push_back(point);
  }
  return curve;
}

double avg_languages_per_sentence(std::span<const LabelSequence> sequences) {
  if (sequences.empty()) return 0.0;
  std::size_t total = 0;
  for (const auto& seq : sequences) {
    LabelSequence sorted = seq;
    std::sort(sorted.begin(), sorted.end());
    total += static_cast<std::size_t>(std::unique(sorted.begin(), sorted.end()) - sorted.begin());
  }
  return static_cast<double>(total) / static_cast<double>(sequences.size());
}

LanguageId majority_label(std::span<const LanguageId> labels) {
  if (labels.empty()) throw std::invalid_argument("majority label of an empty sequence");
  LabelSequence sorted(labels.begin(), labels.end());
  std::sort(sorted.begin(), sorted.end());
  LanguageId best = sorted.front();
  std::size_t best_count = 0;
  for (std::size_t i = 0; i < sorted.size();) {
    std::size_t j = i;
    while (j < sorted.size() && sorted[j] == sorted[i]) ++j;
    if (j - i > best_count) {
      best_count = j - i;
      best = sorted[i];
    }
    i = j;
  }
  return best;
}

std::vector<std::string> make_misspelled_set(std::span<const std::string> tokens,
                                             std::uint64_t seed,
                                             const MisspellOptions& options) {
  if (options.min_edits > options.max_edits) {
    throw std::invalid_argument("min_edits exceeds max_edits");
  }
  std::mt19937_64 rng(seed);
  std::vector<std::string> out;
  out.reserve(tokens.size());
  for (const auto& token : tokens) {
    if (options.max_edits == 0) {
      out.push_back(token);
      continue;
    }
    out.push_back(misspell(utf8_decode(token), rng, options));
  }
  return out;
}

std::vector<std::size_t> default_length_thresholds() {
  return {10, 20, 30, 40, 50, 60, 70, 80, 90, 100, 125, 150, 200};
}

EvalReport evaluate(const LanguageIdentifier& identifier,
                    std::span<const LabeledSentence> data, DecodeMode mode,
                    std::vector<std::size_t> thresholds) {
  const std::size_t num_languages = identifier.registry().size();
  EvalReport report;
  report.languages = identifier.registry().codes();
  report.confusion.assign(num_languages, std::vector<std::uint64_t>(num_languages, 0));

  std::vector<LabelSequence> gold;
  std::vector<LabelSequence> predicted;
  std::vector<LanguageId> gold_sentence;
  std::vector<LanguageId> predicted_sentence;
  std::vector<std::size_t> char_counts;
  std::size_t chars = 0;
  const auto start = std::chrono::steady_clock::now();
  for (const auto& item : data) {
    if (item.sentence.empty()) continue;
    if (item.labels.size() != item.sentence.size()) {
      throw std::invalid_argument("labeled sentence has mismatched lengths");
    }
    const auto scores = identifier.score(item.sentence);
    auto decoded = identifier.decode(scores, mode);
    gold.push_back(item.labels);
    predicted.push_back(std::move(decoded.labels));
    gold_sentence.push_back(majority_label(item.labels));
    predicted_sentence.push_back(mode == DecodeMode::kSentence ? predicted.back().front()
                                                               : sentence_language(scores));
    char_counts.push_back(item.sentence.raw_char_count);
    chars += item.sentence.raw_char_count;
  }
  const double elapsed =
      std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();

  report.sentences = gold.size();
  for (std::size_t s = 0; s < gold.size(); ++s) {
    report.tokens += gold[s].size();
    for (std::size_t i = 0; i < gold[s].size(); ++i) {
      ++report.confusion[gold[s][i]][predicted[s][i]];
    }
  }
  report.token_accuracy = token_accuracy(gold, predicted);
  report.sentence_accuracy = sentence_accuracy(gold_sentence, predicted_sentence);
  report.avg_langs_predicted = avg_languages_per_sentence(predicted);
  report.avg_langs_gold = avg_languages_per_sentence(gold);
  report.cumulative_accuracy = cumulative_accuracy_by_length(
      char_counts, gold_sentence, predicted_sentence, std::move(thresholds));
  report.chars_per_second = elapsed > 0.0 ? static_cast<double>(chars) / elapsed : 0.0;
  return report;
}

std::string EvalReport::to_text() const {
  std::ostringstream out;
  out << std::fixed << std::setprecision(4);
  out << "sentences:            " << sentences << '\n'
      << "tokens:               " << tokens << '\n'
      << "token accuracy:       " << token_accuracy << '\n'
      << "sentence accuracy:    " << sentence_accuracy << '\n'
      << "languages/sentence:   " << avg_langs_predicted << " (gold " << avg_langs_gold
      << ")\n"
      << std::setprecision(1) << "chars/sec:            " << chars_per_second << '\n'
      << "cumulative sentence accuracy by length:\n";
  for (const auto& p : cumulative_accuracy) {
    out << "  <= " << std::setw(4) << p.max_chars << " chars: ";
    if (p.accuracy) {
      out << std::setprecision(4) << *p.accuracy << " (" << p.sentences << ")\n";
    } else {
      out << "n/a\n";
    }
  }
  return out.str();
}

std::string EvalReport::to_json() const {
  nlohmann::json j;
  j["sentences"] = sentences;
  j["tokens"] = tokens;
  j["token_accuracy"] = token_accuracy;
  j["sentence_accuracy"] = sentence_accuracy;
  j["avg_langs_per_sentence"] = {{"predicted", avg_langs_predicted}, {"gold", avg_langs_gold}};
  j["chars_per_second"] = chars_per_second;
  j["cumulative_accuracy"] = nlohmann::json::array();
  for (const auto& p : cumulative_accuracy) {
    nlohmann::json point = {{"max_chars", p.max_chars}, {"sentences", p.sentences}};
    point["accuracy"] = p.accuracy ? nlohmann::json(*p.accuracy) : nlohmann::json(nullptr);
    j["cumulative_accuracy"].push_back(point);
  }
  j["confusion"] = nlohmann::json::array();
  for (std::size_t g = 0; g < confusion.size(); ++g) {
    for (std::size_t p = 0; p < confusion[g].size(); ++p) {
      if (confusion[g][p] == 0) continue;
      j["confusion"].push_back(
          {{"gold", languages.at(g)}, {"predicted", languages.at(p)}, {"count", confusion[g][p]}});
    }
  }
  return j.dump(2);
}

std::string EvalReport::curve_csv() const {
  std::ostringstream out;
  out << "max_chars,sentences,accuracy\n";
  for (const auto& p : cumulative_accuracy) {
    out << p.max_chars << ',' << p.sentences << ',' << format_accuracy(p.accuracy) << '\n';
  }
  return out.str();
}

ThroughputResult benchmark_throughput(const LanguageIdentifier& identifier,
                                      std::span<const std::string> lines,
                                      std::size_t repetitions, DecodeMode mode) {
  ThroughputResult result;
  for (const auto& line : lines) {
    std::size_t pos = 0;
    while (pos < line.size()) result.chars += !is_whitespace(utf8_next(line, pos));
  }
  if (result.chars == 0) throw std::invalid_argument("benchmark corpus has no characters");
  repetitions = std::max<std::size_t>(repetitions, 1);
  std::vector<double> seconds;
  for (std::size_t r = 0; r < repetitions; ++r) {
    const auto start = std::chrono::steady_clock::now();
    for (const auto& line : lines) {
      identifier.identify(std::string_view(line), mode);
    }
    seconds.push_back(
        std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count());
  }
  std::sort(seconds.begin(), seconds.end());
  result.median_seconds = seconds[seconds.size() / 2];
  result.chars_per_second = static_cast<double>(result.chars) / result.median_seconds;
  return result;
}

}  // namespace cmx
