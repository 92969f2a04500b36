#include "cmx/datagen.h"

#include <algorithm>
#include <random>

#include "cmx/error.h"
#include "cmx/tokenizer.h"

namespace cmx {

namespace {

std::uint64_t splitmix64(std::uint64_t x) {
  x += 0x9e3779b97f4a7c15ULL;
  x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ULL;
  x = (x ^ (x >> 27)) * 0x94d049bb133111ebULL;
  return x ^ (x >> 31);
}

// Uniform integer in [0, n) from the engine's raw output; std distributions
// are implementation-defined and would break byte-identical regeneration.
std::size_t uniform_index(std::mt19937_64& rng, std::size_t n) {
  const std::uint64_t limit = UINT64_MAX - UINT64_MAX % n;
  std::uint64_t x;
  do {
    x = rng();
  } while (x >= limit);
  return static_cast<std::size_t>(x % n);
}

}  // namespace

void MonolingualStore::add_phrase(LanguageId language, std::vector<std::string> tokens) {
  if (tokens.empty()) return;
  if (tokens.size() > kMaxExampleTokens) throw std::invalid_argument("phrase too long");
  phrases_.at(language).push_back(std::move(tokens));
}

void MonolingualStore::add(LanguageId language, std::string_view text) {
  const Sentence sentence = tokenize(text);
  for (std::size_t begin = 0; begin < sentence.size(); begin += kMaxExampleTokens) {
    const std::size_t end = std::min(sentence.size(), begin + kMaxExampleTokens);
    std::vector<std::string> chunk;
    for (std::size_t i = begin; i < end; ++i) chunk.push_back(sentence.tokens[i].text);
    add_phrase(language, std::move(chunk));
  }
}

MonolingualStore ingest(std::istream& corpus, const LanguageRegistry& registry,
                        const WarningSink& warn) {
  MonolingualStore store(registry.size());
  for_each_monolingual_line(
      corpus, registry,
      [&](LanguageId language, std::string_view text) { store.add(language, text); }, warn);
  return store;
}

LabeledSentence SyntheticExample::to_labeled() const {
  return {make_sentence(tokens), labels};
}

SyntheticGenerator::SyntheticGenerator(const MonolingualStore& store,
                                       std::vector<LanguagePair> pairs, std::uint64_t seed)
    : store_(store), pairs_(std::move(pairs)), seed_(seed) {
  if (pairs_.empty()) throw std::invalid_argument("no language pairs to generate from");
  long_phrases_.resize(store.num_languages());
  for (std::size_t l = 0; l < store.num_languages(); ++l) {
    const auto& phrases = store.phrases(static_cast<LanguageId>(l));
    for (std::size_t i = 0; i < phrases.size(); ++i) {
      if (phrases[i].size() >= 2) long_phrases_[l].push_back(i);
    }
  }
  for (const auto& [a, b] : pairs_) {
    if (a == b) throw std::invalid_argument("a language pair needs two languages");
    if (a >= store.num_languages() || b >= store.num_languages() ||
        long_phrases_[a].empty() || long_phrases_[b].empty()) {
      throw DataError("language pair (" + std::to_string(a) + ", " + std::to_string(b) +
                      ") lacks phrases of two or more tokens on one side");
    }
  }
}

SyntheticExample SyntheticGenerator::generate(std::uint64_t index) const {
  std::mt19937_64 rng(splitmix64(seed_ ^ splitmix64(index)));
  SyntheticExample ex;
  ex.pair_index = uniform_index(rng, pairs_.size());
  auto [first, second] = pairs_[ex.pair_index];
  if (uniform_index(rng, 2) == 1) std::swap(first, second);
  ex.pair = {first, second};
  ex.pattern = uniform_index(rng, 2) == 0 ? MixPattern::kIntra : MixPattern::kInter;

  const auto draw_any = [&](LanguageId language) -> const std::vector<std::string>& {
    const auto& phrases = store_.phrases(language);
    return phrases[uniform_index(rng, phrases.size())];
  };
  const auto draw_long = [&](LanguageId language) -> const std::vector<std::string>& {
    const auto& pool = long_phrases_[language];
    return store_.phrases(language)[pool[uniform_index(rng, pool.size())]];
  };

  if (ex.pattern == MixPattern::kIntra) {
    // Leading phrase, then the switch; the later-drawn phrase is truncated
    // first so both sides keep at least one token.
    const auto& lead = draw_any(first);
    const auto& tail = draw_any(second);
    const std::size_t lead_len = std::min(lead.size(), kMaxExampleTokens - 1);
    const std::size_t tail_len = std::min(tail.size(), kMaxExampleTokens - lead_len);
    for (std::size_t i = 0; i < lead_len; ++i) {
      ex.tokens.push_back(lead[i]);
      ex.labels.push_back(first);
    }
    for (std::size_t i = 0; i < tail_len; ++i) {
      ex.tokens.push_back(tail[i]);
      ex.labels.push_back(second);
    }
    return ex;
  }

  // Inter-mix: a 1-2 token span of `second` inside a `first` frame, never at
  // either edge.
  const auto& frame = draw_long(first);
  const auto& inner = draw_any(second);
  const std::size_t span = std::min(inner.size(), 1 + uniform_index(rng, kMaxMinoritySpan));
  const std::size_t frame_len = std::min(frame.size(), kMaxExampleTokens - span);
  const std::size_t insert_at = 1 + uniform_index(rng, frame_len - 1);
  for (std::size_t i = 0; i < frame_len; ++i) {
    if (i == insert_at) {
      for (std::size_t k = 0; k < span; ++k) {
        ex.tokens.push_back(inner[k]);
        ex.labels.push_back(second);
      }
    }
    ex.tokens.push_back(frame[i]);
    ex.labels.push_back(first);
  }
  return ex;
}

std::vector<SyntheticExample> generate(const MonolingualStore& store,
                                       const std::vector<LanguagePair>& pairs,
                                       std::size_t count, std::uint64_t seed) {
  const SyntheticGenerator generator(store, pairs, seed);
  std::vector<SyntheticExample> out;
  out.reserve(count);
  for (std::size_t i = 0; i < count; ++i) out.push_back(generator.generate(i));
  return out;
}

std::string check_example(const SyntheticExample& ex) {
  const std::size_t n = ex.tokens.size();
  if (n == 0 || n > kMaxExampleTokens) return "length " + std::to_string(n) + " out of range";
  if (ex.labels.size() != n) return "label count differs from token count";
  const auto [a, b] = ex.pair;
  if (a == b) return "pair has a single language";
  for (auto label : ex.labels) {
    if (label != a && label != b) return "label outside the pair";
  }
  const bool has_a = std::count(ex.labels.begin(), ex.labels.end(), a) > 0;
  const bool has_b = std::count(ex.labels.begin(), ex.labels.end(), b) > 0;
  if (!has_a || !has_b) return "example is not bilingual";
  std::size_t switches = 0;
  for (std::size_t i = 1; i < n; ++i) switches += ex.labels[i] != ex.labels[i - 1];
  if (ex.pattern == MixPattern::kIntra) {
    if (switches != 1) return "intra-mix must switch exactly once";
    if (ex.labels.front() != a) return "intra-mix must start with the leading language";
    return {};
  }
  const auto first = std::find(ex.labels.begin(), ex.labels.end(), b) - ex.labels.begin();
  const auto last = n - 1 - (std::find(ex.labels.rbegin(), ex.labels.rend(), b) -
                             ex.labels.rbegin());
  const auto run = static_cast<std::size_t>(last - static_cast<std::size_t>(first) + 1);
  if (std::count(ex.labels.begin(), ex.labels.end(), b) != static_cast<long>(run)) {
    return "inter-mix minority span is not contiguous";
  }
  if (run > kMaxMinoritySpan) return "inter-mix minority span longer than two tokens";
  if (first == 0 || last == n - 1) return "inter-mix minority span touches an edge";
  return {};
}

}  // namespace cmx
