#include "cmx/features.h"

#include <algorithm>
#include <map>
#include <stdexcept>

#include "cmx/unicode.h"

namespace cmx {

namespace {

constexpr std::uint64_t kFnvOffset = 0xcbf29ce484222325ULL;
constexpr std::uint64_t kFnvPrime = 0x100000001b3ULL;

constexpr std::uint64_t fnv1a(std::uint64_t h, std::string_view bytes) {
  for (unsigned char c : bytes) {
    h ^= c;
    h *= kFnvPrime;
  }
  return h;
}

// State after hashing the group salt 'C' 'M' 'X' 0x01 <kind> <n> 0x00 0x00.
constexpr std::uint64_t salted_state(int n) {
  const char salt[8] = {'C', 'M', 'X', 0x01,
                        static_cast<char>(FeatureKind::kCharNgram),
                        static_cast<char>(n), 0x00, 0x00};
  return fnv1a(kFnvOffset, std::string_view(salt, 8));
}

constexpr std::uint64_t kSaltStates[5] = {0, salted_state(1), salted_state(2),
                                          salted_state(3), salted_state(4)};

// Padded token "^text$" plus the byte offset of every scalar value (and the
// end), so n-gram i spans [offsets[i], offsets[i+n]).
struct PaddedToken {
  std::string bytes;
  std::vector<std::uint32_t> offsets;

  explicit PaddedToken(const Token& token) {
    bytes.reserve(token.text.size() + 2);
    bytes.push_back('^');
    bytes += token.text;
    bytes.push_back('$');
    offsets.reserve(token.char_count + 3);
    std::size_t pos = 0;
    while (pos < bytes.size()) {
      offsets.push_back(static_cast<std::uint32_t>(pos));
      utf8_next(bytes, pos);
    }
    offsets.push_back(static_cast<std::uint32_t>(bytes.size()));
  }

  std::size_t chars() const { return offsets.size() - 1; }
  std::string_view gram(std::size_t i, std::size_t n) const {
    return std::string_view(bytes).substr(offsets[i], offsets[i + n] - offsets[i]);
  }
};

SparseFeatureVector ngram_vector(const PaddedToken& padded, const FeatureGroup& group) {
  const auto n = static_cast<std::size_t>(group.ngram_order);
  if (padded.chars() < n) return {};
  const std::size_t total = padded.chars() - n + 1;
  std::vector<std::uint32_t> indices(total);
  for (std::size_t i = 0; i < total; ++i) {
    const std::uint64_t h = fnv1a(kSaltStates[n], padded.gram(i, n));
    indices[i] = static_cast<std::uint32_t>(h % group.vocab_size);
  }
  std::sort(indices.begin(), indices.end());
  SparseFeatureVector out;
  const double denom = static_cast<double>(total);
  for (std::size_t i = 0; i < total;) {
    std::size_t j = i;
    while (j < total && indices[j] == indices[i]) ++j;
    out.push_back({indices[i], static_cast<double>(j - i) / denom});
    i = j;
  }
  return out;
}

}  // namespace

bool is_lexicon_kind(FeatureKind kind) {
  return kind == FeatureKind::kLexiconDistribution || kind == FeatureKind::kLexiconActive ||
         kind == FeatureKind::kLexiconSingleton;
}

std::string FeatureGroup::name() const {
  switch (kind) {
    case FeatureKind::kCharNgram: return "char" + std::to_string(ngram_order) + "gram";
    case FeatureKind::kScript: return "script";
    case FeatureKind::kLexiconDistribution: return "lex_distribution";
    case FeatureKind::kLexiconActive: return "lex_active";
    case FeatureKind::kLexiconSingleton: return "lex_singleton";
  }
  return "unknown";
}

FeatureLayout::FeatureLayout(std::vector<FeatureGroup> groups) : groups_(std::move(groups)) {
  for (std::size_t g = 0; g < groups_.size(); ++g) {
    const auto& group = groups_[g];
    if (group.vocab_size == 0 || group.embedding_dim == 0) {
      throw std::invalid_argument("feature group " + group.name() + " has zero size");
    }
    if (group.kind == FeatureKind::kCharNgram &&
        (group.ngram_order < 1 || group.ngram_order > 4)) {
      throw std::invalid_argument("n-gram order must be in [1, 4]");
    }
    if (group.kind == FeatureKind::kScript && group.vocab_size != kNumScripts) {
      throw std::invalid_argument("script group vocabulary must be 27");
    }
    if (group.positions.empty()) {
      throw std::invalid_argument("feature group " + group.name() + " has no positions");
    }
    for (auto position : group.positions) {
      slots_.push_back({g, position, embedding_size_});
      embedding_size_ += group.embedding_dim;
    }
  }
}

FeatureLayout FeatureLayout::standard(std::size_t num_languages, bool include_lexicon) {
  using P = WindowPosition;
  const std::vector<P> window = {P::kPrevious, P::kCurrent, P::kNext};
  std::vector<FeatureGroup> groups;
  const std::uint32_t ngram_vocab[] = {1000, 1000, 5000, 5000};
  for (int n = 1; n <= 4; ++n) {
    groups.push_back({FeatureKind::kCharNgram, n, ngram_vocab[n - 1], 16, window});
  }
  groups.push_back({FeatureKind::kScript, 0, kNumScripts, 8, {P::kCurrent}});
  if (include_lexicon) {
    const auto v = static_cast<std::uint32_t>(num_languages);
    for (auto kind : {FeatureKind::kLexiconDistribution, FeatureKind::kLexiconActive,
                      FeatureKind::kLexiconSingleton}) {
      groups.push_back({kind, 0, v, 16, window});
    }
  }
  return FeatureLayout(std::move(groups));
}

bool FeatureLayout::has_lexicon() const {
  return std::any_of(groups_.begin(), groups_.end(),
                     [](const FeatureGroup& g) { return is_lexicon_kind(g.kind); });
}

void FeatureSet::clear_lexicon(const FeatureLayout& layout) {
  const auto& slot_defs = layout.slots();
  for (std::size_t s = 0; s < slots.size(); ++s) {
    if (is_lexicon_kind(layout.groups()[slot_defs[s].group].kind)) slots[s].clear();
  }
}

std::vector<std::pair<std::string, double>> extract_ngrams(const Token& token, int n) {
  if (n < 1) throw std::invalid_argument("n-gram order must be positive");
  const PaddedToken padded(token);
  const auto order = static_cast<std::size_t>(n);
  if (padded.chars() < order) return {};
  const std::size_t total = padded.chars() - order + 1;
  std::map<std::string, std::size_t> counts;
  for (std::size_t i = 0; i < total; ++i) ++counts[std::string(padded.gram(i, order))];
  std::vector<std::pair<std::string, double>> out;
  out.reserve(counts.size());
  for (auto& [gram, count] : counts) {
    out.emplace_back(gram, static_cast<double>(count) / static_cast<double>(total));
  }
  return out;
}

std::uint64_t feature_hash(std::string_view ngram, int ngram_order) {
  if (ngram_order < 1 || ngram_order > 4) {
    throw std::invalid_argument("n-gram order must be in [1, 4]");
  }
  return fnv1a(kSaltStates[ngram_order], ngram);
}

std::uint32_t hash_feature(std::string_view ngram, const FeatureGroup& group) {
  if (group.kind != FeatureKind::kCharNgram) {
    throw std::invalid_argument("only n-gram groups are hashed");
  }
  return static_cast<std::uint32_t>(feature_hash(ngram, group.ngram_order) %
                                    group.vocab_size);
}

SparseFeatureVector ngram_features(const Token& token, const FeatureGroup& group) {
  return ngram_vector(PaddedToken(token), group);
}

SparseFeatureVector extract_script_features(const Token& token) {
  std::array<std::size_t, kNumScripts> counts{};
  std::size_t total = 0;
  std::size_t pos = 0;
  while (pos < token.text.size()) {
    ++counts[script_id(utf8_next(token.text, pos))];
    ++total;
  }
  SparseFeatureVector out;
  if (total == 0) return out;
  for (std::size_t s = 0; s < kNumScripts; ++s) {
    if (counts[s] > 0) {
      out.push_back({static_cast<std::uint32_t>(s),
                     static_cast<double>(counts[s]) / static_cast<double>(total)});
    }
  }
  return out;
}

LexiconFeatures extract_lexicon_features(const Token& token, const Lexicon& lexicon) {
  LexiconFeatures out;
  const auto distribution = lexicon.lookup(token);
  for (std::size_t l = 0; l < distribution.size(); ++l) {
    if (distribution[l] > 0.0f) {
      const auto index = static_cast<std::uint32_t>(l);
      out.distribution.push_back({index, static_cast<double>(distribution[l])});
      out.active.push_back({index, 1.0});
    }
  }
  if (out.active.size() == 1) out.singleton = out.active;
  return out;
}

FeatureExtractor::FeatureExtractor(FeatureLayout layout, const Lexicon* lexicon)
    : layout_(std::move(layout)), lexicon_(lexicon) {
  if (layout_.has_lexicon() && lexicon_ == nullptr) {
    throw std::invalid_argument("layout uses lexicon features but no lexicon was given");
  }
  for (const auto& group : layout_.groups()) {
    if (is_lexicon_kind(group.kind) && group.vocab_size != lexicon_->num_languages()) {
      throw std::invalid_argument("lexicon language count does not match layout");
    }
  }
}

std::vector<SparseFeatureVector> FeatureExtractor::token_features(const Token& token) const {
  std::vector<SparseFeatureVector> out(layout_.groups().size());
  const PaddedToken padded(token);
  LexiconFeatures lex;
  bool looked_up = false;
  for (std::size_t g = 0; g < out.size(); ++g) {
    const auto& group = layout_.groups()[g];
    switch (group.kind) {
      case FeatureKind::kCharNgram:
        out[g] = ngram_vector(padded, group);
        break;
      case FeatureKind::kScript:
        out[g] = extract_script_features(token);
        break;
      case FeatureKind::kLexiconDistribution:
      case FeatureKind::kLexiconActive:
      case FeatureKind::kLexiconSingleton:
        if (!looked_up) {
          lex = extract_lexicon_features(token, *lexicon_);
          looked_up = true;
        }
        out[g] = group.kind == FeatureKind::kLexiconDistribution ? lex.distribution
                 : group.kind == FeatureKind::kLexiconActive     ? lex.active
                                                                 : lex.singleton;
        break;
    }
  }
  return out;
}

FeatureSet FeatureExtractor::assemble(
    const std::vector<std::vector<SparseFeatureVector>>& per_token,
    std::size_t position) const {
  FeatureSet out;
  out.slots.resize(layout_.slots().size());
  for (std::size_t s = 0; s < out.slots.size(); ++s) {
    const auto& slot = layout_.slots()[s];
    const auto target = static_cast<std::ptrdiff_t>(position) +
                        static_cast<std::ptrdiff_t>(slot.position);
    if (target < 0 || target >= static_cast<std::ptrdiff_t>(per_token.size())) continue;
    out.slots[s] = per_token[static_cast<std::size_t>(target)][slot.group];
  }
  return out;
}

FeatureSet FeatureExtractor::extract(const Sentence& sentence, std::size_t position) const {
  if (position >= sentence.size()) {
    throw std::out_of_range("token position " + std::to_string(position) +
                            " outside sentence of length " +
                            std::to_string(sentence.size()));
  }
  // Only the window around `position` is needed; keep indices aligned by
  // leaving the other entries empty.
  std::vector<std::vector<SparseFeatureVector>> per_token(sentence.size());
  const std::size_t lo = position == 0 ? 0 : position - 1;
  const std::size_t hi = std::min(sentence.size() - 1, position + 1);
  for (std::size_t i = lo; i <= hi; ++i) per_token[i] = token_features(sentence.tokens[i]);
  return assemble(per_token, position);
}

std::vector<FeatureSet> FeatureExtractor::extract_sentence(const Sentence& sentence) const {
  std::vector<std::vector<SparseFeatureVector>> per_token;
  per_token.reserve(sentence.size());
  for (const auto& token : sentence.tokens) per_token.push_back(token_features(token));
  std::vector<FeatureSet> out;
  out.reserve(sentence.size());
  for (std::size_t i = 0; i < sentence.size(); ++i) out.push_back(assemble(per_token, i));
  return out;
}

}  // namespace cmx
