#ifndef CMX_FEATURES_H_
#define CMX_FEATURES_H_

#include <cstdint>
#include <span>
#include <string>
#include <utility>
#include <vector>

#include "cmx/lexicon.h"
#include "cmx/tokenizer.h"

namespace cmx {

enum class FeatureKind : std::uint8_t {
  kCharNgram = 1,
  kScript = 2,
  kLexiconDistribution = 3,
  kLexiconActive = 4,
  kLexiconSingleton = 5,
};

bool is_lexicon_kind(FeatureKind kind);

// Offset of the token a slot reads from, relative to the current token.
enum class WindowPosition : std::int8_t { kPrevious = -1, kCurrent = 0, kNext = 1 };

// One embedding space. Its matrix (vocab_size x embedding_dim) is shared by
// every window position the group is extracted at.
struct FeatureGroup {
  FeatureKind kind{};
  int ngram_order = 0;  // 1..4 for kCharNgram, 0 otherwise
  std::uint32_t vocab_size = 0;
  std::uint32_t embedding_dim = 0;
  std::vector<WindowPosition> positions;

  std::string name() const;
  friend bool operator==(const FeatureGroup&, const FeatureGroup&) = default;
};

// A (group, position) pair; owns one contiguous block of the embedding layer.
struct FeatureSlot {
  std::size_t group = 0;
  WindowPosition position{};
  std::size_t offset = 0;  // start of the block in the embedding layer
};

struct FeatureEntry {
  std::uint32_t index = 0;
  double weight = 0.0;
  friend bool operator==(const FeatureEntry&, const FeatureEntry&) = default;
};

// Sparse row of one slot: indices strictly increasing, weights >= 0.
using SparseFeatureVector = std::vector<FeatureEntry>;

class FeatureLayout {
 public:
  FeatureLayout() = default;
  explicit FeatureLayout(std::vector<FeatureGroup> groups);

  // n-gram groups (n=1..4, D=16, V=1000/1000/5000/5000) at prev/current/next,
  // script (D=8, V=27) at current, and when include_lexicon the three
  // lexicon groups (D=16, V=num_languages) at prev/current/next.
  static FeatureLayout standard(std::size_t num_languages, bool include_lexicon);

  const std::vector<FeatureGroup>& groups() const { return groups_; }
  const std::vector<FeatureSlot>& slots() const { return slots_; }
  std::size_t embedding_size() const { return embedding_size_; }
  bool has_lexicon() const;

  friend bool operator==(const FeatureLayout& a, const FeatureLayout& b) {
    return a.groups_ == b.groups_;
  }

 private:
  std::vector<FeatureGroup> groups_;
  std::vector<FeatureSlot> slots_;
  std::size_t embedding_size_ = 0;
};

// One sparse vector per layout slot, in slot order.
struct FeatureSet {
  std::vector<SparseFeatureVector> slots;

  // Empties every lexicon slot (selective dropout / lexicon miss).
  void clear_lexicon(const FeatureLayout& layout);
};

// Distinct n-grams of the token padded with '^' and '$', each with its
// share of the len+3-n total n-grams. Empty when the padded token is
// shorter than n. Sorted by n-gram string.
std::vector<std::pair<std::string, double>> extract_ngrams(const Token& token, int n);

// 64-bit FNV-1a over the 8-byte group salt followed by the UTF-8 bytes.
std::uint64_t feature_hash(std::string_view ngram, int ngram_order);
std::uint32_t hash_feature(std::string_view ngram, const FeatureGroup& group);

// Hashed, fraction-weighted n-gram vector for one group.
SparseFeatureVector ngram_features(const Token& token, const FeatureGroup& group);
SparseFeatureVector extract_script_features(const Token& token);

struct LexiconFeatures {
  SparseFeatureVector distribution;
  SparseFeatureVector active;
  SparseFeatureVector singleton;
};
LexiconFeatures extract_lexicon_features(const Token& token, const Lexicon& lexicon);

class FeatureExtractor {
 public:
  // `lexicon` must outlive the extractor; required iff the layout has
  // lexicon groups.
  FeatureExtractor(FeatureLayout layout, const Lexicon* lexicon);

  // Throws std::out_of_range for a position outside the sentence.
  FeatureSet extract(const Sentence& sentence, std::size_t position) const;
  // Same result as extract() at every position, sharing per-token work.
  std::vector<FeatureSet> extract_sentence(const Sentence& sentence) const;

  const FeatureLayout& layout() const { return layout_; }

 private:
  // Per-group vectors of one token, independent of window position.
  std::vector<SparseFeatureVector> token_features(const Token& token) const;
  FeatureSet assemble(const std::vector<std::vector<SparseFeatureVector>>& per_token,
                      std::size_t position) const;

  FeatureLayout layout_;
  const Lexicon* lexicon_;
};

}  // namespace cmx

#endif  // CMX_FEATURES_H_
