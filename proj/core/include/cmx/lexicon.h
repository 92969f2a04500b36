#ifndef CMX_LEXICON_H_
#define CMX_LEXICON_H_

#include <cstdint>
#include <filesystem>
#include <istream>
#include <ostream>
#include <span>
#include <string>
#include <string_view>
#include <unordered_map>
#include <vector>

#include "cmx/corpus.h"
#include "cmx/language.h"
#include "cmx/tokenizer.h"

namespace cmx {

inline constexpr std::size_t kPrefixLength = 6;

// Returns the first kPrefixLength scalar values of a token, or an empty
// string when the token is shorter than that.
std::string token_prefix(std::string_view text);

// Token -> language distribution map. Every stored row sums to 1.
class DistributionTable {
 public:
  explicit DistributionTable(std::size_t num_languages = 0)
      : num_languages_(num_languages) {}

  std::size_t num_languages() const { return num_languages_; }
  std::size_t size() const { return index_.size(); }

  // Empty span when the key is absent.
  std::span<const float> find(const std::string& key) const;
  void insert(std::string key, std::span<const float> distribution);

  // Keys in insertion order.
  const std::vector<std::string>& keys() const { return keys_; }

 private:
  std::size_t num_languages_;
  std::unordered_map<std::string, std::uint32_t> index_;
  std::vector<std::string> keys_;
  std::vector<float> rows_;
};

// Token table plus the 6-character prefix fallback table.
class Lexicon {
 public:
  Lexicon() = default;
  Lexicon(DistributionTable tokens, DistributionTable prefixes);

  std::size_t num_languages() const { return tokens_.num_languages(); }
  const DistributionTable& tokens() const { return tokens_; }
  const DistributionTable& prefixes() const { return prefixes_; }

  // Exact token match first, then the prefix table for tokens with at
  // least kPrefixLength characters. Empty span on a miss.
  std::span<const float> lookup(const Token& token) const;

  void save(std::ostream& out) const;
  static Lexicon read(std::istream& in);
  void save(const std::filesystem::path& path) const;
  static Lexicon load(const std::filesystem::path& path);

 private:
  DistributionTable tokens_;
  DistributionTable prefixes_;
};

// Accumulates (token, language) occurrence counts.
class LexiconBuilder {
 public:
  explicit LexiconBuilder(std::size_t num_languages);

  void add(LanguageId language, const Sentence& sentence);

  // Drops tokens seen fewer than min_count times in total, normalizes the
  // rest and aggregates retained tokens into the prefix table.
  // Throws DataError when nothing survives.
  Lexicon build(std::uint64_t min_count) const;

 private:
  std::size_t num_languages_;
  std::unordered_map<std::string, std::vector<std::uint64_t>> counts_;
};

inline constexpr std::uint64_t kDefaultMinCount = 2;

// Reads "lang<TAB>text" lines. Lines with an unknown language are reported
// through `warn` and skipped.
Lexicon build_lexicon(std::istream& corpus, const LanguageRegistry& registry,
                      std::uint64_t min_count = kDefaultMinCount,
                      const WarningSink& warn = {});

}  // namespace cmx

#endif  // CMX_LEXICON_H_
