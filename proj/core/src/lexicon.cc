#include "cmx/lexicon.h"

#include <algorithm>
#include <fstream>
#include <numeric>

#include "binary_io.h"
#include "cmx/corpus.h"
#include "cmx/error.h"
#include "cmx/unicode.h"

namespace cmx {

namespace {

constexpr char kMagic[5] = "CMXL";
constexpr std::uint8_t kVersion = 1;

void write_table(std::ostream& out, const DistributionTable& table) {
  io::write<std::uint64_t>(out, table.size());
  for (const auto& key : table.keys()) {
    io::write_string(out, key);
    io::write_floats(out, table.find(key));
  }
}

DistributionTable read_table(std::istream& in, std::size_t num_languages) {
  DistributionTable table(num_languages);
  const auto count = io::read<std::uint64_t>(in, "lexicon entry count");
  std::vector<float> row(num_languages);
  for (std::uint64_t i = 0; i < count; ++i) {
    std::string key = io::read_string(in, "lexicon key", 4096);
    io::read_floats(in, row, "lexicon distribution");
    table.insert(std::move(key), row);
  }
  return table;
}

std::vector<float> normalize(const std::vector<std::uint64_t>& counts) {
  const double total = std::accumulate(counts.begin(), counts.end(), 0.0);
  std::vector<float> row(counts.size());
  for (std::size_t i = 0; i < counts.size(); ++i) {
    row[i] = static_cast<float>(static_cast<double>(counts[i]) / total);
  }
  return row;
}

}  // namespace

std::string token_prefix(std::string_view text) {
  std::size_t pos = 0;
  std::size_t chars = 0;
  while (pos < text.size() && chars < kPrefixLength) {
    utf8_next(text, pos);
    ++chars;
  }
  if (chars < kPrefixLength) return {};
  return std::string(text.substr(0, pos));
}

std::span<const float> DistributionTable::find(const std::string& key) const {
  const auto it = index_.find(key);
  if (it == index_.end()) return {};
  return {rows_.data() + static_cast<std::size_t>(it->second) * num_languages_,
          num_languages_};
}

void DistributionTable::insert(std::string key, std::span<const float> distribution) {
  if (distribution.size() != num_languages_) {
    throw std::invalid_argument("distribution size does not match language count");
  }
  const auto row = static_cast<std::uint32_t>(keys_.size());
  if (!index_.emplace(key, row).second) {
    throw DataError("duplicate lexicon key '" + key + "'");
  }
  keys_.push_back(std::move(key));
  rows_.insert(rows_.end(), distribution.begin(), distribution.end());
}

Lexicon::Lexicon(DistributionTable tokens, DistributionTable prefixes)
    : tokens_(std::move(tokens)), prefixes_(std::move(prefixes)) {
  if (tokens_.num_languages() != prefixes_.num_languages()) {
    throw std::invalid_argument("token and prefix tables disagree on language count");
  }
}

std::span<const float> Lexicon::lookup(const Token& token) const {
  if (auto hit = tokens_.find(token.text); !hit.empty()) return hit;
  if (token.char_count < kPrefixLength) return {};
  return prefixes_.find(token_prefix(token.text));
}

void Lexicon::save(std::ostream& out) const {
  out.write(kMagic, 4);
  io::write<std::uint8_t>(out, kVersion);
  io::write<std::uint32_t>(out, static_cast<std::uint32_t>(num_languages()));
  write_table(out, tokens_);
  write_table(out, prefixes_);
  if (!out) throw DataError("failed writing lexicon");
}

Lexicon Lexicon::read(std::istream& in) {
  io::expect_magic(in, kMagic, "lexicon");
  const auto version = io::read<std::uint8_t>(in, "lexicon version");
  if (version != kVersion) {
    throw DataError("unsupported lexicon version " + std::to_string(version));
  }
  const auto languages = io::read<std::uint32_t>(in, "lexicon language count");
  if (languages == 0 || languages > 100000) throw DataError("corrupt lexicon language count");
  DistributionTable tokens = read_table(in, languages);
  DistributionTable prefixes = read_table(in, languages);
  if (in.peek() != std::char_traits<char>::eof()) {
    throw DataError("trailing bytes after lexicon tables");
  }
  return Lexicon(std::move(tokens), std::move(prefixes));
}

void Lexicon::save(const std::filesystem::path& path) const {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw DataError("cannot write " + path.string());
  save(out);
}

Lexicon Lexicon::load(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw DataError("cannot open lexicon " + path.string());
  return read(in);
}

LexiconBuilder::LexiconBuilder(std::size_t num_languages)
    : num_languages_(num_languages) {
  if (num_languages == 0) throw std::invalid_argument("lexicon needs at least one language");
}

void LexiconBuilder::add(LanguageId language, const Sentence& sentence) {
  if (language >= num_languages_) throw std::out_of_range("language id out of range");
  for (const auto& token : sentence.tokens) {
    auto& row = counts_[token.text];
    if (row.empty()) row.assign(num_languages_, 0);
    ++row[language];
  }
}

Lexicon LexiconBuilder::build(std::uint64_t min_count) const {
  // Sorted keys keep the output (and the file) independent of hash order.
  std::vector<const std::string*> retained;
  for (const auto& [token, row] : counts_) {
    const auto total = std::accumulate(row.begin(), row.end(), std::uint64_t{0});
    if (total >= min_count) retained.push_back(&token);
  }
  if (retained.empty()) throw DataError("lexicon is empty after pruning");
  std::sort(retained.begin(), retained.end(),
            [](const std::string* a, const std::string* b) { return *a < *b; });

  DistributionTable tokens(num_languages_);
  std::unordered_map<std::string, std::vector<std::uint64_t>> prefix_counts;
  std::vector<std::string> prefix_order;
  for (const std::string* token : retained) {
    const auto& row = counts_.at(*token);
    tokens.insert(*token, normalize(row));
    std::string prefix = token_prefix(*token);
    if (prefix.empty()) continue;
    auto [it, inserted] = prefix_counts.try_emplace(prefix);
    if (inserted) {
      it->second.assign(num_languages_, 0);
      prefix_order.push_back(prefix);
    }
    for (std::size_t l = 0; l < num_languages_; ++l) it->second[l] += row[l];
  }
  DistributionTable prefixes(num_languages_);
  for (auto& prefix : prefix_order) {
    const auto row = normalize(prefix_counts.at(prefix));
    prefixes.insert(std::move(prefix), row);
  }
  return Lexicon(std::move(tokens), std::move(prefixes));
}

Lexicon build_lexicon(std::istream& corpus, const LanguageRegistry& registry,
                      std::uint64_t min_count, const WarningSink& warn) {
  LexiconBuilder builder(registry.size());
  for_each_monolingual_line(
      corpus, registry,
      [&](LanguageId language, std::string_view text) {
        builder.add(language, tokenize(text));
      },
      warn);
  return builder.build(min_count);
}

}  // namespace cmx
