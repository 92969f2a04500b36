#ifndef CMX_TOKENIZER_H_
#define CMX_TOKENIZER_H_

#include <cstddef>
#include <string>
#include <string_view>
#include <vector>

namespace cmx {

// A lowercased, whitespace-free unit of text.
struct Token {
  std::string text;         // UTF-8
  std::size_t char_count{};  // Unicode scalar values

  Token() = default;
  explicit Token(std::string utf8);

  friend bool operator==(const Token&, const Token&) = default;
};

struct Sentence {
  std::vector<Token> tokens;
  // Non-whitespace scalar values in the original text.
  std::size_t raw_char_count{};

  std::size_t size() const { return tokens.size(); }
  bool empty() const { return tokens.empty(); }
};

// Splits on Unicode whitespace, then peels maximal leading and trailing runs
// of punctuation/symbol characters into their own tokens. Word-internal
// punctuation (apostrophes, hyphens) stays attached. Output is lowercased
// with simple case folding.
Sentence tokenize(std::string_view text);

// Builds a Sentence from already tokenized text (e.g. annotated corpora):
// each piece is lowercased but not split further.
Sentence make_sentence(const std::vector<std::string>& pieces);

// Simple case folding of every scalar value.
std::string lowercase(std::string_view text);

}  // namespace cmx

#endif  // CMX_TOKENIZER_H_
