#include "cmx/tokenizer.h"

#include "cmx/unicode.h"

namespace cmx {

namespace {

std::size_t count_chars(std::string_view text) {
  std::size_t n = 0;
  for (unsigned char c : text) n += (c & 0xC0) != 0x80;
  return n;
}

void emit(Sentence& out, std::u32string_view chars) {
  if (chars.empty()) return;
  std::string text;
  text.reserve(chars.size());
  for (char32_t cp : chars) utf8_append(text, fold_case(cp));
  Token token;
  token.text = std::move(text);
  token.char_count = chars.size();
  out.tokens.push_back(std::move(token));
}

// Splits one whitespace-delimited word into [leading punct][core][trailing
// punct]. A word made only of punctuation stays a single token.
void split_word(Sentence& out, std::u32string_view word) {
  std::size_t begin = 0;
  while (begin < word.size() && is_punct_or_symbol(word[begin])) ++begin;
  if (begin == word.size()) {
    emit(out, word);
    return;
  }
  std::size_t end = word.size();
  while (end > begin && is_punct_or_symbol(word[end - 1])) --end;
  emit(out, word.substr(0, begin));
  emit(out, word.substr(begin, end - begin));
  emit(out, word.substr(end));
}

}  // namespace

Token::Token(std::string utf8) : text(std::move(utf8)), char_count(count_chars(text)) {}

std::string lowercase(std::string_view text) {
  std::string out;
  out.reserve(text.size());
  std::size_t pos = 0;
  while (pos < text.size()) utf8_append(out, fold_case(utf8_next(text, pos)));
  return out;
}

Sentence tokenize(std::string_view text) {
  Sentence out;
  std::u32string word;
  std::size_t pos = 0;
  while (pos < text.size()) {
    const char32_t cp = utf8_next(text, pos);
    if (is_whitespace(cp)) {
      split_word(out, word);
      word.clear();
    } else {
      ++out.raw_char_count;
      word.push_back(cp);
    }
  }
  split_word(out, word);
  return out;
}

Sentence make_sentence(const std::vector<std::string>& pieces) {
  Sentence out;
  out.tokens.reserve(pieces.size());
  for (const auto& piece : pieces) {
    Token token(lowercase(piece));
    out.raw_char_count += token.char_count;
    out.tokens.push_back(std::move(token));
  }
  return out;
}

}  // namespace cmx
