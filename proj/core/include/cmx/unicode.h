#ifndef CMX_UNICODE_H_
#define CMX_UNICODE_H_

#include <array>
#include <cstdint>
#include <string>
#include <string_view>

namespace cmx {

// Decoding helpers. Invalid UTF-8 sequences decode to U+FFFD one byte at a
// time, so every byte string has a total decoding.
std::u32string utf8_decode(std::string_view text);
void utf8_append(std::string& out, char32_t cp);
std::string utf8_encode(std::u32string_view text);

// Decodes one scalar starting at text[pos]; advances pos.
char32_t utf8_next(std::string_view text, std::size_t& pos);

bool is_whitespace(char32_t cp);
// True for Unicode general categories P* and S*.
bool is_punct_or_symbol(char32_t cp);
// Simple (one-to-one, locale-independent) case folding.
char32_t fold_case(char32_t cp);

// Script classes used by the script feature group. Ids 0..25 are distinct
// writing systems, kOther collects Common, Inherited and every other script.
enum class Script : std::uint8_t {
  kLatin = 0,
  kCyrillic,
  kArabic,
  kDevanagari,
  kHan,
  kHiragana,
  kKatakana,
  kHangul,
  kGreek,
  kHebrew,
  kThai,
  kBengali,
  kTamil,
  kTelugu,
  kGujarati,
  kGurmukhi,
  kKannada,
  kMalayalam,
  kGeorgian,
  kArmenian,
  kEthiopic,
  kKhmer,
  kLao,
  kMyanmar,
  kSinhala,
  kOriya,
  kOther,
};

inline constexpr std::size_t kNumScripts = 27;
static_assert(static_cast<std::size_t>(Script::kOther) + 1 == kNumScripts);

using ScriptId = std::uint8_t;

Script script_of_char(char32_t cp);
inline ScriptId script_id(char32_t cp) {
  return static_cast<ScriptId>(script_of_char(cp));
}
std::string_view script_name(Script script);

}  // namespace cmx

#endif  // CMX_UNICODE_H_
