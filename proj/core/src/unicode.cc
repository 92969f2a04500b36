#include "cmx/unicode.h"

#include <unicode/uchar.h>
#include <unicode/uscript.h>

namespace cmx {

namespace {

constexpr char32_t kReplacement = 0xFFFD;

}  // namespace

char32_t utf8_next(std::string_view text, std::size_t& pos) {
  const auto byte = [&](std::size_t i) {
    return static_cast<unsigned char>(text[i]);
  };
  const unsigned char lead = byte(pos);
  if (lead < 0x80) {
    ++pos;
    return lead;
  }
  std::size_t len = 0;
  char32_t cp = 0;
  char32_t min = 0;
  if ((lead & 0xE0) == 0xC0) {
    len = 2;
    cp = lead & 0x1F;
    min = 0x80;
  } else if ((lead & 0xF0) == 0xE0) {
    len = 3;
    cp = lead & 0x0F;
    min = 0x800;
  } else if ((lead & 0xF8) == 0xF0) {
    len = 4;
    cp = lead & 0x07;
    min = 0x10000;
  } else {
    ++pos;
    return kReplacement;
  }
  if (pos + len > text.size()) {
    ++pos;
    return kReplacement;
  }
  for (std::size_t i = 1; i < len; ++i) {
    const unsigned char c = byte(pos + i);
    if ((c & 0xC0) != 0x80) {
      ++pos;
      return kReplacement;
    }
    cp = (cp << 6) | (c & 0x3F);
  }
  if (cp < min || cp > 0x10FFFF || (cp >= 0xD800 && cp <= 0xDFFF)) {
    ++pos;
    return kReplacement;
  }
  pos += len;
  return cp;
}

std::u32string utf8_decode(std::string_view text) {
  std::u32string out;
  out.reserve(text.size());
  std::size_t pos = 0;
  while (pos < text.size()) out.push_back(utf8_next(text, pos));
  return out;
}

void utf8_append(std::string& out, char32_t cp) {
  if (cp < 0x80) {
    out.push_back(static_cast<char>(cp));
  } else if (cp < 0x800) {
    out.push_back(static_cast<char>(0xC0 | (cp >> 6)));
    out.push_back(static_cast<char>(0x80 | (cp & 0x3F)));
  } else if (cp < 0x10000) {
    out.push_back(static_cast<char>(0xE0 | (cp >> 12)));
    out.push_back(static_cast<char>(0x80 | ((cp >> 6) & 0x3F)));
    out.push_back(static_cast<char>(0x80 | (cp & 0x3F)));
  } else {
    out.push_back(static_cast<char>(0xF0 | (cp >> 18)));
    out.push_back(static_cast<char>(0x80 | ((cp >> 12) & 0x3F)));
    out.push_back(static_cast<char>(0x80 | ((cp >> 6) & 0x3F)));
    out.push_back(static_cast<char>(0x80 | (cp & 0x3F)));
  }
}

std::string utf8_encode(std::u32string_view text) {
  std::string out;
  out.reserve(text.size());
  for (char32_t cp : text) utf8_append(out, cp);
  return out;
}

bool is_whitespace(char32_t cp) {
  return u_isUWhiteSpace(static_cast<UChar32>(cp));
}

bool is_punct_or_symbol(char32_t cp) {
  const auto mask = U_GET_GC_MASK(static_cast<UChar32>(cp));
  return (mask & (U_GC_P_MASK | U_GC_S_MASK)) != 0;
}

char32_t fold_case(char32_t cp) {
  if (cp < 0x80) return (cp >= 'A' && cp <= 'Z') ? cp + 32 : cp;
  return static_cast<char32_t>(u_foldCase(static_cast<UChar32>(cp), U_FOLD_CASE_DEFAULT));
}

Script script_of_char(char32_t cp) {
  if (cp < 0x80) {
    const bool letter = (cp >= 'a' && cp <= 'z') || (cp >= 'A' && cp <= 'Z');
    return letter ? Script::kLatin : Script::kOther;
  }
  UErrorCode status = U_ZERO_ERROR;
  const UScriptCode code = uscript_getScript(static_cast<UChar32>(cp), &status);
  if (U_FAILURE(status)) return Script::kOther;
  switch (code) {
    case USCRIPT_LATIN: return Script::kLatin;
    case USCRIPT_CYRILLIC: return Script::kCyrillic;
    case USCRIPT_ARABIC: return Script::kArabic;
    case USCRIPT_DEVANAGARI: return Script::kDevanagari;
    case USCRIPT_HAN: return Script::kHan;
    case USCRIPT_HIRAGANA: return Script::kHiragana;
    case USCRIPT_KATAKANA: return Script::kKatakana;
    case USCRIPT_HANGUL: return Script::kHangul;
    case USCRIPT_GREEK: return Script::kGreek;
    case USCRIPT_HEBREW: return Script::kHebrew;
    case USCRIPT_THAI: return Script::kThai;
    case USCRIPT_BENGALI: return Script::kBengali;
    case USCRIPT_TAMIL: return Script::kTamil;
    case USCRIPT_TELUGU: return Script::kTelugu;
    case USCRIPT_GUJARATI: return Script::kGujarati;
    case USCRIPT_GURMUKHI: return Script::kGurmukhi;
    case USCRIPT_KANNADA: return Script::kKannada;
    case USCRIPT_MALAYALAM: return Script::kMalayalam;
    case USCRIPT_GEORGIAN: return Script::kGeorgian;
    case USCRIPT_ARMENIAN: return Script::kArmenian;
    case USCRIPT_ETHIOPIC: return Script::kEthiopic;
    case USCRIPT_KHMER: return Script::kKhmer;
    case USCRIPT_LAO: return Script::kLao;
    case USCRIPT_MYANMAR: return Script::kMyanmar;
    case USCRIPT_SINHALA: return Script::kSinhala;
    case USCRIPT_ORIYA: return Script::kOriya;
    default: return Script::kOther;
  }
}

std::string_view script_name(Script script) {
  static constexpr std::array<std::string_view, kNumScripts> kNames = {
      "Latin",   "Cyrillic",  "Arabic",   "Devanagari", "Han",
      "Hiragana", "Katakana", "Hangul",   "Greek",      "Hebrew",
      "Thai",    "Bengali",   "Tamil",    "Telugu",     "Gujarati",
      "Gurmukhi", "Kannada",  "Malayalam", "Georgian",  "Armenian",
      "Ethiopic", "Khmer",    "Lao",      "Myanmar",    "Sinhala",
      "Oriya",   "Other"};
  return kNames[static_cast<std::size_t>(script)];
}

}  // namespace cmx
