#include "cmx/language.h"

#include <cctype>
#include <fstream>

#include "cmx/error.h"

namespace cmx {

namespace {

// Mirrors data/languages.txt.
constexpr const char* kDefaultCodes[] = {
    "en", "es", "hi", "hi-Latn", "id", "fr", "de", "pt", "it", "nl", "ar",
    "ar-Latn", "ru", "uk", "bg", "sr", "mk", "be", "kk", "ky", "mn", "tg",
    "zh", "ja", "ko", "th", "vi", "tr", "pl", "cs", "sk", "sl", "hr", "bs",
    "hu", "ro", "el", "he", "yi", "fa", "ur", "ps", "ku", "bn", "ta", "te",
    "gu", "pa", "kn", "ml", "mr", "ne", "si", "or", "ka", "hy", "am", "km",
    "lo", "my", "sv", "da", "no", "is", "fi", "et", "lv", "lt", "eu", "ca",
    "gl", "cy", "ga", "gd", "mt", "sq", "az", "uz", "sw", "zu", "xh", "af",
    "so", "ha", "yo", "ig", "ms", "tl", "jv", "su", "mg", "eo", "la", "lb",
    "fy", "co", "haw", "sm", "mi", "ht",
};

std::string trim(std::string_view s) {
  std::size_t b = 0;
  std::size_t e = s.size();
  while (b < e && std::isspace(static_cast<unsigned char>(s[b]))) ++b;
  while (e > b && std::isspace(static_cast<unsigned char>(s[e - 1]))) --e;
  return std::string(s.substr(b, e - b));
}

}  // namespace

bool is_valid_language_code(std::string_view code) {
  const auto dash = code.find('-');
  const std::string_view base = code.substr(0, dash);
  if (base.empty() || base.size() > 8) return false;
  for (char c : base) {
    if (c < 'a' || c > 'z') return false;
  }
  if (dash == std::string_view::npos) return true;
  const std::string_view qualifier = code.substr(dash + 1);
  if (qualifier.empty() || qualifier.size() > 8) return false;
  for (char c : qualifier) {
    if (!std::isalnum(static_cast<unsigned char>(c))) return false;
  }
  return true;
}

LanguageRegistry::LanguageRegistry(std::vector<std::string> codes)
    : codes_(std::move(codes)) {
  index_.reserve(codes_.size());
  for (std::size_t i = 0; i < codes_.size(); ++i) {
    if (!is_valid_language_code(codes_[i])) {
      throw DataError("invalid language code '" + codes_[i] + "'");
    }
    if (!index_.emplace(codes_[i], static_cast<LanguageId>(i)).second) {
      throw DataError("duplicate language code '" + codes_[i] + "'");
    }
  }
}

LanguageRegistry LanguageRegistry::default_registry() {
  return LanguageRegistry(
      std::vector<std::string>(std::begin(kDefaultCodes), std::end(kDefaultCodes)));
}

LanguageRegistry LanguageRegistry::read(std::istream& in) {
  std::vector<std::string> codes;
  std::string line;
  while (std::getline(in, line)) {
    const auto hash = line.find('#');
    if (hash != std::string::npos) line.resize(hash);
    std::string code = trim(line);
    if (!code.empty()) codes.push_back(std::move(code));
  }
  if (codes.empty()) throw DataError("language registry is empty");
  return LanguageRegistry(std::move(codes));
}

LanguageRegistry LanguageRegistry::load(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw DataError("cannot open language registry " + path.string());
  return read(in);
}

std::optional<LanguageId> LanguageRegistry::find(std::string_view code) const {
  const auto it = index_.find(std::string(code));
  if (it == index_.end()) return std::nullopt;
  return it->second;
}

LanguageId LanguageRegistry::id(std::string_view code) const {
  if (auto found = find(code)) return *found;
  throw DataError("unknown language code '" + std::string(code) + "'");
}

}  // namespace cmx
