#ifndef CMX_LANGUAGE_H_
#define CMX_LANGUAGE_H_

#include <cstdint>
#include <filesystem>
#include <istream>
#include <optional>
#include <string>
#include <string_view>
#include <unordered_map>
#include <vector>

namespace cmx {

// Dense index into a LanguageRegistry.
using LanguageId = std::uint32_t;

// Ordered set of language codes ("en", "hi-Latn", ...). The position of a
// code is its id; ids are stable for the lifetime of the registry and define
// the order of every per-language vector in models and lexicons.
class LanguageRegistry {
 public:
  LanguageRegistry() = default;
  // Throws DataError on duplicate or malformed codes.
  explicit LanguageRegistry(std::vector<std::string> codes);

  // The 100-language set shipped with the tool.
  static LanguageRegistry default_registry();
  // One code per line; blank lines and '#' comments are ignored.
  static LanguageRegistry read(std::istream& in);
  static LanguageRegistry load(const std::filesystem::path& path);

  std::size_t size() const { return codes_.size(); }
  bool empty() const { return codes_.empty(); }
  const std::string& code(LanguageId id) const { return codes_.at(id); }
  const std::vector<std::string>& codes() const { return codes_; }

  std::optional<LanguageId> find(std::string_view code) const;
  // Throws DataError for unknown codes.
  LanguageId id(std::string_view code) const;

  friend bool operator==(const LanguageRegistry& a, const LanguageRegistry& b) {
    return a.codes_ == b.codes_;
  }

 private:
  std::vector<std::string> codes_;
  std::unordered_map<std::string, LanguageId> index_;
};

// Lowercase ASCII letters with an optional "-Script" qualifier. The
// qualifier keeps its conventional title case ("hi-Latn").
bool is_valid_language_code(std::string_view code);

}  // namespace cmx

#endif  // CMX_LANGUAGE_H_
