#ifndef CMX_CORPUS_H_
#define CMX_CORPUS_H_

#include <functional>
#include <istream>
#include <ostream>
#include <string>
#include <vector>

#include "cmx/language.h"
#include "cmx/tokenizer.h"

namespace cmx {

using WarningSink = std::function<void(const std::string&)>;

// A sentence with one gold language per token.
struct LabeledSentence {
  Sentence sentence;
  std::vector<LanguageId> labels;
};

// Annotated format: one "token<TAB>lang" line per token, a blank line
// between sentences. Throws DataError (with the line number) on malformed
// lines or unknown language codes.
std::vector<LabeledSentence> read_annotated(std::istream& in,
                                            const LanguageRegistry& registry);
void write_annotated(std::ostream& out, const LabeledSentence& sentence,
                     const LanguageRegistry& registry);

// Monolingual TSV: "lang<TAB>text". Calls `fn(language, text)` for each
// usable line; lines with unknown languages or without a tab are reported
// through `warn` and skipped. Empty lines are skipped silently.
void for_each_monolingual_line(
    std::istream& in, const LanguageRegistry& registry,
    const std::function<void(LanguageId, std::string_view)>& fn,
    const WarningSink& warn = {});

// Every monolingual line as a sentence whose tokens all carry the line's
// language.
std::vector<LabeledSentence> read_monolingual(std::istream& in,
                                              const LanguageRegistry& registry,
                                              const WarningSink& warn = {});

}  // namespace cmx

#endif  // CMX_CORPUS_H_
