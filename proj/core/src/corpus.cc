#include "cmx/corpus.h"

#include "cmx/error.h"

namespace cmx {

namespace {

void strip_cr(std::string& line) {
  if (!line.empty() && line.back() == '\r') line.pop_back();
}

}  // namespace

std::vector<LabeledSentence> read_annotated(std::istream& in,
                                            const LanguageRegistry& registry) {
  std::vector<LabeledSentence> out;
  std::vector<std::string> pieces;
  std::vector<LanguageId> labels;
  const auto flush = [&] {
    if (pieces.empty()) return;
    out.push_back({make_sentence(pieces), std::move(labels)});
    pieces.clear();
    labels.clear();
  };
  std::string line;
  std::size_t line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    strip_cr(line);
    if (line.empty()) {
      flush();
      continue;
    }
    const auto tab = line.find('\t');
    if (tab == std::string::npos || tab == 0 || tab + 1 == line.size()) {
      throw DataError("line " + std::to_string(line_no) +
                      ": expected token<TAB>lang");
    }
    const std::string_view code = std::string_view(line).substr(tab + 1);
    const auto language = registry.find(code);
    if (!language) {
      throw DataError("line " + std::to_string(line_no) + ": unknown language '" +
                      std::string(code) + "'");
    }
    pieces.push_back(line.substr(0, tab));
    labels.push_back(*language);
  }
  flush();
  return out;
}

void write_annotated(std::ostream& out, const LabeledSentence& sentence,
                     const LanguageRegistry& registry) {
  for (std::size_t i = 0; i < sentence.sentence.size(); ++i) {
    out << sentence.sentence.tokens[i].text << '\t'
        << registry.code(sentence.labels.at(i)) << '\n';
  }
  out << '\n';
}

void for_each_monolingual_line(
    std::istream& in, const LanguageRegistry& registry,
    const std::function<void(LanguageId, std::string_view)>& fn,
    const WarningSink& warn) {
  std::string line;
  std::size_t line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    strip_cr(line);
    if (line.empty()) continue;
    const auto tab = line.find('\t');
    if (tab == std::string::npos) {
      if (warn) warn("line " + std::to_string(line_no) + ": missing tab, skipped");
      continue;
    }
    const std::string_view code = std::string_view(line).substr(0, tab);
    const auto language = registry.find(code);
    if (!language) {
      if (warn) {
        warn("line " + std::to_string(line_no) + ": unknown language '" +
             std::string(code) + "', skipped");
      }
      continue;
    }
    fn(*language, std::string_view(line).substr(tab + 1));
  }
}

std::vector<LabeledSentence> read_monolingual(std::istream& in,
                                              const LanguageRegistry& registry,
                                              const WarningSink& warn) {
  std::vector<LabeledSentence> out;
  for_each_monolingual_line(
      in, registry,
      [&](LanguageId language, std::string_view text) {
        Sentence sentence = tokenize(text);
        if (sentence.empty()) return;
        std::vector<LanguageId> labels(sentence.size(), language);
        out.push_back({std::move(sentence), std::move(labels)});
      },
      warn);
  return out;
}

}  // namespace cmx
