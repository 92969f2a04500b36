#include "cmx/decoder.h"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <sstream>
#include <stdexcept>

#include "cmx/error.h"

namespace cmx {

namespace {

void check_scores(std::span<const TokenScores> scores) {
  if (scores.empty()) throw std::invalid_argument("cannot decode an empty sentence");
  const std::size_t n = scores.front().log_probs.size();
  if (n == 0) throw std::invalid_argument("token scores are empty");
  for (const auto& s : scores) {
    if (s.log_probs.size() != n) throw std::invalid_argument("ragged token scores");
  }
}

void dedupe(std::vector<LanguageSet>& sets) {
  std::vector<LanguageSet> unique;
  unique.reserve(sets.size());
  for (const auto& s : sets) {
    if (std::find(unique.begin(), unique.end(), s) == unique.end()) unique.push_back(s);
  }
  sets = std::move(unique);
}

}  // namespace

LanguageSet LanguageSet::pair(LanguageId a, LanguageId b) {
  if (a == b) return single(a);
  return {{std::min(a, b), std::max(a, b)}, 2};
}

ConstraintSet::ConstraintSet(std::vector<LanguageSet> sets) : sets_(std::move(sets)) {
  dedupe(sets_);
}

ConstraintSet ConstraintSet::singletons(std::size_t num_languages) {
  std::vector<LanguageSet> sets;
  for (std::size_t l = 0; l < num_languages; ++l) {
    sets.push_back(LanguageSet::single(static_cast<LanguageId>(l)));
  }
  return ConstraintSet(std::move(sets));
}

ConstraintSet ConstraintSet::default_for(const LanguageRegistry& registry) {
  auto sets = singletons(registry.size()).sets_;
  const LanguageId anchor = registry.find("en").value_or(0);
  for (std::size_t l = 0; l < registry.size(); ++l) {
    if (l != anchor) sets.push_back(LanguageSet::pair(anchor, static_cast<LanguageId>(l)));
  }
  return ConstraintSet(std::move(sets));
}

ConstraintSet ConstraintSet::read(std::istream& in, const LanguageRegistry& registry) {
  auto sets = singletons(registry.size()).sets_;
  std::string line;
  std::size_t line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    const auto hash = line.find('#');
    if (hash != std::string::npos) line.resize(hash);
    std::istringstream fields(line);
    std::string a, b, extra;
    if (!(fields >> a)) continue;
    if (!(fields >> b) || (fields >> extra)) {
      throw DataError("constraints line " + std::to_string(line_no) +
                      ": expected two language codes");
    }
    const auto ia = registry.find(a);
    const auto ib = registry.find(b);
    if (!ia || !ib) {
      throw DataError("constraints line " + std::to_string(line_no) +
                      ": unknown language '" + (ia ? b : a) + "'");
    }
    sets.push_back(LanguageSet::pair(*ia, *ib));
  }
  return ConstraintSet(std::move(sets));
}

ConstraintSet ConstraintSet::load(const std::filesystem::path& path,
                                  const LanguageRegistry& registry) {
  std::ifstream in(path);
  if (!in) throw DataError("cannot open constraints " + path.string());
  return read(in, registry);
}

DecodedSequence decode_greedy(std::span<const TokenScores> scores) {
  check_scores(scores);
  DecodedSequence out;
  out.labels.reserve(scores.size());
  for (const auto& token : scores) {
    const auto& lp = token.log_probs;
    // max_element returns the first maximum, i.e. the lowest id on ties.
    const auto best = std::max_element(lp.begin(), lp.end()) - lp.begin();
    out.labels.push_back(static_cast<LanguageId>(best));
    out.total_log_prob += lp[static_cast<std::size_t>(best)];
  }
  return out;
}

DecodedSequence decode_switch_penalty(std::span<const TokenScores> scores,
                                      double switch_probability) {
  if (!(switch_probability > 0.0 && switch_probability <= 1.0)) {
    throw std::invalid_argument("switch probability must be in (0, 1]");
  }
  check_scores(scores);
  const std::size_t n = scores.size();
  const std::size_t num_labels = scores.front().log_probs.size();
  const double penalty = std::log(switch_probability);

  std::vector<double> best(num_labels);
  std::vector<double> next(num_labels);
  std::vector<LanguageId> back(n * num_labels);
  for (std::size_t l = 0; l < num_labels; ++l) best[l] = scores[0].log_probs[l];

  for (std::size_t t = 1; t < n; ++t) {
    // With a uniform switch cost only the best predecessor overall matters
    // for switching; ties keep the lowest id.
    const auto top = static_cast<LanguageId>(std::max_element(best.begin(), best.end()) -
                                             best.begin());
    const double switch_score = best[top] + penalty;
    for (std::size_t l = 0; l < num_labels; ++l) {
      LanguageId from = static_cast<LanguageId>(l);
      double score = best[l];
      if (switch_score > score) {
        score = switch_score;
        from = top;
      }
      next[l] = score + scores[t].log_probs[l];
      back[t * num_labels + l] = from;
    }
    best.swap(next);
  }

  DecodedSequence out;
  auto state = static_cast<LanguageId>(std::max_element(best.begin(), best.end()) -
                                       best.begin());
  out.total_log_prob = best[state];
  out.labels.assign(n, 0);
  for (std::size_t t = n; t-- > 0;) {
    out.labels[t] = state;
    if (t > 0) state = back[t * num_labels + state];
  }
  return out;
}

DecodedSequence decode_constrained(std::span<const TokenScores> scores,
                                   const ConstraintSet& constraints) {
  if (constraints.empty()) throw std::invalid_argument("constraint set is empty");
  check_scores(scores);
  const std::size_t num_labels = scores.front().log_probs.size();

  std::size_t best_index = 0;
  double best_total = 0.0;
  bool have_best = false;
  const auto& sets = constraints.sets();
  for (std::size_t k = 0; k < sets.size(); ++k) {
    const auto& set = sets[k];
    if (set.members[0] >= num_labels || set.members[1] >= num_labels) {
      throw std::invalid_argument("constraint refers to a language outside the scores");
    }
    double total = 0.0;
    for (const auto& token : scores) {
      const double a = token.log_probs[set.members[0]];
      total += set.size == 2 ? std::max(a, static_cast<double>(token.log_probs[set.members[1]]))
                             : a;
    }
    const bool better = !have_best || total > best_total ||
                        (total == best_total && set.size < sets[best_index].size);
    if (better) {
      best_total = total;
      best_index = k;
      have_best = true;
    }
  }

  const auto& set = sets[best_index];
  DecodedSequence out;
  out.total_log_prob = best_total;
  out.chosen_set = best_index;
  out.labels.reserve(scores.size());
  for (const auto& token : scores) {
    LanguageId label = set.members[0];
    if (set.size == 2 && token.log_probs[set.members[1]] > token.log_probs[set.members[0]]) {
      label = set.members[1];
    }
    out.labels.push_back(label);
  }
  return out;
}

LanguageId sentence_language(std::span<const TokenScores> scores) {
  check_scores(scores);
  const std::size_t num_labels = scores.front().log_probs.size();
  std::vector<double> totals(num_labels, 0.0);
  for (const auto& token : scores) {
    for (std::size_t l = 0; l < num_labels; ++l) totals[l] += token.log_probs[l];
  }
  return static_cast<LanguageId>(std::max_element(totals.begin(), totals.end()) -
                                 totals.begin());
}

}  // namespace cmx
