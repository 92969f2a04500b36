// cmx: build lexicons, generate codemixed data, train, predict, evaluate,
// benchmark and inspect token-level language identification models.
//
// Exit codes: 0 success, 1 usage, 2 data error, 3 internal error.
#include <CLI11.hpp>

#include <algorithm>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <functional>
#include <iomanip>
#include <iostream>
#include <map>
#include <optional>
#include <sstream>
#include <string>
#include <unistd.h>
#include <vector>

#include "cmx/corpus.h"
#include "cmx/datagen.h"
#include "cmx/decoder.h"
#include "cmx/error.h"
#include "cmx/eval.h"
#include "cmx/identifier.h"
#include "cmx/lexicon.h"
#include "cmx/model.h"
#include "cmx/trainer.h"

namespace fs = std::filesystem;
using namespace cmx;

namespace {

constexpr int kExitUsage = 1;
constexpr int kExitData = 2;
constexpr int kExitInternal = 3;

void warn(const std::string& message) { std::cerr << "warning: " << message << '\n'; }

std::ifstream open_input(const fs::path& path) {
  std::ifstream in(path);
  if (!in) throw DataError("cannot open " + path.string());
  return in;
}

// Writes through a temporary sibling and renames on success, so a failed
// command never leaves a partial file behind.
void write_atomically(const fs::path& path, const std::function<void(std::ostream&)>& body) {
  fs::path tmp = path;
  tmp += ".tmp." + std::to_string(::getpid());
  try {
    {
      std::ofstream out(tmp, std::ios::binary | std::ios::trunc);
      if (!out) throw DataError("cannot write " + path.string());
      body(out);
      out.flush();
      if (!out) throw DataError("write failed for " + path.string());
    }
    fs::rename(tmp, path);
  } catch (...) {
    std::error_code ignored;
    fs::remove(tmp, ignored);
    throw;
  }
}

LanguageRegistry load_registry(const std::string& path) {
  return path.empty() ? LanguageRegistry::default_registry() : LanguageRegistry::load(path);
}

const std::map<std::string, DecodeMode> kModes{{"greedy", DecodeMode::kGreedy},
                                               {"penalty", DecodeMode::kSwitchPenalty},
                                               {"constrained", DecodeMode::kConstrained},
                                               {"sentence", DecodeMode::kSentence}};

struct ModelArgs {
  std::string model;
  std::string lexicon;
  std::string constraints;
  std::string mode = "constrained";
  double switch_p = kDefaultSwitchPenalty;
};

void add_model_args(CLI::App* cmd, ModelArgs& a, bool with_mode) {
  cmd->add_option("-m,--model", a.model, "Model file")->required()->check(CLI::ExistingFile);
  cmd->add_option("-l,--lexicon", a.lexicon, "Lexicon file (required by full models)")
      ->check(CLI::ExistingFile);
  cmd->add_option("--constraints", a.constraints,
                  "Allowed language pairs, one \"code code\" per line (default: en x each)")
      ->check(CLI::ExistingFile);
  cmd->add_option("--switch-p", a.switch_p, "Switch probability for penalty decoding")
      ->check(CLI::Range(1e-9, 1.0))
      ->capture_default_str();
  if (with_mode) {
    cmd->add_option("--mode", a.mode, "greedy | penalty | constrained | sentence")
        ->check(CLI::IsMember({"greedy", "penalty", "constrained", "sentence"}))
        ->capture_default_str();
  }
}

LanguageIdentifier load_identifier(const ModelArgs& a) {
  Model model = Model::load(a.model);
  std::optional<Lexicon> lexicon;
  if (model.config().include_lexicon()) {
    if (a.lexicon.empty()) throw DataError("this model uses lexicon features; pass --lexicon");
    lexicon = Lexicon::load(a.lexicon);
    if (lexicon->num_languages() != model.config().num_languages()) {
      throw DataError("lexicon covers " + std::to_string(lexicon->num_languages()) +
                      " languages but the model has " +
                      std::to_string(model.config().num_languages()));
    }
  }
  ConstraintSet constraints;
  if (!a.constraints.empty()) constraints = ConstraintSet::load(a.constraints, model.config().registry);
  return LanguageIdentifier(std::move(model), std::move(lexicon), std::move(constraints),
                            a.switch_p);
}

// --- build-lexicon ---------------------------------------------------------

struct LexiconArgs {
  std::string corpus, out, registry;
  std::uint64_t min_count = kDefaultMinCount;
};

void run_build_lexicon(const LexiconArgs& a) {
  const auto registry = load_registry(a.registry);
  auto in = open_input(a.corpus);
  const Lexicon lexicon = build_lexicon(in, registry, a.min_count, warn);
  write_atomically(a.out, [&](std::ostream& out) { lexicon.save(out); });
  std::cerr << "lexicon: " << lexicon.tokens().size() << " tokens, "
            << lexicon.prefixes().size() << " prefixes\n";
}

// --- generate --------------------------------------------------------------

struct GenerateArgs {
  std::string corpus, pairs, out, registry;
  std::size_t count = 50000;
  std::uint64_t seed = kDefaultSeed;
};

std::vector<LanguagePair> read_pairs(const fs::path& path, const LanguageRegistry& registry) {
  auto in = open_input(path);
  std::vector<LanguagePair> pairs;
  for (const auto& set : ConstraintSet::read(in, registry).sets()) {
    if (set.size == 2) pairs.emplace_back(set.members[0], set.members[1]);
  }
  if (pairs.empty()) throw DataError("no language pairs in " + path.string());
  return pairs;
}

void run_generate(const GenerateArgs& a) {
  const auto registry = load_registry(a.registry);
  const auto pairs = read_pairs(a.pairs, registry);
  auto in = open_input(a.corpus);
  const MonolingualStore store = ingest(in, registry, warn);
  for (const auto& [x, y] : pairs) {
    for (const LanguageId side : {x, y}) {
      const auto& phrases = store.phrases(side);
      const bool usable = std::any_of(phrases.begin(), phrases.end(),
                                      [](const auto& phrase) { return phrase.size() >= 2; });
      if (!usable) {
        throw DataError("pair " + registry.code(x) + "-" + registry.code(y) + ": corpus has no " +
                        registry.code(side) + " phrase of two or more tokens");
      }
    }
  }
  const SyntheticGenerator generator(store, pairs, a.seed);
  write_atomically(a.out, [&](std::ostream& out) {
    for (std::size_t i = 0; i < a.count; ++i) {
      write_annotated(out, generator.generate(i).to_labeled(), registry);
    }
  });
  std::cerr << "generated " << a.count << " examples over " << pairs.size() << " pairs\n";
}

// --- train -----------------------------------------------------------------

struct TrainArgs {
  std::vector<std::string> train, mono;
  std::string dev, out, lexicon, registry;
  bool small = false;
  std::size_t hidden = 256;
  float dropout = 0.5f;
  TrainOptions options;
};

std::vector<LabeledSentence> read_annotated_file(const fs::path& path,
                                                 const LanguageRegistry& registry) {
  auto in = open_input(path);
  try {
    return read_annotated(in, registry);
  } catch (const DataError& e) {
    throw DataError(path.string() + ": " + e.what());
  }
}

void run_train(const TrainArgs& a) {
  const auto registry = load_registry(a.registry);
  std::vector<LabeledSentence> data;
  for (const auto& path : a.train) {
    auto part = read_annotated_file(path, registry);
    data.insert(data.end(), std::make_move_iterator(part.begin()),
                std::make_move_iterator(part.end()));
  }
  for (const auto& path : a.mono) {
    auto in = open_input(path);
    auto part = read_monolingual(in, registry, warn);
    data.insert(data.end(), std::make_move_iterator(part.begin()),
                std::make_move_iterator(part.end()));
  }
  std::vector<LabeledSentence> dev;
  if (!a.dev.empty()) dev = read_annotated_file(a.dev, registry);

  ModelConfig config = ModelConfig::standard(registry, !a.small);
  config.hidden_size = a.hidden;
  config.lexicon_dropout_p = a.dropout;
  std::optional<Lexicon> lexicon;
  if (!a.small) {
    if (a.lexicon.empty()) throw DataError("the full model needs --lexicon (or pass --small)");
    lexicon = Lexicon::load(a.lexicon);
    if (lexicon->num_languages() != registry.size()) {
      throw DataError("lexicon covers " + std::to_string(lexicon->num_languages()) +
                      " languages but the registry has " + std::to_string(registry.size()));
    }
  }
  std::size_t tokens = 0;
  for (const auto& s : data) tokens += s.sentence.size();
  std::cerr << "training on " << data.size() << " sentences / " << tokens << " tokens, "
            << param_count(config) << " parameters\n";

  const auto on_epoch = [&](const EpochReport& r) {
    std::cerr << "epoch " << r.epoch << " loss " << std::fixed << std::setprecision(4)
              << r.mean_loss;
    if (!dev.empty()) {
      const LanguageIdentifier id(*r.averaged, lexicon);
      std::cerr << " dev token accuracy "
                << evaluate(id, dev, DecodeMode::kGreedy).token_accuracy;
    }
    std::cerr << std::defaultfloat << '\n';
  };
  const Model model = train(config, data, lexicon ? &*lexicon : nullptr, a.options, on_epoch);
  write_atomically(a.out, [&](std::ostream& out) { model.save(out); });
}

// --- predict ---------------------------------------------------------------

struct PredictArgs {
  ModelArgs model;
  std::string input, output;
};

void run_predict(const PredictArgs& a) {
  const auto id = load_identifier(a.model);
  const DecodeMode mode = kModes.at(a.model.mode);
  const auto& registry = id.registry();
  std::ifstream file;
  if (!a.input.empty()) file = open_input(a.input);
  std::istream& in = a.input.empty() ? std::cin : file;

  const auto body = [&](std::ostream& out) {
    std::string line;
    while (std::getline(in, line)) {
      const auto result = id.identify(std::string_view(line), mode);
      if (mode == DecodeMode::kSentence) {
        if (!result.decoded.labels.empty()) out << registry.code(result.decoded.labels.front());
        out << '\n';
        continue;
      }
      for (std::size_t i = 0; i < result.sentence.size(); ++i) {
        out << result.sentence.tokens[i].text << '\t'
            << registry.code(result.decoded.labels[i]) << '\n';
      }
      out << '\n';
    }
  };
  if (a.output.empty()) {
    body(std::cout);
  } else {
    write_atomically(a.output, body);
  }
}

// --- evaluate --------------------------------------------------------------

struct EvaluateArgs {
  ModelArgs model;
  std::string data, json, csv;
};

void run_evaluate(const EvaluateArgs& a) {
  const auto id = load_identifier(a.model);
  const auto data = read_annotated_file(a.data, id.registry());
  const auto report = evaluate(id, data, kModes.at(a.model.mode));
  if (!a.json.empty()) {
    write_atomically(a.json, [&](std::ostream& out) { out << report.to_json() << '\n'; });
  }
  if (!a.csv.empty()) {
    write_atomically(a.csv, [&](std::ostream& out) { out << report.curve_csv(); });
  }
  std::cout << "mode: " << a.model.mode << '\n' << report.to_text();
}

// --- bench -----------------------------------------------------------------

struct BenchArgs {
  ModelArgs model;
  std::string corpus;
  std::size_t reps = 5;
};

void run_bench(const BenchArgs& a) {
  const auto id = load_identifier(a.model);
  auto in = open_input(a.corpus);
  std::vector<std::string> lines;
  for (std::string line; std::getline(in, line);) {
    // Monolingual TSV input: benchmark the text column only.
    const auto tab = line.find('\t');
    lines.push_back(tab == std::string::npos ? line : line.substr(tab + 1));
  }
  if (lines.empty()) throw DataError("benchmark corpus is empty");
  const auto r = benchmark_throughput(id, lines, a.reps, kModes.at(a.model.mode));
  std::cout << "mode: " << a.model.mode << '\n'
            << "lines: " << lines.size() << '\n'
            << "chars (non-whitespace): " << r.chars << '\n'
            << "median seconds: " << r.median_seconds << '\n'
            << "chars/sec: " << std::fixed << std::setprecision(0) << r.chars_per_second << '\n';
}

// --- inspect ---------------------------------------------------------------

struct InspectArgs {
  std::string model, registry;
  bool small = false;
};

void run_inspect(const InspectArgs& a) {
  const ModelConfig config = a.model.empty()
                                 ? ModelConfig::standard(load_registry(a.registry), !a.small)
                                 : Model::load(a.model).config();
  std::cout << "source: " << (a.model.empty() ? "default config" : a.model) << '\n'
            << "variant: " << (config.include_lexicon() ? "full" : "small") << '\n'
            << "languages: " << config.num_languages() << '\n'
            << "hidden: " << config.hidden_size << '\n'
            << "lexicon dropout: " << config.lexicon_dropout_p << '\n'
            << "embedding layer: " << config.layout.embedding_size() << " ("
            << config.layout.slots().size() << " slots)\n"
            << "groups (embeddings shared across window positions):\n";
  for (const auto& g : config.layout.groups()) {
    std::cout << "  " << std::left << std::setw(22) << g.name() << std::right << " V="
              << std::setw(5) << g.vocab_size << " D=" << std::setw(2) << g.embedding_dim
              << " positions=" << g.positions.size() << '\n';
  }
  const std::size_t n = param_count(config);
  std::cout << "parameters: " << n << " (" << std::fixed << std::setprecision(2)
            << static_cast<double>(n) / 1e6 << "M)\n";
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Token-level language identification for codemixed text"};
  app.require_subcommand(1);

  LexiconArgs lex;
  auto* cmd_lex = app.add_subcommand("build-lexicon", "Build a lexicon from a monolingual corpus");
  cmd_lex->add_option("-c,--corpus", lex.corpus, "Monolingual TSV (lang<TAB>text)")
      ->required()
      ->check(CLI::ExistingFile);
  cmd_lex->add_option("-o,--out", lex.out, "Output lexicon file")->required();
  cmd_lex->add_option("--registry", lex.registry, "Language list (default: built-in 100)")
      ->check(CLI::ExistingFile);
  cmd_lex->add_option("--min-count", lex.min_count, "Drop tokens seen fewer times")
      ->check(CLI::PositiveNumber)
      ->capture_default_str();

  GenerateArgs gen;
  auto* cmd_gen = app.add_subcommand("generate", "Generate synthetic codemixed examples");
  cmd_gen->add_option("-c,--corpus", gen.corpus, "Monolingual TSV (lang<TAB>text)")
      ->required()
      ->check(CLI::ExistingFile);
  cmd_gen->add_option("-p,--pairs", gen.pairs, "Language pairs, one \"code code\" per line")
      ->required()
      ->check(CLI::ExistingFile);
  cmd_gen->add_option("-n,--count", gen.count, "Number of examples")->capture_default_str();
  cmd_gen->add_option("-o,--out", gen.out, "Output annotated file")->required();
  cmd_gen->add_option("--seed", gen.seed)->capture_default_str();
  cmd_gen->add_option("--registry", gen.registry)->check(CLI::ExistingFile);

  TrainArgs tr;
  auto* cmd_train = app.add_subcommand("train", "Train a model");
  cmd_train->add_option("-t,--train", tr.train, "Annotated training files (concatenated)")
      ->check(CLI::ExistingFile);
  cmd_train->add_option("--mono", tr.mono, "Monolingual TSV files added as training data")
      ->check(CLI::ExistingFile);
  cmd_train->add_option("--dev", tr.dev, "Annotated dev file, scored after every epoch")
      ->check(CLI::ExistingFile);
  cmd_train->add_option("-o,--out", tr.out, "Output model file")->required();
  cmd_train->add_option("-l,--lexicon", tr.lexicon, "Lexicon file")->check(CLI::ExistingFile);
  cmd_train->add_option("--registry", tr.registry)->check(CLI::ExistingFile);
  cmd_train->add_flag("--small", tr.small, "Omit lexicon features");
  cmd_train->add_option("--hidden", tr.hidden)->check(CLI::PositiveNumber)->capture_default_str();
  cmd_train->add_option("--dropout", tr.dropout, "Lexicon dropout probability")
      ->check(CLI::Range(0.0, 1.0))
      ->capture_default_str();
  cmd_train->add_option("--epochs", tr.options.epochs)->capture_default_str();
  cmd_train->add_option("--batch-size", tr.options.batch_size)
      ->check(CLI::PositiveNumber)
      ->capture_default_str();
  cmd_train->add_option("--lr", tr.options.initial_lr)
      ->check(CLI::PositiveNumber)
      ->capture_default_str();
  cmd_train->add_option("--lr-decay", tr.options.lr_decay)
      ->check(CLI::Range(0.0, 1.0))
      ->capture_default_str();
  cmd_train->add_option("--lr-decay-steps", tr.options.lr_decay_steps)
      ->check(CLI::PositiveNumber)
      ->capture_default_str();
  cmd_train->add_option("--momentum", tr.options.momentum)
      ->check(CLI::Range(0.0, 1.0))
      ->capture_default_str();
  cmd_train->add_option("--seed", tr.options.seed)->capture_default_str();

  PredictArgs pred;
  auto* cmd_pred = app.add_subcommand("predict", "Label every token of each input line");
  add_model_args(cmd_pred, pred.model, true);
  cmd_pred->add_option("-i,--input", pred.input, "Text file, one sentence per line (default stdin)")
      ->check(CLI::ExistingFile);
  cmd_pred->add_option("-o,--output", pred.output, "Output file (default stdout)");

  EvaluateArgs ev;
  auto* cmd_eval = app.add_subcommand("evaluate", "Score a model on annotated data");
  add_model_args(cmd_eval, ev.model, true);
  cmd_eval->add_option("-d,--data", ev.data, "Annotated file")
      ->required()
      ->check(CLI::ExistingFile);
  cmd_eval->add_option("--json", ev.json, "Write the report as JSON");
  cmd_eval->add_option("--csv", ev.csv, "Write the cumulative accuracy curve as CSV");

  BenchArgs bench;
  auto* cmd_bench = app.add_subcommand("bench", "Measure single-threaded throughput");
  add_model_args(cmd_bench, bench.model, true);
  cmd_bench->add_option("-c,--corpus", bench.corpus, "Text lines (or lang<TAB>text)")
      ->required()
      ->check(CLI::ExistingFile);
  cmd_bench->add_option("--reps", bench.reps)->check(CLI::PositiveNumber)->capture_default_str();

  InspectArgs insp;
  auto* cmd_insp = app.add_subcommand("inspect", "Print configuration and parameter count");
  cmd_insp->add_option("-m,--model", insp.model, "Model file (default: the standard config)")
      ->check(CLI::ExistingFile);
  cmd_insp->add_option("--registry", insp.registry)->check(CLI::ExistingFile);
  cmd_insp->add_flag("--small", insp.small, "Inspect the small variant");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? 0 : kExitUsage;
  }
  if (cmd_train->parsed() && tr.train.empty() && tr.mono.empty()) {
    std::cerr << "train: pass at least one --train or --mono file\n";
    return kExitUsage;
  }

  try {
    if (cmd_lex->parsed()) run_build_lexicon(lex);
    if (cmd_gen->parsed()) run_generate(gen);
    if (cmd_train->parsed()) run_train(tr);
    if (cmd_pred->parsed()) run_predict(pred);
    if (cmd_eval->parsed()) run_evaluate(ev);
    if (cmd_bench->parsed()) run_bench(bench);
    if (cmd_insp->parsed()) run_inspect(insp);
  } catch (const DataError& e) {
    std::cerr << "error: " << e.what() << '\n';
    return kExitData;
  } catch (const TrainingError& e) {
    std::cerr << "training failed: " << e.what() << '\n';
    return kExitData;
  } catch (const std::exception& e) {
    std::cerr << "internal error: " << e.what() << '\n';
    return kExitInternal;
  }
  return 0;
}
