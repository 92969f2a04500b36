#ifndef CMX_TRAINER_H_
#define CMX_TRAINER_H_

#include <cstdint>
#include <functional>
#include <optional>
#include <random>
#include <span>
#include <vector>

#include "cmx/corpus.h"
#include "cmx/features.h"
#include "cmx/model.h"

namespace cmx {

inline constexpr std::uint64_t kDefaultSeed = 20181031;

struct TrainOptions {
  std::size_t batch_size = 256;
  double momentum = 0.9;
  double initial_lr = 0.05;
  // lr(t) = initial_lr * lr_decay^(t / lr_decay_steps)
  double lr_decay = 0.9;
  std::size_t lr_decay_steps = 10000;
  std::size_t epochs = 5;
  std::uint64_t seed = kDefaultSeed;
  double init_scale = 0.1;
  // First step whose post-update parameters enter the running average.
  // Trainer treats unset as 0; train() uses the end of the first epoch.
  std::optional<std::size_t> average_start_step;
};

struct TrainingInstance {
  FeatureSet features;
  LanguageId gold = 0;
};

struct TrainStats {
  std::size_t steps = 0;
  std::size_t instances = 0;
  std::size_t lexicon_dropped = 0;
  std::size_t averaged_steps = 0;
};

// Mini-batch momentum SGD over the token classifier with selective lexicon
// dropout and iterate averaging. Deterministic for a fixed seed.
class Trainer {
 public:
  Trainer(ModelConfig config, TrainOptions options);

  // One update on a mini-batch (mean cross-entropy). Returns the batch's
  // mean loss before the update. Throws TrainingError on non-finite loss.
  double step(std::span<const TrainingInstance> batch);

  double learning_rate() const;
  const Parameters<float>& current() const { return params_; }
  // Mean of the post-update iterates since average_start_step, or the
  // current parameters when nothing has been averaged yet.
  Parameters<float> averaged() const;
  const TrainStats& stats() const { return stats_; }
  const ModelConfig& config() const { return config_; }
  TrainOptions& options() { return options_; }

 private:
  ModelConfig config_;
  TrainOptions options_;
  Parameters<float> params_;
  Parameters<float> velocity_;
  Parameters<float> grads_;
  std::vector<std::vector<double>> average_sum_;
  ForwardState<float> state_;
  std::mt19937_64 rng_;
  TrainStats stats_;
};

struct EpochReport {
  std::size_t epoch = 0;  // 1-based
  double mean_loss = 0.0;
  const Model* averaged = nullptr;
};

using EpochCallback = std::function<void(const EpochReport&)>;

// Every token of every sentence is one instance; instances are shuffled per
// epoch. Returns the averaged parameters.
Model train(const ModelConfig& config, const std::vector<LabeledSentence>& data,
            const Lexicon* lexicon, const TrainOptions& options,
            const EpochCallback& on_epoch = {}, TrainStats* stats = nullptr);

}  // namespace cmx

#endif  // CMX_TRAINER_H_
