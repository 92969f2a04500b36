#include "cmx/trainer.h"

#include <algorithm>
#include <cmath>

#include "cmx/error.h"

namespace cmx {

Trainer::Trainer(ModelConfig config, TrainOptions options)
    : config_(std::move(config)), options_(options), rng_(options.seed) {
  config_.validate();
  if (options_.batch_size == 0) throw std::invalid_argument("batch size must be positive");
  if (options_.lr_decay_steps == 0) throw std::invalid_argument("decay steps must be positive");
  params_ = Parameters<float>::random(config_, options_.seed, options_.init_scale);
  velocity_ = Parameters<float>::zeros(config_);
  grads_ = Parameters<float>::zeros(config_);
  for (const auto& tensor : std::as_const(params_).tensors()) {
    average_sum_.emplace_back(tensor.size(), 0.0);
  }
}

double Trainer::learning_rate() const {
  const double t = static_cast<double>(stats_.steps) /
                   static_cast<double>(options_.lr_decay_steps);
  return options_.initial_lr * std::pow(options_.lr_decay, t);
}

double Trainer::step(std::span<const TrainingInstance> batch) {
  if (batch.empty()) return 0.0;
  for (auto tensor : grads_.tensors()) std::fill(tensor.begin(), tensor.end(), 0.0f);

  std::bernoulli_distribution drop(config_.lexicon_dropout_p);
  const bool has_lexicon = config_.include_lexicon();
  const float scale = 1.0f / static_cast<float>(batch.size());
  double loss_sum = 0.0;
  FeatureSet dropped;
  for (const auto& instance : batch) {
    const FeatureSet* features = &instance.features;
    if (has_lexicon && drop(rng_)) {
      dropped = instance.features;
      dropped.clear_lexicon(config_.layout);
      features = &dropped;
      ++stats_.lexicon_dropped;
    }
    const float loss = accumulate_gradients(config_, params_, *features, instance.gold,
                                            state_, grads_, scale);
    if (!std::isfinite(loss)) {
      throw TrainingError("non-finite loss at step " + std::to_string(stats_.steps));
    }
    loss_sum += loss;
  }

  const float lr = static_cast<float>(learning_rate());
  const float mu = static_cast<float>(options_.momentum);
  auto params = params_.tensors();
  auto velocity = velocity_.tensors();
  const auto grads = std::as_const(grads_).tensors();
  for (std::size_t t = 0; t < params.size(); ++t) {
    float* __restrict p = params[t].data();
    float* __restrict v = velocity[t].data();
    const float* __restrict g = grads[t].data();
    const std::size_t n = params[t].size();
    for (std::size_t i = 0; i < n; ++i) {
      v[i] = mu * v[i] - lr * g[i];
      p[i] += v[i];
    }
  }

  const std::size_t average_start = options_.average_start_step.value_or(0);
  if (stats_.steps >= average_start) {
    for (std::size_t t = 0; t < params.size(); ++t) {
      auto& sum = average_sum_[t];
      for (std::size_t i = 0; i < sum.size(); ++i) sum[i] += params[t][i];
    }
    ++stats_.averaged_steps;
  }
  ++stats_.steps;
  stats_.instances += batch.size();
  return loss_sum / static_cast<double>(batch.size());
}

Parameters<float> Trainer::averaged() const {
  if (stats_.averaged_steps == 0) return params_;
  Parameters<float> out = Parameters<float>::zeros(config_);
  auto tensors = out.tensors();
  const double n = static_cast<double>(stats_.averaged_steps);
  for (std::size_t t = 0; t < tensors.size(); ++t) {
    for (std::size_t i = 0; i < tensors[t].size(); ++i) {
      tensors[t][i] = static_cast<float>(average_sum_[t][i] / n);
    }
  }
  return out;
}

Model train(const ModelConfig& config, const std::vector<LabeledSentence>& data,
            const Lexicon* lexicon, const TrainOptions& options,
            const EpochCallback& on_epoch, TrainStats* stats) {
  struct Ref {
    std::uint32_t sentence;
    std::uint32_t position;
  };
  std::vector<Ref> refs;
  for (std::size_t s = 0; s < data.size(); ++s) {
    const auto& item = data[s];
    if (item.labels.size() != item.sentence.size()) {
      throw DataError("sentence " + std::to_string(s) + " has mismatched labels");
    }
    for (std::size_t i = 0; i < item.sentence.size(); ++i) {
      if (item.labels[i] >= config.num_languages()) {
        throw DataError("gold label outside the registry in sentence " + std::to_string(s));
      }
      refs.push_back({static_cast<std::uint32_t>(s), static_cast<std::uint32_t>(i)});
    }
  }
  if (refs.empty()) throw DataError("no training instances");

  TrainOptions effective = options;
  const std::size_t steps_per_epoch =
      (refs.size() + options.batch_size - 1) / options.batch_size;
  if (!effective.average_start_step) {
    effective.average_start_step = options.epochs > 1 ? steps_per_epoch : 0;
  }

  const FeatureExtractor extractor(config.layout, lexicon);
  Trainer trainer(config, effective);
  std::mt19937_64 shuffle_rng(options.seed ^ 0x9e3779b97f4a7c15ULL);
  std::vector<TrainingInstance> batch;
  for (std::size_t epoch = 1; epoch <= options.epochs; ++epoch) {
    std::shuffle(refs.begin(), refs.end(), shuffle_rng);
    double loss_sum = 0.0;
    std::size_t batches = 0;
    for (std::size_t begin = 0; begin < refs.size(); begin += options.batch_size) {
      const std::size_t end = std::min(refs.size(), begin + options.batch_size);
      batch.resize(end - begin);
      for (std::size_t k = begin; k < end; ++k) {
        const auto& item = data[refs[k].sentence];
        batch[k - begin].features = extractor.extract(item.sentence, refs[k].position);
        batch[k - begin].gold = item.labels[refs[k].position];
      }
      loss_sum += trainer.step(batch);
      ++batches;
    }
    if (on_epoch) {
      const Model snapshot(config, trainer.averaged());
      on_epoch({epoch, loss_sum / static_cast<double>(batches), &snapshot});
    }
  }
  if (stats) *stats = trainer.stats();
  return Model(config, trainer.averaged());
}

}  // namespace cmx
