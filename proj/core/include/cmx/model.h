#ifndef CMX_MODEL_H_
#define CMX_MODEL_H_

#include <cstdint>
#include <filesystem>
#include <istream>
#include <ostream>
#include <span>
#include <vector>

#include "cmx/features.h"
#include "cmx/language.h"

namespace cmx {

struct ModelConfig {
  LanguageRegistry registry;
  FeatureLayout layout;
  std::size_t hidden_size = 256;
  // Probability of zeroing every lexicon slot of a training instance.
  float lexicon_dropout_p = 0.5f;

  // Full model (include_lexicon) or the small variant without lexicon groups.
  static ModelConfig standard(LanguageRegistry registry, bool include_lexicon);

  std::size_t num_languages() const { return registry.size(); }
  bool include_lexicon() const { return layout.has_lexicon(); }
  // Throws std::invalid_argument when the config is unusable.
  void validate() const;
};

// Σ_g V_g·D_g + |h0|·H + H + H·L + L, embeddings counted once per group.
std::size_t param_count(const ModelConfig& config);

template <typename T>
struct Matrix {
  std::size_t rows = 0;
  std::size_t cols = 0;
  std::vector<T> data;

  Matrix() = default;
  Matrix(std::size_t r, std::size_t c) : rows(r), cols(c), data(r * c, T{}) {}

  std::span<T> row(std::size_t r) { return {data.data() + r * cols, cols}; }
  std::span<const T> row(std::size_t r) const { return {data.data() + r * cols, cols}; }
};

template <typename T>
struct Parameters {
  std::vector<Matrix<T>> embeddings;  // one per feature group, V x D
  Matrix<T> hidden_weights;           // |h0| x H
  std::vector<T> hidden_bias;         // H
  Matrix<T> output_weights;           // H x L
  std::vector<T> output_bias;         // L

  static Parameters zeros(const ModelConfig& config);
  // Weights uniform in [-scale, scale], biases zero.
  static Parameters random(const ModelConfig& config, std::uint64_t seed,
                           double scale = 0.1);

  // Every tensor as a flat span, in serialization order.
  std::vector<std::span<T>> tensors();
  std::vector<std::span<const T>> tensors() const;
  std::size_t size() const;

  template <typename U>
  Parameters<U> cast() const {
    Parameters<U> out;
    const auto convert = [](const Matrix<T>& m) {
      Matrix<U> r(m.rows, m.cols);
      for (std::size_t i = 0; i < m.data.size(); ++i) r.data[i] = static_cast<U>(m.data[i]);
      return r;
    };
    for (const auto& e : embeddings) out.embeddings.push_back(convert(e));
    out.hidden_weights = convert(hidden_weights);
    out.output_weights = convert(output_weights);
    out.hidden_bias.assign(hidden_bias.begin(), hidden_bias.end());
    out.output_bias.assign(output_bias.begin(), output_bias.end());
    return out;
  }
};

// Log-probabilities over the registry, in id order.
struct TokenScores {
  std::vector<float> log_probs;
};

// Activations of one forward pass; reused across calls to avoid allocation.
template <typename T>
struct ForwardState {
  std::vector<T> embedding;   // h0
  std::vector<T> hidden_pre;  // h0·W1 + b1
  std::vector<T> hidden;      // ReLU
  std::vector<T> log_probs;
  std::vector<T> scratch;
};

// h0 = concat over slots of Σ_entries weight·E_g[index]; h1 = ReLU(h0 W1 + b1);
// log_softmax(h1 W2 + b2). Throws DataError for an index outside its group.
template <typename T>
void forward(const ModelConfig& config, const Parameters<T>& params,
             const FeatureSet& features, ForwardState<T>& state);

// Adds scale·∂loss/∂θ into `grads` where loss = -log p(gold). Returns the loss.
template <typename T>
T accumulate_gradients(const ModelConfig& config, const Parameters<T>& params,
                       const FeatureSet& features, LanguageId gold,
                       ForwardState<T>& state, Parameters<T>& grads, T scale = T{1});

template <typename T>
Parameters<T> gradients(const ModelConfig& config, const Parameters<T>& params,
                        const FeatureSet& features, LanguageId gold);

template <typename T>
T cross_entropy(const ModelConfig& config, const Parameters<T>& params,
                const FeatureSet& features, LanguageId gold);

// Inference-side model: float parameters plus their config.
class Model {
 public:
  Model() = default;
  Model(ModelConfig config, Parameters<float> params);

  const ModelConfig& config() const { return config_; }
  const Parameters<float>& parameters() const { return params_; }

  TokenScores score(const FeatureSet& features) const;
  void score(const FeatureSet& features, ForwardState<float>& state,
             TokenScores& out) const;

  // "CMXM" container: version, config block, then f32 tensors.
  void save(std::ostream& out) const;
  void save(const std::filesystem::path& path) const;
  static Model read(std::istream& in);
  static Model load(const std::filesystem::path& path);

 private:
  ModelConfig config_;
  Parameters<float> params_;
};

}  // namespace cmx

#endif  // CMX_MODEL_H_
