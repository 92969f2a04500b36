#include "cmx/model.h"

#include <algorithm>
#include <cmath>
#include <random>
#include <stdexcept>

#include "cmx/error.h"

namespace cmx {

namespace {

template <typename T>
void axpy(T alpha, std::span<const T> x, std::span<T> y) {
  const std::size_t n = y.size();
  const T* __restrict xs = x.data();
  T* __restrict ys = y.data();
  for (std::size_t i = 0; i < n; ++i) ys[i] += alpha * xs[i];
}

template <typename T>
T dot(std::span<const T> x, std::span<const T> y) {
  T sum{};
  for (std::size_t i = 0; i < x.size(); ++i) sum += x[i] * y[i];
  return sum;
}

template <typename T>
void log_softmax_inplace(std::vector<T>& v) {
  const T max = *std::max_element(v.begin(), v.end());
  T sum{};
  for (T x : v) sum += std::exp(x - max);
  const T log_z = max + std::log(sum);
  for (T& x : v) x -= log_z;
}

}  // namespace

ModelConfig ModelConfig::standard(LanguageRegistry registry, bool include_lexicon) {
  ModelConfig config;
  config.layout = FeatureLayout::standard(registry.size(), include_lexicon);
  config.registry = std::move(registry);
  return config;
}

void ModelConfig::validate() const {
  if (registry.empty()) throw std::invalid_argument("model needs at least one language");
  if (hidden_size == 0) throw std::invalid_argument("hidden size must be positive");
  if (layout.slots().empty()) throw std::invalid_argument("model has no feature slots");
  if (!(lexicon_dropout_p >= 0.0f && lexicon_dropout_p <= 1.0f)) {
    throw std::invalid_argument("lexicon dropout must be in [0, 1]");
  }
  for (const auto& group : layout.groups()) {
    if (is_lexicon_kind(group.kind) && group.vocab_size != registry.size()) {
      throw std::invalid_argument("lexicon group size must equal the language count");
    }
  }
}

std::size_t param_count(const ModelConfig& config) {
  std::size_t total = 0;
  for (const auto& group : config.layout.groups()) {
    total += static_cast<std::size_t>(group.vocab_size) * group.embedding_dim;
  }
  const std::size_t h0 = config.layout.embedding_size();
  const std::size_t h = config.hidden_size;
  const std::size_t l = config.num_languages();
  return total + h0 * h + h + h * l + l;
}

template <typename T>
Parameters<T> Parameters<T>::zeros(const ModelConfig& config) {
  Parameters p;
  for (const auto& group : config.layout.groups()) {
    p.embeddings.emplace_back(group.vocab_size, group.embedding_dim);
  }
  p.hidden_weights = Matrix<T>(config.layout.embedding_size(), config.hidden_size);
  p.hidden_bias.assign(config.hidden_size, T{});
  p.output_weights = Matrix<T>(config.hidden_size, config.num_languages());
  p.output_bias.assign(config.num_languages(), T{});
  return p;
}

template <typename T>
Parameters<T> Parameters<T>::random(const ModelConfig& config, std::uint64_t seed,
                                    double scale) {
  Parameters p = zeros(config);
  std::mt19937_64 rng(seed);
  std::uniform_real_distribution<double> uniform(-scale, scale);
  const auto fill = [&](Matrix<T>& m) {
    for (T& x : m.data) x = static_cast<T>(uniform(rng));
  };
  for (auto& e : p.embeddings) fill(e);
  fill(p.hidden_weights);
  fill(p.output_weights);
  return p;
}

template <typename T>
std::vector<std::span<T>> Parameters<T>::tensors() {
  std::vector<std::span<T>> out;
  for (auto& e : embeddings) out.emplace_back(e.data);
  out.emplace_back(hidden_weights.data);
  out.emplace_back(hidden_bias);
  out.emplace_back(output_weights.data);
  out.emplace_back(output_bias);
  return out;
}

template <typename T>
std::vector<std::span<const T>> Parameters<T>::tensors() const {
  std::vector<std::span<const T>> out;
  for (const auto& e : embeddings) out.emplace_back(e.data);
  out.emplace_back(hidden_weights.data);
  out.emplace_back(hidden_bias);
  out.emplace_back(output_weights.data);
  out.emplace_back(output_bias);
  return out;
}

template <typename T>
std::size_t Parameters<T>::size() const {
  std::size_t n = 0;
  for (const auto& t : tensors()) n += t.size();
  return n;
}

template <typename T>
void forward(const ModelConfig& config, const Parameters<T>& params,
             const FeatureSet& features, ForwardState<T>& state) {
  const auto& layout = config.layout;
  const auto& slots = layout.slots();
  if (features.slots.size() != slots.size()) {
    throw std::invalid_argument("feature set does not match the model layout");
  }
  state.embedding.assign(layout.embedding_size(), T{});
  state.hidden_pre.assign(params.hidden_bias.begin(), params.hidden_bias.end());

  for (std::size_t s = 0; s < slots.size(); ++s) {
    const auto& entries = features.slots[s];
    if (entries.empty()) continue;
    const auto& slot = slots[s];
    const auto& table = params.embeddings[slot.group];
    std::span<T> block(state.embedding.data() + slot.offset, table.cols);
    for (const auto& entry : entries) {
      if (entry.index >= table.rows) {
        throw DataError("feature index " + std::to_string(entry.index) +
                        " out of range for group " + layout.groups()[slot.group].name());
      }
      axpy(static_cast<T>(entry.weight), table.row(entry.index), block);
    }
    // Slots that are empty contribute nothing to h0·W1, so only rows of
    // populated blocks are visited.
    for (std::size_t i = slot.offset; i < slot.offset + table.cols; ++i) {
      const T x = state.embedding[i];
      if (x != T{}) axpy(x, params.hidden_weights.row(i), std::span<T>(state.hidden_pre));
    }
  }

  state.hidden.resize(state.hidden_pre.size());
  for (std::size_t j = 0; j < state.hidden.size(); ++j) {
    state.hidden[j] = std::max(state.hidden_pre[j], T{});
  }
  state.log_probs.assign(params.output_bias.begin(), params.output_bias.end());
  for (std::size_t j = 0; j < state.hidden.size(); ++j) {
    const T h = state.hidden[j];
    if (h != T{}) axpy(h, params.output_weights.row(j), std::span<T>(state.log_probs));
  }
  log_softmax_inplace(state.log_probs);
}

template <typename T>
T accumulate_gradients(const ModelConfig& config, const Parameters<T>& params,
                       const FeatureSet& features, LanguageId gold,
                       ForwardState<T>& state, Parameters<T>& grads, T scale) {
  if (gold >= config.num_languages()) throw DataError("gold label outside the registry");
  forward(config, params, features, state);
  const T loss = -state.log_probs[gold];

  const std::size_t num_languages = config.num_languages();
  const std::size_t hidden = config.hidden_size;

  // d loss / d logits = softmax - one_hot(gold)
  std::vector<T>& d_logits = state.scratch;
  d_logits.resize(num_languages + hidden);
  for (std::size_t l = 0; l < num_languages; ++l) {
    d_logits[l] = std::exp(state.log_probs[l]) * scale;
  }
  d_logits[gold] -= scale;
  std::span<const T> d_out(d_logits.data(), num_languages);
  axpy(T{1}, d_out, std::span<T>(grads.output_bias));

  std::span<T> d_pre(d_logits.data() + num_languages, hidden);
  for (std::size_t j = 0; j < hidden; ++j) {
    if (state.hidden_pre[j] > T{}) {
      axpy(state.hidden[j], d_out, grads.output_weights.row(j));
      d_pre[j] = dot(params.output_weights.row(j), d_out);
    } else {
      d_pre[j] = T{};
    }
  }
  axpy(T{1}, std::span<const T>(d_pre), std::span<T>(grads.hidden_bias));

  const auto& slots = config.layout.slots();
  for (std::size_t s = 0; s < slots.size(); ++s) {
    const auto& entries = features.slots[s];
    if (entries.empty()) continue;
    const auto& slot = slots[s];
    const std::size_t dim = params.embeddings[slot.group].cols;
    T d_block[64];
    std::vector<T> d_block_heap;
    T* d_emb = d_block;
    if (dim > 64) {
      d_block_heap.resize(dim);
      d_emb = d_block_heap.data();
    }
    for (std::size_t k = 0; k < dim; ++k) {
      const std::size_t i = slot.offset + k;
      const T x = state.embedding[i];
      if (x != T{}) axpy(x, std::span<const T>(d_pre), grads.hidden_weights.row(i));
      d_emb[k] = dot(params.hidden_weights.row(i), std::span<const T>(d_pre));
    }
    auto& table_grad = grads.embeddings[slot.group];
    for (const auto& entry : entries) {
      axpy(static_cast<T>(entry.weight), std::span<const T>(d_emb, dim),
           table_grad.row(entry.index));
    }
  }
  return loss;
}

template <typename T>
Parameters<T> gradients(const ModelConfig& config, const Parameters<T>& params,
                        const FeatureSet& features, LanguageId gold) {
  Parameters<T> grads = Parameters<T>::zeros(config);
  ForwardState<T> state;
  accumulate_gradients(config, params, features, gold, state, grads, T{1});
  return grads;
}

template <typename T>
T cross_entropy(const ModelConfig& config, const Parameters<T>& params,
                const FeatureSet& features, LanguageId gold) {
  ForwardState<T> state;
  forward(config, params, features, state);
  return -state.log_probs.at(gold);
}

template struct Parameters<float>;
template struct Parameters<double>;

#define CMX_INSTANTIATE(T)                                                          \
  template void forward<T>(const ModelConfig&, const Parameters<T>&,              \
                           const FeatureSet&, ForwardState<T>&);                  \
  template T accumulate_gradients<T>(const ModelConfig&, const Parameters<T>&,    \
                                     const FeatureSet&, LanguageId,               \
                                     ForwardState<T>&, Parameters<T>&, T);        \
  template Parameters<T> gradients<T>(const ModelConfig&, const Parameters<T>&,   \
                                      const FeatureSet&, LanguageId);             \
  template T cross_entropy<T>(const ModelConfig&, const Parameters<T>&,           \
                              const FeatureSet&, LanguageId);

CMX_INSTANTIATE(float)
CMX_INSTANTIATE(double)
#undef CMX_INSTANTIATE

Model::Model(ModelConfig config, Parameters<float> params)
    : config_(std::move(config)), params_(std::move(params)) {
  config_.validate();
  const auto expected = Parameters<float>::zeros(config_);
  const auto want = expected.tensors();
  const auto have = std::as_const(params_).tensors();
  if (want.size() != have.size()) throw std::invalid_argument("parameter tensor count mismatch");
  for (std::size_t i = 0; i < want.size(); ++i) {
    if (want[i].size() != have[i].size()) {
      throw std::invalid_argument("parameter tensor shape mismatch");
    }
  }
}

TokenScores Model::score(const FeatureSet& features) const {
  ForwardState<float> state;
  TokenScores out;
  score(features, state, out);
  return out;
}

void Model::score(const FeatureSet& features, ForwardState<float>& state,
                  TokenScores& out) const {
  forward(config_, params_, features, state);
  out.log_probs.assign(state.log_probs.begin(), state.log_probs.end());
}

}  // namespace cmx
