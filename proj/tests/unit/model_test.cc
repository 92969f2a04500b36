#include "cmx/model.h"

#include <gtest/gtest.h>

#include <cmath>
#include <cstring>
#include <filesystem>
#include <random>
#include <sstream>

#include "cmx/error.h"
#include "oracles.h"

namespace cmx {
namespace {

ModelConfig toy_config(std::uint32_t vocab = 2, std::uint32_t dim = 1, std::size_t hidden = 1) {
  ModelConfig c;
  c.registry = LanguageRegistry({"en", "es"});
  c.layout = FeatureLayout({{FeatureKind::kCharNgram, 1, vocab, dim, {WindowPosition::kCurrent}}});
  c.hidden_size = hidden;
  return c;
}

TEST(ParamCount, StandardConfigs) {
  const auto registry = LanguageRegistry::default_registry();
  EXPECT_EQ(param_count(ModelConfig::standard(registry, true)), 311036u);
  EXPECT_EQ(param_count(ModelConfig::standard(registry, false)), 269372u);
}

TEST(ParamCount, MatchesAllocatedParameters) {
  const auto c = ModelConfig::standard(LanguageRegistry({"en", "es", "hi"}), true);
  EXPECT_EQ(Parameters<float>::zeros(c).size(), param_count(c));
}

TEST(ParamCount, ToyByHand) {
  auto c = toy_config(10, 2, 4);
  EXPECT_EQ(param_count(c), 10u * 2 + 2 * 4 + 4 + 4 * 2 + 2);
  // A second window position shares the matrix but widens h0.
  c.layout = FeatureLayout({{FeatureKind::kCharNgram, 1, 10, 2,
                             {WindowPosition::kCurrent, WindowPosition::kNext}}});
  EXPECT_EQ(param_count(c), 10u * 2 + 4 * 4 + 4 + 4 * 2 + 2);
}

TEST(Forward, ZeroParametersGiveUniform) {
  const auto c = ModelConfig::standard(LanguageRegistry({"en", "es", "hi", "fr"}), false);
  const Model m(c, Parameters<float>::zeros(c));
  FeatureSet fs;
  fs.slots.resize(c.layout.slots().size());
  fs.slots[0] = {{3, 1.0}};
  for (float lp : m.score(fs).log_probs) EXPECT_FLOAT_EQ(lp, std::log(0.25f));
}

TEST(Forward, HandComputedExample) {
  const auto c = toy_config();
  auto p = Parameters<double>::zeros(c);
  p.embeddings[0].data = {1.0, 2.0};
  p.hidden_weights.data = {2.0};
  p.hidden_bias = {-0.5};
  p.output_weights.data = {1.0, -1.0};
  p.output_bias = {0.0, 0.5};
  FeatureSet fs{{{{0, 0.5}, {1, 0.25}}}};
  ForwardState<double> st;
  forward(c, p, fs, st);
  EXPECT_DOUBLE_EQ(st.embedding[0], 1.0);
  EXPECT_DOUBLE_EQ(st.hidden[0], 1.5);
  EXPECT_NEAR(st.log_probs[0], -0.07888973429254942, 1e-15);
  EXPECT_NEAR(st.log_probs[1], -2.5788897342925496, 1e-15);

  // Inactive ReLU: only the output bias remains.
  p.hidden_bias = {-2.5};
  forward(c, p, fs, st);
  EXPECT_EQ(st.hidden[0], 0.0);
  EXPECT_NEAR(st.log_probs[0], -0.9740769841801067, 1e-15);
  EXPECT_NEAR(st.log_probs[1], -0.4740769841801067, 1e-15);
}

TEST(Forward, EmbeddingLayerIsLinearInWeights) {
  const auto c = toy_config(5, 3, 4);
  const auto p = Parameters<double>::random(c, 1, 0.5);
  ForwardState<double> a, b, ab;
  forward(c, p, FeatureSet{{{{1, 0.3}}}}, a);
  forward(c, p, FeatureSet{{{{4, 0.7}}}}, b);
  forward(c, p, FeatureSet{{{{1, 0.3}, {4, 0.7}}}}, ab);
  for (std::size_t i = 0; i < 3; ++i) {
    EXPECT_NEAR(ab.embedding[i], a.embedding[i] + b.embedding[i], 1e-15);
  }
}

TEST(Forward, EmptySlotsContributeZero) {
  const auto c = toy_config(5, 3, 4);
  const auto p = Parameters<double>::random(c, 2);
  ForwardState<double> st;
  forward(c, p, FeatureSet{{{}}}, st);
  for (double v : st.embedding) EXPECT_EQ(v, 0.0);
}

TEST(Forward, ProbabilitiesNormalize) {
  const auto c = ModelConfig::standard(LanguageRegistry::default_registry(), true);
  const Model m(c, Parameters<float>::random(c, 3));
  FeatureSet fs;
  fs.slots.resize(c.layout.slots().size());
  fs.slots[1] = {{7, 0.5}, {900, 0.5}};
  double total = 0.0;
  for (float lp : m.score(fs).log_probs) total += std::exp(static_cast<double>(lp));
  EXPECT_NEAR(total, 1.0, 1e-5);
}

TEST(Forward, OutOfRangeIndexIsDataError) {
  const auto c = toy_config();
  const Model m(c, Parameters<float>::zeros(c));
  EXPECT_THROW(m.score(FeatureSet{{{{2, 1.0}}}}), DataError);
}

TEST(Gradients, OutputBiasIsSoftmaxMinusOneHot) {
  const auto c = toy_config(4, 2, 3);
  const auto p = Parameters<double>::random(c, 4, 0.5);
  const FeatureSet fs{{{{0, 0.5}, {2, 0.5}}}};
  ForwardState<double> st;
  forward(c, p, fs, st);
  const auto g = gradients(c, p, fs, 1);
  EXPECT_NEAR(g.output_bias[0], std::exp(st.log_probs[0]), 1e-12);
  EXPECT_NEAR(g.output_bias[1], std::exp(st.log_probs[1]) - 1.0, 1e-12);
}

TEST(Gradients, UnusedEmbeddingRowsHaveZeroGradient) {
  const auto c = toy_config(4, 2, 3);
  const auto p = Parameters<double>::random(c, 5, 0.5);
  const auto g = gradients(c, p, FeatureSet{{{{1, 1.0}}}}, 0);
  for (std::size_t r : {0u, 2u, 3u}) {
    for (double v : g.embeddings[0].row(r)) EXPECT_EQ(v, 0.0);
  }
}

TEST(Gradients, AccumulateScalesAndAdds) {
  const auto c = toy_config(4, 2, 3);
  const auto p = Parameters<double>::random(c, 6, 0.5);
  const FeatureSet fs{{{{1, 1.0}}}};
  const auto g = gradients(c, p, fs, 0);
  auto acc = Parameters<double>::zeros(c);
  ForwardState<double> st;
  accumulate_gradients(c, p, fs, 0, st, acc, 0.25);
  accumulate_gradients(c, p, fs, 0, st, acc, 0.25);
  const auto gt = g.tensors();
  const auto at = acc.tensors();
  for (std::size_t t = 0; t < gt.size(); ++t) {
    for (std::size_t i = 0; i < gt[t].size(); ++i) EXPECT_NEAR(at[t][i], 0.5 * gt[t][i], 1e-15);
  }
}

TEST(Gradients, MatchCentralDifferences) {
  std::mt19937_64 rng(17);
  for (int trial = 0; trial < 25; ++trial) {
    const auto r = testing::check_gradients_random(rng);
    EXPECT_LT(r.max_relative_error, 1e-4) << "trial " << trial << " " << r.worst;
  }
}

TEST(Gradients, FloatAgreesWithDouble) {
  const auto c = toy_config(6, 3, 5);
  const auto pd = Parameters<double>::random(c, 8, 0.5);
  const auto pf = pd.cast<float>();
  const FeatureSet fs{{{{1, 0.4}, {5, 0.6}}}};
  const auto gd = gradients(c, pd, fs, 1);
  const auto gf = gradients(c, pf, fs, 1);
  const auto td = gd.tensors();
  const auto tf = gf.tensors();
  for (std::size_t t = 0; t < td.size(); ++t) {
    for (std::size_t i = 0; i < td[t].size(); ++i) EXPECT_NEAR(tf[t][i], td[t][i], 1e-5);
  }
}

Model small_random_model() {
  auto c = ModelConfig::standard(LanguageRegistry({"en", "es", "hi-Latn"}), true);
  c.hidden_size = 8;
  return Model(c, Parameters<float>::random(c, 9));
}

TEST(ModelIo, RoundTripIsBitIdentical) {
  const auto m = small_random_model();
  std::stringstream buf;
  m.save(buf);
  const auto back = Model::read(buf);
  EXPECT_EQ(back.config().registry, m.config().registry);
  EXPECT_EQ(back.config().layout, m.config().layout);
  EXPECT_EQ(back.config().hidden_size, 8u);
  const auto a = m.parameters().tensors();
  const auto b = back.parameters().tensors();
  ASSERT_EQ(a.size(), b.size());
  for (std::size_t t = 0; t < a.size(); ++t) {
    ASSERT_EQ(a[t].size(), b[t].size());
    EXPECT_EQ(std::memcmp(a[t].data(), b[t].data(), a[t].size_bytes()), 0);
  }
}

TEST(ModelIo, FileRoundTrip) {
  const auto m = small_random_model();
  const auto path = std::filesystem::temp_directory_path() / "cmx_model_test.cmxm";
  m.save(path);
  const auto back = Model::load(path);
  std::filesystem::remove(path);
  EXPECT_EQ(param_count(back.config()), param_count(m.config()));
}

TEST(ModelIo, CorruptInputIsRejected) {
  const auto m = small_random_model();
  std::stringstream buf;
  m.save(buf);
  const std::string bytes = buf.str();
  std::istringstream bad_magic("CMXX" + bytes.substr(4));
  EXPECT_THROW(Model::read(bad_magic), DataError);
  std::string bad_version = bytes;
  bad_version[4] = 9;
  std::istringstream v(bad_version);
  EXPECT_THROW(Model::read(v), DataError);
  std::istringstream truncated(bytes.substr(0, bytes.size() / 2));
  EXPECT_THROW(Model::read(truncated), DataError);
  std::istringstream trailing(bytes + "!");
  EXPECT_THROW(Model::read(trailing), DataError);
  EXPECT_THROW(Model::load("/nonexistent/model.cmxm"), DataError);
}

}  // namespace
}  // namespace cmx
