#include <fstream>

#include "binary_io.h"
#include "cmx/error.h"
#include "cmx/model.h"

namespace cmx {

namespace {

constexpr char kMagic[5] = "CMXM";
constexpr std::uint8_t kVersion = 1;
constexpr std::uint8_t kFlagLexicon = 0x01;

void write_config(std::ostream& out, const ModelConfig& config) {
  io::write<std::uint32_t>(out, static_cast<std::uint32_t>(config.registry.size()));
  for (const auto& code : config.registry.codes()) io::write_string(out, code);

  const auto& groups = config.layout.groups();
  io::write<std::uint32_t>(out, static_cast<std::uint32_t>(groups.size()));
  for (const auto& group : groups) {
    io::write<std::uint8_t>(out, static_cast<std::uint8_t>(group.kind));
    io::write<std::uint8_t>(out, static_cast<std::uint8_t>(group.ngram_order));
    io::write<std::uint32_t>(out, group.vocab_size);
    io::write<std::uint32_t>(out, group.embedding_dim);
    io::write<std::uint8_t>(out, static_cast<std::uint8_t>(group.positions.size()));
    for (auto position : group.positions) {
      io::write<std::int8_t>(out, static_cast<std::int8_t>(position));
    }
  }
  io::write<std::uint32_t>(out, static_cast<std::uint32_t>(config.hidden_size));
  io::write<float>(out, config.lexicon_dropout_p);
  io::write<std::uint8_t>(out, config.include_lexicon() ? kFlagLexicon : 0);
}

ModelConfig read_config(std::istream& in) {
  ModelConfig config;
  const auto num_languages = io::read<std::uint32_t>(in, "language count");
  if (num_languages == 0 || num_languages > 100000) throw DataError("corrupt language count");
  std::vector<std::string> codes;
  for (std::uint32_t i = 0; i < num_languages; ++i) {
    codes.push_back(io::read_string(in, "language code", 64));
  }
  config.registry = LanguageRegistry(std::move(codes));

  const auto num_groups = io::read<std::uint32_t>(in, "group count");
  if (num_groups == 0 || num_groups > 256) throw DataError("corrupt group count");
  std::vector<FeatureGroup> groups;
  for (std::uint32_t g = 0; g < num_groups; ++g) {
    FeatureGroup group;
    const auto kind = io::read<std::uint8_t>(in, "group kind");
    if (kind < 1 || kind > 5) throw DataError("corrupt feature kind");
    group.kind = static_cast<FeatureKind>(kind);
    group.ngram_order = io::read<std::uint8_t>(in, "n-gram order");
    group.vocab_size = io::read<std::uint32_t>(in, "vocabulary size");
    group.embedding_dim = io::read<std::uint32_t>(in, "embedding size");
    if (group.vocab_size > (1u << 26) || group.embedding_dim > 4096) {
      throw DataError("corrupt feature group dimensions");
    }
    const auto num_positions = io::read<std::uint8_t>(in, "position count");
    for (std::uint8_t p = 0; p < num_positions; ++p) {
      const auto position = io::read<std::int8_t>(in, "window position");
      if (position < -1 || position > 1) throw DataError("corrupt window position");
      group.positions.push_back(static_cast<WindowPosition>(position));
    }
    groups.push_back(std::move(group));
  }
  try {
    config.layout = FeatureLayout(std::move(groups));
  } catch (const std::invalid_argument& e) {
    throw DataError(std::string("corrupt feature layout: ") + e.what());
  }
  config.hidden_size = io::read<std::uint32_t>(in, "hidden size");
  if (config.hidden_size == 0 || config.hidden_size > 65536) {
    throw DataError("corrupt hidden size");
  }
  config.lexicon_dropout_p = io::read<float>(in, "dropout rate");
  const auto flags = io::read<std::uint8_t>(in, "flags");
  if (((flags & kFlagLexicon) != 0) != config.include_lexicon()) {
    throw DataError("lexicon flag disagrees with the feature layout");
  }
  try {
    config.validate();
  } catch (const std::invalid_argument& e) {
    throw DataError(std::string("corrupt model config: ") + e.what());
  }
  return config;
}

}  // namespace

void Model::save(std::ostream& out) const {
  out.write(kMagic, 4);
  io::write<std::uint8_t>(out, kVersion);
  write_config(out, config_);
  for (const auto& tensor : params_.tensors()) {
    io::write<std::uint64_t>(out, tensor.size());
    io::write_floats(out, tensor);
  }
  if (!out) throw DataError("failed writing model");
}

void Model::save(const std::filesystem::path& path) const {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw DataError("cannot write " + path.string());
  save(out);
}

Model Model::read(std::istream& in) {
  io::expect_magic(in, kMagic, "model");
  const auto version = io::read<std::uint8_t>(in, "model version");
  if (version != kVersion) {
    throw DataError("unsupported model version " + std::to_string(version));
  }
  ModelConfig config = read_config(in);
  auto params = Parameters<float>::zeros(config);
  for (auto tensor : params.tensors()) {
    const auto count = io::read<std::uint64_t>(in, "tensor size");
    if (count != tensor.size()) throw DataError("tensor size does not match the config");
    io::read_floats(in, tensor, "tensor data");
  }
  if (in.peek() != std::char_traits<char>::eof()) {
    throw DataError("trailing bytes after model tensors");
  }
  return Model(std::move(config), std::move(params));
}

Model Model::load(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw DataError("cannot open model " + path.string());
  return read(in);
}

}  // namespace cmx
