#include "ftdetect/model_io.hpp"

#include <bit>
#include <cstring>

#include "ftdetect/digest.hpp"
#include "ftdetect/error.hpp"
#include "ftdetect/io.hpp"

namespace ftdetect {

namespace {

constexpr std::string_view kMagic = "FTDMODEL";
constexpr std::size_t kTrailerSize = 32;

class Writer {
 public:
  void bytes(std::string_view b) { out_.append(b); }
  void u8(std::uint8_t v) { out_.push_back(static_cast<char>(v)); }
  void u32(std::uint32_t v) {
    for (int i = 0; i < 4; ++i) out_.push_back(static_cast<char>((v >> (8 * i)) & 0xFF));
  }
  void u64(std::uint64_t v) {
    for (int i = 0; i < 8; ++i) out_.push_back(static_cast<char>((v >> (8 * i)) & 0xFF));
  }
  void f64(double v) { u64(std::bit_cast<std::uint64_t>(v)); }
  void text(std::string_view s) {
    u64(s.size());
    bytes(s);
  }
  std::string take() { return std::move(out_); }

 private:
  std::string out_;
};

class Reader {
 public:
  explicit Reader(std::string_view in) : in_(in) {}

  std::string_view bytes(std::size_t n) {
    if (n > in_.size() - pos_) throw ModelError("model artifact is truncated");
    const auto view = in_.substr(pos_, n);
    pos_ += n;
    return view;
  }
  std::uint8_t u8() { return static_cast<std::uint8_t>(bytes(1)[0]); }
  std::uint32_t u32() {
    const auto b = bytes(4);
    std::uint32_t v = 0;
    for (int i = 0; i < 4; ++i) {
      v |= static_cast<std::uint32_t>(static_cast<unsigned char>(b[i])) << (8 * i);
    }
    return v;
  }
  std::uint64_t u64() {
    const auto b = bytes(8);
    std::uint64_t v = 0;
    for (int i = 0; i < 8; ++i) {
      v |= static_cast<std::uint64_t>(static_cast<unsigned char>(b[i])) << (8 * i);
    }
    return v;
  }
  double f64() { return std::bit_cast<double>(u64()); }
  std::string text() {
    const auto n = u64();
    return std::string(bytes(n));
  }
  /// Element count that must fit in the remaining bytes at `unit` bytes each.
  std::size_t count(std::size_t unit) {
    const auto n = u64();
    if (unit != 0 && n > (in_.size() - pos_) / unit) {
      throw ModelError("model artifact declares more data than it holds");
    }
    return static_cast<std::size_t>(n);
  }
  bool done() const { return pos_ == in_.size(); }
  std::size_t remaining() const { return in_.size() - pos_; }

 private:
  std::string_view in_;
  std::size_t pos_ = 0;
};

}  // namespace

std::string serialize_model(const ModelArtifact& model) {
  const auto& params = model.params;
  const auto& arch = params.architecture;
  const auto& cfg = model.train_config;
  Writer w;
  w.bytes(kMagic);
  w.u32(kModelFormatVersion);

  w.u64(arch.input_dim);
  w.u64(arch.hidden.size());
  for (const auto width : arch.hidden) w.u64(width);
  w.u64(arch.output_dim);
  w.f64(arch.dropout_rate);
  w.u8(static_cast<std::uint8_t>(arch.hidden_activation));

  w.f64(cfg.learning_rate);
  w.u64(cfg.epochs);
  w.u64(cfg.batch_size);
  w.u64(cfg.seed);
  w.f64(cfg.adam_beta1);
  w.f64(cfg.adam_beta2);
  w.f64(cfg.adam_epsilon);

  w.u64(params.labels.size());
  for (const auto& name : params.labels.classes()) w.text(name);
  w.text(params.vocab_digest);
  w.text(serialize_vocabulary(model.vocabulary));

  for (const auto& layer : params.layers) {
    w.u64(layer.fan_in);
    w.u64(layer.fan_out);
    for (const double v : layer.weights) w.f64(v);
    for (const double v : layer.bias) w.f64(v);
  }

  std::string out = w.take();
  const Sha256 checksum = sha256(out);
  out.append(reinterpret_cast<const char*>(checksum.data()), checksum.size());
  return out;
}

ModelArtifact parse_model(std::string_view bytes) {
  if (bytes.size() < kMagic.size() + 4 + kTrailerSize ||
      bytes.substr(0, kMagic.size()) != kMagic) {
    throw ModelError("not a model artifact");
  }
  const std::string_view body = bytes.substr(0, bytes.size() - kTrailerSize);
  const Sha256 expected = sha256(body);
  if (std::memcmp(expected.data(), bytes.data() + body.size(), kTrailerSize) != 0) {
    throw ModelError("model artifact checksum mismatch");
  }

  Reader r(body);
  r.bytes(kMagic.size());
  const auto version = r.u32();
  if (version != kModelFormatVersion) {
    throw ModelError("unsupported model format version " + std::to_string(version));
  }

  ModelArtifact model;
  auto& params = model.params;
  auto& arch = params.architecture;
  arch.input_dim = r.u64();
  arch.hidden.resize(r.count(8));
  for (auto& width : arch.hidden) width = r.u64();
  arch.output_dim = r.u64();
  arch.dropout_rate = r.f64();
  const auto activation = r.u8();
  if (activation > static_cast<std::uint8_t>(Activation::kTanh)) {
    throw ModelError("unknown activation code");
  }
  arch.hidden_activation = static_cast<Activation>(activation);

  auto& cfg = model.train_config;
  cfg.learning_rate = r.f64();
  cfg.epochs = r.u64();
  cfg.batch_size = r.u64();
  cfg.seed = r.u64();
  cfg.adam_beta1 = r.f64();
  cfg.adam_beta2 = r.f64();
  cfg.adam_epsilon = r.f64();

  std::vector<std::string> classes(r.count(8));
  for (auto& name : classes) name = r.text();
  params.labels = LabelMap(classes);
  if (params.labels.classes() != classes) {
    throw ModelError("model label map is not sorted and unique");
  }
  params.vocab_digest = r.text();
  try {
    model.vocabulary = parse_vocabulary(r.text());
  } catch (const DataError& e) {
    throw ModelError(std::string("embedded vocabulary: ") + e.what());
  }
  if (vocabulary_digest(model.vocabulary) != params.vocab_digest) {
    throw ModelError("embedded vocabulary does not match its digest");
  }

  try {
    arch.validate();
  } catch (const UsageError& e) {
    throw ModelError(std::string("model architecture: ") + e.what());
  }
  for (std::size_t k = 0; k < arch.num_layers(); ++k) {
    Layer layer;
    layer.fan_in = r.u64();
    layer.fan_out = r.u64();
    const std::size_t expected_in = k == 0 ? arch.input_dim : arch.hidden[k - 1];
    const std::size_t expected_out = k < arch.hidden.size() ? arch.hidden[k] : arch.output_dim;
    if (layer.fan_in != expected_in || layer.fan_out != expected_out) {
      throw ModelError("layer " + std::to_string(k) + " shape disagrees with the architecture");
    }
    if (layer.fan_in > r.remaining() / 8 / layer.fan_out ||
        (layer.fan_in * layer.fan_out + layer.fan_out) > r.remaining() / 8) {
      throw ModelError("model artifact is truncated");
    }
    layer.weights.resize(layer.fan_in * layer.fan_out);
    for (auto& v : layer.weights) v = r.f64();
    layer.bias.resize(layer.fan_out);
    for (auto& v : layer.bias) v = r.f64();
    params.layers.push_back(std::move(layer));
  }
  if (!r.done()) throw ModelError("trailing bytes in model artifact");
  params.validate();
  if (model.vocabulary.dimension() != arch.input_dim) {
    throw ModelError("vocabulary dimension does not match the model input");
  }
  return model;
}

void save_model(const std::filesystem::path& path, const ModelArtifact& model) {
  try {
    write_file(path, serialize_model(model));
  } catch (const DataError& e) {
    throw ModelError(e.what());
  }
}

ModelArtifact load_model(const std::filesystem::path& path) {
  std::string bytes;
  try {
    bytes = read_file(path);
  } catch (const DataError& e) {
    throw ModelError(e.what());
  }
  return parse_model(bytes);
}

}  // namespace ftdetect
