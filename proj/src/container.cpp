// Copyright 2026 The lrpsva Authors
// SPDX-License-Identifier: Apache-2.0

#include <bit>
#include <cmath>
#include <cstring>
#include <fstream>
#include <iterator>
#include <map>
#include <sstream>

#include "lrpsva/error.hpp"
#include "lrpsva/weights.hpp"

namespace lrpsva {
namespace {

constexpr char kMagic[4] = {'L', 'R', 'P', 'W'};

std::string dims_string(const std::vector<std::uint32_t>& dims) {
  std::string s = "[";
  for (std::size_t i = 0; i < dims.size(); ++i) {
    if (i) s += ", ";
    s += std::to_string(dims[i]);
  }
  return s + "]";
}

class Reader {
 public:
  explicit Reader(std::vector<unsigned char> bytes) : bytes_(std::move(bytes)) {}

  std::size_t offset() const { return pos_; }
  bool at_end() const { return pos_ == bytes_.size(); }

  void need(std::size_t n, const std::string& what) const {
    if (bytes_.size() - pos_ < n) {
      throw FormatError("container: truncated " + what + " at offset " + std::to_string(pos_) +
                        " (need " + std::to_string(n) + " bytes, have " +
                        std::to_string(bytes_.size() - pos_) + ")");
    }
  }

  std::uint64_t uint(std::size_t width, const std::string& what) {
    need(width, what);
    std::uint64_t v = 0;
    for (std::size_t i = 0; i < width; ++i) v |= std::uint64_t{bytes_[pos_ + i]} << (8 * i);
    pos_ += width;
    return v;
  }

  std::string text(std::size_t n, const std::string& what) {
    need(n, what);
    std::string s(reinterpret_cast<const char*>(bytes_.data() + pos_), n);
    pos_ += n;
    return s;
  }

  float f32() {
    auto bits = static_cast<std::uint32_t>(uint(4, "payload"));
    return std::bit_cast<float>(bits);
  }

 private:
  std::vector<unsigned char> bytes_;
  std::size_t pos_ = 0;
};

class Writer {
 public:
  void uint(std::uint64_t v, std::size_t width) {
    for (std::size_t i = 0; i < width; ++i) bytes_.push_back(static_cast<char>((v >> (8 * i)) & 0xff));
  }
  void text(std::string_view s) { bytes_.append(s); }
  void f32(double v) { uint(std::bit_cast<std::uint32_t>(static_cast<float>(v)), 4); }
  const std::string& bytes() const { return bytes_; }

 private:
  std::string bytes_;
};

struct TensorSpec {
  std::vector<std::uint32_t> dims;
  bool found = false;
};

// Expected shape of every required tensor, by name.
std::map<std::string, TensorSpec> required_tensors(const ModelConfig& c) {
  const std::uint32_t h4 = 4 * c.hidden_size;
  std::map<std::string, TensorSpec> specs;
  specs["embedding"] = {{c.vocab_size, c.embed_size}};
  for (std::uint32_t l = 0; l < c.num_layers; ++l) {
    const std::string p = "layer" + std::to_string(l);
    specs[p + ".wx"] = {{h4, l == 0 ? c.embed_size : c.hidden_size}};
    specs[p + ".wh"] = {{h4, c.hidden_size}};
    specs[p + ".b"] = {{h4}};
  }
  specs["decoder.w"] = {{c.vocab_size, c.hidden_size}};
  specs["decoder.b"] = {{c.vocab_size}};
  return specs;
}

void write_tensor(Writer& w, const std::string& name, const double* data,
                  const std::vector<std::uint32_t>& dims) {
  w.uint(name.size(), 2);
  w.text(name);
  w.uint(dims.size(), 1);
  std::size_t n = 1;
  for (auto d : dims) {
    w.uint(d, 4);
    n *= d;
  }
  for (std::size_t i = 0; i < n; ++i) w.f32(data[i]);
}

void check_shape(const std::string& name, Eigen::Index rows, Eigen::Index cols, Eigen::Index want_rows,
                 Eigen::Index want_cols) {
  if (rows != want_rows || cols != want_cols) {
    std::ostringstream msg;
    msg << "tensor '" << name << "': expected " << want_rows << "x" << want_cols << ", got " << rows
        << "x" << cols;
    throw DimensionError(msg.str());
  }
}

template <class M>
void check_finite(const std::string& name, const M& m) {
  for (Eigen::Index i = 0; i < m.size(); ++i) {
    if (!std::isfinite(m.data()[i])) {
      throw NumericError("tensor '" + name + "': non-finite entry at flat index " + std::to_string(i));
    }
  }
}

}  // namespace

const char* gate_name(Gate gate) {
  switch (gate) {
    case Gate::Input: return "input";
    case Gate::Forget: return "forget";
    case Gate::Candidate: return "candidate";
    case Gate::Output: return "output";
  }
  return "?";
}

void WeightContainer::validate(const ModelConfig& c) const {
  if (c.num_layers == 0 || c.hidden_size == 0 || c.embed_size == 0 || c.vocab_size == 0) {
    throw DimensionError("model config: all sizes must be positive");
  }
  const Eigen::Index v = c.vocab_size, d = c.embed_size, h = c.hidden_size;
  check_shape("embedding", embedding.rows(), embedding.cols(), v, d);
  check_finite("embedding", embedding);
  if (layers.size() != c.num_layers) {
    throw DimensionError("expected " + std::to_string(c.num_layers) + " layers, got " +
                         std::to_string(layers.size()));
  }
  for (std::size_t l = 0; l < layers.size(); ++l) {
    const std::string p = "layer" + std::to_string(l);
    const auto& lw = layers[l];
    check_shape(p + ".wx", lw.input_weights.rows(), lw.input_weights.cols(), 4 * h, l == 0 ? d : h);
    check_shape(p + ".wh", lw.recurrent_weights.rows(), lw.recurrent_weights.cols(), 4 * h, h);
    check_shape(p + ".b", lw.bias.rows(), 1, 4 * h, 1);
    check_finite(p + ".wx", lw.input_weights);
    check_finite(p + ".wh", lw.recurrent_weights);
    check_finite(p + ".b", lw.bias);
  }
  check_shape("decoder.w", decoder_weights.rows(), decoder_weights.cols(), v, h);
  check_shape("decoder.b", decoder_bias.rows(), 1, v, 1);
  check_finite("decoder.w", decoder_weights);
  check_finite("decoder.b", decoder_bias);
}

ContainerContents read_container(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) {
    throw FormatError("container: cannot open " + path.string());
  }
  Reader r(std::vector<unsigned char>(std::istreambuf_iterator<char>(in), {}));

  if (r.text(4, "magic") != std::string_view(kMagic, 4)) {
    throw FormatError("container: bad magic at offset 0 (expected \"LRPW\")");
  }
  const auto version = r.uint(4, "version");
  if (version != kContainerVersion) {
    throw FormatError("container: unsupported format version " + std::to_string(version) +
                      " at offset 4");
  }
  ContainerContents out;
  auto& c = out.config;
  c.num_layers = static_cast<std::uint32_t>(r.uint(4, "header"));
  c.hidden_size = static_cast<std::uint32_t>(r.uint(4, "header"));
  c.embed_size = static_cast<std::uint32_t>(r.uint(4, "header"));
  c.vocab_size = static_cast<std::uint32_t>(r.uint(4, "header"));
  if (c.num_layers == 0 || c.hidden_size == 0 || c.embed_size == 0 || c.vocab_size == 0) {
    throw FormatError("container: header at offset 8 has a zero size");
  }

  auto specs = required_tensors(c);
  auto& w = out.weights;
  w.layers.resize(c.num_layers);

  while (!r.at_end()) {
    const std::size_t record_offset = r.offset();
    const auto name_len = r.uint(2, "tensor name length");
    const std::string name = r.text(name_len, "tensor name");
    const std::string where = "tensor '" + name + "' at offset " + std::to_string(record_offset);

    auto spec = specs.find(name);
    if (spec == specs.end()) {
      throw FormatError("container: unexpected " + where);
    }
    if (spec->second.found) {
      throw FormatError("container: duplicate " + where);
    }
    spec->second.found = true;

    const auto rank = r.uint(1, where + " rank");
    std::vector<std::uint32_t> dims(rank);
    for (auto& d : dims) d = static_cast<std::uint32_t>(r.uint(4, where + " dims"));
    if (dims != spec->second.dims) {
      throw DimensionError("container: " + where + ": expected dims " + dims_string(spec->second.dims) +
                           ", got " + dims_string(dims));
    }

    std::size_t count = 1;
    for (auto d : dims) count *= d;
    const std::size_t payload_offset = r.offset();
    r.need(4 * count, where + " payload");
    std::vector<double> values(count);
    for (std::size_t i = 0; i < count; ++i) {
      values[i] = r.f32();
      if (!std::isfinite(values[i])) {
        throw NumericError("container: " + where + ": non-finite entry at index " + std::to_string(i) +
                           " (offset " + std::to_string(payload_offset + 4 * i) + ")");
      }
    }

    auto as_matrix = [&](Matrix& m) {
      m = Eigen::Map<const Matrix>(values.data(), dims[0], dims[1]);
    };
    auto as_vector = [&](Vector& v) { v = Eigen::Map<const Vector>(values.data(), dims[0]); };

    if (name == "embedding") {
      as_matrix(w.embedding);
    } else if (name == "decoder.w") {
      as_matrix(w.decoder_weights);
    } else if (name == "decoder.b") {
      as_vector(w.decoder_bias);
    } else {
      // layer{l}.{wx,wh,b}
      const auto dot = name.find('.');
      const auto l = std::stoul(name.substr(5, dot - 5));
      const auto field = name.substr(dot + 1);
      auto& lw = w.layers[l];
      if (field == "wx") as_matrix(lw.input_weights);
      else if (field == "wh") as_matrix(lw.recurrent_weights);
      else as_vector(lw.bias);
    }
  }

  for (const auto& [name, spec] : specs) {
    if (!spec.found) {
      throw FormatError("container: missing tensor '" + name + "'");
    }
  }
  return out;
}

void write_container(const std::filesystem::path& path, const ModelConfig& config,
                     const WeightContainer& weights) {
  weights.validate(config);
  Writer w;
  w.text(std::string_view(kMagic, 4));
  w.uint(kContainerVersion, 4);
  w.uint(config.num_layers, 4);
  w.uint(config.hidden_size, 4);
  w.uint(config.embed_size, 4);
  w.uint(config.vocab_size, 4);

  auto dims2 = [](const Matrix& m) {
    return std::vector<std::uint32_t>{static_cast<std::uint32_t>(m.rows()),
                                      static_cast<std::uint32_t>(m.cols())};
  };
  auto dims1 = [](const Vector& v) { return std::vector<std::uint32_t>{static_cast<std::uint32_t>(v.size())}; };

  write_tensor(w, "embedding", weights.embedding.data(), dims2(weights.embedding));
  for (std::size_t l = 0; l < weights.layers.size(); ++l) {
    const std::string p = "layer" + std::to_string(l);
    const auto& lw = weights.layers[l];
    write_tensor(w, p + ".wx", lw.input_weights.data(), dims2(lw.input_weights));
    write_tensor(w, p + ".wh", lw.recurrent_weights.data(), dims2(lw.recurrent_weights));
    write_tensor(w, p + ".b", lw.bias.data(), dims1(lw.bias));
  }
  write_tensor(w, "decoder.w", weights.decoder_weights.data(), dims2(weights.decoder_weights));
  write_tensor(w, "decoder.b", weights.decoder_bias.data(), dims1(weights.decoder_bias));

  std::ofstream out(path, std::ios::binary);
  if (!out) {
    throw FormatError("container: cannot write " + path.string());
  }
  out.write(w.bytes().data(), static_cast<std::streamsize>(w.bytes().size()));
}

LanguageModel load_container(const std::filesystem::path& weights_path,
                             const std::filesystem::path& vocab_path) {
  auto contents = read_container(weights_path);
  contents.weights.validate(contents.config);
  auto vocab = Vocabulary::load(vocab_path);
  if (vocab.size() != contents.config.vocab_size) {
    throw DimensionError("vocabulary " + vocab_path.string() + " has " + std::to_string(vocab.size()) +
                         " tokens but the container header says " +
                         std::to_string(contents.config.vocab_size));
  }
  return LanguageModel{contents.config, std::move(contents.weights), std::move(vocab)};
}

}  // namespace lrpsva
