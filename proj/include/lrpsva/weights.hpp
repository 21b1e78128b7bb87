// Copyright 2026 The lrpsva Authors
// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <cstdint>
#include <filesystem>
#include <string>
#include <vector>

#include <Eigen/Dense>

#include "lrpsva/vocabulary.hpp"

namespace lrpsva {

using Matrix = Eigen::Matrix<double, Eigen::Dynamic, Eigen::Dynamic, Eigen::RowMajor>;
using Vector = Eigen::VectorXd;

/// Gate blocks are stored in this order along the 4H axis of every layer
/// tensor: rows [k*H, (k+1)*H) belong to gate k.
enum class Gate : int { Input = 0, Forget = 1, Candidate = 2, Output = 3 };

const char* gate_name(Gate gate);

struct ModelConfig {
  std::uint32_t num_layers = 0;
  std::uint32_t hidden_size = 0;
  std::uint32_t embed_size = 0;
  std::uint32_t vocab_size = 0;

  bool operator==(const ModelConfig&) const = default;
};

struct LayerWeights {
  Matrix input_weights;      // 4H x input width
  Matrix recurrent_weights;  // 4H x H
  Vector bias;               // 4H, sum of any source biases

  Eigen::Index hidden_size() const { return recurrent_weights.cols(); }
  Eigen::Index input_size() const { return input_weights.cols(); }

  auto gate_rows(Gate gate, const Matrix& m) const {
    return m.middleRows(static_cast<int>(gate) * hidden_size(), hidden_size());
  }
  auto gate_bias(Gate gate) const {
    return bias.segment(static_cast<int>(gate) * hidden_size(), hidden_size());
  }
};

struct WeightContainer {
  Matrix embedding;  // V x d
  std::vector<LayerWeights> layers;
  Matrix decoder_weights;  // V x H
  Vector decoder_bias;     // V

  /// Throws DimensionError naming the first inconsistent tensor and
  /// NumericError naming the first tensor with a non-finite entry.
  void validate(const ModelConfig& config) const;
};

/// Immutable once built; share freely across threads.
struct LanguageModel {
  ModelConfig config;
  WeightContainer weights;
  Vocabulary vocab;
};

struct ContainerContents {
  ModelConfig config;
  WeightContainer weights;
};

inline constexpr std::uint32_t kContainerVersion = 1;

/// Reads the little-endian "LRPW" container. float32 payloads are widened to
/// double. Every error message names the tensor and byte offset involved.
ContainerContents read_container(const std::filesystem::path& path);

/// Writes `weights` in the container format, narrowing to float32.
void write_container(const std::filesystem::path& path, const ModelConfig& config,
                     const WeightContainer& weights);

/// Reads weights and vocabulary and cross-checks them.
LanguageModel load_container(const std::filesystem::path& weights_path,
                             const std::filesystem::path& vocab_path);

}  // namespace lrpsva
