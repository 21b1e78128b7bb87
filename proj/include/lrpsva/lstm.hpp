// Copyright 2026 The lrpsva Authors
// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <span>
#include <vector>

#include "lrpsva/weights.hpp"

namespace lrpsva {

/// Everything one LSTM layer computed at one timestep.
struct GateRecord {
  Vector input;          // x_t, the embedding or the layer below's h_t
  Vector hidden_prev;    // h_{t-1}
  Vector cell_prev;      // c_{t-1}
  Vector preactivation;  // 4H, gate blocks in [i|f|g|o] order
  Vector input_gate;
  Vector forget_gate;
  Vector candidate;
  Vector output_gate;
  Vector cell;
  Vector hidden;

  auto gate_preactivation(Gate gate) const {
    const auto h = cell.size();
    return preactivation.segment(static_cast<int>(gate) * h, h);
  }
};

struct ForwardTrace {
  std::vector<TokenId> ids;
  std::vector<Vector> initial_hidden;  // per layer
  std::vector<Vector> initial_cell;    // per layer
  std::vector<std::vector<GateRecord>> steps;  // [layer][t], t zero-based
  Vector logits;

  std::size_t length() const { return ids.size(); }
  std::size_t num_layers() const { return steps.size(); }
  const GateRecord& at(std::size_t layer, std::size_t t) const { return steps.at(layer).at(t); }
  const Vector& top_hidden() const { return steps.back().back().hidden; }
};

/// One standard LSTM update. Throws DimensionError on inconsistent shapes and
/// NumericError naming the gate where a non-finite value first appears.
GateRecord lstm_cell_step(const LayerWeights& layer, const Vector& x, const Vector& h_prev,
                          const Vector& c_prev);

/// Runs the stack from zero initial states and records the full trace.
/// Throws std::invalid_argument for an empty sequence and std::out_of_range
/// for an id outside the embedding table.
ForwardTrace forward(const WeightContainer& weights, std::span<const TokenId> ids);

/// y[correct] - y[incorrect]. Throws std::out_of_range on invalid ids and
/// std::invalid_argument when they coincide.
double score_pair(const Vector& logits, TokenId correct, TokenId incorrect);

/// Ties count as incorrect.
inline bool is_correct_prediction(double delta_y) { return delta_y > 0.0; }

}  // namespace lrpsva
