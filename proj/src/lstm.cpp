// Copyright 2026 The lrpsva Authors
// SPDX-License-Identifier: Apache-2.0

#include "lrpsva/lstm.hpp"

#include <cmath>
#include <stdexcept>
#include <string>

#include "lrpsva/error.hpp"

namespace lrpsva {
namespace {

double sigmoid(double v) { return 1.0 / (1.0 + std::exp(-v)); }

void require_finite(const Vector& v, const char* what) {
  if (!v.allFinite()) {
    throw NumericError(std::string("lstm step: non-finite value in ") + what);
  }
}

}  // namespace

GateRecord lstm_cell_step(const LayerWeights& layer, const Vector& x, const Vector& h_prev,
                          const Vector& c_prev) {
  const Eigen::Index h = layer.hidden_size();
  if (x.size() != layer.input_size() || h_prev.size() != h || c_prev.size() != h ||
      layer.input_weights.rows() != 4 * h || layer.bias.size() != 4 * h) {
    throw DimensionError("lstm step: input " + std::to_string(x.size()) + ", state " +
                         std::to_string(h_prev.size()) + "/" + std::to_string(c_prev.size()) +
                         " do not fit layer with input " + std::to_string(layer.input_size()) +
                         " and hidden " + std::to_string(h));
  }

  GateRecord r;
  r.input = x;
  r.hidden_prev = h_prev;
  r.cell_prev = c_prev;
  r.preactivation = layer.input_weights * x + layer.recurrent_weights * h_prev + layer.bias;

  for (Gate gate : {Gate::Input, Gate::Forget, Gate::Candidate, Gate::Output}) {
    const Vector z = r.preactivation.segment(static_cast<int>(gate) * h, h);
    if (!z.allFinite()) {
      throw NumericError(std::string("lstm step: non-finite ") + gate_name(gate) +
                         " gate pre-activation");
    }
  }

  r.input_gate = r.preactivation.segment(0 * h, h).unaryExpr(&sigmoid);
  r.forget_gate = r.preactivation.segment(1 * h, h).unaryExpr(&sigmoid);
  r.candidate = r.preactivation.segment(2 * h, h).array().tanh().matrix();
  r.output_gate = r.preactivation.segment(3 * h, h).unaryExpr(&sigmoid);

  // Written out elementwise so the LRP cell split sees exactly these sums.
  r.cell.resize(h);
  r.hidden.resize(h);
  for (Eigen::Index k = 0; k < h; ++k) {
    r.cell[k] = r.forget_gate[k] * c_prev[k] + r.input_gate[k] * r.candidate[k];
    r.hidden[k] = r.output_gate[k] * std::tanh(r.cell[k]);
  }
  require_finite(r.cell, "cell state");
  require_finite(r.hidden, "hidden state");
  return r;
}

ForwardTrace forward(const WeightContainer& weights, std::span<const TokenId> ids) {
  if (ids.empty()) {
    throw std::invalid_argument("forward: empty token sequence");
  }
  if (weights.layers.empty()) {
    throw DimensionError("forward: model has no layers");
  }
  ForwardTrace trace;
  trace.ids.assign(ids.begin(), ids.end());
  const auto num_layers = weights.layers.size();
  trace.steps.assign(num_layers, {});
  for (std::size_t l = 0; l < num_layers; ++l) {
    const auto h = weights.layers[l].hidden_size();
    trace.initial_hidden.push_back(Vector::Zero(h));
    trace.initial_cell.push_back(Vector::Zero(h));
    trace.steps[l].reserve(ids.size());
  }

  for (std::size_t t = 0; t < ids.size(); ++t) {
    const TokenId id = ids[t];
    if (id < 0 || id >= weights.embedding.rows()) {
      throw std::out_of_range("forward: token id " + std::to_string(id) + " outside embedding table");
    }
    Vector x = weights.embedding.row(id).transpose();
    for (std::size_t l = 0; l < num_layers; ++l) {
      const Vector& h_prev = t == 0 ? trace.initial_hidden[l] : trace.steps[l][t - 1].hidden;
      const Vector& c_prev = t == 0 ? trace.initial_cell[l] : trace.steps[l][t - 1].cell;
      trace.steps[l].push_back(lstm_cell_step(weights.layers[l], x, h_prev, c_prev));
      x = trace.steps[l].back().hidden;
    }
  }
  trace.logits = weights.decoder_weights * trace.top_hidden() + weights.decoder_bias;
  return trace;
}

double score_pair(const Vector& logits, TokenId correct, TokenId incorrect) {
  const auto v = logits.size();
  if (correct < 0 || correct >= v || incorrect < 0 || incorrect >= v) {
    throw std::out_of_range("score_pair: id outside logits of size " + std::to_string(v));
  }
  if (correct == incorrect) {
    throw std::invalid_argument("score_pair: ids must differ");
  }
  return logits[correct] - logits[incorrect];
}

}  // namespace lrpsva
