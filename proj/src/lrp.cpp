// Copyright 2026 The lrpsva Authors
// SPDX-License-Identifier: Apache-2.0

#include "lrpsva/lrp.hpp"

#include <cmath>
#include <numeric>
#include <stdexcept>

#include "lrpsva/error.hpp"

namespace lrpsva::lrp {
namespace {

void check_id(TokenId id, Eigen::Index size, const char* what) {
  if (id < 0 || id >= size) {
    throw std::out_of_range(std::string(what) + " id " + std::to_string(id) + " outside output of size " +
                            std::to_string(size));
  }
}

void check_size(Eigen::Index got, Eigen::Index want, const std::string& what) {
  if (got != want) {
    throw DimensionError(what + ": size " + std::to_string(got) + ", expected " + std::to_string(want));
  }
}

}  // namespace

RelevanceInit RelevanceInit::scaled(double alpha) const {
  RelevanceInit out = *this;
  out.positive_relevance *= alpha;
  out.negative_relevance *= alpha;
  out.delta_y *= alpha;
  return out;
}

RelevanceInit init_relevance(const Vector& logits, TokenId positive, TokenId negative) {
  check_id(positive, logits.size(), "positive");
  check_id(negative, logits.size(), "negative");
  if (positive == negative) {
    throw std::invalid_argument("init_relevance: positive and negative ids must differ");
  }
  RelevanceInit init;
  init.positive_id = positive;
  init.negative_id = negative;
  init.positive_relevance = logits[positive];
  init.negative_relevance = -logits[negative];
  init.delta_y = logits[positive] - logits[negative];
  return init;
}

double ConservationLedger::bias_total() const {
  double sum = 0.0;
  for (const auto& [name, value] : bias_relevance) sum += value;
  return sum;
}

Redistribution redistribute(const Vector& r_out, const Vector& denominator, double eps,
                            const std::string& site) {
  check_size(denominator.size(), r_out.size(), site + " denominator");
  if (!(eps >= 0.0) || !std::isfinite(eps)) {
    throw std::invalid_argument("stabilizer must be finite and non-negative");
  }
  Redistribution out;
  out.density.resize(r_out.size());
  for (Eigen::Index j = 0; j < r_out.size(); ++j) {
    const double d = denominator[j];
    const double stab = eps * (d >= 0.0 ? 1.0 : -1.0);
    if (r_out[j] == 0.0) {
      // Nothing to distribute; a zero denominator is harmless here.
      out.density[j] = 0.0;
      continue;
    }
    const double density = r_out[j] / (d + stab);
    if (!std::isfinite(density)) {
      throw NumericError(site + ": non-finite relevance ratio at element " + std::to_string(j) +
                         " (relevance " + std::to_string(r_out[j]) + ", denominator " +
                         std::to_string(d) + ", eps " + std::to_string(eps) + ")");
    }
    out.density[j] = density;
    out.leak += density * stab;
  }
  return out;
}

LinearSplit lrp_linear(const Vector& r_out, std::span<const LinearTerm> terms, const Vector& denominator,
                       double eps) {
  for (const auto& term : terms) check_size(term.contribution.size(), r_out.size(), "term '" + term.name + "'");
  const auto red = redistribute(r_out, denominator, eps, "lrp_linear");
  LinearSplit out;
  out.leak = red.leak;
  out.relevance.reserve(terms.size());
  for (const auto& term : terms) {
    out.relevance.push_back({term.name, red.density.cwiseProduct(term.contribution)});
  }
  return out;
}

Vector lrp_decoder(const RelevanceInit& init, const Matrix& decoder_weights, const Vector& h_last,
                   const Vector& decoder_bias, double eps, ConservationLedger& ledger) {
  check_size(decoder_bias.size(), decoder_weights.rows(), "decoder bias");
  check_size(h_last.size(), decoder_weights.cols(), "decoder input");
  check_id(init.positive_id, decoder_weights.rows(), "positive");
  check_id(init.negative_id, decoder_weights.rows(), "negative");

  // Only the two rows with nonzero R(y) take part.
  const std::array<TokenId, 2> rows = {init.positive_id, init.negative_id};
  Vector r_out(2), denominator(2);
  r_out << init.positive_relevance, init.negative_relevance;
  for (int k = 0; k < 2; ++k) {
    denominator[k] = decoder_weights.row(rows[k]).dot(h_last) + decoder_bias[rows[k]];
  }
  const auto red = redistribute(r_out, denominator, eps, "decoder");

  Vector r_hidden = Vector::Zero(h_last.size());
  double bias = 0.0;
  for (int k = 0; k < 2; ++k) {
    r_hidden += red.density[k] * decoder_weights.row(rows[k]).transpose().cwiseProduct(h_last);
    bias += red.density[k] * decoder_bias[rows[k]];
  }
  ledger.add_bias("decoder.b", bias);
  ledger.epsilon_leak += red.leak;
  return r_hidden;
}

StepRelevance lrp_lstm_step(const LayerWeights& layer, const GateRecord& step, const Vector& r_hidden,
                            const Vector& r_cell_future, double eps, const std::string& bias_name,
                            ConservationLedger& ledger) {
  const Eigen::Index h = layer.hidden_size();
  check_size(r_hidden.size(), h, bias_name + " hidden relevance");
  check_size(r_cell_future.size(), h, bias_name + " cell relevance");

  // (a) o * tanh(.) is a one-term map: R(h_t) passes to c_t whole.
  const Vector r_cell = r_hidden + r_cell_future;

  // (b) c_t = f * c_{t-1} + i * g
  const Vector forget_part = step.forget_gate.cwiseProduct(step.cell_prev);
  const Vector input_part = step.input_gate.cwiseProduct(step.candidate);
  const auto cell_split = redistribute(r_cell, forget_part + input_part, eps, bias_name + " cell");

  StepRelevance out;
  out.cell_prev = cell_split.density.cwiseProduct(forget_part);
  const Vector r_input_part = cell_split.density.cwiseProduct(input_part);

  // (c) i * tanh(.) is a one-term map onto W_gx x + W_gh h + b_g.
  const auto wx = layer.gate_rows(Gate::Candidate, layer.input_weights);
  const auto wh = layer.gate_rows(Gate::Candidate, layer.recurrent_weights);
  const auto bg = layer.gate_bias(Gate::Candidate);
  const Vector from_input = wx * step.input;
  const Vector from_hidden = wh * step.hidden_prev;
  const auto gate_split = redistribute(r_input_part, from_input + from_hidden + bg, eps,
                                       bias_name + " candidate");

  out.input = (wx.transpose() * gate_split.density).cwiseProduct(step.input);
  out.hidden_prev = (wh.transpose() * gate_split.density).cwiseProduct(step.hidden_prev);
  ledger.add_bias(bias_name, gate_split.density.dot(bg));
  ledger.epsilon_leak += cell_split.leak + gate_split.leak;
  return out;
}

AttributionResult propagate(const WeightContainer& weights, const ForwardTrace& trace,
                            const RelevanceInit& init, const PropagateOptions& options) {
  const std::size_t num_layers = trace.num_layers();
  const std::size_t length = trace.length();
  if (num_layers != weights.layers.size() || length == 0) {
    throw DimensionError("propagate: trace does not match the model");
  }

  AttributionResult result;
  result.delta_y = init.delta_y;
  result.epsilon = options.epsilon;
  result.token_relevance.assign(length, 0.0);
  if (options.keep_input_vectors) {
    result.input_relevance.assign(num_layers, std::vector<Vector>(length));
  }

  std::vector<Vector> pending_hidden(num_layers), pending_cell(num_layers);
  for (std::size_t l = 0; l < num_layers; ++l) {
    pending_hidden[l] = Vector::Zero(weights.layers[l].hidden_size());
    pending_cell[l] = Vector::Zero(weights.layers[l].hidden_size());
  }
  pending_hidden.back() = lrp_decoder(init, weights.decoder_weights, trace.top_hidden(),
                                      weights.decoder_bias, options.epsilon, result.ledger);

  std::vector<std::string> bias_names;
  for (std::size_t l = 0; l < num_layers; ++l) bias_names.push_back("layer" + std::to_string(l) + ".b");

  for (std::size_t t = length; t-- > 0;) {
    for (std::size_t l = num_layers; l-- > 0;) {
      auto step = lrp_lstm_step(weights.layers[l], trace.at(l, t), pending_hidden[l], pending_cell[l],
                                options.epsilon, bias_names[l], result.ledger);
      pending_hidden[l] = std::move(step.hidden_prev);
      pending_cell[l] = std::move(step.cell_prev);
      if (l > 0) {
        // This layer's input at t is the layer below's h_t.
        pending_hidden[l - 1] += step.input;
      } else {
        result.token_relevance[t] = step.input.sum();
      }
      if (options.keep_input_vectors) result.input_relevance[l][t] = std::move(step.input);
    }
  }

  for (std::size_t l = 0; l < num_layers; ++l) {
    result.ledger.initial_state_relevance += pending_hidden[l].sum() + pending_cell[l].sum();
  }
  return result;
}

double check_conservation(const AttributionResult& result) {
  const double tokens = std::accumulate(result.token_relevance.begin(), result.token_relevance.end(), 0.0);
  return result.delta_y - (tokens + result.ledger.total());
}

nlohmann::json attribution_to_json(const AttributionResult& result, const std::vector<std::string>& tokens) {
  if (tokens.size() != result.token_relevance.size()) {
    throw DimensionError("attribution_to_json: " + std::to_string(tokens.size()) + " tokens for " +
                         std::to_string(result.token_relevance.size()) + " relevance scores");
  }
  nlohmann::json j;
  j["tokens"] = tokens;
  j["relevance"] = result.token_relevance;
  j["delta_y"] = result.delta_y;
  j["epsilon"] = result.epsilon;
  j["ledger"] = {
      {"bias_relevance", result.ledger.bias_relevance},
      {"initial_state_relevance", result.ledger.initial_state_relevance},
      {"epsilon_leak", result.ledger.epsilon_leak},
  };
  j["conservation_residual"] = check_conservation(result);
  return j;
}

}  // namespace lrpsva::lrp
