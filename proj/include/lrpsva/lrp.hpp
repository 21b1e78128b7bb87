// Copyright 2026 The lrpsva Authors
// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <cstddef>
#include <map>
#include <span>
#include <stdexcept>
#include <string>
#include <vector>

#include <nlohmann/json.hpp>

#include "lrpsva/lstm.hpp"

namespace lrpsva::lrp {

inline constexpr double kDefaultEpsilon = 1e-3;

/// R(y) restricted to its two nonzero entries: +y[pos] and -y[neg].
struct RelevanceInit {
  TokenId positive_id = 0;
  TokenId negative_id = 0;
  double positive_relevance = 0.0;
  double negative_relevance = 0.0;
  double delta_y = 0.0;

  RelevanceInit scaled(double alpha) const;
  double total() const { return positive_relevance + negative_relevance; }
};

RelevanceInit init_relevance(const Vector& logits, TokenId positive, TokenId negative);

struct ConservationLedger {
  std::map<std::string, double> bias_relevance;
  double initial_state_relevance = 0.0;
  double epsilon_leak = 0.0;

  double bias_total() const;
  double total() const { return bias_total() + initial_state_relevance + epsilon_leak; }
  void add_bias(const std::string& name, double amount) { bias_relevance[name] += amount; }
};

/// Relevance per output unit divided by the stabilized denominator.
///
/// Multiplying `density` by any additive contribution to the denominator
/// yields that contribution's share of the relevance. `leak` is the part of
/// the incoming relevance held back by the stabilizer.
struct Redistribution {
  Vector density;
  double leak = 0.0;
};

/// density = r_out / (d + eps * sign(d)), sign(0) = +1. Throws NumericError
/// identifying `site` and the element when a ratio is not finite, which can
/// only happen for eps = 0 and a zero denominator.
Redistribution redistribute(const Vector& r_out, const Vector& denominator, double eps,
                            const std::string& site);

struct LinearTerm {
  std::string name;
  Vector contribution;
};

struct LinearSplit {
  std::vector<LinearTerm> relevance;  // same names and order as the input terms
  double leak = 0.0;
};

/// Proportional split of `r_out` among additive contributions. The
/// denominator must be their elementwise sum.
LinearSplit lrp_linear(const Vector& r_out, std::span<const LinearTerm> terms,
                       const Vector& denominator, double eps);

/// Relevance of h_T from the two active logits. The decoder-bias share is
/// booked in the ledger under "decoder.b".
Vector lrp_decoder(const RelevanceInit& init, const Matrix& decoder_weights, const Vector& h_last,
                   const Vector& decoder_bias, double eps, ConservationLedger& ledger);

struct StepRelevance {
  Vector input;        // R(x_t)
  Vector hidden_prev;  // R(h_{t-1}) from the candidate pre-activation
  Vector cell_prev;    // R(c_{t-1}) from the forget path
};

/// Backward relevance through one LSTM step.
///
/// The output gate and the input gate act as unary scalers, so R(h_t) reaches
/// c_t unchanged and R(i_t * g_t) reaches the candidate pre-activation
/// unchanged. The candidate share is split across W_gx x_t, W_gh h_{t-1} and
/// b_g; the bias share is booked under `bias_name`.
StepRelevance lrp_lstm_step(const LayerWeights& layer, const GateRecord& step,
                            const Vector& r_hidden, const Vector& r_cell_future, double eps,
                            const std::string& bias_name, ConservationLedger& ledger);

struct PropagateOptions {
  double epsilon = kDefaultEpsilon;
  bool keep_input_vectors = false;
};

struct AttributionResult {
  std::vector<double> token_relevance;  // r(x_j), embedding level
  /// [layer][t] R(x_t) vectors; empty unless keep_input_vectors was set.
  std::vector<std::vector<Vector>> input_relevance;
  ConservationLedger ledger;
  double delta_y = 0.0;
  double epsilon = 0.0;
};

AttributionResult propagate(const WeightContainer& weights, const ForwardTrace& trace,
                            const RelevanceInit& init, const PropagateOptions& options = {});

/// delta_y - (sum of token relevance + bias, initial-state and leak ledgers).
double check_conservation(const AttributionResult& result);

/// Scalar relevance per tag: the sum of token relevance over its positions.
template <class Key>
std::map<Key, double> span_relevance(const AttributionResult& result,
                                     const std::map<Key, std::vector<std::size_t>>& spans) {
  std::map<Key, double> out;
  for (const auto& [key, positions] : spans) {
    double sum = 0.0;
    for (std::size_t p : positions) {
      if (p >= result.token_relevance.size()) {
        throw std::out_of_range("span position " + std::to_string(p) + " outside sequence of length " +
                                std::to_string(result.token_relevance.size()));
      }
      sum += result.token_relevance[p];
    }
    out.emplace(key, sum);
  }
  return out;
}

/// JSON dump of one attribution: tokens, per-token relevance, ledger, delta_y
/// and epsilon.
nlohmann::json attribution_to_json(const AttributionResult& result,
                                   const std::vector<std::string>& tokens);

}  // namespace lrpsva::lrp
