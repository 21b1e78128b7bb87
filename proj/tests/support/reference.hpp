// Copyright 2026 The lrpsva Authors
// SPDX-License-Identifier: Apache-2.0

// Loop-level reference implementations used as test oracles. They copy the
// weights into nested std::vector and never touch Eigen arithmetic.

#pragma once

#include <cstdint>
#include <random>
#include <vector>

#include "lrpsva/lrp.hpp"
#include "lrpsva/weights.hpp"

namespace lrpsva::testing {

using Vec = std::vector<double>;
using Mat = std::vector<Vec>;

struct RefLayer {
  Mat wx;  // 4H x in
  Mat wh;  // 4H x H
  Vec b;   // 4H
};

struct RefModel {
  Mat embedding;
  std::vector<RefLayer> layers;
  Mat dec_w;
  Vec dec_b;
  int hidden = 0;
};

RefModel to_reference(const WeightContainer& w);

struct RefStep {
  Vec x, h_prev, c_prev;
  Vec i, f, g, o, c, h;
};

struct RefTrace {
  std::vector<std::vector<RefStep>> steps;  // [layer][t]
  Vec logits;
};

RefStep ref_cell_step(const RefLayer& layer, const Vec& x, const Vec& h_prev, const Vec& c_prev);
RefTrace ref_forward(const RefModel& m, const std::vector<TokenId>& ids);

struct RefAttribution {
  Vec tokens;
  double bias = 0.0;
  double initial_state = 0.0;
  double leak = 0.0;
};

/// Direct transcription of the backward rules with the stabilized
/// denominator z + eps * sign(z).
RefAttribution ref_propagate(const RefModel& m, const RefTrace& tr, TokenId pos, TokenId neg,
                             double eps);

struct RandomSpec {
  int layers = 1;
  int hidden = 4;
  int embed = 4;
  int vocab = 6;
  double scale = 0.8;
};

WeightContainer random_weights(const RandomSpec& spec, std::mt19937_64& rng);
ModelConfig config_of(const RandomSpec& spec);
std::vector<TokenId> random_ids(int length, int vocab, std::mt19937_64& rng);

/// Smallest |denominator| the ε = 0 rule divides by: the two active logits,
/// every cell state and every candidate pre-activation.
double min_abs_denominator(const ForwardTrace& trace, TokenId pos, TokenId neg);

/// A random model, sequence and target pair whose denominators all stay at or
/// above `floor`. Redraws until the condition holds.
struct Instance {
  RandomSpec spec;
  WeightContainer weights;
  std::vector<TokenId> ids;
  TokenId pos = 0;
  TokenId neg = 1;
};

Instance conditioned_instance(const RandomSpec& spec, int length, double floor, std::mt19937_64& rng);

double rel_diff(double a, double b);

}  // namespace lrpsva::testing
