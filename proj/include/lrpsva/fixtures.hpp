// Copyright 2026 The lrpsva Authors
// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <array>
#include <filesystem>
#include <string>
#include <vector>

#include "lrpsva/weights.hpp"

namespace lrpsva {

/// Reference logits for one sentence, produced by the exporter in the source
/// framework. `logits[k]` is the score of `pair[k]` after the sentence.
struct ReferenceFixture {
  std::string sentence;
  std::array<std::string, 2> pair;
  std::array<double, 2> logits{};
};

/// Reads {"fixtures": [{"sentence", "pair": [w1, w2], "logits": [y1, y2]}]}.
/// Other top-level keys (such as "oov") are ignored.
std::vector<ReferenceFixture> load_fixtures(const std::filesystem::path& path);

struct FixtureCheck {
  std::size_t checked = 0;
  std::size_t skipped = 0;  // sentence or pair not in the vocabulary
  std::size_t failures = 0;
  double max_abs_error = 0.0;
  std::vector<std::string> messages;
};

/// Runs forward on every fixture sentence and compares the two logits
/// against the reference within `tolerance` (absolute, per element).
FixtureCheck check_fixtures(const LanguageModel& model, const std::vector<ReferenceFixture>& fixtures,
                            double tolerance);

}  // namespace lrpsva
