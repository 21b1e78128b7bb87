// Copyright 2026 The lrpsva Authors
// SPDX-License-Identifier: Apache-2.0

#include "lrpsva/fixtures.hpp"

#include <cmath>
#include <fstream>

#include <nlohmann/json.hpp>

#include "lrpsva/error.hpp"
#include "lrpsva/lstm.hpp"

namespace lrpsva {

std::vector<ReferenceFixture> load_fixtures(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw FormatError("fixtures: cannot open " + path.string());
  std::vector<ReferenceFixture> out;
  try {
    const auto j = nlohmann::json::parse(in);
    for (const auto& item : j.at("fixtures")) {
      ReferenceFixture f;
      f.sentence = item.at("sentence").get<std::string>();
      const auto pair = item.at("pair").get<std::vector<std::string>>();
      const auto logits = item.at("logits").get<std::vector<double>>();
      if (pair.size() != 2 || logits.size() != 2) {
        throw FormatError("fixtures: '" + f.sentence + "' needs exactly two pair words and two logits");
      }
      f.pair = {pair[0], pair[1]};
      f.logits = {logits[0], logits[1]};
      if (!std::isfinite(f.logits[0]) || !std::isfinite(f.logits[1])) {
        throw NumericError("fixtures: non-finite logit for '" + f.sentence + "'");
      }
      out.push_back(std::move(f));
    }
  } catch (const nlohmann::json::exception& e) {
    throw FormatError("fixtures: " + path.string() + ": " + e.what());
  }
  return out;
}

FixtureCheck check_fixtures(const LanguageModel& model, const std::vector<ReferenceFixture>& fixtures,
                            double tolerance) {
  FixtureCheck check;
  for (const auto& f : fixtures) {
    const auto tokens = tokenize(f.sentence, model.vocab);
    const auto a = model.vocab.find(f.pair[0]);
    const auto b = model.vocab.find(f.pair[1]);
    if (!tokens.out_of_vocabulary.empty() || !a || !b) {
      ++check.skipped;
      check.messages.push_back("skipped '" + f.sentence + "': out-of-vocabulary words");
      continue;
    }
    const auto trace = forward(model.weights, tokens.ids);
    ++check.checked;
    bool ok = true;
    for (int k = 0; k < 2; ++k) {
      const double err = std::abs(trace.logits[k == 0 ? *a : *b] - f.logits[k]);
      check.max_abs_error = std::max(check.max_abs_error, err);
      if (!(err <= tolerance)) ok = false;
    }
    if (!ok) {
      ++check.failures;
      check.messages.push_back("mismatch on '" + f.sentence + "'");
    }
  }
  return check;
}

}  // namespace lrpsva
