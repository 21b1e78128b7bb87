// Copyright 2026 The lrpsva Authors
// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <filesystem>
#include <iosfwd>
#include <optional>
#include <string>
#include <vector>

#include "lrpsva/lrp.hpp"

namespace lrpsva::cli {

struct EvalCommand {
  std::filesystem::path weights;
  std::filesystem::path vocab;
  std::optional<std::filesystem::path> lexicon;  // built-in lexicon when absent
  std::optional<std::filesystem::path> template_file;
  std::optional<std::filesystem::path> frequency_table;
  std::vector<std::string> templates{"all"};
  double epsilon = lrp::kDefaultEpsilon;
  bool capitalize = true;
  bool dedupe = true;
  std::vector<std::string> exclude_words;
  std::filesystem::path out_dir;
  unsigned threads = 1;
};

struct AttributeCommand {
  std::filesystem::path weights;
  std::filesystem::path vocab;
  std::string sentence;
  std::string pair;  // "correct,incorrect"
  double epsilon = lrp::kDefaultEpsilon;
  std::optional<std::filesystem::path> json_out;
};

struct FixtureCommand {
  std::filesystem::path weights;
  std::filesystem::path vocab;
  std::filesystem::path fixtures;
  double tolerance = 1e-4;
  std::size_t min_sentences = 20;
};

/// Runs every requested template end to end and writes report.json,
/// report.csv, records.csv and the scatter series into `out_dir`. Returns the
/// process exit code; diagnostics go to `err`.
int run_eval(const EvalCommand& cmd, std::ostream& out, std::ostream& err);

/// Prints one line per token with its relevance, then the ledger and the
/// conservation residual.
int run_attribute(const AttributeCommand& cmd, std::ostream& out, std::ostream& err);

/// Compares forward logits against exporter reference logits. Fails when any
/// checked sentence is off by more than the tolerance or fewer than
/// `min_sentences` sentences could be checked.
int run_check_fixtures(const FixtureCommand& cmd, std::ostream& out, std::ostream& err);

/// Splits "a,b,c" into trimmed nonempty items.
std::vector<std::string> split_list(const std::string& text);

}  // namespace lrpsva::cli
