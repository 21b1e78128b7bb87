// Copyright 2026 The lrpsva Authors
// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <filesystem>
#include <map>
#include <optional>
#include <span>
#include <string>
#include <unordered_map>
#include <utility>
#include <vector>

#include <nlohmann/json.hpp>

#include "lrpsva/stats.hpp"
#include "lrpsva/tse.hpp"

namespace lrpsva::report {

struct TagMeans {
  std::optional<double> correct;
  std::optional<double> incorrect;

  bool operator==(const TagMeans&) const = default;
};

/// One template column: accuracy, pointing game, N2 rate and mean |r| per tag
/// for correct and incorrect predictions.
struct ReportRow {
  std::string template_name;
  double prediction_accuracy = 0.0;
  double pointing_game = 0.0;
  std::optional<double> n2_top_rate;
  std::map<std::string, TagMeans> mean_abs_relevance;
  std::size_t record_count = 0;

  bool operator==(const ReportRow&) const = default;
};

ReportRow make_row(const tse::Template& tpl, std::span<const tse::EvalRecord> records);

struct ScatterSeries {
  std::string label;
  std::string x_label;
  std::string y_label;
  std::vector<std::pair<double, double>> points;
};

/// Correlation of a series, or nullopt when it is undefined.
std::optional<double> series_correlation(const ScatterSeries& series);

/// One point per row: (pointing game, accuracy).
ScatterSeries pointing_vs_accuracy(std::span<const ReportRow> rows);
/// One point per row that has N2: (N2 top rate, accuracy).
ScatterSeries n2_vs_accuracy(std::span<const ReportRow> rows);
/// One point per record with nonzero r(N1): (log|r(N1)|, correct-form logit).
ScatterSeries n1_relevance_vs_logit(std::span<const tse::EvalRecord> records);

/// Pairs (r(N), r(Det)) from Det1/N1 and Det2/N2 of every record.
ScatterSeries det_noun_points(std::span<const tse::EvalRecord> records);

struct DetNounAnalysis {
  stats::LinearFit det_on_noun;
  double phrase_slope = 0.0;  // 1 + det_on_noun.slope
  double phrase_intercept = 0.0;
  std::optional<std::pair<double, double>> flip_interval;
  double flip_fraction = 0.0;  // share of points with r(N) inside the interval
  std::optional<double> rho;
  std::size_t points = 0;
};

DetNounAnalysis det_noun_analysis(std::span<const tse::EvalRecord> records);

struct SignedSplit {
  std::vector<double> singular;
  std::vector<double> plural;
};

/// Signed r(tag) partitioned by target number. Throws std::invalid_argument
/// when a record has no relevance for `tag`.
SignedSplit signed_split(std::span<const tse::EvalRecord> records, tse::Tag tag);

using FrequencyTable = std::unordered_map<std::string, double>;

/// Two-column CSV `token,count`; a header line is skipped if its count column
/// is not numeric.
FrequencyTable load_frequency_table(const std::filesystem::path& path);

struct FrequencyJoin {
  ScatterSeries series;  // (log count, |r(N1)|)
  std::size_t skipped = 0;
};

/// Throws std::invalid_argument when no N1 token is found in the table.
FrequencyJoin frequency_join(std::span<const tse::EvalRecord> records, const FrequencyTable& table);

struct Report {
  nlohmann::json metadata;
  std::vector<ReportRow> rows;
  nlohmann::json correlations;
};

nlohmann::json row_to_json(const ReportRow& row);
ReportRow row_from_json(const nlohmann::json& j);
nlohmann::json report_to_json(const Report& report);
Report report_from_json(const nlohmann::json& j);

/// Shortest decimal text that reads back to the same double.
std::string format_double(double value);

std::string rows_to_csv(std::span<const ReportRow> rows);
/// Inverse of rows_to_csv. Throws FormatError on malformed input.
std::vector<ReportRow> rows_from_csv(const std::string& text);

std::string series_to_csv(const ScatterSeries& series);
std::string records_to_csv(std::span<const tse::EvalRecord> records);
std::string signed_split_to_csv(std::span<const tse::EvalRecord> records);

enum class Format { Json, Csv };

/// Writes report.json or report.csv into `dir`; returns the file written.
std::filesystem::path emit_report(const Report& report, Format format,
                                  const std::filesystem::path& dir);

}  // namespace lrpsva::report
