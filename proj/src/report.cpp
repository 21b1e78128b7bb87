// Copyright 2026 The lrpsva Authors
// SPDX-License-Identifier: Apache-2.0

#include "lrpsva/report.hpp"

#include <charconv>
#include <cmath>
#include <fstream>
#include <sstream>
#include <stdexcept>

#include "lrpsva/error.hpp"

namespace lrpsva::report {
namespace {

using nlohmann::json;
using tse::EvalRecord;
using tse::Tag;

constexpr std::string_view kMissingPartition = "NA";

std::optional<double> mean_abs(std::span<const EvalRecord> records, Tag tag) {
  if (records.empty()) return std::nullopt;
  double sum = 0.0;
  for (const auto& r : records) sum += std::abs(r.tag_relevance.at(tag));
  return sum / static_cast<double>(records.size());
}

json optional_json(const std::optional<double>& v) { return v ? json(*v) : json(nullptr); }

std::optional<double> optional_from_json(const json& j) {
  if (j.is_null()) return std::nullopt;
  return j.get<double>();
}

std::string csv_field(const std::string& s) {
  if (s.find_first_of(",\"\n") == std::string::npos) return s;
  std::string out = "\"";
  for (char c : s) {
    if (c == '"') out += '"';
    out += c;
  }
  return out + "\"";
}

std::vector<std::string> parse_csv_line(const std::string& line) {
  std::vector<std::string> fields(1);
  bool quoted = false;
  for (std::size_t i = 0; i < line.size(); ++i) {
    const char c = line[i];
    if (quoted) {
      if (c == '"' && i + 1 < line.size() && line[i + 1] == '"') {
        fields.back() += '"';
        ++i;
      } else if (c == '"') {
        quoted = false;
      } else {
        fields.back() += c;
      }
    } else if (c == '"') {
      quoted = true;
    } else if (c == ',') {
      fields.emplace_back();
    } else {
      fields.back() += c;
    }
  }
  return fields;
}

double parse_double(const std::string& s, const std::string& what) {
  double v = 0.0;
  const auto* end = s.data() + s.size();
  auto [ptr, ec] = std::from_chars(s.data(), end, v);
  if (ec != std::errc() || ptr != end) throw FormatError("csv: cannot parse " + what + " '" + s + "'");
  return v;
}

std::string optional_cell(const std::optional<double>& v) { return v ? format_double(*v) : std::string(kMissingPartition); }

std::vector<std::string> csv_header() {
  std::vector<std::string> h = {"template", "record_count", "prediction_accuracy", "pointing_game", "n2_top_rate"};
  for (Tag t : tse::kAllTags) {
    h.push_back(std::string("mean_abs_") + tse::tag_name(t) + "_correct");
    h.push_back(std::string("mean_abs_") + tse::tag_name(t) + "_incorrect");
  }
  return h;
}

template <class Range>
std::string join_csv(const Range& fields) {
  std::string line;
  bool first = true;
  for (const auto& f : fields) {
    if (!first) line += ',';
    line += f;
    first = false;
  }
  return line + '\n';
}

}  // namespace

ReportRow make_row(const tse::Template& tpl, std::span<const EvalRecord> records) {
  ReportRow row;
  row.template_name = tpl.label();
  row.record_count = records.size();
  row.prediction_accuracy = tse::prediction_accuracy(records);
  row.pointing_game = tse::pointing_game_accuracy(records);
  if (tpl.has_slot(Tag::N2)) row.n2_top_rate = tse::n2_top_rate(records);
  const auto split = tse::split_by_correctness(records);
  for (Tag t : tpl.slots) {
    row.mean_abs_relevance[tse::tag_name(t)] = {mean_abs(split.matching, t), mean_abs(split.rest, t)};
  }
  return row;
}

std::optional<double> series_correlation(const ScatterSeries& series) {
  std::vector<double> xs, ys;
  for (const auto& [x, y] : series.points) {
    xs.push_back(x);
    ys.push_back(y);
  }
  try {
    return stats::pearson(xs, ys);
  } catch (const stats::StatsError&) {
    return std::nullopt;
  }
}

ScatterSeries pointing_vs_accuracy(std::span<const ReportRow> rows) {
  ScatterSeries s{"pointing_vs_accuracy", "pointing_game", "prediction_accuracy", {}};
  for (const auto& r : rows) s.points.emplace_back(r.pointing_game, r.prediction_accuracy);
  return s;
}

ScatterSeries n2_vs_accuracy(std::span<const ReportRow> rows) {
  ScatterSeries s{"n2_vs_accuracy", "n2_top_rate", "prediction_accuracy", {}};
  for (const auto& r : rows) {
    if (r.n2_top_rate) s.points.emplace_back(*r.n2_top_rate, r.prediction_accuracy);
  }
  return s;
}

ScatterSeries n1_relevance_vs_logit(std::span<const EvalRecord> records) {
  ScatterSeries s{"n1_relevance_vs_logit", "log_abs_r_N1", "logit_correct", {}};
  for (const auto& r : records) {
    auto it = r.tag_relevance.find(Tag::N1);
    if (it == r.tag_relevance.end() || it->second == 0.0) continue;
    s.points.emplace_back(std::log(std::abs(it->second)), r.logit_correct);
  }
  return s;
}

ScatterSeries det_noun_points(std::span<const EvalRecord> records) {
  ScatterSeries s{"det_noun", "r_N", "r_Det", {}};
  for (const auto& r : records) {
    for (auto [det, noun] : {std::pair{Tag::Det1, Tag::N1}, std::pair{Tag::Det2, Tag::N2}}) {
      auto d = r.tag_relevance.find(det);
      auto n = r.tag_relevance.find(noun);
      if (d != r.tag_relevance.end() && n != r.tag_relevance.end()) s.points.emplace_back(n->second, d->second);
    }
  }
  return s;
}

DetNounAnalysis det_noun_analysis(std::span<const EvalRecord> records) {
  const auto series = det_noun_points(records);
  std::vector<double> nouns, dets;
  for (const auto& [n, d] : series.points) {
    nouns.push_back(n);
    dets.push_back(d);
  }
  DetNounAnalysis out;
  out.points = series.points.size();
  out.det_on_noun = stats::linear_regression(nouns, dets);
  out.phrase_slope = 1.0 + out.det_on_noun.slope;
  out.phrase_intercept = out.det_on_noun.intercept;
  out.flip_interval = stats::sign_flip_interval(out.det_on_noun);
  if (out.flip_interval) {
    const auto [lo, hi] = *out.flip_interval;
    const auto inside = std::count_if(nouns.begin(), nouns.end(), [&](double n) { return n > lo && n < hi; });
    out.flip_fraction = static_cast<double>(inside) / static_cast<double>(nouns.size());
  }
  out.rho = series_correlation(series);
  return out;
}

SignedSplit signed_split(std::span<const EvalRecord> records, Tag tag) {
  SignedSplit out;
  for (const auto& r : records) {
    auto it = r.tag_relevance.find(tag);
    if (it == r.tag_relevance.end()) {
      throw std::invalid_argument(std::string("signed_split: record '") + r.test_case.preamble_text() +
                                  "' has no " + tse::tag_name(tag) + " relevance");
    }
    (r.test_case.n1_number == tse::Number::Singular ? out.singular : out.plural).push_back(it->second);
  }
  return out;
}

FrequencyTable load_frequency_table(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw FormatError("frequency table: cannot open " + path.string());
  FrequencyTable table;
  std::string line;
  std::size_t line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    if (!line.empty() && line.back() == '\r') line.pop_back();
    if (line.empty()) continue;
    const auto fields = parse_csv_line(line);
    if (fields.size() != 2) {
      throw FormatError("frequency table: line " + std::to_string(line_no) + " must have two columns");
    }
    try {
      table[fields[0]] = parse_double(fields[1], "count");
    } catch (const FormatError&) {
      if (line_no == 1) continue;  // header
      throw FormatError("frequency table: line " + std::to_string(line_no) + ": bad count '" + fields[1] + "'");
    }
  }
  return table;
}

FrequencyJoin frequency_join(std::span<const EvalRecord> records, const FrequencyTable& table) {
  if (table.empty()) throw std::invalid_argument("frequency_join: empty frequency table");
  FrequencyJoin out;
  out.series = {"frequency_vs_relevance", "log_count_N1", "abs_r_N1", {}};
  for (const auto& r : records) {
    auto span = r.test_case.spans.find(Tag::N1);
    auto rel = r.tag_relevance.find(Tag::N1);
    if (span == r.test_case.spans.end() || rel == r.tag_relevance.end()) {
      ++out.skipped;
      continue;
    }
    std::string token;
    for (std::size_t p : span->second) token += (token.empty() ? "" : " ") + r.test_case.preamble.at(p);
    auto it = table.find(token);
    if (it == table.end() || !(it->second > 0.0)) {
      ++out.skipped;
      continue;
    }
    out.series.points.emplace_back(std::log(it->second), std::abs(rel->second));
  }
  if (out.series.points.empty()) throw std::invalid_argument("frequency_join: no N1 token found in the table");
  return out;
}

json row_to_json(const ReportRow& row) {
  json means = json::object();
  for (const auto& [tag, m] : row.mean_abs_relevance) {
    means[tag] = {{"correct", optional_json(m.correct)}, {"incorrect", optional_json(m.incorrect)}};
  }
  return {
      {"template", row.template_name},
      {"record_count", row.record_count},
      {"prediction_accuracy", row.prediction_accuracy},
      {"pointing_game", row.pointing_game},
      {"n2_top_rate", optional_json(row.n2_top_rate)},
      {"mean_abs_relevance", means},
  };
}

ReportRow row_from_json(const json& j) {
  ReportRow row;
  row.template_name = j.at("template").get<std::string>();
  row.record_count = j.at("record_count").get<std::size_t>();
  row.prediction_accuracy = j.at("prediction_accuracy").get<double>();
  row.pointing_game = j.at("pointing_game").get<double>();
  row.n2_top_rate = optional_from_json(j.at("n2_top_rate"));
  for (const auto& [tag, m] : j.at("mean_abs_relevance").items()) {
    row.mean_abs_relevance[tag] = {optional_from_json(m.at("correct")), optional_from_json(m.at("incorrect"))};
  }
  return row;
}

json report_to_json(const Report& report) {
  json rows = json::array();
  for (const auto& r : report.rows) rows.push_back(row_to_json(r));
  return {{"metadata", report.metadata}, {"rows", rows}, {"correlations", report.correlations}};
}

Report report_from_json(const json& j) {
  Report r;
  r.metadata = j.at("metadata");
  for (const auto& row : j.at("rows")) r.rows.push_back(row_from_json(row));
  r.correlations = j.at("correlations");
  return r;
}

std::string format_double(double value) {
  char buf[64];
  auto [ptr, ec] = std::to_chars(buf, buf + sizeof buf, value);
  if (ec != std::errc()) throw std::runtime_error("format_double failed");
  return std::string(buf, ptr);
}

std::string rows_to_csv(std::span<const ReportRow> rows) {
  std::string out = join_csv(csv_header());
  for (const auto& r : rows) {
    std::vector<std::string> f = {csv_field(r.template_name), std::to_string(r.record_count),
                                  format_double(r.prediction_accuracy), format_double(r.pointing_game),
                                  r.n2_top_rate ? format_double(*r.n2_top_rate) : std::string()};
    for (Tag t : tse::kAllTags) {
      auto it = r.mean_abs_relevance.find(tse::tag_name(t));
      if (it == r.mean_abs_relevance.end()) {
        f.emplace_back();
        f.emplace_back();
      } else {
        f.push_back(optional_cell(it->second.correct));
        f.push_back(optional_cell(it->second.incorrect));
      }
    }
    out += join_csv(f);
  }
  return out;
}

std::vector<ReportRow> rows_from_csv(const std::string& text) {
  std::istringstream in(text);
  std::string line;
  if (!std::getline(in, line) || parse_csv_line(line) != csv_header()) {
    throw FormatError("report csv: unexpected header");
  }
  auto cell = [](const std::string& s) -> std::optional<double> {
    if (s == kMissingPartition) return std::nullopt;
    return parse_double(s, "mean");
  };
  std::vector<ReportRow> rows;
  while (std::getline(in, line)) {
    if (line.empty()) continue;
    const auto f = parse_csv_line(line);
    if (f.size() != csv_header().size()) throw FormatError("report csv: wrong column count in '" + line + "'");
    ReportRow r;
    r.template_name = f[0];
    r.record_count = static_cast<std::size_t>(parse_double(f[1], "record_count"));
    r.prediction_accuracy = parse_double(f[2], "prediction_accuracy");
    r.pointing_game = parse_double(f[3], "pointing_game");
    if (!f[4].empty()) r.n2_top_rate = parse_double(f[4], "n2_top_rate");
    for (std::size_t i = 0; i < tse::kAllTags.size(); ++i) {
      const auto& c = f[5 + 2 * i];
      const auto& ic = f[6 + 2 * i];
      if (c.empty() && ic.empty()) continue;
      r.mean_abs_relevance[tse::tag_name(tse::kAllTags[i])] = {cell(c), cell(ic)};
    }
    rows.push_back(std::move(r));
  }
  return rows;
}

std::string series_to_csv(const ScatterSeries& series) {
  std::string out = csv_field(series.x_label) + "," + csv_field(series.y_label) + "\n";
  for (const auto& [x, y] : series.points) out += format_double(x) + "," + format_double(y) + "\n";
  return out;
}

std::string records_to_csv(std::span<const EvalRecord> records) {
  std::vector<std::string> header = {"template",     "preamble", "target_correct", "target_incorrect",
                                     "target_number", "correct", "delta_y",        "logit_correct",
                                     "logit_incorrect", "predicted_form"};
  for (Tag t : tse::kAllTags) header.push_back(std::string("r_") + tse::tag_name(t));
  std::string out = join_csv(header);
  for (const auto& r : records) {
    const auto& tc = r.test_case;
    std::vector<std::string> f = {csv_field(tc.template_name), csv_field(tc.preamble_text()),
                                  csv_field(tc.target_correct), csv_field(tc.target_incorrect),
                                  tse::number_name(tc.n1_number), r.correct ? "1" : "0",
                                  format_double(r.delta_y), format_double(r.logit_correct),
                                  format_double(r.logit_incorrect), csv_field(r.predicted_form)};
    for (Tag t : tse::kAllTags) {
      auto it = r.tag_relevance.find(t);
      f.push_back(it == r.tag_relevance.end() ? std::string() : format_double(it->second));
    }
    out += join_csv(f);
  }
  return out;
}

std::string signed_split_to_csv(std::span<const EvalRecord> records) {
  std::string out = "template,tag,target_number,relevance\n";
  for (const auto& r : records) {
    for (const auto& [tag, value] : r.tag_relevance) {
      out += csv_field(r.test_case.template_name) + "," + tse::tag_name(tag) + "," +
             tse::number_name(r.test_case.n1_number) + "," + format_double(value) + "\n";
    }
  }
  return out;
}

std::filesystem::path emit_report(const Report& report, Format format, const std::filesystem::path& dir) {
  std::filesystem::create_directories(dir);
  const auto path = dir / (format == Format::Json ? "report.json" : "report.csv");
  std::ofstream out(path, std::ios::binary);
  if (!out) throw FormatError("cannot write " + path.string());
  if (format == Format::Json) {
    out << report_to_json(report).dump(2) << '\n';
  } else {
    out << rows_to_csv(report.rows);
  }
  return path;
}

}  // namespace lrpsva::report
