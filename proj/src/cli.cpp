// Copyright 2026 The lrpsva Authors
// SPDX-License-Identifier: Apache-2.0

#include "lrpsva/cli.hpp"

#include <cstdio>
#include <fstream>
#include <iomanip>
#include <ostream>
#include <sstream>

#include "lrpsva/error.hpp"
#include "lrpsva/fixtures.hpp"
#include "lrpsva/lstm.hpp"
#include "lrpsva/report.hpp"
#include "lrpsva/tse.hpp"

namespace lrpsva::cli {
namespace {

using nlohmann::json;

void write_text(const std::filesystem::path& path, const std::string& text) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw FormatError("cannot write " + path.string());
  out << text;
}

json optional_json(const std::optional<double>& v) { return v ? json(*v) : json(nullptr); }

json correlation_json(const report::ScatterSeries& series) {
  return {{"rho", optional_json(report::series_correlation(series))}, {"points", series.points.size()}};
}

json config_json(const ModelConfig& c) {
  return {{"num_layers", c.num_layers}, {"hidden_size", c.hidden_size}, {"embed_size", c.embed_size},
          {"vocab_size", c.vocab_size}};
}

std::string trim(const std::string& s) {
  const auto b = s.find_first_not_of(" \t");
  if (b == std::string::npos) return {};
  return s.substr(b, s.find_last_not_of(" \t") - b + 1);
}

std::string fixed(double v, int precision = 2) {
  std::ostringstream s;
  s << std::fixed << std::setprecision(precision) << v;
  return s.str();
}

}  // namespace

std::vector<std::string> split_list(const std::string& text) {
  std::vector<std::string> out;
  std::size_t start = 0;
  while (start <= text.size()) {
    const auto comma = text.find(',', start);
    const auto end = comma == std::string::npos ? text.size() : comma;
    auto item = trim(text.substr(start, end - start));
    if (!item.empty()) out.push_back(std::move(item));
    if (comma == std::string::npos) break;
    start = comma + 1;
  }
  return out;
}

int run_eval(const EvalCommand& cmd, std::ostream& out, std::ostream& err) {
  try {
    const auto model = load_container(cmd.weights, cmd.vocab);
    const auto lexicon = cmd.lexicon ? tse::Lexicon::load(*cmd.lexicon) : tse::Lexicon::builtin();
    std::vector<tse::Template> extra;
    if (cmd.template_file) extra = tse::load_template_overrides(*cmd.template_file);
    const auto templates = tse::resolve_templates(cmd.templates, extra);

    tse::GenerationOptions gen{cmd.capitalize, cmd.dedupe, cmd.exclude_words};
    tse::EvalOptions eval{cmd.epsilon, false, cmd.threads};

    report::Report rep;
    std::vector<tse::EvalRecord> all_records;
    std::vector<std::string> keys;
    for (const auto& tpl : templates) {
      const auto cases = tse::generate_cases(tpl, lexicon, gen, model.vocab);
      if (cases.empty()) {
        err << "warning: template " << tpl.key() << " produced no cases; skipped\n";
        continue;
      }
      auto records = tse::evaluate_cases(model, cases, eval);
      rep.rows.push_back(report::make_row(tpl, records));
      keys.push_back(tpl.key());
      all_records.insert(all_records.end(), std::make_move_iterator(records.begin()),
                         std::make_move_iterator(records.end()));
    }
    if (rep.rows.empty()) {
      err << "error: no test cases were generated\n";
      return 1;
    }

    rep.metadata = {
        {"command", "eval"},
        {"weights", cmd.weights.string()},
        {"vocab", cmd.vocab.string()},
        {"lexicon", cmd.lexicon ? cmd.lexicon->string() : std::string("builtin")},
        {"templates", keys},
        {"epsilon", cmd.epsilon},
        {"capitalize", cmd.capitalize},
        {"dedupe", cmd.dedupe},
        {"exclude_words", cmd.exclude_words},
        {"model", config_json(model.config)},
        {"record_count", all_records.size()},
    };

    const auto pointing = report::pointing_vs_accuracy(rep.rows);
    const auto n2 = report::n2_vs_accuracy(rep.rows);
    const auto n1_logit = report::n1_relevance_vs_logit(all_records);
    const auto detn_points = report::det_noun_points(all_records);
    rep.correlations["pointing_vs_accuracy"] = correlation_json(pointing);
    rep.correlations["n2_vs_accuracy"] = correlation_json(n2);
    rep.correlations["n1_relevance_vs_logit"] = correlation_json(n1_logit);
    try {
      const auto detn = report::det_noun_analysis(all_records);
      json interval = nullptr;
      if (detn.flip_interval) interval = {detn.flip_interval->first, detn.flip_interval->second};
      rep.correlations["detn_regression"] = {
          {"det_on_noun_slope", detn.det_on_noun.slope},
          {"det_on_noun_intercept", detn.det_on_noun.intercept},
          {"phrase_slope", detn.phrase_slope},
          {"phrase_intercept", detn.phrase_intercept},
          {"sign_flip_interval", interval},
          {"sign_flip_fraction", detn.flip_fraction},
          {"rho", optional_json(detn.rho)},
          {"points", detn.points},
      };
    } catch (const stats::StatsError& e) {
      rep.correlations["detn_regression"] = nullptr;
      err << "warning: Det/N regression undefined: " << e.what() << "\n";
    }

    std::filesystem::create_directories(cmd.out_dir);
    if (cmd.frequency_table) {
      const auto join = report::frequency_join(all_records, report::load_frequency_table(*cmd.frequency_table));
      rep.correlations["frequency_vs_relevance"] = correlation_json(join.series);
      rep.correlations["frequency_vs_relevance"]["skipped"] = join.skipped;
      write_text(cmd.out_dir / "scatter_frequency_vs_relevance.csv", report::series_to_csv(join.series));
    }

    report::emit_report(rep, report::Format::Json, cmd.out_dir);
    report::emit_report(rep, report::Format::Csv, cmd.out_dir);
    write_text(cmd.out_dir / "records.csv", report::records_to_csv(all_records));
    write_text(cmd.out_dir / "signed_relevance.csv", report::signed_split_to_csv(all_records));
    for (const auto* s : {&pointing, &n2, &n1_logit, &detn_points}) {
      write_text(cmd.out_dir / ("scatter_" + s->label + ".csv"), report::series_to_csv(*s));
    }

    out << std::left << std::setw(16) << "template" << std::right << std::setw(8) << "cases" << std::setw(10)
        << "accuracy" << std::setw(10) << "pointing" << std::setw(8) << "N2" << "\n";
    for (const auto& r : rep.rows) {
      out << std::left << std::setw(16) << r.template_name << std::right << std::setw(8) << r.record_count
          << std::setw(10) << fixed(r.prediction_accuracy) << std::setw(10) << fixed(r.pointing_game)
          << std::setw(8) << (r.n2_top_rate ? fixed(*r.n2_top_rate) : std::string("--")) << "\n";
    }
    out << "reports written to " << cmd.out_dir.string() << "\n";
    return 0;
  } catch (const std::exception& e) {
    err << "error: " << e.what() << "\n";
    return 1;
  }
}

int run_attribute(const AttributeCommand& cmd, std::ostream& out, std::ostream& err) {
  try {
    const auto pair = split_list(cmd.pair);
    if (pair.size() != 2) {
      err << "error: --pair expects two comma-separated words, e.g. are,is\n";
      return 1;
    }
    const auto model = load_container(cmd.weights, cmd.vocab);
    const auto tokens = tokenize(cmd.sentence, model.vocab);
    if (!tokens.out_of_vocabulary.empty()) {
      err << "error: words not in the vocabulary:";
      for (const auto& w : tokens.out_of_vocabulary) err << " " << w;
      err << "\n";
      return 1;
    }
    std::array<TokenId, 2> ids{};
    for (int k = 0; k < 2; ++k) {
      auto id = model.vocab.find(pair[k]);
      if (!id) {
        err << "error: target word '" << pair[k] << "' is not in the vocabulary\n";
        return 1;
      }
      ids[k] = *id;
    }

    const auto trace = forward(model.weights, tokens.ids);
    const auto init = lrp::init_relevance(trace.logits, ids[0], ids[1]);
    const auto result = lrp::propagate(model.weights, trace, init, {cmd.epsilon});

    out << std::setprecision(10);
    out << "delta_y " << result.delta_y << "  (y[" << pair[0] << "] = " << trace.logits[ids[0]] << ", y["
        << pair[1] << "] = " << trace.logits[ids[1]] << ", epsilon = " << cmd.epsilon << ")\n";
    for (std::size_t j = 0; j < tokens.tokens.size(); ++j) {
      out << j << "\t" << tokens.tokens[j] << "\t" << result.token_relevance[j] << "\n";
    }
    for (const auto& [name, v] : result.ledger.bias_relevance) out << "bias\t" << name << "\t" << v << "\n";
    out << "initial_state\t" << result.ledger.initial_state_relevance << "\n";
    out << "epsilon_leak\t" << result.ledger.epsilon_leak << "\n";
    out << "residual\t" << lrp::check_conservation(result) << "\n";

    if (cmd.json_out) write_text(*cmd.json_out, lrp::attribution_to_json(result, tokens.tokens).dump(2) + "\n");
    return 0;
  } catch (const std::exception& e) {
    err << "error: " << e.what() << "\n";
    return 1;
  }
}

int run_check_fixtures(const FixtureCommand& cmd, std::ostream& out, std::ostream& err) {
  try {
    const auto model = load_container(cmd.weights, cmd.vocab);
    const auto check = check_fixtures(model, load_fixtures(cmd.fixtures), cmd.tolerance);
    for (const auto& m : check.messages) err << m << "\n";
    out << "checked " << check.checked << ", skipped " << check.skipped << ", failures " << check.failures
        << ", max abs error " << std::setprecision(6) << check.max_abs_error << " (tolerance " << cmd.tolerance
        << ")\n";
    if (check.checked < cmd.min_sentences) {
      err << "error: only " << check.checked << " sentences checked, need " << cmd.min_sentences << "\n";
      return 1;
    }
    return check.failures == 0 ? 0 : 1;
  } catch (const std::exception& e) {
    err << "error: " << e.what() << "\n";
    return 1;
  }
}

}  // namespace lrpsva::cli
