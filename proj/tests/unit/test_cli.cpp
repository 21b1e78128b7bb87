// Copyright 2026 The lrpsva Authors
// SPDX-License-Identifier: Apache-2.0

#include <catch_amalgamated.hpp>

#include <cmath>
#include <filesystem>
#include <fstream>
#include <random>
#include <sstream>

#include "lrpsva/cli.hpp"
#include "lrpsva/lstm.hpp"
#include "lrpsva/report.hpp"
#include "lrpsva/tse.hpp"
#include "reference.hpp"

using namespace lrpsva;
using namespace lrpsva::cli;
using Catch::Matchers::ContainsSubstring;
using Catch::Matchers::WithinAbs;

namespace {

std::string slurp(const std::filesystem::path& p) {
  std::ifstream in(p, std::ios::binary);
  std::ostringstream s;
  s << in.rdbuf();
  return s.str();
}

// Writes a random model whose vocabulary covers a tiny lexicon and the
// sentence "The keys on the table".
struct ModelFiles {
  std::filesystem::path dir, weights, vocab, lexicon;

  explicit ModelFiles(const std::string& name) {
    dir = std::filesystem::temp_directory_path() / ("lrpsva_cli_" + name);
    std::filesystem::remove_all(dir);
    std::filesystem::create_directories(dir);
    weights = dir / "model.lrpw";
    vocab = dir / "vocab.txt";
    lexicon = dir / "lexicon.json";

    std::ofstream(lexicon) << R"({
      "nouns": [["senator", "senators"], ["key", "keys"]],
      "verbs": [["laughs", "laugh"], ["is", "are"]],
      "lvp_verbs": [["likes", "like", "to watch television shows"], ["knows", "know", "many languages"]],
      "determiners": ["the"], "prepositions": ["on", "next to"],
      "complementizers": ["that"], "conjunctions": ["and"]})";
    const Vocabulary v({"<unk>", "The", "the", "senator", "senators", "key", "keys", "laughs", "laugh", "is",
                        "are", "likes", "like", "to", "watch", "television", "shows", "knows", "know", "many",
                        "languages", "on", "next", "table", "that", "and"});
    v.save(vocab);
    std::mt19937_64 rng(404);
    const testing::RandomSpec spec{2, 8, 6, static_cast<int>(v.size()), 0.5};
    write_container(weights, testing::config_of(spec), testing::random_weights(spec, rng));
  }
  ~ModelFiles() { std::filesystem::remove_all(dir); }

  EvalCommand eval(const std::string& out) const {
    EvalCommand c;
    c.weights = weights;
    c.vocab = vocab;
    c.lexicon = lexicon;
    c.out_dir = dir / out;
    return c;
  }
};

}  // namespace

TEST_CASE("split_list trims and drops empty items") {
  REQUIRE(split_list(" are , is ,,") == std::vector<std::string>{"are", "is"});
  REQUIRE(split_list("").empty());
}

TEST_CASE("eval writes one row per requested template") {
  ModelFiles f("rows");
  auto cmd = f.eval("out");
  cmd.templates = {"Simple", "PP", "LVP", "SVP"};
  std::ostringstream out, err;
  REQUIRE(run_eval(cmd, out, err) == 0);
  const auto rep = report::report_from_json(nlohmann::json::parse(slurp(cmd.out_dir / "report.json")));
  REQUIRE(rep.rows.size() == 4);
  REQUIRE(rep.rows[0].template_name == "Simple");
  REQUIRE(rep.rows[1].template_name == "PP");
  REQUIRE(rep.rows[1].n2_top_rate.has_value());
  REQUIRE_FALSE(rep.rows[0].n2_top_rate.has_value());
  // Simple: 2 nouns x 2 numbers x 2 verbs.
  REQUIRE(rep.rows[0].record_count == 8);
  for (const auto& r : rep.rows) {
    REQUIRE(r.prediction_accuracy >= 0.0);
    REQUIRE(r.prediction_accuracy <= 100.0);
  }
  REQUIRE(report::rows_from_csv(slurp(cmd.out_dir / "report.csv")) == rep.rows);
  REQUIRE(rep.correlations.contains("pointing_vs_accuracy"));
  REQUIRE(rep.correlations.contains("n2_vs_accuracy"));
  REQUIRE(rep.correlations.contains("detn_regression"));
  for (const char* name : {"records.csv", "signed_relevance.csv", "scatter_pointing_vs_accuracy.csv",
                           "scatter_n2_vs_accuracy.csv", "scatter_n1_relevance_vs_logit.csv", "scatter_det_noun.csv"})
    REQUIRE(std::filesystem::exists(cmd.out_dir / name));
  REQUIRE_THAT(out.str(), ContainsSubstring("Simple"));
}

TEST_CASE("eval output is byte-identical across runs and thread counts") {
  ModelFiles f("determinism");
  auto a = f.eval("a");
  auto b = f.eval("b");
  b.threads = 3;
  b.out_dir = a.out_dir;  // same path keeps the metadata identical
  std::ostringstream out, err;
  REQUIRE(run_eval(a, out, err) == 0);
  const auto first = slurp(a.out_dir / "report.json");
  const auto first_records = slurp(a.out_dir / "records.csv");
  REQUIRE(run_eval(b, out, err) == 0);
  REQUIRE(slurp(a.out_dir / "report.json") == first);
  REQUIRE(slurp(a.out_dir / "records.csv") == first_records);
}

TEST_CASE("eval honours exclusions and the frequency table") {
  ModelFiles f("options");
  auto cmd = f.eval("out");
  cmd.templates = {"Simple", "LVP"};
  cmd.exclude_words = {"laugh", "laughs"};
  const auto freq = f.dir / "freq.csv";
  std::ofstream(freq) << "token,count\nsenator,50\nsenators,20\nkey,7\nkeys,3\n";
  cmd.frequency_table = freq;
  std::ostringstream out, err;
  REQUIRE(run_eval(cmd, out, err) == 0);
  const auto rep = report::report_from_json(nlohmann::json::parse(slurp(cmd.out_dir / "report.json")));
  REQUIRE(rep.rows.size() == 2);
  // Simple keeps only is/are: 2 nouns x 2 numbers.
  REQUIRE(rep.rows[0].record_count == 4);
  // LVP: 2 nouns x 2 numbers x 2 V entries x 1 remaining target.
  REQUIRE(rep.rows[1].record_count == 8);
  REQUIRE(rep.metadata.at("exclude_words") == nlohmann::json{"laugh", "laughs"});
  REQUIRE(rep.correlations.contains("frequency_vs_relevance"));
  REQUIRE(std::filesystem::exists(cmd.out_dir / "scatter_frequency_vs_relevance.csv"));
}

TEST_CASE("eval failures return nonzero with a diagnostic") {
  ModelFiles f("errors");
  std::ostringstream out, err;
  SECTION("unknown template") {
    auto cmd = f.eval("out");
    cmd.templates = {"Nope"};
    REQUIRE(run_eval(cmd, out, err) != 0);
    REQUIRE_THAT(err.str(), ContainsSubstring("Nope"));
  }
  SECTION("lexicon words missing from the vocabulary") {
    auto cmd = f.eval("out");
    cmd.lexicon.reset();
    REQUIRE(run_eval(cmd, out, err) != 0);
    REQUIRE_THAT(err.str(), ContainsSubstring("manager"));
  }
  SECTION("missing weights") {
    auto cmd = f.eval("out");
    cmd.weights = f.dir / "absent.lrpw";
    REQUIRE(run_eval(cmd, out, err) != 0);
    REQUIRE_THAT(err.str(), ContainsSubstring("absent.lrpw"));
  }
}

TEST_CASE("attribute prints token relevance that sums to delta_y") {
  ModelFiles f("attribute");
  AttributeCommand cmd;
  cmd.weights = f.weights;
  cmd.vocab = f.vocab;
  cmd.sentence = "The keys on the table";
  cmd.pair = "are,is";
  cmd.epsilon = 0.0;
  cmd.json_out = f.dir / "attr.json";
  std::ostringstream out, err;
  REQUIRE(run_attribute(cmd, out, err) == 0);
  REQUIRE_THAT(out.str(), ContainsSubstring("keys"));
  REQUIRE_THAT(out.str(), ContainsSubstring("residual"));

  const auto j = nlohmann::json::parse(slurp(*cmd.json_out));
  REQUIRE(j.at("tokens").size() == 5);
  double total = j.at("ledger").at("initial_state_relevance").get<double>() +
                 j.at("ledger").at("epsilon_leak").get<double>();
  for (double r : j.at("relevance")) total += r;
  for (const auto& [name, v] : j.at("ledger").at("bias_relevance").items()) total += v.get<double>();
  const double dy = j.at("delta_y").get<double>();
  REQUIRE_THAT(total, WithinAbs(dy, 1e-8 * std::max(1.0, std::abs(dy))));

  const auto model = load_container(f.weights, f.vocab);
  const auto tr = forward(model.weights, tokenize(cmd.sentence, model.vocab).ids);
  REQUIRE(dy == score_pair(tr.logits, *model.vocab.find("are"), *model.vocab.find("is")));
}

TEST_CASE("attribute rejects bad input") {
  ModelFiles f("attribute_errors");
  AttributeCommand cmd;
  cmd.weights = f.weights;
  cmd.vocab = f.vocab;
  cmd.sentence = "The dogs";
  cmd.pair = "are,is";
  std::ostringstream out, err;
  REQUIRE(run_attribute(cmd, out, err) == 1);
  REQUIRE_THAT(err.str(), ContainsSubstring("dogs"));
  cmd.sentence = "The keys";
  cmd.pair = "are";
  REQUIRE(run_attribute(cmd, out, err) == 1);
  cmd.pair = "are,bark";
  REQUIRE(run_attribute(cmd, out, err) == 1);
  REQUIRE_THAT(err.str(), ContainsSubstring("bark"));
}

TEST_CASE("check-fixtures compares exported logits") {
  ModelFiles f("fixtures");
  const auto model = load_container(f.weights, f.vocab);
  nlohmann::json items = nlohmann::json::array();
  for (const auto* s : {"The senators", "The keys on the table", "The senator"}) {
    const auto tr = forward(model.weights, tokenize(s, model.vocab).ids);
    items.push_back({{"sentence", s},
                     {"pair", {"laugh", "laughs"}},
                     {"logits", {tr.logits[*model.vocab.find("laugh")], tr.logits[*model.vocab.find("laughs")]}}});
  }
  const auto path = f.dir / "fixtures.json";
  std::ofstream(path) << nlohmann::json{{"fixtures", items}}.dump();

  FixtureCommand cmd{f.weights, f.vocab, path, 1e-4, 3};
  std::ostringstream out, err;
  REQUIRE(run_check_fixtures(cmd, out, err) == 0);
  REQUIRE_THAT(out.str(), ContainsSubstring("checked 3"));
  cmd.min_sentences = 20;
  REQUIRE(run_check_fixtures(cmd, out, err) == 1);

  items[1]["logits"][0] = items[1]["logits"][0].get<double>() + 0.01;
  std::ofstream(path) << nlohmann::json{{"fixtures", items}}.dump();
  cmd.min_sentences = 3;
  REQUIRE(run_check_fixtures(cmd, out, err) == 1);
}
