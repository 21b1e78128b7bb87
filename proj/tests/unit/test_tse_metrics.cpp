// Copyright 2026 The lrpsva Authors
// SPDX-License-Identifier: Apache-2.0

#include <catch_amalgamated.hpp>

#include <cmath>
#include <random>

#include "harness_fixture.hpp"
#include "lrpsva/error.hpp"
#include "lrpsva/tse.hpp"
#include "reference.hpp"

using namespace lrpsva;
using namespace lrpsva::tse;
using Catch::Matchers::WithinAbs;

namespace {

const Template& builtin(const std::string& key) {
  for (const auto& t : builtin_templates())
    if (t.key() == key) return t;
  throw std::invalid_argument(key);
}

EvalRecord with_relevance(std::map<Tag, double> rel, double delta_y = 1.0) {
  EvalRecord r;
  r.tag_relevance = std::move(rel);
  r.delta_y = delta_y;
  r.correct = delta_y > 0.0;
  return r;
}

// Random two-layer model over the builtin lexicon's words.
LanguageModel lexicon_model(std::uint64_t seed, double favour_plural = 0.0) {
  std::vector<std::string> tokens{"<unk>"};
  for (const auto& w : Lexicon::builtin().words()) {
    tokens.push_back(w);
    std::string cap = w;
    cap[0] = static_cast<char>(std::toupper(static_cast<unsigned char>(cap[0])));
    if (cap != w) tokens.push_back(cap);
  }
  std::sort(tokens.begin() + 1, tokens.end());
  tokens.erase(std::unique(tokens.begin() + 1, tokens.end()), tokens.end());
  Vocabulary vocab(tokens);
  std::mt19937_64 rng(seed);
  const testing::RandomSpec spec{2, 6, 5, static_cast<int>(vocab.size()), 0.6};
  auto w = testing::random_weights(spec, rng);
  if (favour_plural != 0.0) w.decoder_bias[*vocab.find("laugh")] += favour_plural;
  return {testing::config_of(spec), std::move(w), std::move(vocab)};
}

std::vector<EvalRecord> evaluate_template(const LanguageModel& m, const std::string& key, unsigned threads = 1) {
  const auto cases = generate_cases(builtin(key), Lexicon::builtin(), {}, m.vocab);
  EvalOptions opts;
  opts.threads = threads;
  return evaluate_cases(m, cases, opts);
}

}  // namespace

TEST_CASE("prediction accuracy counts positive delta_y") {
  std::vector<EvalRecord> r{with_relevance({}, 1.0), with_relevance({}, 0.5), with_relevance({}, -1.0),
                            with_relevance({}, 2.0)};
  REQUIRE(prediction_accuracy(r) == 75.0);
  r[2] = with_relevance({}, 0.1);
  REQUIRE(prediction_accuracy(r) == 100.0);
  REQUIRE_THROWS_AS(prediction_accuracy(std::vector<EvalRecord>{}), std::invalid_argument);
}

TEST_CASE("pointing game uses absolute relevance and strict maxima") {
  const auto win = with_relevance({{Tag::N1, -3.0}, {Tag::N2, 2.0}, {Tag::Det1, 1.0}});
  REQUIRE(top_tag(win) == Tag::N1);
  const auto tie = with_relevance({{Tag::N1, 2.0}, {Tag::V, 2.0}});
  REQUIRE_FALSE(top_tag(tie).has_value());
  const std::vector<EvalRecord> r{win, tie};
  REQUIRE(pointing_game_accuracy(r) == 50.0);
  const std::vector<EvalRecord> missing{with_relevance({{Tag::N2, 1.0}})};
  REQUIRE_THROWS_AS(pointing_game_accuracy(missing), std::invalid_argument);
}

TEST_CASE("N2 rate counts N2 wins and needs an N2 tag") {
  std::vector<EvalRecord> r{with_relevance({{Tag::N1, 1.0}, {Tag::N2, 3.0}}),
                            with_relevance({{Tag::N1, 4.0}, {Tag::N2, 3.0}}),
                            with_relevance({{Tag::N1, 1.0}, {Tag::N2, -0.5}}),
                            with_relevance({{Tag::N1, 2.0}, {Tag::N2, 2.0}})};
  REQUIRE(n2_top_rate(r) == 25.0);
  const std::vector<EvalRecord> simple{with_relevance({{Tag::Det1, 0.1}, {Tag::N1, 1.0}})};
  REQUIRE_THROWS_AS(n2_top_rate(simple), std::invalid_argument);
}

TEST_CASE("twelve-record fixture matches hand counts") {
  const auto records = testing::harness_fixture();
  const auto want = testing::harness_counts();
  REQUIRE(records.size() == 12);
  REQUIRE(prediction_accuracy(records) == want.accuracy);
  REQUIRE(pointing_game_accuracy(records) == want.pointing_game);
  REQUIRE(n2_top_rate(records) == want.n2_rate);
  REQUIRE_FALSE(top_tag(records[1]).has_value());
  const auto b = top_tag_breakdown(records);
  REQUIRE(b.tie_rate == 100.0 * want.ties / 12.0);
  REQUIRE(b.win_rate.at(Tag::Det1) == 100.0 / 12.0);
  REQUIRE(b.win_rate.at(Tag::P) == 0.0);
}

TEST_CASE("splits are disjoint and exhaustive") {
  const auto records = testing::harness_fixture();
  const auto want = testing::harness_counts();
  const auto by_correct = split_by_correctness(records);
  REQUIRE(by_correct.matching.size() == static_cast<std::size_t>(want.correct));
  REQUIRE(by_correct.rest.size() == 12 - static_cast<std::size_t>(want.correct));
  for (const auto& r : by_correct.matching) REQUIRE(r.correct);
  for (const auto& r : by_correct.rest) REQUIRE_FALSE(r.correct);

  const auto by_number = split_by_target_number(records);
  REQUIRE(by_number.matching.size() == static_cast<std::size_t>(want.singular));
  REQUIRE(by_number.matching.size() + by_number.rest.size() == records.size());

  const std::vector<std::string> words{"laugh"};
  const auto by_word = split_by_words(records, words);
  REQUIRE(by_word.matching.size() == 12);
  const std::vector<std::string> none{"zzz"};
  REQUIRE(split_by_words(records, none).rest.size() == 12);
}

TEST_CASE("ten records with seven correct split seven and three") {
  std::vector<EvalRecord> r;
  for (int i = 0; i < 10; ++i) r.push_back(with_relevance({}, i < 7 ? 1.0 : -1.0));
  const auto s = split_by_correctness(r);
  REQUIRE(s.matching.size() == 7);
  REQUIRE(s.rest.size() == 3);
}

TEST_CASE("predicted form shares among incorrect predictions") {
  auto records = testing::harness_fixture();
  const std::vector<std::string> forms{"laugh", "laughs"};
  const auto shares = predicted_form_shares(records, forms);
  // Incorrect: records 3 (sg -> laugh), 4 (pl -> laughs), 7 (sg -> laugh).
  REQUIRE_THAT(shares.at("laugh"), WithinAbs(200.0 / 3.0, 1e-12));
  REQUIRE_THAT(shares.at("laughs"), WithinAbs(100.0 / 3.0, 1e-12));
  REQUIRE(shares.at("other") == 0.0);
}

TEST_CASE("stub model favouring the correct form") {
  const auto m = lexicon_model(1, 50.0);
  TestCase c;
  c.template_name = "Simple";
  c.preamble = {"The", "senators"};
  c.spans = {{Tag::Det1, {0}}, {Tag::N1, {1}}};
  c.target_correct = "laugh";
  c.target_incorrect = "laughs";
  c.n1_number = Number::Plural;
  const auto r = evaluate_case(m, c);
  REQUIRE(r.correct);
  REQUIRE(r.delta_y > 0.0);
  REQUIRE(r.predicted_form == "laugh");
  REQUIRE(r.delta_y == r.logit_correct - r.logit_incorrect);
  REQUIRE(r.tag_relevance.size() == 2);
  double sum = 0.0;
  for (const auto& [t, v] : r.tag_relevance) sum += v;
  REQUIRE_THAT(sum + r.ledger.total(), WithinAbs(r.delta_y, 1e-9 * std::max(1.0, std::abs(r.delta_y))));
}

TEST_CASE("unknown tokens are rejected unless permitted") {
  const auto m = lexicon_model(2);
  TestCase c;
  c.preamble = {"The", "dogs"};
  c.spans = {{Tag::Det1, {0}}, {Tag::N1, {1}}};
  c.target_correct = "laugh";
  c.target_incorrect = "laughs";
  REQUIRE_THROWS_WITH(evaluate_case(m, c), Catch::Matchers::ContainsSubstring("dogs"));
  EvalOptions opts;
  opts.allow_unknown = true;
  REQUIRE_NOTHROW(evaluate_case(m, c, opts));
  c.target_correct = "bark";
  REQUIRE_THROWS_AS(evaluate_case(m, c, opts), FormatError);
}

TEST_CASE("evaluation is order-preserving across threads") {
  const auto m = lexicon_model(3);
  const auto one = evaluate_template(m, "PP", 1);
  const auto four = evaluate_template(m, "PP", 4);
  REQUIRE(one.size() == four.size());
  for (std::size_t i = 0; i < one.size(); ++i) {
    REQUIRE(one[i].test_case.preamble == four[i].test_case.preamble);
    REQUIRE(one[i].delta_y == four[i].delta_y);
    REQUIRE(one[i].tag_relevance == four[i].tag_relevance);
  }
}

TEST_CASE("evaluation errors propagate from worker threads") {
  const auto m = lexicon_model(4);
  auto cases = generate_cases(builtin("Simple"), Lexicon::builtin(), {}, m.vocab);
  cases[17].preamble.push_back("xyzzy");
  EvalOptions opts;
  opts.threads = 3;
  REQUIRE_THROWS_AS(evaluate_cases(m, cases, opts), FormatError);
}

TEST_CASE("tag relevance keys equal span keys and correctness follows delta_y") {
  const auto m = lexicon_model(5);
  for (const auto& key : {"SC", "LVP", "ORC-NoThat"}) {
    for (const auto& r : evaluate_template(m, key)) {
      REQUIRE(r.correct == (r.delta_y > 0.0));
      REQUIRE(r.tag_relevance.size() == r.test_case.spans.size());
      for (const auto& [tag, positions] : r.test_case.spans) REQUIRE(r.tag_relevance.count(tag) == 1);
    }
  }
}

TEST_CASE("top-tag shares sum to one hundred") {
  const auto m = lexicon_model(6);
  for (const auto& t : builtin_templates()) {
    const auto records = evaluate_template(m, t.key());
    const auto b = top_tag_breakdown(records);
    double total = b.tie_rate;
    for (const auto& [tag, rate] : b.win_rate) total += rate;
    REQUIRE_THAT(total, WithinAbs(100.0, 1e-9));
    REQUIRE(b.win_rate.at(Tag::N1) == pointing_game_accuracy(records));
  }
}

TEST_CASE("swapping targets negates delta_y") {
  const auto m = lexicon_model(7);
  auto cases = generate_cases(builtin("SRC"), Lexicon::builtin(), {}, m.vocab);
  const auto base = evaluate_cases(m, cases);
  for (auto& c : cases) std::swap(c.target_correct, c.target_incorrect);
  const auto swapped = evaluate_cases(m, cases);
  bool any_zero = false;
  for (std::size_t i = 0; i < base.size(); ++i) {
    REQUIRE(swapped[i].delta_y == -base[i].delta_y);
    any_zero = any_zero || base[i].delta_y == 0.0;
  }
  REQUIRE_FALSE(any_zero);
  REQUIRE_THAT(prediction_accuracy(swapped), WithinAbs(100.0 - prediction_accuracy(base), 1e-9));
}
