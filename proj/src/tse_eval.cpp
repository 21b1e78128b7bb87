// Copyright 2026 The lrpsva Authors
// SPDX-License-Identifier: Apache-2.0

#include <algorithm>
#include <atomic>
#include <cmath>
#include <exception>
#include <mutex>
#include <stdexcept>
#include <thread>

#include "lrpsva/error.hpp"
#include "lrpsva/lstm.hpp"
#include "lrpsva/tse.hpp"

namespace lrpsva::tse {
namespace {

void require_nonempty(std::span<const EvalRecord> records, const char* what) {
  if (records.empty()) throw std::invalid_argument(std::string(what) + ": no records");
}

TokenId target_id(const Vocabulary& vocab, const std::string& word) {
  auto id = vocab.find(word);
  if (!id) throw FormatError("target verb '" + word + "' is not in the vocabulary");
  return *id;
}

}  // namespace

EvalRecord evaluate_case(const LanguageModel& model, const TestCase& test_case, const EvalOptions& options) {
  std::vector<TokenId> ids;
  ids.reserve(test_case.preamble.size());
  std::vector<std::string> unknown;
  for (const auto& w : test_case.preamble) {
    auto id = model.vocab.find(w);
    if (!id) unknown.push_back(w);
    ids.push_back(id.value_or(model.vocab.unk_id()));
  }
  if (!unknown.empty() && !options.allow_unknown) {
    std::string msg = "preamble '" + test_case.preamble_text() + "' has unknown tokens:";
    for (const auto& w : unknown) msg += " " + w;
    throw FormatError(msg);
  }
  const TokenId pos = target_id(model.vocab, test_case.target_correct);
  const TokenId neg = target_id(model.vocab, test_case.target_incorrect);

  const auto trace = forward(model.weights, ids);
  EvalRecord rec;
  rec.test_case = test_case;
  rec.delta_y = score_pair(trace.logits, pos, neg);
  rec.logit_correct = trace.logits[pos];
  rec.logit_incorrect = trace.logits[neg];
  rec.correct = is_correct_prediction(rec.delta_y);
  rec.predicted_form = rec.correct ? test_case.target_correct : test_case.target_incorrect;

  const auto attribution =
      lrp::propagate(model.weights, trace, lrp::init_relevance(trace.logits, pos, neg), {options.epsilon});
  rec.tag_relevance = lrp::span_relevance(attribution, test_case.spans);
  rec.ledger = attribution.ledger;
  return rec;
}

std::vector<EvalRecord> evaluate_cases(const LanguageModel& model, std::span<const TestCase> cases,
                                       const EvalOptions& options) {
  std::vector<EvalRecord> out(cases.size());
  const std::size_t workers = std::clamp<std::size_t>(options.threads, 1, std::max<std::size_t>(1, cases.size()));
  std::atomic<std::size_t> next{0};
  std::exception_ptr failure;
  std::mutex failure_mutex;

  auto work = [&] {
    for (std::size_t i = next++; i < cases.size(); i = next++) {
      try {
        out[i] = evaluate_case(model, cases[i], options);
      } catch (...) {
        std::lock_guard lock(failure_mutex);
        if (!failure) failure = std::current_exception();
        next = cases.size();
      }
    }
  };

  if (workers == 1) {
    work();
  } else {
    std::vector<std::jthread> pool;
    for (std::size_t w = 0; w < workers; ++w) pool.emplace_back(work);
  }
  if (failure) std::rethrow_exception(failure);
  return out;
}

double prediction_accuracy(std::span<const EvalRecord> records) {
  require_nonempty(records, "prediction_accuracy");
  const auto hits = std::count_if(records.begin(), records.end(), [](const EvalRecord& r) { return r.correct; });
  return 100.0 * static_cast<double>(hits) / static_cast<double>(records.size());
}

std::optional<Tag> top_tag(const EvalRecord& record) {
  std::optional<Tag> best;
  double best_abs = -1.0;
  bool tied = false;
  for (const auto& [tag, value] : record.tag_relevance) {
    const double a = std::abs(value);
    if (a > best_abs) {
      best = tag;
      best_abs = a;
      tied = false;
    } else if (a == best_abs) {
      tied = true;
    }
  }
  return tied ? std::nullopt : best;
}

double top_tag_rate(std::span<const EvalRecord> records, Tag tag) {
  require_nonempty(records, "top_tag_rate");
  std::size_t hits = 0;
  for (const auto& r : records) {
    if (!r.tag_relevance.contains(tag)) {
      throw std::invalid_argument(std::string("record '") + r.test_case.preamble_text() + "' has no " +
                                  tag_name(tag) + " relevance");
    }
    if (top_tag(r) == tag) ++hits;
  }
  return 100.0 * static_cast<double>(hits) / static_cast<double>(records.size());
}

double pointing_game_accuracy(std::span<const EvalRecord> records) { return top_tag_rate(records, Tag::N1); }

double n2_top_rate(std::span<const EvalRecord> records) { return top_tag_rate(records, Tag::N2); }

TopTagBreakdown top_tag_breakdown(std::span<const EvalRecord> records) {
  require_nonempty(records, "top_tag_breakdown");
  TopTagBreakdown out;
  std::size_t ties = 0;
  std::map<Tag, std::size_t> wins;
  for (const auto& r : records) {
    for (const auto& [tag, value] : r.tag_relevance) wins.try_emplace(tag, 0);
    if (auto t = top_tag(r)) {
      ++wins[*t];
    } else {
      ++ties;
    }
  }
  const double n = static_cast<double>(records.size());
  for (const auto& [tag, count] : wins) out.win_rate[tag] = 100.0 * static_cast<double>(count) / n;
  out.tie_rate = 100.0 * static_cast<double>(ties) / n;
  return out;
}

RecordSplit split_by_correctness(std::span<const EvalRecord> records) {
  RecordSplit s;
  for (const auto& r : records) (r.correct ? s.matching : s.rest).push_back(r);
  return s;
}

RecordSplit split_by_target_number(std::span<const EvalRecord> records) {
  RecordSplit s;
  for (const auto& r : records) (r.test_case.n1_number == Number::Singular ? s.matching : s.rest).push_back(r);
  return s;
}

RecordSplit split_by_words(std::span<const EvalRecord> records, std::span<const std::string> words) {
  RecordSplit s;
  for (const auto& r : records) {
    const bool hit =
        std::any_of(words.begin(), words.end(), [&](const std::string& w) { return r.test_case.contains_word(w); });
    (hit ? s.matching : s.rest).push_back(r);
  }
  return s;
}

std::map<std::string, double> predicted_form_shares(std::span<const EvalRecord> records,
                                                    std::span<const std::string> forms) {
  std::map<std::string, double> out;
  for (const auto& f : forms) out[f] = 0.0;
  out["other"] = 0.0;
  std::size_t wrong = 0;
  for (const auto& r : records) {
    if (r.correct) continue;
    ++wrong;
    auto it = std::find(forms.begin(), forms.end(), r.predicted_form);
    out[it == forms.end() ? std::string("other") : *it] += 1.0;
  }
  if (wrong > 0) {
    for (auto& [form, v] : out) v = 100.0 * v / static_cast<double>(wrong);
  }
  return out;
}

}  // namespace lrpsva::tse
