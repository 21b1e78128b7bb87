// Copyright 2026 The lrpsva Authors
// SPDX-License-Identifier: Apache-2.0

#include <algorithm>
#include <cctype>
#include <set>
#include <stdexcept>

#include "lrpsva/error.hpp"
#include "lrpsva/tse.hpp"

namespace lrpsva::tse {
namespace {

// One choice per slot plus the target verb, as indices into lexicon lists.
// Noun choices encode noun_index * 2 + number.
struct Assignment {
  std::vector<std::size_t> slot_choice;
  std::size_t target = 0;
};

std::size_t option_count(Tag tag, const Template& tpl, const Lexicon& lex) {
  switch (tag) {
    case Tag::Det1:
    case Tag::Det2: return lex.determiners.size();
    case Tag::N1:
    case Tag::N2: return 2 * lex.nouns.size();
    case Tag::Comp: return lex.complementizers.size();
    case Tag::V: return lex.verbs_for(tpl.v_source).size();
    case Tag::P: return lex.prepositions.size();
    case Tag::Conj: return lex.conjunctions.size();
    case Tag::CompVP: return 1;  // follows V
  }
  return 0;
}

const char* list_name(Tag tag, const Template& tpl) {
  switch (tag) {
    case Tag::Det1:
    case Tag::Det2: return "determiners";
    case Tag::N1:
    case Tag::N2: return "nouns";
    case Tag::Comp: return "complementizers";
    case Tag::V: return verb_source_name(tpl.v_source);
    case Tag::P: return "prepositions";
    case Tag::Conj: return "conjunctions";
    case Tag::CompVP: return "lvp_verbs";
  }
  return "?";
}

Number noun_number(std::size_t choice) { return choice % 2 == 0 ? Number::Singular : Number::Plural; }

const std::string& form(const VerbEntry& v, Number n) { return n == Number::Singular ? v.singular : v.plural; }
const std::string& form(const NounEntry& e, Number n) { return n == Number::Singular ? e.singular : e.plural; }

class Generator {
 public:
  Generator(const Template& tpl, const Lexicon& lex, const GenerationOptions& opts)
      : tpl_(tpl), lex_(lex), opts_(opts) {}

  std::vector<TestCase> run() {
    tpl_.validate();
    for (Tag t : tpl_.slots) {
      if (option_count(t, tpl_, lex_) == 0) {
        throw std::invalid_argument("template '" + tpl_.label() + "' needs a nonempty " +
                                    list_name(t, tpl_) + " list");
      }
    }
    if (lex_.verbs_for(tpl_.target_source).empty()) {
      throw std::invalid_argument("template '" + tpl_.label() + "' needs a nonempty " +
                                  std::string(verb_source_name(tpl_.target_source)) + " list");
    }
    Assignment a;
    a.slot_choice.assign(tpl_.slots.size(), 0);
    enumerate(a, 0);
    return std::move(cases_);
  }

 private:
  std::optional<std::size_t> choice_of(const Assignment& a, Tag tag) const {
    for (std::size_t i = 0; i < tpl_.slots.size(); ++i) {
      if (tpl_.slots[i] == tag) return a.slot_choice[i];
    }
    return std::nullopt;
  }

  void enumerate(Assignment& a, std::size_t slot) {
    if (slot == tpl_.slots.size()) {
      const auto& targets = lex_.verbs_for(tpl_.target_source);
      for (a.target = 0; a.target < targets.size(); ++a.target) emit(a);
      return;
    }
    const std::size_t n = option_count(tpl_.slots[slot], tpl_, lex_);
    for (std::size_t c = 0; c < n; ++c) {
      a.slot_choice[slot] = c;
      enumerate(a, slot + 1);
    }
  }

  void emit(const Assignment& a) {
    const auto n1 = *choice_of(a, Tag::N1);
    const auto n2 = choice_of(a, Tag::N2);
    const auto v = choice_of(a, Tag::V);
    if (n2 && lex_.nouns[*n2 / 2].singular == lex_.nouns[n1 / 2].singular) return;

    const auto& target = lex_.verbs_for(tpl_.target_source)[a.target];
    if (v && tpl_.v_source == tpl_.target_source &&
        lex_.verbs_for(tpl_.v_source)[*v].singular == target.singular) {
      return;
    }

    TestCase tc;
    tc.template_name = tpl_.label();
    tc.n1_number = noun_number(n1);
    auto append = [&](Tag tag, const std::string& phrase) {
      for (auto& w : split_whitespace(phrase)) {
        tc.spans[tag].push_back(tc.preamble.size());
        tc.preamble.push_back(std::move(w));
      }
    };
    for (std::size_t i = 0; i < tpl_.slots.size(); ++i) {
      const Tag tag = tpl_.slots[i];
      const std::size_t c = a.slot_choice[i];
      switch (tag) {
        case Tag::Det1:
        case Tag::Det2: append(tag, lex_.determiners[c]); break;
        case Tag::N1:
        case Tag::N2: append(tag, form(lex_.nouns[c / 2], noun_number(c))); break;
        case Tag::Comp: append(tag, lex_.complementizers[c]); break;
        case Tag::P: append(tag, lex_.prepositions[c]); break;
        case Tag::Conj: append(tag, lex_.conjunctions[c]); break;
        case Tag::V: {
          const auto agree = *choice_of(a, tpl_.v_agrees_with);
          append(tag, form(lex_.verbs_for(tpl_.v_source)[c], noun_number(agree)));
          break;
        }
        case Tag::CompVP: append(tag, lex_.verbs_for(tpl_.v_source)[*v].complement); break;
      }
    }
    tc.target_correct = form(target, tc.n1_number);
    tc.target_incorrect = form(target, tc.n1_number == Number::Singular ? Number::Plural : Number::Singular);

    if (opts_.capitalize && !tc.preamble.empty() && !tc.preamble.front().empty()) {
      auto& first = tc.preamble.front()[0];
      first = static_cast<char>(std::toupper(static_cast<unsigned char>(first)));
    }
    for (const auto& w : opts_.exclude_words) {
      if (tc.contains_word(w)) return;
    }
    if (opts_.dedupe) {
      std::string key = tc.preamble_text() + '\t' + tc.target_correct + '\t' + tc.target_incorrect;
      if (!seen_.insert(std::move(key)).second) return;
    }
    cases_.push_back(std::move(tc));
  }

  const Template& tpl_;
  const Lexicon& lex_;
  const GenerationOptions& opts_;
  std::set<std::string> seen_;
  std::vector<TestCase> cases_;
};

}  // namespace

std::string TestCase::preamble_text() const {
  std::string s;
  for (const auto& w : preamble) {
    if (!s.empty()) s += ' ';
    s += w;
  }
  return s;
}

bool TestCase::contains_word(std::string_view word) const {
  return word == target_correct || word == target_incorrect ||
         std::find(preamble.begin(), preamble.end(), word) != preamble.end();
}

std::vector<TestCase> generate_cases(const Template& tpl, const Lexicon& lexicon,
                                     const GenerationOptions& options) {
  return Generator(tpl, lexicon, options).run();
}

std::vector<TestCase> generate_cases(const Template& tpl, const Lexicon& lexicon,
                                     const GenerationOptions& options, const Vocabulary& vocab) {
  auto cases = generate_cases(tpl, lexicon, options);
  std::set<std::string> missing;
  auto check = [&](const std::string& w) {
    if (!vocab.contains(w)) missing.insert(w);
  };
  for (const auto& tc : cases) {
    for (const auto& w : tc.preamble) check(w);
    check(tc.target_correct);
    check(tc.target_incorrect);
  }
  if (!missing.empty()) {
    std::string msg = "template '" + tpl.label() + "': words missing from the vocabulary:";
    for (const auto& w : missing) msg += " " + w;
    throw FormatError(msg);
  }
  return cases;
}

}  // namespace lrpsva::tse
