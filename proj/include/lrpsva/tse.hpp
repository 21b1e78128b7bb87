// Copyright 2026 The lrpsva Authors
// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <array>
#include <cstddef>
#include <filesystem>
#include <map>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include <nlohmann/json.hpp>

#include "lrpsva/lrp.hpp"
#include "lrpsva/weights.hpp"

namespace lrpsva::tse {

enum class Tag { Det1, N1, Det2, N2, Comp, V, P, Conj, CompVP };

inline constexpr std::array<Tag, 9> kAllTags = {Tag::Det1, Tag::N1, Tag::Det2, Tag::N2, Tag::Comp,
                                                Tag::V,    Tag::P,  Tag::Conj, Tag::CompVP};

const char* tag_name(Tag tag);
/// Throws std::invalid_argument for an unknown name.
Tag parse_tag(std::string_view name);

enum class Number { Singular, Plural };
const char* number_name(Number number);

/// Which lexicon list a verb slot draws from.
enum class VerbSource { Intransitive, Transitive, Sentential, Coordinated };

const char* verb_source_name(VerbSource source);
VerbSource parse_verb_source(std::string_view name);

/// A POS-slot schema. `omit_comp` marks the "No That" variant of a template
/// whose complementizer is optional; such templates carry no Comp slot.
struct Template {
  std::string name;
  bool omit_comp = false;
  std::vector<Tag> slots;
  VerbSource target_source = VerbSource::Intransitive;
  VerbSource v_source = VerbSource::Transitive;
  Tag v_agrees_with = Tag::N1;

  /// "ORC (No That)" style display label.
  std::string label() const;
  /// "ORC-NoThat" style command-line key.
  std::string key() const;
  std::size_t n1_slot() const;
  bool has_slot(Tag tag) const;

  /// Throws std::invalid_argument when the slot list is inconsistent.
  void validate() const;
};

/// The ten template columns, in reporting order: Simple, IORC (No That),
/// IORC, SC, PP, SRC, ORC (No That), ORC, SVP, LVP.
const std::vector<Template>& builtin_templates();

/// Reads extra templates from JSON:
/// {"templates": [{"name", "slots": [tag...], "target_source", "v_source",
///   "v_agrees_with"}]}. The last three keys are optional.
std::vector<Template> load_template_overrides(const std::filesystem::path& path);

/// Resolves keys (as printed by Template::key, case-insensitive, or "all")
/// against the built-in templates plus `extra`. Throws std::invalid_argument
/// listing unknown keys.
std::vector<Template> resolve_templates(std::span<const std::string> keys,
                                        std::span<const Template> extra = {});

struct NounEntry {
  std::string singular;
  std::string plural;
};

/// `complement` is only used by coordinated (LVP) verbs.
struct VerbEntry {
  std::string singular;
  std::string plural;
  std::string complement;
};

struct Lexicon {
  std::vector<NounEntry> nouns;
  std::vector<VerbEntry> verbs;  // intransitive
  std::vector<VerbEntry> transitive_verbs;
  std::vector<VerbEntry> sentential_verbs;
  std::vector<VerbEntry> lvp_verbs;
  std::vector<std::string> determiners;
  std::vector<std::string> prepositions;
  std::vector<std::string> complementizers;
  std::vector<std::string> conjunctions;

  /// Transitive and sentential lists fall back to `verbs` when empty.
  const std::vector<VerbEntry>& verbs_for(VerbSource source) const;

  /// Every distinct whitespace-separated token in the lexicon.
  std::vector<std::string> words() const;

  /// Throws std::invalid_argument when nouns or verbs are missing.
  void validate() const;

  static Lexicon from_json(const nlohmann::json& j);
  nlohmann::json to_json() const;
  static Lexicon load(const std::filesystem::path& path);

  /// Small desk-scale lexicon: five noun pairs, five verb pairs and the
  /// coordinated-VP pairs with their complements.
  static Lexicon builtin();
};

using SpanMap = std::map<Tag, std::vector<std::size_t>>;

struct TestCase {
  std::string template_name;  // Template::label()
  std::vector<std::string> preamble;
  SpanMap spans;
  std::string target_correct;
  std::string target_incorrect;
  Number n1_number = Number::Singular;

  std::string preamble_text() const;
  /// True when `word` occurs in the preamble or is one of the targets.
  bool contains_word(std::string_view word) const;
};

struct GenerationOptions {
  bool capitalize = true;
  bool dedupe = true;
  std::vector<std::string> exclude_words;
};

/// Cartesian instantiation of the template's slots over the lexicon, both
/// numbers for every noun slot. N2 never reuses N1's noun; a target verb
/// never reuses the entry chosen for V when both come from the same list.
std::vector<TestCase> generate_cases(const Template& tpl, const Lexicon& lexicon,
                                     const GenerationOptions& options);

/// As above, then checks every token against `vocab`. Throws FormatError
/// listing all missing words.
std::vector<TestCase> generate_cases(const Template& tpl, const Lexicon& lexicon,
                                     const GenerationOptions& options, const Vocabulary& vocab);

struct EvalOptions {
  double epsilon = lrp::kDefaultEpsilon;
  bool allow_unknown = false;
  unsigned threads = 1;
};

struct EvalRecord {
  TestCase test_case;
  bool correct = false;
  double delta_y = 0.0;
  double logit_correct = 0.0;
  double logit_incorrect = 0.0;
  std::map<Tag, double> tag_relevance;
  std::string predicted_form;
  lrp::ConservationLedger ledger;
};

EvalRecord evaluate_case(const LanguageModel& model, const TestCase& test_case,
                         const EvalOptions& options = {});

/// Evaluates independently on up to `options.threads` workers; the output
/// order matches `cases`.
std::vector<EvalRecord> evaluate_cases(const LanguageModel& model, std::span<const TestCase> cases,
                                       const EvalOptions& options = {});

// Metrics. All percentages are in [0, 100] and all throw
// std::invalid_argument on an empty record set.

double prediction_accuracy(std::span<const EvalRecord> records);

/// The tag whose |relevance| is strictly greater than every other tag's, or
/// nullopt on a tie for the maximum.
std::optional<Tag> top_tag(const EvalRecord& record);

/// Share of records whose top tag is `tag`; throws std::invalid_argument if
/// some record has no relevance for `tag`.
double top_tag_rate(std::span<const EvalRecord> records, Tag tag);

double pointing_game_accuracy(std::span<const EvalRecord> records);
double n2_top_rate(std::span<const EvalRecord> records);

struct TopTagBreakdown {
  std::map<Tag, double> win_rate;
  double tie_rate = 0.0;
};

TopTagBreakdown top_tag_breakdown(std::span<const EvalRecord> records);

struct RecordSplit {
  std::vector<EvalRecord> matching;
  std::vector<EvalRecord> rest;
};

/// matching = correct predictions, rest = incorrect.
RecordSplit split_by_correctness(std::span<const EvalRecord> records);
/// matching = singular targets, rest = plural.
RecordSplit split_by_target_number(std::span<const EvalRecord> records);
/// matching = records containing any of `words`.
RecordSplit split_by_words(std::span<const EvalRecord> records, std::span<const std::string> words);

/// Among incorrect predictions, the percentage whose predicted form is each
/// of `forms`; everything else is reported under "other".
std::map<std::string, double> predicted_form_shares(std::span<const EvalRecord> records,
                                                    std::span<const std::string> forms);

}  // namespace lrpsva::tse
