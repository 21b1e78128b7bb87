// Copyright 2026 The lrpsva Authors
// SPDX-License-Identifier: Apache-2.0

#include <iostream>

#include <CLI11.hpp>

#include "lrpsva/cli.hpp"

int main(int argc, char** argv) {
  using namespace lrpsva::cli;

  CLI::App app{"LRP attribution and subject-verb agreement evaluation for LSTM language models"};
  app.require_subcommand(1);

  EvalCommand eval;
  std::string templates = "all";
  std::string exclude;
  std::string lexicon, template_file, frequency;
  auto* eval_cmd = app.add_subcommand("eval", "Evaluate agreement templates and write reports");
  eval_cmd->add_option("--weights", eval.weights, "Weight container")->required()->check(CLI::ExistingFile);
  eval_cmd->add_option("--vocab", eval.vocab, "Vocabulary file")->required()->check(CLI::ExistingFile);
  eval_cmd->add_option("--lexicon", lexicon, "Lexicon JSON (built-in lexicon when omitted)")
      ->check(CLI::ExistingFile);
  eval_cmd->add_option("--template-file", template_file, "Extra template definitions (JSON)")
      ->check(CLI::ExistingFile);
  eval_cmd->add_option("--templates", templates, "Comma-separated template keys, or all")
      ->capture_default_str();
  eval_cmd->add_option("--epsilon", eval.epsilon, "LRP stabilizer")->capture_default_str()->check(
      CLI::NonNegativeNumber);
  eval_cmd->add_option("--capitalize", eval.capitalize, "Capitalize the first word of every preamble")
      ->capture_default_str();
  eval_cmd->add_option("--dedupe", eval.dedupe, "Drop duplicate test cases")->capture_default_str();
  eval_cmd->add_option("--exclude-words", exclude, "Drop cases containing any of these words");
  eval_cmd->add_option("--frequency", frequency, "token,count CSV for the frequency analysis")
      ->check(CLI::ExistingFile);
  eval_cmd->add_option("--threads", eval.threads, "Worker threads")->capture_default_str()->check(
      CLI::PositiveNumber);
  eval_cmd->add_option("--out", eval.out_dir, "Output directory")->required();

  AttributeCommand attr;
  std::string json_out;
  auto* attr_cmd = app.add_subcommand("attribute", "Per-token relevance for one sentence and verb pair");
  attr_cmd->add_option("--weights", attr.weights, "Weight container")->required()->check(CLI::ExistingFile);
  attr_cmd->add_option("--vocab", attr.vocab, "Vocabulary file")->required()->check(CLI::ExistingFile);
  attr_cmd->add_option("--sentence", attr.sentence, "Pre-tokenized preamble")->required();
  attr_cmd->add_option("--pair", attr.pair, "correct,incorrect target words")->required();
  attr_cmd->add_option("--epsilon", attr.epsilon, "LRP stabilizer")->capture_default_str()->check(
      CLI::NonNegativeNumber);
  attr_cmd->add_option("--json", json_out, "Also write the attribution as JSON");

  FixtureCommand fix;
  auto* fix_cmd = app.add_subcommand("check-fixtures", "Compare forward logits with exported reference logits");
  fix_cmd->add_option("--weights", fix.weights, "Weight container")->required()->check(CLI::ExistingFile);
  fix_cmd->add_option("--vocab", fix.vocab, "Vocabulary file")->required()->check(CLI::ExistingFile);
  fix_cmd->add_option("--fixtures", fix.fixtures, "Reference fixture JSON")->required()->check(CLI::ExistingFile);
  fix_cmd->add_option("--tolerance", fix.tolerance, "Absolute tolerance per logit")->capture_default_str();
  fix_cmd->add_option("--min-sentences", fix.min_sentences, "Sentences that must be checked")
      ->capture_default_str();

  CLI11_PARSE(app, argc, argv);

  if (*eval_cmd) {
    eval.templates = split_list(templates);
    eval.exclude_words = split_list(exclude);
    if (!lexicon.empty()) eval.lexicon = lexicon;
    if (!template_file.empty()) eval.template_file = template_file;
    if (!frequency.empty()) eval.frequency_table = frequency;
    return run_eval(eval, std::cout, std::cerr);
  }
  if (*fix_cmd) return run_check_fixtures(fix, std::cout, std::cerr);
  if (!json_out.empty()) attr.json_out = json_out;
  return run_attribute(attr, std::cout, std::cerr);
}
