// Copyright 2026 The lrpsva Authors
// SPDX-License-Identifier: Apache-2.0

#include <fstream>
#include <set>
#include <stdexcept>

#include "lrpsva/error.hpp"
#include "lrpsva/tse.hpp"

namespace lrpsva::tse {
namespace {

using nlohmann::json;

std::vector<VerbEntry> verb_list(const json& j, const char* key, bool with_complement) {
  std::vector<VerbEntry> out;
  if (!j.contains(key)) return out;
  for (const auto& item : j.at(key)) {
    const std::size_t want = with_complement ? 3 : 2;
    if (!item.is_array() || item.size() != want) {
      throw FormatError(std::string("lexicon: every entry of '") + key + "' must be an array of " +
                        std::to_string(want) + " strings");
    }
    VerbEntry v{item[0].get<std::string>(), item[1].get<std::string>(), ""};
    if (with_complement) v.complement = item[2].get<std::string>();
    out.push_back(std::move(v));
  }
  return out;
}

std::vector<std::string> word_list(const json& j, const char* key) {
  if (!j.contains(key)) return {};
  return j.at(key).get<std::vector<std::string>>();
}

json verbs_json(const std::vector<VerbEntry>& verbs, bool with_complement) {
  json out = json::array();
  for (const auto& v : verbs) {
    if (with_complement) {
      out.push_back({v.singular, v.plural, v.complement});
    } else {
      out.push_back({v.singular, v.plural});
    }
  }
  return out;
}

}  // namespace

const std::vector<VerbEntry>& Lexicon::verbs_for(VerbSource source) const {
  switch (source) {
    case VerbSource::Intransitive: return verbs;
    case VerbSource::Transitive: return transitive_verbs.empty() ? verbs : transitive_verbs;
    case VerbSource::Sentential: return sentential_verbs.empty() ? verbs : sentential_verbs;
    case VerbSource::Coordinated: return lvp_verbs;
  }
  return verbs;
}

std::vector<std::string> Lexicon::words() const {
  std::set<std::string> all;
  auto add = [&](const std::string& phrase) {
    for (auto& w : split_whitespace(phrase)) all.insert(std::move(w));
  };
  for (const auto& n : nouns) {
    add(n.singular);
    add(n.plural);
  }
  for (const auto* list : {&verbs, &transitive_verbs, &sentential_verbs, &lvp_verbs}) {
    for (const auto& v : *list) {
      add(v.singular);
      add(v.plural);
      add(v.complement);
    }
  }
  for (const auto* list : {&determiners, &prepositions, &complementizers, &conjunctions}) {
    for (const auto& w : *list) add(w);
  }
  return {all.begin(), all.end()};
}

void Lexicon::validate() const {
  if (nouns.empty()) throw std::invalid_argument("lexicon: no noun pairs");
  if (verbs.empty()) throw std::invalid_argument("lexicon: no verb pairs");
  for (const auto& v : lvp_verbs) {
    if (split_whitespace(v.complement).empty()) {
      throw std::invalid_argument("lexicon: lvp verb '" + v.singular + "' has no complement");
    }
  }
}

Lexicon Lexicon::from_json(const json& j) {
  Lexicon lex;
  try {
    for (const auto& item : j.at("nouns")) {
      if (!item.is_array() || item.size() != 2) {
        throw FormatError("lexicon: every noun entry must be [singular, plural]");
      }
      lex.nouns.push_back({item[0].get<std::string>(), item[1].get<std::string>()});
    }
    lex.verbs = verb_list(j, "verbs", false);
    lex.transitive_verbs = verb_list(j, "transitive_verbs", false);
    lex.sentential_verbs = verb_list(j, "sentential_verbs", false);
    lex.lvp_verbs = verb_list(j, "lvp_verbs", true);
    lex.determiners = word_list(j, "determiners");
    lex.prepositions = word_list(j, "prepositions");
    lex.complementizers = word_list(j, "complementizers");
    lex.conjunctions = word_list(j, "conjunctions");
  } catch (const json::exception& e) {
    throw FormatError(std::string("lexicon: ") + e.what());
  }
  try {
    lex.validate();
  } catch (const std::invalid_argument& e) {
    throw FormatError(e.what());
  }
  return lex;
}

json Lexicon::to_json() const {
  json nouns_json = json::array();
  for (const auto& n : nouns) nouns_json.push_back({n.singular, n.plural});
  json j = {
      {"nouns", nouns_json},
      {"verbs", verbs_json(verbs, false)},
      {"lvp_verbs", verbs_json(lvp_verbs, true)},
      {"determiners", determiners},
      {"prepositions", prepositions},
      {"complementizers", complementizers},
      {"conjunctions", conjunctions},
  };
  if (!transitive_verbs.empty()) j["transitive_verbs"] = verbs_json(transitive_verbs, false);
  if (!sentential_verbs.empty()) j["sentential_verbs"] = verbs_json(sentential_verbs, false);
  return j;
}

Lexicon Lexicon::load(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw FormatError("lexicon: cannot open " + path.string());
  json j;
  try {
    j = json::parse(in);
  } catch (const json::exception& e) {
    throw FormatError("lexicon: " + path.string() + ": " + e.what());
  }
  return from_json(j);
}

Lexicon Lexicon::builtin() {
  Lexicon lex;
  lex.nouns = {{"senator", "senators"},
               {"manager", "managers"},
               {"surgeon", "surgeons"},
               {"customer", "customers"},
               {"officer", "officers"}};
  lex.verbs = {{"laughs", "laugh", ""},
               {"swims", "swim", ""},
               {"smiles", "smile", ""},
               {"sleeps", "sleep", ""},
               {"waits", "wait", ""}};
  lex.transitive_verbs = {{"admires", "admire", ""},
                          {"hates", "hate", ""},
                          {"likes", "like", ""},
                          {"loves", "love", ""},
                          {"knows", "know", ""}};
  lex.sentential_verbs = {{"said", "said", ""}, {"thinks", "think", ""}};
  lex.lvp_verbs = {{"knows", "know", "many different foreign languages"},
                   {"likes", "like", "to watch television shows"},
                   {"is", "are", "twenty three years old"},
                   {"enjoys", "enjoy", "playing tennis with colleagues"},
                   {"writes", "write", "in a journal every day"}};
  lex.determiners = {"the"};
  lex.prepositions = {"in front of", "next to", "behind"};
  lex.complementizers = {"that"};
  lex.conjunctions = {"and"};
  return lex;
}

}  // namespace lrpsva::tse
