// Copyright 2026 The lrpsva Authors
// SPDX-License-Identifier: Apache-2.0

#include <algorithm>
#include <cctype>
#include <fstream>
#include <set>
#include <stdexcept>

#include "lrpsva/error.hpp"
#include "lrpsva/tse.hpp"

namespace lrpsva::tse {
namespace {

std::string lower(std::string_view s) {
  std::string out(s);
  std::transform(out.begin(), out.end(), out.begin(), [](unsigned char c) { return std::tolower(c); });
  return out;
}

Template make(std::string name, bool omit_comp, std::vector<Tag> slots, VerbSource target,
              VerbSource v = VerbSource::Transitive, Tag v_agrees = Tag::N1) {
  Template t{std::move(name), omit_comp, std::move(slots), target, v, v_agrees};
  t.validate();
  return t;
}

}  // namespace

const char* tag_name(Tag tag) {
  switch (tag) {
    case Tag::Det1: return "Det1";
    case Tag::N1: return "N1";
    case Tag::Det2: return "Det2";
    case Tag::N2: return "N2";
    case Tag::Comp: return "Comp";
    case Tag::V: return "V";
    case Tag::P: return "P";
    case Tag::Conj: return "Conj";
    case Tag::CompVP: return "CompVP";
  }
  return "?";
}

Tag parse_tag(std::string_view name) {
  for (Tag t : kAllTags) {
    if (name == tag_name(t)) return t;
  }
  throw std::invalid_argument("unknown tag '" + std::string(name) + "'");
}

const char* number_name(Number number) { return number == Number::Singular ? "singular" : "plural"; }

const char* verb_source_name(VerbSource source) {
  switch (source) {
    case VerbSource::Intransitive: return "verbs";
    case VerbSource::Transitive: return "transitive_verbs";
    case VerbSource::Sentential: return "sentential_verbs";
    case VerbSource::Coordinated: return "lvp_verbs";
  }
  return "?";
}

VerbSource parse_verb_source(std::string_view name) {
  for (VerbSource s : {VerbSource::Intransitive, VerbSource::Transitive, VerbSource::Sentential,
                       VerbSource::Coordinated}) {
    if (name == verb_source_name(s)) return s;
  }
  throw std::invalid_argument("unknown verb source '" + std::string(name) + "'");
}

std::string Template::label() const { return omit_comp ? name + " (No That)" : name; }

std::string Template::key() const { return omit_comp ? name + "-NoThat" : name; }

std::size_t Template::n1_slot() const {
  return static_cast<std::size_t>(std::find(slots.begin(), slots.end(), Tag::N1) - slots.begin());
}

bool Template::has_slot(Tag tag) const { return std::find(slots.begin(), slots.end(), tag) != slots.end(); }

void Template::validate() const {
  const std::string where = "template '" + label() + "': ";
  if (name.empty()) throw std::invalid_argument("template with empty name");
  std::set<Tag> seen;
  for (Tag t : slots) {
    if (!seen.insert(t).second) throw std::invalid_argument(where + "tag " + tag_name(t) + " repeats");
  }
  if (!seen.contains(Tag::N1)) throw std::invalid_argument(where + "needs exactly one N1 slot");
  if (omit_comp && seen.contains(Tag::Comp)) {
    throw std::invalid_argument(where + "a No That variant cannot carry a Comp slot");
  }
  if (seen.contains(Tag::V)) {
    if (v_agrees_with != Tag::N1 && v_agrees_with != Tag::N2) {
      throw std::invalid_argument(where + "V must agree with N1 or N2");
    }
    if (!seen.contains(v_agrees_with)) {
      throw std::invalid_argument(where + "V agrees with a missing " + tag_name(v_agrees_with) + " slot");
    }
  }
  if (seen.contains(Tag::CompVP) && (!seen.contains(Tag::V) || v_source != VerbSource::Coordinated)) {
    throw std::invalid_argument(where + "CompVP needs a V slot drawn from lvp_verbs");
  }
}

const std::vector<Template>& builtin_templates() {
  using enum Tag;
  using VS = VerbSource;
  static const std::vector<Template> templates = {
      make("Simple", false, {Det1, N1}, VS::Intransitive),
      make("IORC", true, {Det2, N2, Det1, N1}, VS::Transitive),
      make("IORC", false, {Det2, N2, Comp, Det1, N1}, VS::Transitive),
      make("SC", false, {Det2, N2, V, Det1, N1}, VS::Intransitive, VS::Sentential, N2),
      make("PP", false, {Det1, N1, P, Det2, N2}, VS::Intransitive),
      make("SRC", false, {Det1, N1, Comp, V, Det2, N2}, VS::Intransitive, VS::Transitive, N1),
      make("ORC", true, {Det1, N1, Det2, N2, V}, VS::Intransitive, VS::Transitive, N2),
      make("ORC", false, {Det1, N1, Comp, Det2, N2, V}, VS::Intransitive, VS::Transitive, N2),
      make("SVP", false, {Det1, N1, V, Conj}, VS::Intransitive, VS::Intransitive, N1),
      make("LVP", false, {Det1, N1, V, CompVP, Conj}, VS::Coordinated, VS::Coordinated, N1),
  };
  return templates;
}

std::vector<Template> load_template_overrides(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw FormatError("templates: cannot open " + path.string());
  std::vector<Template> out;
  try {
    const auto j = nlohmann::json::parse(in);
    for (const auto& item : j.at("templates")) {
      Template t;
      t.name = item.at("name").get<std::string>();
      t.omit_comp = item.value("omit_comp", false);
      for (const auto& s : item.at("slots")) t.slots.push_back(parse_tag(s.get<std::string>()));
      t.target_source = parse_verb_source(item.value("target_source", "verbs"));
      t.v_source = parse_verb_source(item.value("v_source", "transitive_verbs"));
      t.v_agrees_with = parse_tag(item.value("v_agrees_with", "N1"));
      t.validate();
      out.push_back(std::move(t));
    }
  } catch (const nlohmann::json::exception& e) {
    throw FormatError("templates: " + path.string() + ": " + e.what());
  } catch (const std::invalid_argument& e) {
    throw FormatError("templates: " + path.string() + ": " + e.what());
  }
  return out;
}

std::vector<Template> resolve_templates(std::span<const std::string> keys, std::span<const Template> extra) {
  std::vector<Template> known = builtin_templates();
  known.insert(known.end(), extra.begin(), extra.end());

  std::vector<Template> out;
  std::vector<std::string> unknown;
  for (const auto& key : keys) {
    if (lower(key) == "all") {
      out.insert(out.end(), known.begin(), known.end());
      continue;
    }
    auto it = std::find_if(known.begin(), known.end(), [&](const Template& t) {
      return lower(t.key()) == lower(key) || lower(t.label()) == lower(key);
    });
    if (it == known.end()) {
      unknown.push_back(key);
    } else {
      out.push_back(*it);
    }
  }
  if (!unknown.empty()) {
    std::string msg = "unknown template(s):";
    for (const auto& k : unknown) msg += " '" + k + "'";
    msg += "; known:";
    for (const auto& t : known) msg += " " + t.key();
    throw std::invalid_argument(msg);
  }
  // Drop repeats while keeping first-seen order.
  std::vector<Template> unique;
  for (auto& t : out) {
    if (std::none_of(unique.begin(), unique.end(), [&](const Template& u) { return u.key() == t.key(); })) {
      unique.push_back(std::move(t));
    }
  }
  return unique;
}

}  // namespace lrpsva::tse
