// Copyright 2026 The lrpsva Authors
// SPDX-License-Identifier: Apache-2.0

#include "lrpsva/vocabulary.hpp"

#include <fstream>
#include <sstream>
#include <stdexcept>

#include "lrpsva/error.hpp"

namespace lrpsva {

Vocabulary::Vocabulary(std::vector<std::string> tokens) : tokens_(std::move(tokens)) {
  index_.reserve(tokens_.size());
  bool have_unk = false;
  for (std::size_t i = 0; i < tokens_.size(); ++i) {
    const auto& tok = tokens_[i];
    if (tok.empty()) {
      throw FormatError("vocabulary: empty token at id " + std::to_string(i));
    }
    auto [it, inserted] = index_.emplace(tok, static_cast<TokenId>(i));
    if (!inserted) {
      throw FormatError("vocabulary: duplicate token '" + tok + "' at ids " +
                        std::to_string(it->second) + " and " + std::to_string(i));
    }
    if (tok == kUnkToken) {
      unk_id_ = static_cast<TokenId>(i);
      have_unk = true;
    }
  }
  if (!have_unk) {
    throw FormatError("vocabulary: missing " + std::string(kUnkToken) + " token");
  }
}

Vocabulary Vocabulary::load(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) {
    throw FormatError("vocabulary: cannot open " + path.string());
  }
  std::vector<std::string> tokens;
  std::string line;
  while (std::getline(in, line)) {
    if (!line.empty() && line.back() == '\r') line.pop_back();
    tokens.push_back(std::move(line));
  }
  if (tokens.empty() || tokens.front() != kUnkToken) {
    throw FormatError("vocabulary: " + path.string() + " must start with a " +
                      std::string(kUnkToken) + " line");
  }
  return Vocabulary(std::move(tokens));
}

void Vocabulary::save(const std::filesystem::path& path) const {
  std::ofstream out(path, std::ios::binary);
  if (!out) {
    throw FormatError("vocabulary: cannot write " + path.string());
  }
  for (const auto& tok : tokens_) out << tok << '\n';
}

std::optional<TokenId> Vocabulary::find(std::string_view token) const {
  auto it = index_.find(token);
  if (it == index_.end()) return std::nullopt;
  return it->second;
}

TokenId Vocabulary::id_or_unk(std::string_view token) const { return find(token).value_or(unk_id_); }

const std::string& Vocabulary::token(TokenId id) const {
  if (id < 0 || static_cast<std::size_t>(id) >= tokens_.size()) {
    throw std::out_of_range("token id " + std::to_string(id) + " outside vocabulary of size " +
                            std::to_string(tokens_.size()));
  }
  return tokens_[static_cast<std::size_t>(id)];
}

std::vector<std::string> split_whitespace(std::string_view text) {
  std::vector<std::string> out;
  std::istringstream in{std::string(text)};
  std::string tok;
  while (in >> tok) out.push_back(tok);
  return out;
}

TokenizedText tokenize(std::string_view text, const Vocabulary& vocab) {
  TokenizedText result;
  result.tokens = split_whitespace(text);
  if (result.tokens.empty()) {
    throw std::invalid_argument("tokenize: input has no tokens");
  }
  result.ids.reserve(result.tokens.size());
  for (const auto& tok : result.tokens) {
    if (auto id = vocab.find(tok)) {
      result.ids.push_back(*id);
    } else {
      result.ids.push_back(vocab.unk_id());
      result.out_of_vocabulary.push_back(tok);
    }
  }
  return result;
}

}  // namespace lrpsva
