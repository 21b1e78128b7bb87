// Copyright 2026 The lrpsva Authors
// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <cstdint>
#include <filesystem>
#include <optional>
#include <string>
#include <string_view>
#include <unordered_map>
#include <vector>

namespace lrpsva {

using TokenId = std::int32_t;

inline constexpr std::string_view kUnkToken = "<unk>";

/// Case-sensitive bijection between tokens and ids 0..V-1.
///
/// The on-disk form is UTF-8, one token per line, line number = id, and the
/// first line must be `<unk>`.
class Vocabulary {
 public:
  Vocabulary() = default;

  /// Throws FormatError on empty or duplicate tokens, or when `<unk>` is
  /// absent.
  explicit Vocabulary(std::vector<std::string> tokens);

  static Vocabulary load(const std::filesystem::path& path);
  void save(const std::filesystem::path& path) const;

  std::size_t size() const { return tokens_.size(); }
  TokenId unk_id() const { return unk_id_; }

  std::optional<TokenId> find(std::string_view token) const;
  bool contains(std::string_view token) const { return find(token).has_value(); }
  TokenId id_or_unk(std::string_view token) const;

  /// Throws std::out_of_range for an invalid id.
  const std::string& token(TokenId id) const;
  const std::vector<std::string>& tokens() const { return tokens_; }

 private:
  struct Hash {
    using is_transparent = void;
    std::size_t operator()(std::string_view s) const { return std::hash<std::string_view>{}(s); }
  };

  std::vector<std::string> tokens_;
  std::unordered_map<std::string, TokenId, Hash, std::equal_to<>> index_;
  TokenId unk_id_ = 0;
};

struct TokenizedText {
  std::vector<std::string> tokens;
  std::vector<TokenId> ids;
  std::vector<std::string> out_of_vocabulary;
};

std::vector<std::string> split_whitespace(std::string_view text);

/// Maps whitespace-separated tokens case-sensitively. Unknown tokens become
/// `unk_id` and are listed in `out_of_vocabulary`. Throws
/// std::invalid_argument on input with no tokens.
TokenizedText tokenize(std::string_view text, const Vocabulary& vocab);

}  // namespace lrpsva
