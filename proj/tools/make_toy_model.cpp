// Copyright 2026 The lrpsva Authors
// SPDX-License-Identifier: Apache-2.0
//
// Writes a small randomly initialized model whose vocabulary covers the
// built-in lexicon, for trying the CLI without a trained checkpoint.

#include <cctype>
#include <iostream>
#include <random>
#include <set>

#include <CLI11.hpp>

#include "lrpsva/tse.hpp"
#include "lrpsva/weights.hpp"

int main(int argc, char** argv) {
  using namespace lrpsva;

  CLI::App app{"Write a random toy weight container and vocabulary"};
  std::string weights_path, vocab_path, lexicon_path;
  std::uint32_t layers = 2, hidden = 16, embed = 16;
  std::uint64_t seed = 7;
  double scale = 0.5;
  app.add_option("--out-weights", weights_path)->required();
  app.add_option("--out-vocab", vocab_path)->required();
  app.add_option("--lexicon", lexicon_path, "Cover this lexicon instead of the built-in one")
      ->check(CLI::ExistingFile);
  app.add_option("--layers", layers)->capture_default_str()->check(CLI::PositiveNumber);
  app.add_option("--hidden", hidden)->capture_default_str()->check(CLI::PositiveNumber);
  app.add_option("--embed", embed)->capture_default_str()->check(CLI::PositiveNumber);
  app.add_option("--seed", seed)->capture_default_str();
  app.add_option("--scale", scale, "Standard deviation of the weights")->capture_default_str();
  CLI11_PARSE(app, argc, argv);

  try {
    const auto lexicon = lexicon_path.empty() ? tse::Lexicon::builtin() : tse::Lexicon::load(lexicon_path);
    std::vector<std::string> tokens{std::string(kUnkToken)};
    std::set<std::string> seen(tokens.begin(), tokens.end());
    for (const auto& w : lexicon.words()) {
      std::string cap = w;
      cap[0] = static_cast<char>(std::toupper(static_cast<unsigned char>(cap[0])));
      for (const auto& t : {w, cap}) {
        if (seen.insert(t).second) tokens.push_back(t);
      }
    }
    const Vocabulary vocab(tokens);

    std::mt19937_64 rng(seed);
    std::normal_distribution<double> normal(0.0, scale);
    auto random_matrix = [&](Eigen::Index r, Eigen::Index c) {
      return Matrix(Matrix::NullaryExpr(r, c, [&] { return normal(rng); }));
    };
    auto random_vector = [&](Eigen::Index n) { return Vector(Vector::NullaryExpr(n, [&] { return normal(rng); })); };

    ModelConfig config{layers, hidden, embed, static_cast<std::uint32_t>(vocab.size())};
    WeightContainer w;
    w.embedding = random_matrix(config.vocab_size, embed);
    for (std::uint32_t l = 0; l < layers; ++l) {
      w.layers.push_back({random_matrix(4 * hidden, l == 0 ? embed : hidden), random_matrix(4 * hidden, hidden),
                          random_vector(4 * hidden)});
    }
    w.decoder_weights = random_matrix(config.vocab_size, hidden);
    w.decoder_bias = random_vector(config.vocab_size);

    write_container(weights_path, config, w);
    vocab.save(vocab_path);
    std::cout << "wrote " << weights_path << " (" << layers << " layers, hidden " << hidden << ", vocab "
              << vocab.size() << ") and " << vocab_path << "\n";
    return 0;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 1;
  }
}
