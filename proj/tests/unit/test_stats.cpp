// Copyright 2026 The lrpsva Authors
// SPDX-License-Identifier: Apache-2.0

#include <catch_amalgamated.hpp>

#include <cmath>
#include <random>
#include <vector>

#include "lrpsva/stats.hpp"
#include "stats_fixture.hpp"

using namespace lrpsva;
using namespace lrpsva::stats;
using Catch::Matchers::WithinAbs;
using Catch::Matchers::WithinRel;

namespace {

std::vector<double> affine(std::span<const double> v, double a, double b) {
  std::vector<double> out;
  for (double x : v) out.push_back(a * x + b);
  return out;
}

}  // namespace

TEST_CASE("pearson on exact linear relations") {
  const std::vector<double> x{1, 2, 3}, up{2, 4, 6}, down{3, 2, 1};
  REQUIRE(pearson(x, up) == 1.0);
  REQUIRE(pearson(x, down) == -1.0);
}

TEST_CASE("pearson on the eight-point fixture") {
  REQUIRE_THAT(pearson(testing::kStatsXs, testing::kStatsYs), WithinAbs(testing::kStatsRho, 1e-12));
}

TEST_CASE("pearson is symmetric and affine invariant") {
  const auto& xs = testing::kStatsXs;
  const auto& ys = testing::kStatsYs;
  const double rho = pearson(xs, ys);
  REQUIRE_THAT(pearson(ys, xs), WithinAbs(rho, 1e-12));
  REQUIRE_THAT(pearson(affine(xs, 3.5, -20.0), ys), WithinAbs(rho, 1e-12));
  REQUIRE_THAT(pearson(xs, affine(ys, 0.01, 7.0)), WithinAbs(rho, 1e-12));
  REQUIRE_THAT(pearson(xs, affine(ys, -2.0, 1.0)), WithinAbs(-rho, 1e-12));
}

TEST_CASE("pearson rejects undefined inputs") {
  const std::vector<double> x{1, 2, 3}, flat{4, 4, 4}, short_x{1};
  REQUIRE_THROWS_AS(pearson(x, flat), StatsError);
  REQUIRE_THROWS_AS(pearson(flat, x), StatsError);
  REQUIRE_THROWS_AS(pearson(short_x, short_x), StatsError);
  REQUIRE_THROWS_AS(pearson(x, std::vector<double>{1, 2}), StatsError);
}

TEST_CASE("pearson stays within [-1, 1] on random data") {
  std::mt19937_64 rng(10);
  std::normal_distribution<double> n(0.0, 1.0);
  for (int trial = 0; trial < 200; ++trial) {
    std::vector<double> x(5), y(5);
    for (int k = 0; k < 5; ++k) {
      x[k] = n(rng);
      y[k] = trial % 2 ? 3.0 * x[k] + 1.0 : n(rng);
    }
    const double r = pearson(x, y);
    REQUIRE(r >= -1.0);
    REQUIRE(r <= 1.0);
  }
}

TEST_CASE("regression recovers an exact line") {
  const std::vector<double> x{-1, 0, 1, 2, 3.5};
  const auto y = affine(x, 2.0, 1.0);
  const auto fit = linear_regression(x, y);
  REQUIRE(fit.slope == 2.0);
  REQUIRE(fit.intercept == 1.0);
}

TEST_CASE("regression on the eight-point fixture") {
  const auto fit = linear_regression(testing::kStatsXs, testing::kStatsYs);
  REQUIRE_THAT(fit.slope, WithinAbs(testing::kStatsSlope, 1e-12));
  REQUIRE_THAT(fit.intercept, WithinAbs(testing::kStatsIntercept, 1e-12));
}

TEST_CASE("regression residuals are orthogonal to xs") {
  std::mt19937_64 rng(12);
  std::uniform_real_distribution<double> u(-5.0, 5.0);
  for (int trial = 0; trial < 50; ++trial) {
    std::vector<double> x(20), y(20);
    for (int k = 0; k < 20; ++k) {
      x[k] = u(rng);
      y[k] = 0.3 * x[k] + u(rng);
    }
    const auto fit = linear_regression(x, y);
    double dot = 0.0, resid_sum = 0.0, scale = 0.0;
    for (int k = 0; k < 20; ++k) {
      const double e = y[k] - (fit.slope * x[k] + fit.intercept);
      dot += e * x[k];
      resid_sum += e;
      scale += std::abs(x[k] * y[k]);
    }
    REQUIRE(std::abs(dot) <= 1e-9 * scale);
    REQUIRE(std::abs(resid_sum) <= 1e-9 * scale);
  }
}

TEST_CASE("regression rejects vertical data") {
  const std::vector<double> x{2, 2, 2}, y{1, 2, 3};
  REQUIRE_THROWS_AS(linear_regression(x, y), StatsError);
}

TEST_CASE("sign-flip interval of the noun phrase") {
  // A phrase line 0.287 r(N) + 0.642 comes from a fit r(Det) = -0.713 r(N) + 0.642.
  const auto flip = sign_flip_interval({-0.713, 0.642});
  REQUIRE(flip.has_value());
  REQUIRE_THAT(flip->first, WithinRel(-0.642 / 0.287, 1e-12));
  // The published endpoint comes from unrounded coefficients; three-decimal
  // rounding of 0.287 and 0.642 moves the ratio by up to about 0.006.
  REQUIRE_THAT(flip->first, WithinAbs(-2.235, 6e-3));
  REQUIRE(flip->second == 0.0);

  const auto neg = sign_flip_interval({-0.5, -1.0});
  REQUIRE(neg.has_value());
  REQUIRE(neg->first == 0.0);
  REQUIRE(neg->second == 2.0);

  REQUIRE_FALSE(sign_flip_interval({-1.0, 0.5}).has_value());
  REQUIRE_FALSE(sign_flip_interval({-2.0, 0.5}).has_value());
  REQUIRE_FALSE(sign_flip_interval({0.5, 0.0}).has_value());
}

TEST_CASE("mean of a series") {
  const std::vector<double> v{1.0, 2.0, 6.0};
  REQUIRE(mean(v) == 3.0);
  REQUIRE_THROWS_AS(mean(std::vector<double>{}), StatsError);
}
