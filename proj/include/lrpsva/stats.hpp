// Copyright 2026 The lrpsva Authors
// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <optional>
#include <span>
#include <utility>

#include "lrpsva/error.hpp"

namespace lrpsva::stats {

/// Undefined statistic: too few points or a constant series.
class StatsError : public Error {
 public:
  using Error::Error;
};

double mean(std::span<const double> xs);

/// Product-moment correlation, clamped to [-1, 1].
double pearson(std::span<const double> xs, std::span<const double> ys);

struct LinearFit {
  double slope = 0.0;
  double intercept = 0.0;
};

/// Ordinary least squares y = slope * x + intercept. Throws StatsError when
/// xs is constant (a vertical line) or the series lengths differ.
LinearFit linear_regression(std::span<const double> xs, std::span<const double> ys);

/// For a fit of r(Det) on r(N), the noun phrase relevance r(Det) + r(N) is
/// (1 + slope) r(N) + intercept. Returns the open interval of r(N) on which
/// that sum has the opposite sign of r(N), or nullopt if it is empty.
std::optional<std::pair<double, double>> sign_flip_interval(const LinearFit& det_on_noun);

}  // namespace lrpsva::stats
