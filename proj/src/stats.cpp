// Copyright 2026 The lrpsva Authors
// SPDX-License-Identifier: Apache-2.0

#include "lrpsva/stats.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <string>

namespace lrpsva::stats {
namespace {

struct Moments {
  double mean_x = 0.0;
  double mean_y = 0.0;
  double sxx = 0.0;
  double syy = 0.0;
  double sxy = 0.0;
};

Moments centered_moments(std::span<const double> xs, std::span<const double> ys, const char* what) {
  if (xs.size() != ys.size()) {
    throw StatsError(std::string(what) + ": series lengths differ (" + std::to_string(xs.size()) + " vs " +
                     std::to_string(ys.size()) + ")");
  }
  if (xs.size() < 2) throw StatsError(std::string(what) + ": need at least two points");
  Moments m;
  m.mean_x = mean(xs);
  m.mean_y = mean(ys);
  for (std::size_t i = 0; i < xs.size(); ++i) {
    const double dx = xs[i] - m.mean_x;
    const double dy = ys[i] - m.mean_y;
    m.sxx += dx * dx;
    m.syy += dy * dy;
    m.sxy += dx * dy;
  }
  return m;
}

}  // namespace

double mean(std::span<const double> xs) {
  if (xs.empty()) throw StatsError("mean of an empty series");
  return std::accumulate(xs.begin(), xs.end(), 0.0) / static_cast<double>(xs.size());
}

double pearson(std::span<const double> xs, std::span<const double> ys) {
  const auto m = centered_moments(xs, ys, "pearson");
  if (m.sxx == 0.0 || m.syy == 0.0) {
    throw StatsError("pearson: correlation is undefined for a constant series");
  }
  return std::clamp(m.sxy / std::sqrt(m.sxx * m.syy), -1.0, 1.0);
}

LinearFit linear_regression(std::span<const double> xs, std::span<const double> ys) {
  const auto m = centered_moments(xs, ys, "linear_regression");
  if (m.sxx == 0.0) throw StatsError("linear_regression: all x values are equal");
  LinearFit fit;
  fit.slope = m.sxy / m.sxx;
  fit.intercept = m.mean_y - fit.slope * m.mean_x;
  return fit;
}

std::optional<std::pair<double, double>> sign_flip_interval(const LinearFit& det_on_noun) {
  const double slope = 1.0 + det_on_noun.slope;
  const double intercept = det_on_noun.intercept;
  // With a non-positive phrase slope the flip region is unbounded; not reported.
  if (!(slope > 0.0) || intercept == 0.0) return std::nullopt;
  const double root = intercept / -slope;
  return root < 0.0 ? std::pair{root, 0.0} : std::pair{0.0, root};
}

}  // namespace lrpsva::stats
