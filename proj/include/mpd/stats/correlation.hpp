// Copyright 2026 The MPD Toolkit Authors
// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <array>
#include <optional>
#include <span>
#include <vector>

namespace mpd::stats {

/// 1-based fractional ranks; tied values share the average of their ranks.
std::vector<double> average_ranks(std::span<const double> v);

/// Pearson correlation. Throws InvalidInput for n < 3 or mismatched lengths
/// and UndefinedCorrelation when either vector is constant.
double pearson(std::span<const double> x, std::span<const double> y);

/// Spearman: Pearson correlation of average ranks.
double srcc(std::span<const double> x, std::span<const double> y);

/// Kendall tau-b in O(n log n) (Knight's merge-sort algorithm).
double krcc(std::span<const double> x, std::span<const double> y);

/// f(x) = b2 + (b1 - b2) / (1 + exp(-(x - b3) / |b4|))
struct LogisticParams {
  std::array<double, 4> beta{};
  double operator()(double x) const;
};

struct LogisticFit {
  LogisticParams params;
  bool converged = false;
  double sse = 0.0;
};

/// Levenberg-Marquardt least-squares fit of y ~ f(x).
LogisticFit fit_logistic(std::span<const double> x, std::span<const double> y);

struct PlccResult {
  double raw = 0.0;
  /// Set when the logistic pre-map was requested and converged.
  std::optional<double> logistic;
  std::optional<LogisticParams> params;
  /// The logistic fit was requested but failed; only `raw` is meaningful.
  bool fallback = false;
};

PlccResult plcc(std::span<const double> x, std::span<const double> y, bool logistic = false);

}  // namespace mpd::stats
