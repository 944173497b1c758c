// Copyright 2026 The MPD Toolkit Authors
// SPDX-License-Identifier: Apache-2.0

#include "mpd/imgcore/otsu.hpp"

#include <cmath>
#include <limits>

#include "mpd/common/error.hpp"

namespace mpd::imgcore {

Histogram256 histogram(const FloatPlane& gray) {
  if (gray.channels() != 1) throw InvalidInput("histogram expects a single-channel plane");
  Histogram256 h{};
  for (double v : gray.data()) h[quantize(v)] += 1.0;
  return h;
}

OtsuResult otsu(const Histogram256& hist, int levels) {
  if (levels < 2) throw InvalidInput("otsu needs levels >= 2");

  std::vector<double> value;
  std::vector<double> weight;
  double total = 0.0;
  for (int i = 0; i < 256; ++i) {
    if (hist[i] > 0.0) {
      value.push_back(i);
      weight.push_back(hist[i]);
      total += hist[i];
    }
  }
  if (value.empty()) throw InvalidInput("otsu on empty histogram");

  const int d = static_cast<int>(value.size());
  OtsuResult res;
  if (d == 1) {
    res.thresholds = {value[0]};
    res.class_means = {value[0]};
    return res;
  }

  // Prefix sums of normalized weight and first moment.
  std::vector<double> pw(d + 1, 0.0);
  std::vector<double> pm(d + 1, 0.0);
  for (int i = 0; i < d; ++i) {
    pw[i + 1] = pw[i] + weight[i] / total;
    pm[i + 1] = pm[i] + value[i] * weight[i] / total;
  }
  auto segment = [&](int a, int b) {  // distinct values [a, b)
    const double w = pw[b] - pw[a];
    const double m = pm[b] - pm[a];
    return m * m / w;
  };

  const int k = std::min(levels, d);
  constexpr double kNeg = -std::numeric_limits<double>::infinity();
  // best[c][e]: best sum over the first e values split into c classes.
  std::vector<std::vector<double>> best(k + 1, std::vector<double>(d + 1, kNeg));
  std::vector<std::vector<int>> cut(k + 1, std::vector<int>(d + 1, -1));
  for (int e = 1; e <= d; ++e) best[1][e] = segment(0, e);
  for (int c = 2; c <= k; ++c) {
    for (int e = c; e <= d; ++e) {
      for (int s = c - 1; s < e; ++s) {
        const double v = best[c - 1][s] + segment(s, e);
        if (v > best[c][e]) {
          best[c][e] = v;
          cut[c][e] = s;
        }
      }
    }
  }

  std::vector<int> bounds;  // start index of classes 2..k
  for (int c = k, e = d; c >= 2; --c) {
    const int s = cut[c][e];
    bounds.push_back(s);
    e = s;
  }
  std::vector<int> starts{0};
  for (auto it = bounds.rbegin(); it != bounds.rend(); ++it) starts.push_back(*it);
  starts.push_back(d);

  const double mu = pm[d];
  res.between_class_variance = best[k][d] - mu * mu;
  for (std::size_t c = 0; c + 1 < starts.size(); ++c) {
    const int a = starts[c];
    const int b = starts[c + 1];
    res.class_means.push_back((pm[b] - pm[a]) / (pw[b] - pw[a]));
    if (c + 2 < starts.size()) res.thresholds.push_back(0.5 * (value[b - 1] + value[b]));
  }
  return res;
}

std::vector<double> otsu_threshold(const FloatPlane& gray, int levels) {
  return otsu(histogram(gray), levels).thresholds;
}

}  // namespace mpd::imgcore
