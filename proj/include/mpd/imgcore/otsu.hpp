// Copyright 2026 The MPD Toolkit Authors
// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <array>
#include <vector>

#include "mpd/imgcore/image.hpp"

namespace mpd::imgcore {

using Histogram256 = std::array<double, 256>;

struct OtsuResult {
  /// Strictly increasing. A sample v belongs to class k when
  /// thresholds[k-1] < v <= thresholds[k].
  std::vector<double> thresholds;
  /// Weighted mean intensity of each class (thresholds.size() + 1 entries).
  std::vector<double> class_means;
  /// sum_k w_k (mu_k - mu)^2 with weights normalized to 1.
  double between_class_variance = 0.0;
};

/// Multi-level Otsu over an 8-bit histogram, solved exactly by dynamic
/// programming over the non-empty bins.
///
/// Each threshold sits halfway between the last occupied bin of one class
/// and the first occupied bin of the next, which makes the answer unique
/// when a gap of empty bins leaves several boundaries equally good.
/// When the histogram has fewer distinct values than `levels`, every
/// distinct value becomes its own class; a constant histogram yields the
/// single threshold at that value. Throws InvalidInput for levels < 2 or an
/// empty histogram.
OtsuResult otsu(const Histogram256& hist, int levels);

/// Histogram of a single-channel plane (samples rounded to [0,255] bins).
Histogram256 histogram(const FloatPlane& gray);

/// Thresholds for a single-channel plane. See otsu().
std::vector<double> otsu_threshold(const FloatPlane& gray, int levels);

}  // namespace mpd::imgcore
