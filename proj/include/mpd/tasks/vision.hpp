// Copyright 2026 The MPD Toolkit Authors
// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <cstdint>
#include <vector>

#include "mpd/tasks/task.hpp"

namespace mpd::tasks {

/// Binary mask, one byte per pixel (0 or 1), row-major.
struct SegMask {
  int width = 0;
  int height = 0;
  std::vector<std::uint8_t> bits;

  SegMask() = default;
  SegMask(int w, int h);
  bool at(int x, int y) const { return bits[static_cast<std::size_t>(y) * width + x] != 0; }
  void set(int x, int y, bool v) { bits[static_cast<std::size_t>(y) * width + x] = v ? 1 : 0; }
  std::size_t popcount() const;
};

/// |ref AND dis| / |ref OR dis|; two empty masks score 1.
/// Throws InvalidInput on a dimension mismatch.
TaskScore score_seg(const SegMask& ref, const SegMask& dis);

struct BoundingBox {
  double x0 = 0, y0 = 0, x1 = 0, y1 = 0;
  double area() const { return (x1 - x0) * (y1 - y0); }
};

double box_iou(const BoundingBox& a, const BoundingBox& b);

struct Detection {
  int category = 0;
  double confidence = 0.0;
  BoundingBox box;
};

/// Ordered by non-increasing confidence.
using DetectionSet = std::vector<Detection>;

/// Throws InvalidInput when confidences increase or a box has no area.
void validate_detections(const DetectionSet& d);

/// [same top-1 category] x IoU(top-1 boxes). An empty distorted set scores
/// 0 with flag "no-detection"; an empty reference set marks the score
/// excluded with flag "no-ref-detection".
TaskScore score_det(const DetectionSet& ref, const DetectionSet& dis);

inline constexpr int kRetrievalUniverse = 1000;
inline constexpr int kMinRankingLength = 10;

/// Label ids in descending relevance.
using RetrievalRanking = std::vector<int>;

/// Throws InvalidInput for duplicates, ids outside [0,1000) or fewer than 10
/// entries.
void validate_ranking(const RetrievalRanking& r);

enum class RetrievalAnchor {
  /// Acc_i = 1 when the reference's top-1 label is in the distorted top-i.
  kReferenceTop1,
  /// Acc_i = |top-i(ref) intersect top-i(dis)| / i.
  kTopIOverlap,
};

/// Acc_1 + Acc_5 + Acc_10, in [0,3].
TaskScore score_ret(const RetrievalRanking& ref, const RetrievalRanking& dis,
                    RetrievalAnchor anchor = RetrievalAnchor::kReferenceTop1);

}  // namespace mpd::tasks
