// Copyright 2026 The MPD Toolkit Authors
// SPDX-License-Identifier: Apache-2.0

#include "mpd/tasks/vision.hpp"

#include <algorithm>
#include <cmath>
#include <set>

#include "mpd/common/error.hpp"

namespace mpd::tasks {

SegMask::SegMask(int w, int h) : width(w), height(h) {
  if (w <= 0 || h <= 0) throw InvalidInput("mask dimensions must be positive");
  bits.assign(static_cast<std::size_t>(w) * h, 0);
}

std::size_t SegMask::popcount() const {
  return static_cast<std::size_t>(std::count_if(bits.begin(), bits.end(), [](auto b) { return b != 0; }));
}

TaskScore score_seg(const SegMask& ref, const SegMask& dis) {
  if (ref.width != dis.width || ref.height != dis.height || ref.bits.size() != dis.bits.size()) {
    throw InvalidInput("segmentation masks differ in size");
  }
  std::size_t inter = 0, uni = 0;
  for (std::size_t i = 0; i < ref.bits.size(); ++i) {
    const bool a = ref.bits[i] != 0, b = dis.bits[i] != 0;
    inter += a && b;
    uni += a || b;
  }
  const double v = uni == 0 ? 1.0 : static_cast<double>(inter) / static_cast<double>(uni);
  return {Task::kSEG, v, "", false};
}

double box_iou(const BoundingBox& a, const BoundingBox& b) {
  const double ix = std::max(0.0, std::min(a.x1, b.x1) - std::max(a.x0, b.x0));
  const double iy = std::max(0.0, std::min(a.y1, b.y1) - std::max(a.y0, b.y0));
  const double inter = ix * iy;
  const double uni = a.area() + b.area() - inter;
  return uni > 0 ? inter / uni : 0.0;
}

void validate_detections(const DetectionSet& d) {
  for (std::size_t i = 0; i < d.size(); ++i) {
    const auto& b = d[i].box;
    if (!(b.x1 > b.x0 && b.y1 > b.y0)) throw InvalidInput("detection box has no area");
    if (!std::isfinite(d[i].confidence)) throw InvalidInput("detection confidence is not finite");
    if (i > 0 && d[i].confidence > d[i - 1].confidence) {
      throw InvalidInput("detections are not ordered by confidence");
    }
  }
}

TaskScore score_det(const DetectionSet& ref, const DetectionSet& dis) {
  validate_detections(ref);
  validate_detections(dis);
  if (ref.empty()) return {Task::kDET, 0.0, "no-ref-detection", true};
  if (dis.empty()) return {Task::kDET, 0.0, "no-detection", false};
  const auto& r = ref.front();
  const auto& d = dis.front();
  const double v = r.category == d.category ? box_iou(r.box, d.box) : 0.0;
  return {Task::kDET, v, "", false};
}

void validate_ranking(const RetrievalRanking& r) {
  if (r.size() < static_cast<std::size_t>(kMinRankingLength)) {
    throw InvalidInput("retrieval ranking has fewer than 10 entries");
  }
  std::set<int> seen;
  for (int id : r) {
    if (id < 0 || id >= kRetrievalUniverse) throw InvalidInput("retrieval label id out of range");
    if (!seen.insert(id).second) throw InvalidInput("retrieval ranking repeats a label");
  }
}

TaskScore score_ret(const RetrievalRanking& ref, const RetrievalRanking& dis,
                    RetrievalAnchor anchor) {
  validate_ranking(ref);
  validate_ranking(dis);
  double v = 0;
  for (int i : {1, 5, 10}) {
    if (anchor == RetrievalAnchor::kReferenceTop1) {
      v += std::find(dis.begin(), dis.begin() + i, ref.front()) != dis.begin() + i ? 1.0 : 0.0;
    } else {
      std::set<int> top(ref.begin(), ref.begin() + i);
      int common = 0;
      for (int k = 0; k < i; ++k) common += top.count(dis[k]) ? 1 : 0;
      v += static_cast<double>(common) / i;
    }
  }
  return {Task::kRET, v, "", false};
}

}  // namespace mpd::tasks
