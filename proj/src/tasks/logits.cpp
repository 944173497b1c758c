// Copyright 2026 The MPD Toolkit Authors
// SPDX-License-Identifier: Apache-2.0

#include "mpd/tasks/logits.hpp"

#include <algorithm>
#include <cmath>

#include "mpd/common/error.hpp"

namespace mpd::tasks {

std::vector<double> softmax(std::span<const double> logits) {
  if (logits.empty()) throw InvalidInput("softmax of an empty vector");
  for (double v : logits)
    if (!std::isfinite(v)) throw InvalidInput("softmax input is not finite");
  const double m = *std::max_element(logits.begin(), logits.end());
  std::vector<double> out(logits.size());
  double sum = 0.0;
  for (std::size_t i = 0; i < logits.size(); ++i) {
    out[i] = std::exp(logits[i] - m);
    sum += out[i];
  }
  for (double& v : out) v /= sum;
  return out;
}

double cosine(std::span<const double> a, std::span<const double> b) {
  if (a.size() != b.size()) throw InvalidInput("cosine of vectors with different lengths");
  double ab = 0, aa = 0, bb = 0;
  for (std::size_t i = 0; i < a.size(); ++i) {
    ab += a[i] * b[i];
    aa += a[i] * a[i];
    bb += b[i] * b[i];
  }
  if (aa == 0 || bb == 0) throw InvalidInput("cosine of a zero vector");
  if (std::equal(a.begin(), a.end(), b.begin())) return 1.0;
  return std::clamp(ab / std::sqrt(aa * bb), -1.0, 1.0);
}

TaskScore score_yon(const LogitPair& ref, const LogitPair& dis) {
  const double r[2] = {ref.yes, ref.no};
  const double d[2] = {dis.yes, dis.no};
  const auto pr = softmax(r);
  const auto pd = softmax(d);
  return {Task::kYoN, std::abs(pd[0] - pr[0]), "", false};
}

TaskScore score_mcq(const LogitQuad& ref, const LogitQuad& dis) {
  const auto pr = softmax(ref);
  const auto pd = softmax(dis);
  return {Task::kMCQ, cosine(pr, pd), "", false};
}

}  // namespace mpd::tasks
