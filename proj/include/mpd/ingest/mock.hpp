// Copyright 2026 The MPD Toolkit Authors
// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <array>
#include <cstdint>
#include <map>
#include <string>
#include <vector>

#include "mpd/annotate/bundle.hpp"
#include "mpd/corruption/dataset.hpp"
#include "mpd/ingest/responses.hpp"
#include "mpd/ingest/roster.hpp"

namespace mpd::ingest {

/// Behaviour of the synthetic subjects.
struct MockProfile {
  /// Chance of answering a clean reference image correctly, per task.
  std::array<double, tasks::kNumTasks> base_accuracy{0.9, 0.85, 0.8, 0.9, 0.9, 0.9, 0.9};
  /// Scales how strongly corruption severity perturbs the distorted-image
  /// response. 0 makes distorted responses identical to reference ones.
  double sensitivity = 1.0;
  std::uint64_t seed = 0;

  /// Throws InvalidInput when an accuracy leaves [0,1] or sensitivity < 0.
  void validate() const;
};

/// Responses from every roster subject for every reference image and every
/// distorted image of `pairs`.
///
/// A subject's distorted-image answer starts from its reference answer and
/// is perturbed with strength s = min(1, sensitivity * subject factor *
/// severity): logits shrink toward indifference, pick up Gaussian noise and
/// flip the top choice with probability s/2; text loses tokens to confusable
/// words with probability 0.8 s; masks shift and shrink; boxes jitter and
/// the top category may flip; rankings are reshuffled by rank noise. The
/// output depends only on (profile, roster, pairs, bundles, schedule).
std::vector<ResponseRecord> mock_responses(const MockProfile& profile, const SubjectRoster& roster,
                                           const std::vector<corruption::PairRecord>& pairs,
                                           const std::map<std::string, annotate::QABundle>& bundles,
                                           const corruption::ParamSchedule& sched);

}  // namespace mpd::ingest
