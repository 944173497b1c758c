// Copyright 2026 The MPD Toolkit Authors
// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <optional>
#include <string>
#include <vector>

#include "mpd/aggregate/mos.hpp"
#include "mpd/aggregate/score_table.hpp"

namespace mpd::aggregate {

/// Which subjects to correlate.
struct AgreementScope {
  enum class Kind { kDimension, kTask, kOverall };
  Kind kind = Kind::kOverall;
  tasks::Dimension dimension = tasks::Dimension::kYoN;
  tasks::Task task = tasks::Task::kYoN;

  static AgreementScope of(tasks::Dimension d) { return {Kind::kDimension, d, {}}; }
  static AgreementScope of(tasks::Task t) { return {Kind::kTask, {}, t}; }
  static AgreementScope overall() { return {}; }
  std::string name() const;
};

struct AgreementMatrix {
  std::vector<std::string> subjects;
  /// Row-major; NaN where undefined.
  std::vector<double> srcc;
  std::vector<bool> undefined;  // per subject: constant column
  std::size_t pairs_used = 0;
  double mean_off_diagonal = 0.0;

  double at(std::size_t i, std::size_t j) const { return srcc[i * subjects.size() + j]; }
};

/// SRCC between every two subjects over the pairs all of them scored.
///
/// Dimension and task scopes use oriented scores. The overall scope builds
/// 15 composite subjects: composite k sums the normalized scores of the
/// k-th subject of every dimension (subjects ordered by id), so `params`
/// is required for it. Subjects whose column is constant are marked
/// undefined and left out of the mean. Throws InvalidInput with fewer than
/// 2 subjects or 3 pairs.
AgreementMatrix subject_agreement(const SubjectScoreTable& table, const AgreementScope& scope,
                                  const NormalizationParams* params = nullptr);

}  // namespace mpd::aggregate
