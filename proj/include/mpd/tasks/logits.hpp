// Copyright 2026 The MPD Toolkit Authors
// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <array>
#include <span>
#include <vector>

#include "mpd/tasks/task.hpp"

namespace mpd::tasks {

/// Next-token logits for "Yes" and "No".
struct LogitPair {
  double yes = 0.0;
  double no = 0.0;
};

/// Logits for options A-D.
using LogitQuad = std::array<double, 4>;

/// Max-shifted softmax. Throws InvalidInput on empty or non-finite input.
std::vector<double> softmax(std::span<const double> logits);

/// |p_yes(dis) - p_yes(ref)|, a degradation score in [0,1].
TaskScore score_yon(const LogitPair& ref, const LogitPair& dis);

/// Cosine similarity of the two option distributions, in (0,1].
TaskScore score_mcq(const LogitQuad& ref, const LogitQuad& dis);

double cosine(std::span<const double> a, std::span<const double> b);

}  // namespace mpd::tasks
