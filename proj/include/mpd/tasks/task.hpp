// Copyright 2026 The MPD Toolkit Authors
// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <array>
#include <cstdint>
#include <optional>
#include <string>
#include <string_view>

namespace mpd::tasks {

enum class Task : std::uint8_t { kYoN, kMCQ, kVQA, kCAP, kSEG, kDET, kRET };
inline constexpr int kNumTasks = 7;

/// The five MOS dimensions. SEG, DET and RET pool into kOthers.
enum class Dimension : std::uint8_t { kYoN, kMCQ, kVQA, kCAP, kOthers };
inline constexpr int kNumDimensions = 5;

enum class Orientation : std::uint8_t { kSimilarity, kDegradation };

const std::array<Task, kNumTasks>& all_tasks();
const std::array<Dimension, kNumDimensions>& all_dimensions();

/// Lowercase wire names: "yon", "mcq", "vqa", "cap", "seg", "det", "ret".
std::string_view task_name(Task t);
std::optional<Task> parse_task(std::string_view s);
/// "yon", "mcq", "vqa", "cap", "others".
std::string_view dimension_name(Dimension d);
std::optional<Dimension> parse_dimension(std::string_view s);

Dimension dimension_of(Task t);
/// YoN measures degradation; every other task measures similarity.
Orientation orientation_of(Task t);

/// One subject's score for one (reference, distorted) pair.
struct TaskScore {
  Task task = Task::kYoN;
  double value = 0.0;
  /// Comma-separated notes such as "no-detection" or "spice=absent".
  std::string flags;
  /// Pair carries no usable score for this subject (e.g. no reference
  /// detection); value is meaningless.
  bool excluded = false;

  Orientation orientation() const { return orientation_of(task); }
};

}  // namespace mpd::tasks
