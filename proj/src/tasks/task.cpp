// Copyright 2026 The MPD Toolkit Authors
// SPDX-License-Identifier: Apache-2.0

#include "mpd/tasks/task.hpp"

namespace mpd::tasks {

namespace {
constexpr std::array<std::string_view, kNumTasks> kTaskNames{"yon", "mcq", "vqa", "cap",
                                                             "seg", "det", "ret"};
constexpr std::array<std::string_view, kNumDimensions> kDimNames{"yon", "mcq", "vqa", "cap",
                                                                 "others"};
}  // namespace

const std::array<Task, kNumTasks>& all_tasks() {
  static constexpr std::array<Task, kNumTasks> k{Task::kYoN, Task::kMCQ, Task::kVQA, Task::kCAP,
                                                 Task::kSEG, Task::kDET, Task::kRET};
  return k;
}

const std::array<Dimension, kNumDimensions>& all_dimensions() {
  static constexpr std::array<Dimension, kNumDimensions> k{
      Dimension::kYoN, Dimension::kMCQ, Dimension::kVQA, Dimension::kCAP, Dimension::kOthers};
  return k;
}

std::string_view task_name(Task t) { return kTaskNames[static_cast<int>(t)]; }

std::optional<Task> parse_task(std::string_view s) {
  for (int i = 0; i < kNumTasks; ++i)
    if (kTaskNames[i] == s) return static_cast<Task>(i);
  return std::nullopt;
}

std::string_view dimension_name(Dimension d) { return kDimNames[static_cast<int>(d)]; }

std::optional<Dimension> parse_dimension(std::string_view s) {
  for (int i = 0; i < kNumDimensions; ++i)
    if (kDimNames[i] == s) return static_cast<Dimension>(i);
  return std::nullopt;
}

Dimension dimension_of(Task t) {
  switch (t) {
    case Task::kYoN: return Dimension::kYoN;
    case Task::kMCQ: return Dimension::kMCQ;
    case Task::kVQA: return Dimension::kVQA;
    case Task::kCAP: return Dimension::kCAP;
    default: return Dimension::kOthers;
  }
}

Orientation orientation_of(Task t) {
  return t == Task::kYoN ? Orientation::kDegradation : Orientation::kSimilarity;
}

}  // namespace mpd::tasks
