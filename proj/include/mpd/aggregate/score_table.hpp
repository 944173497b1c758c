// Copyright 2026 The MPD Toolkit Authors
// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <cstdint>
#include <filesystem>
#include <string>
#include <string_view>
#include <unordered_map>
#include <vector>

#include "mpd/tasks/task.hpp"

namespace mpd::aggregate {

/// Interned string ids.
class IdPool {
 public:
  std::uint32_t intern(std::string_view id);
  /// Returns UINT32_MAX when unknown.
  std::uint32_t find(std::string_view id) const;
  const std::string& name(std::uint32_t i) const { return names_[i]; }
  std::size_t size() const noexcept { return names_.size(); }

 private:
  std::vector<std::string> names_;
  std::unordered_map<std::string, std::uint32_t> index_;
};

struct ScoreRow {
  std::uint32_t pair = 0;
  std::uint32_t subject = 0;
  tasks::Task task = tasks::Task::kYoN;
  bool excluded = false;
  double value = 0.0;  // as produced by the scorer, before orientation
};

/// Per-subject task scores for every pair. Columns ("slots") are
/// (subject, task) combinations named "<subject>/<task>"; the
/// (pair, subject, task) triple is unique.
class SubjectScoreTable {
 public:
  /// Throws InvalidInput on a duplicate triple or a non-finite value.
  void add(std::string_view pair_id, std::string_view subject, const tasks::TaskScore& s);

  const std::vector<ScoreRow>& rows() const noexcept { return rows_; }
  const IdPool& pairs() const noexcept { return pairs_; }
  /// Slot names, "<subject>/<task>".
  const IdPool& subjects() const noexcept { return subjects_; }
  tasks::Task task_of_subject(std::uint32_t slot) const { return subject_task_[slot]; }
  const std::string& subject_id(std::uint32_t slot) const { return subject_ids_[slot]; }
  void reserve(std::size_t rows) { rows_.reserve(rows); seen_.reserve(rows); }
  const std::string& flags_of(std::size_t row) const;

  /// Slots of one dimension in first-seen order.
  std::vector<std::uint32_t> subjects_in(tasks::Dimension d) const;
  std::vector<std::uint32_t> subjects_for_task(tasks::Task t) const;

  /// TSV: pair_id, subject, task, value, excluded, flags.
  void save(const std::filesystem::path& path) const;
  static SubjectScoreTable load(const std::filesystem::path& path);

 private:
  IdPool pairs_;
  IdPool subjects_;
  std::vector<tasks::Task> subject_task_;
  std::vector<std::string> subject_ids_;
  std::vector<ScoreRow> rows_;
  std::unordered_map<std::uint64_t, std::uint32_t> seen_;  // (pair, subject) -> row
  std::unordered_map<std::size_t, std::string> flags_;     // sparse row flags
};

/// Similarity-oriented value: YoN becomes 1 - v, others pass through.
double orient(tasks::Task task, double value);
inline double orient(const tasks::TaskScore& s) { return orient(s.task, s.value); }

}  // namespace mpd::aggregate
