// Copyright 2026 The MPD Toolkit Authors
// SPDX-License-Identifier: Apache-2.0

#include "mpd/aggregate/score_table.hpp"

#include <cmath>
#include <limits>

#include "mpd/common/error.hpp"
#include "mpd/common/table.hpp"

namespace mpd::aggregate {

std::uint32_t IdPool::intern(std::string_view id) {
  auto it = index_.find(std::string(id));
  if (it != index_.end()) return it->second;
  const auto i = static_cast<std::uint32_t>(names_.size());
  names_.emplace_back(id);
  index_.emplace(names_.back(), i);
  return i;
}

std::uint32_t IdPool::find(std::string_view id) const {
  auto it = index_.find(std::string(id));
  return it == index_.end() ? std::numeric_limits<std::uint32_t>::max() : it->second;
}

void SubjectScoreTable::add(std::string_view pair_id, std::string_view subject,
                            const tasks::TaskScore& s) {
  if (!s.excluded && !std::isfinite(s.value)) {
    throw InvalidInput("non-finite score for " + std::string(pair_id) + "/" + std::string(subject));
  }
  if (subject.empty() || subject.find_first_of("/\t\n") != std::string_view::npos) {
    throw InvalidInput("invalid subject id '" + std::string(subject) + "'");
  }
  const std::uint32_t sub =
      subjects_.intern(std::string(subject) + "/" + std::string(tasks::task_name(s.task)));
  if (sub == subject_task_.size()) {
    subject_task_.push_back(s.task);
    subject_ids_.emplace_back(subject);
  }
  const std::uint32_t pair = pairs_.intern(pair_id);
  const std::uint64_t key = (static_cast<std::uint64_t>(pair) << 32) | sub;
  if (!seen_.emplace(key, static_cast<std::uint32_t>(rows_.size())).second) {
    throw InvalidInput("duplicate score for (" + std::string(pair_id) + ", " + std::string(subject) +
                       ", " + std::string(tasks::task_name(s.task)) + ")");
  }
  if (!s.flags.empty()) flags_[rows_.size()] = s.flags;
  rows_.push_back({pair, sub, s.task, s.excluded, s.excluded ? 0.0 : s.value});
}

const std::string& SubjectScoreTable::flags_of(std::size_t row) const {
  static const std::string empty;
  auto it = flags_.find(row);
  return it == flags_.end() ? empty : it->second;
}

std::vector<std::uint32_t> SubjectScoreTable::subjects_in(tasks::Dimension d) const {
  std::vector<std::uint32_t> out;
  for (std::uint32_t i = 0; i < subject_task_.size(); ++i)
    if (tasks::dimension_of(subject_task_[i]) == d) out.push_back(i);
  return out;
}

std::vector<std::uint32_t> SubjectScoreTable::subjects_for_task(tasks::Task t) const {
  std::vector<std::uint32_t> out;
  for (std::uint32_t i = 0; i < subject_task_.size(); ++i)
    if (subject_task_[i] == t) out.push_back(i);
  return out;
}

void SubjectScoreTable::save(const std::filesystem::path& path) const {
  Table t;
  t.header = {"pair_id", "subject", "task", "value", "excluded", "flags"};
  t.rows.reserve(rows_.size());
  for (std::size_t i = 0; i < rows_.size(); ++i) {
    const auto& r = rows_[i];
    t.rows.push_back({pairs_.name(r.pair), subject_ids_[r.subject],
                      std::string(tasks::task_name(r.task)), format_double(r.value),
                      r.excluded ? "1" : "0", flags_of(i)});
  }
  write_table(path, t);
}

SubjectScoreTable SubjectScoreTable::load(const std::filesystem::path& path) {
  const Table t = read_table(path);
  const int cp = t.column("pair_id"), cs = t.column("subject"), ct = t.column("task"),
            cv = t.column("value"), ce = t.column("excluded"), cf = t.column("flags");
  if (cp < 0 || cs < 0 || ct < 0 || cv < 0) {
    throw SchemaError(path.string() + ": score table needs pair_id, subject, task, value");
  }
  SubjectScoreTable out;
  for (const auto& row : t.rows) {
    const auto task = tasks::parse_task(row[ct]);
    if (!task) throw SchemaError(path.string() + ": unknown task '" + row[ct] + "'");
    tasks::TaskScore s;
    s.task = *task;
    s.excluded = ce >= 0 && row[ce] == "1";
    try {
      s.value = parse_double(row[cv], path.string());
    } catch (const Error& e) {
      throw SchemaError(e.what());
    }
    if (cf >= 0) s.flags = row[cf];
    out.add(row[cp], row[cs], s);
  }
  return out;
}

double orient(tasks::Task task, double value) {
  return tasks::orientation_of(task) == tasks::Orientation::kDegradation ? 1.0 - value : value;
}

}  // namespace mpd::aggregate
