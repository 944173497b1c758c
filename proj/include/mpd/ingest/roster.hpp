// Copyright 2026 The MPD Toolkit Authors
// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <filesystem>
#include <map>
#include <set>
#include <string>
#include <vector>

#include <json.hpp>

#include "mpd/tasks/task.hpp"

namespace mpd::ingest {

enum class SubjectKind { kLMM, kSegModel, kDetModel, kRetModel, kMock };

std::string_view subject_kind_name(SubjectKind k);

struct SubjectInfo {
  std::string id;
  std::string name;
  SubjectKind kind = SubjectKind::kMock;
  std::set<tasks::Task> tasks;
};

/// Subject id -> description.
///
/// File schema: {"schema": "mpd.roster", "version": 1,
///   "subjects": [{"id", "name", "kind": "LMM"|"SEG-model"|"DET-model"|
///                 "RET-model"|"mock", "tasks": ["yon", ...]}, ...]}
class SubjectRoster {
 public:
  void add(SubjectInfo s);
  const SubjectInfo* find(const std::string& id) const;
  bool covers(const std::string& id, tasks::Task t) const;
  const std::map<std::string, SubjectInfo>& subjects() const noexcept { return subjects_; }

  /// Problems with the 15-per-dimension layout (15 subjects on each of
  /// YoN/MCQ/VQA/CAP, 5 each on SEG/DET/RET). Empty when complete.
  std::vector<std::string> coverage_problems() const;

  nlohmann::json to_json() const;
  static SubjectRoster from_json(const nlohmann::json& j);
  static SubjectRoster load(const std::filesystem::path& path);

  /// 15 mock LMMs (lmm01..lmm15) plus 5 mock models per SEG/DET/RET.
  static SubjectRoster standard_mock();

 private:
  std::map<std::string, SubjectInfo> subjects_;
};

}  // namespace mpd::ingest
