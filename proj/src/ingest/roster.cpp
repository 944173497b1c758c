// Copyright 2026 The MPD Toolkit Authors
// SPDX-License-Identifier: Apache-2.0

#include "mpd/ingest/roster.hpp"

#include <cstdio>

#include "mpd/common/error.hpp"
#include "mpd/common/table.hpp"

namespace mpd::ingest {

using tasks::Task;

std::string_view subject_kind_name(SubjectKind k) {
  switch (k) {
    case SubjectKind::kLMM: return "LMM";
    case SubjectKind::kSegModel: return "SEG-model";
    case SubjectKind::kDetModel: return "DET-model";
    case SubjectKind::kRetModel: return "RET-model";
    case SubjectKind::kMock: return "mock";
  }
  return "?";
}

namespace {
SubjectKind parse_subject_kind(const std::string& s) {
  for (auto k : {SubjectKind::kLMM, SubjectKind::kSegModel, SubjectKind::kDetModel,
                 SubjectKind::kRetModel, SubjectKind::kMock}) {
    if (subject_kind_name(k) == s) return k;
  }
  throw SchemaError("unknown subject kind '" + s + "'");
}
}  // namespace

void SubjectRoster::add(SubjectInfo s) {
  if (s.id.empty() || s.id.find_first_of("/\t\n") != std::string::npos) {
    throw SchemaError("invalid subject id '" + s.id + "'");
  }
  if (s.tasks.empty()) throw SchemaError("subject " + s.id + " covers no task");
  const std::string id = s.id;
  if (!subjects_.emplace(id, std::move(s)).second) throw SchemaError("duplicate subject " + id);
}

const SubjectInfo* SubjectRoster::find(const std::string& id) const {
  auto it = subjects_.find(id);
  return it == subjects_.end() ? nullptr : &it->second;
}

bool SubjectRoster::covers(const std::string& id, Task t) const {
  const SubjectInfo* s = find(id);
  return s && s->tasks.count(t);
}

std::vector<std::string> SubjectRoster::coverage_problems() const {
  std::vector<std::string> out;
  for (Task t : tasks::all_tasks()) {
    int n = 0;
    for (const auto& [id, s] : subjects_) n += s.tasks.count(t) ? 1 : 0;
    const int want = tasks::dimension_of(t) == tasks::Dimension::kOthers ? 5 : 15;
    if (n != want) {
      out.push_back(std::string(tasks::task_name(t)) + ": " + std::to_string(n) +
                    " subjects, expected " + std::to_string(want));
    }
  }
  return out;
}

nlohmann::json SubjectRoster::to_json() const {
  nlohmann::json subs = nlohmann::json::array();
  for (const auto& [id, s] : subjects_) {
    std::vector<std::string> ts;
    for (Task t : s.tasks) ts.emplace_back(tasks::task_name(t));
    subs.push_back({{"id", id}, {"name", s.name}, {"kind", subject_kind_name(s.kind)}, {"tasks", ts}});
  }
  return {{"schema", "mpd.roster"}, {"version", 1}, {"subjects", subs}};
}

SubjectRoster SubjectRoster::from_json(const nlohmann::json& j) {
  if (j.value("schema", "") != "mpd.roster") throw SchemaError("not a roster file");
  if (j.value("version", 0) != 1) throw SchemaError("unsupported roster version");
  SubjectRoster r;
  try {
    for (const auto& s : j.at("subjects")) {
      SubjectInfo info;
      info.id = s.at("id").get<std::string>();
      info.name = s.value("name", info.id);
      info.kind = parse_subject_kind(s.at("kind").get<std::string>());
      for (const auto& t : s.at("tasks")) {
        const auto task = tasks::parse_task(t.get<std::string>());
        if (!task) throw SchemaError("unknown task in roster for " + info.id);
        info.tasks.insert(*task);
      }
      r.add(std::move(info));
    }
  } catch (const nlohmann::json::exception& e) {
    throw SchemaError(std::string("malformed roster: ") + e.what());
  }
  return r;
}

SubjectRoster SubjectRoster::load(const std::filesystem::path& path) {
  try {
    return from_json(nlohmann::json::parse(read_file(path)));
  } catch (const nlohmann::json::exception& e) {
    throw SchemaError(path.string() + ": " + e.what());
  }
}

SubjectRoster SubjectRoster::standard_mock() {
  SubjectRoster r;
  char id[16];
  for (int i = 1; i <= 15; ++i) {
    std::snprintf(id, sizeof id, "lmm%02d", i);
    r.add({id, id, SubjectKind::kMock, {Task::kYoN, Task::kMCQ, Task::kVQA, Task::kCAP}});
  }
  const std::pair<const char*, Task> models[] = {{"seg", Task::kSEG}, {"det", Task::kDET}, {"ret", Task::kRET}};
  for (const auto& [prefix, task] : models) {
    for (int i = 1; i <= 5; ++i) {
      std::snprintf(id, sizeof id, "%s%02d", prefix, i);
      r.add({id, id, SubjectKind::kMock, {task}});
    }
  }
  return r;
}

}  // namespace mpd::ingest
