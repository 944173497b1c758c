// Copyright 2026 The MPD Toolkit Authors
// SPDX-License-Identifier: Apache-2.0

#include "mpd/corruption/schedule.hpp"

#include <cmath>
#include <cstdlib>

#include "mpd/common/error.hpp"
#include "mpd/common/hash.hpp"
#include "mpd/common/table.hpp"

namespace mpd::corruption {

double LevelParams::get(const std::string& name) const {
  auto it = values.find(name);
  if (it == values.end()) throw ConfigError("schedule parameter '" + name + "' missing");
  return it->second;
}

ParamSchedule ParamSchedule::from_json(const nlohmann::json& doc) {
  if (!doc.is_object() || doc.value("schema", "") != "mpd.schedule") {
    throw ConfigError("schedule: expected schema 'mpd.schedule'");
  }
  if (doc.value("version", 0) != kScheduleVersion) {
    throw ConfigError("schedule: unsupported version");
  }
  if (!doc.contains("kinds") || !doc["kinds"].is_object()) {
    throw ConfigError("schedule: missing 'kinds' object");
  }
  ParamSchedule s;
  for (const auto& [name, body] : doc["kinds"].items()) {
    auto kind = parse_kind(name);
    if (!kind) throw ConfigError("schedule: unknown corruption kind '" + name + "'");
    if (!body.contains("severity") || !body["severity"].is_array()) {
      throw ConfigError("schedule: " + name + " has no severity array");
    }
    const auto& sev = body["severity"];
    const std::size_t levels = sev.size();
    if (levels == 0 || levels > kNumLevels) {
      throw ConfigError("schedule: " + name + " must list 1..5 severities");
    }
    for (std::size_t i = 0; i < levels; ++i) {
      if (!sev[i].is_number() || !std::isfinite(sev[i].get<double>())) {
        throw ConfigError("schedule: " + name + " severity must be numeric");
      }
      if (i > 0 && !(sev[i].get<double>() > sev[i - 1].get<double>())) {
        throw ConfigError("schedule: " + name + " severity not strictly increasing in level");
      }
    }
    for (std::size_t i = 0; i < levels; ++i) {
      LevelParams lp;
      lp.severity = sev[i].get<double>();
      if (body.contains("params")) {
        for (const auto& [pname, arr] : body["params"].items()) {
          if (!arr.is_array() || arr.size() != levels) {
            throw ConfigError("schedule: " + name + "." + pname +
                              " must have one value per level");
          }
          lp.values[pname] = arr[i].get<double>();
        }
      }
      s.cells_[{*kind, static_cast<int>(i) + 1}] = std::move(lp);
    }
  }
  s.doc_ = doc;
  s.hash_ = sha256_hex(doc.dump()).substr(0, 16);
  return s;
}

ParamSchedule ParamSchedule::load(const std::filesystem::path& path) {
  const std::string text = read_file(path);
  nlohmann::json doc;
  try {
    doc = nlohmann::json::parse(text);
  } catch (const nlohmann::json::parse_error& e) {
    throw ConfigError("schedule " + path.string() + ": " + e.what());
  }
  return from_json(doc);
}

std::filesystem::path default_schedule_path() {
  if (const char* env = std::getenv("MPD_DATA_DIR")) {
    return std::filesystem::path(env) / "schedule_default.json";
  }
  return std::filesystem::path(MPD_DATA_DIR) / "schedule_default.json";
}

ParamSchedule ParamSchedule::load_default() { return load(default_schedule_path()); }

bool ParamSchedule::contains(CorruptionKind kind, int level) const {
  return cells_.count({kind, level}) != 0;
}

const LevelParams& ParamSchedule::at(CorruptionKind kind, int level) const {
  auto it = cells_.find({kind, level});
  if (it == cells_.end()) {
    throw ConfigError("schedule has no entry for " + std::string(kind_name(kind)) + " level " +
                      std::to_string(level));
  }
  return it->second;
}

double severity_of(const CorruptionSpec& spec, const ParamSchedule& sched) {
  return sched.at(spec.kind, spec.level).severity;
}

}  // namespace mpd::corruption
