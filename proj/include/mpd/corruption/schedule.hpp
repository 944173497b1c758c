// Copyright 2026 The MPD Toolkit Authors
// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <array>
#include <cstdint>
#include <filesystem>
#include <map>
#include <optional>
#include <string>

#include <json.hpp>

#include "mpd/corruption/kind.hpp"

namespace mpd::corruption {

inline constexpr int kScheduleVersion = 1;

/// One corruption instance: what to apply, how hard, and the seed that
/// drives its random choices.
struct CorruptionSpec {
  CorruptionKind kind = CorruptionKind::kGaussianFilter;
  int level = 1;
  std::uint64_t seed = 0;

  friend bool operator==(const CorruptionSpec&, const CorruptionSpec&) = default;
};

/// Parameters of one (kind, level) cell.
struct LevelParams {
  double severity = 0.0;
  std::map<std::string, double> values;

  /// Named kind-specific parameter; throws ConfigError when absent.
  double get(const std::string& name) const;
};

/// Per-(kind, level) parameter table loaded from a JSON config file.
///
/// File schema:
///   { "schema": "mpd.schedule", "version": 1,
///     "kinds": { "<KindName>": { "severity": [s1..s5],
///                                "params": { "<name>": [v1..v5], ... },
///                                "note": "..." }, ... } }
/// Every array has one entry per level. The severity scalar must be
/// strictly increasing in level.
class ParamSchedule {
 public:
  static ParamSchedule from_json(const nlohmann::json& doc);
  static ParamSchedule load(const std::filesystem::path& path);
  /// The schedule shipped in data/schedule_default.json.
  static ParamSchedule load_default();

  /// Throws ConfigError when the (kind, level) cell is missing.
  const LevelParams& at(CorruptionKind kind, int level) const;
  bool contains(CorruptionKind kind, int level) const;

  /// Short SHA-256 prefix of the canonical JSON form.
  const std::string& hash() const noexcept { return hash_; }
  const nlohmann::json& document() const noexcept { return doc_; }

 private:
  std::map<std::pair<CorruptionKind, int>, LevelParams> cells_;
  nlohmann::json doc_;
  std::string hash_;
};

/// The schedule's severity scalar for a CorruptionSpec's (kind, level).
double severity_of(const CorruptionSpec& spec, const ParamSchedule& sched);

/// Path of the bundled default schedule.
std::filesystem::path default_schedule_path();

}  // namespace mpd::corruption
