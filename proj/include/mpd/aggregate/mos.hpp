// Copyright 2026 The MPD Toolkit Authors
// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <array>
#include <filesystem>
#include <string>
#include <vector>

#include <json.hpp>

#include "mpd/aggregate/score_table.hpp"

namespace mpd::aggregate {

inline constexpr int kSubjectsPerDimension = 15;

enum class PoolingOrder {
  /// Normalize each subject's oriented score, then average over subjects.
  kNormalizeThenAverage,
  /// Average oriented scores per task first, then normalize the averages.
  kAverageThenNormalize,
};

struct Range {
  double min = 0.0;
  double max = 1.0;
};

/// Min-max ranges of oriented scores, one per task. The Others dimension
/// keeps separate ranges for SEG, DET and RET because their scales differ.
struct NormalizationParams {
  std::array<Range, tasks::kNumTasks> ranges{};
  bool percentile_clip = false;
  PoolingOrder order = PoolingOrder::kNormalizeThenAverage;

  const Range& range(tasks::Task t) const { return ranges[static_cast<int>(t)]; }
  /// Clipped to [0,1].
  double normalize(tasks::Task t, double oriented) const;

  nlohmann::json to_json() const;
  static NormalizationParams from_json(const nlohmann::json& j);
  /// Short SHA-256 prefix of to_json().
  std::string hash() const;
};

struct FitOptions {
  /// Use the 1st/99th percentiles instead of the extremes.
  bool percentile_clip = false;
  PoolingOrder order = PoolingOrder::kNormalizeThenAverage;
};

/// Fits ranges over every non-excluded row (or per-pair task means under
/// kAverageThenNormalize). Throws DegenerateDimension when a task present in
/// the table has fewer than two distinct values.
NormalizationParams fit_normalization(const SubjectScoreTable& table, const FitOptions& opts = {});

struct DimensionWeights {
  std::array<double, tasks::kNumDimensions> w{1, 1, 1, 1, 1};
  bool is_default() const;
  nlohmann::json to_json() const;
  /// Keys are dimension names; missing keys keep weight 1.
  static DimensionWeights from_json(const nlohmann::json& j);
  std::string hash() const;
};

struct MosOptions {
  DimensionWeights weights;
  /// Score pairs with missing subjects from the available ones.
  bool allow_partial = false;
  int subjects_per_dimension = kSubjectsPerDimension;
};

struct MosRecord {
  std::string pair_id;
  std::array<double, tasks::kNumDimensions> dims{};
  double mos = 0.0;
  std::string flags;
  std::string provenance;  // params hash, plus weights hash when non-default
};

struct MosResult {
  std::vector<MosRecord> records;  // table order of first appearance
  std::vector<std::string> incomplete;  // pair ids left out
};

/// Per-pair dimension scores and their weighted sum.
///
/// A pair missing a subject response in any dimension is incomplete and
/// skipped unless allow_partial is set, in which case the dimension
/// averages over the subjects present and the record is flagged "partial".
/// Excluded scores (e.g. no reference detection) drop out of the average
/// and are counted in the "excluded=N" flag.
MosResult compute_mos(const SubjectScoreTable& table, const NormalizationParams& params,
                      const MosOptions& opts = {});

/// TSV: pair_id, dim_yon, dim_mcq, dim_vqa, dim_cap, dim_others, mos, flags, provenance.
void write_mos(const std::filesystem::path& path, const std::vector<MosRecord>& recs);
std::vector<MosRecord> read_mos(const std::filesystem::path& path);

}  // namespace mpd::aggregate
