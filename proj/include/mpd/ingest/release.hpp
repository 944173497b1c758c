// Copyright 2026 The MPD Toolkit Authors
// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <filesystem>
#include <string>
#include <vector>

#include <json.hpp>

#include "mpd/aggregate/mos.hpp"
#include "mpd/aggregate/score_table.hpp"
#include "mpd/aggregate/split.hpp"
#include "mpd/corruption/dataset.hpp"
#include "mpd/ingest/responses.hpp"

namespace mpd::ingest {

inline constexpr int kReleaseVersion = 1;

/// Everything that goes into a release directory.
struct Release {
  corruption::Manifest manifest;
  std::vector<ResponseRecord> responses;
  aggregate::SubjectScoreTable scores;
  std::vector<aggregate::MosRecord> mos;
  aggregate::SplitAssignment splits;
  aggregate::NormalizationParams normalization;
  aggregate::DimensionWeights weights;
  std::string schedule_hash;
};

struct CompletenessReport {
  std::size_t pairs = 0;
  std::size_t complete_pairs = 0;
  /// One per (pair, subject, task) score row.
  std::size_t annotations = 0;
  /// pairs x 5 dimensions x subjects per dimension.
  std::size_t expected_annotations = 0;
  std::vector<std::string> missing;

  bool complete() const { return missing.empty(); }
  nlohmann::json to_json() const;
};

/// Counts annotations per pair and lists every gap: pairs short of
/// `subjects_per_dimension` in some dimension, pairs without a MOS record,
/// and pairs absent from the splits.
CompletenessReport check_completeness(const Release& r,
                                      int subjects_per_dimension = aggregate::kSubjectsPerDimension);

/// Writes manifest.jsonl, responses.jsonl (+ masks/), scores.tsv, mos.tsv,
/// splits.tsv, normalization.json, weights.json, completeness.json and
/// provenance.json (schema version, schedule/normalization/weights hashes,
/// sha256 of every other file). Output bytes depend only on `r`.
CompletenessReport export_dataset(const std::filesystem::path& dir, const Release& r);

/// Reads a directory written by export_dataset; verifies the file hashes
/// listed in provenance.json (SchemaError on mismatch).
Release load_release(const std::filesystem::path& dir);

}  // namespace mpd::ingest
