// Copyright 2026 The MPD Toolkit Authors
// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <filesystem>
#include <map>
#include <optional>
#include <string>
#include <vector>

#include "mpd/aggregate/mos.hpp"
#include "mpd/annotate/bundle.hpp"
#include "mpd/corruption/dataset.hpp"
#include "mpd/ingest/mock.hpp"
#include "mpd/ingest/responses.hpp"
#include "mpd/ingest/scoring.hpp"

namespace mpd::testing {

/// Fresh directory under the system temp dir, removed on destruction.
class TempDir {
 public:
  explicit TempDir(const std::string& tag);
  ~TempDir();
  TempDir(const TempDir&) = delete;
  TempDir& operator=(const TempDir&) = delete;

  const std::filesystem::path& path() const { return path_; }
  std::filesystem::path operator/(const std::string& rel) const { return path_ / rel; }

 private:
  std::filesystem::path path_;
};

/// Writes `count` synthetic PPM references plus refs.jsonl into `dir`;
/// content types cycle NSI, SCI, AIGI.
std::vector<corruption::ReferenceEntry> write_synthetic_refs(const std::filesystem::path& dir, int count,
                                                             int size = 96);

/// Planned pairs for refs "ref0000".. without touching any image.
std::vector<corruption::PairRecord> plan_fixture_pairs(int refs, std::uint64_t seed);

std::map<std::string, annotate::QABundle> fixture_bundles(const std::vector<corruption::PairRecord>& pairs);

struct MockRun {
  ingest::ResponseSet responses;
  ingest::ScoringResult scoring;
  aggregate::NormalizationParams params;
  aggregate::MosResult mos;
};

/// mock -> write -> load -> score -> fit (unless `params` given) -> MOS.
MockRun run_mock(const std::vector<corruption::PairRecord>& pairs, double sensitivity, std::uint64_t seed,
                 const std::filesystem::path& work,
                 const std::optional<aggregate::NormalizationParams>& params = std::nullopt);

}  // namespace mpd::testing
