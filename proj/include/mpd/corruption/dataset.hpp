// Copyright 2026 The MPD Toolkit Authors
// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <cstdint>
#include <filesystem>
#include <string>
#include <vector>

#include "mpd/corruption/apply.hpp"
#include "mpd/corruption/schedule.hpp"

namespace mpd::corruption {

inline constexpr int kManifestVersion = 1;

enum class ContentType { kNSI, kSCI, kAIGI };

std::string_view content_type_name(ContentType t);
/// Throws SchemaError for anything other than NSI, SCI or AIGI.
ContentType parse_content_type(std::string_view s);

struct ReferenceEntry {
  std::string ref_id;
  ContentType content_type = ContentType::kNSI;
  std::filesystem::path path;  // absolute, or relative to the listing file
};

/// Reads a reference listing: one JSON object per line with keys
/// ref_id, content_type, path. Relative paths resolve against the listing's
/// directory. Duplicate ids are a SchemaError.
std::vector<ReferenceEntry> read_references(const std::filesystem::path& listing);

/// One distorted image of the set.
struct PairRecord {
  std::string pair_id;  // "<ref_id>__<Kind>"
  std::string ref_id;
  ContentType content_type = ContentType::kNSI;
  CorruptionSpec spec;
  std::string path;  // relative to the manifest directory
  std::string schedule_hash;
  std::string flags;  // comma-separated, empty when none

  friend bool operator==(const PairRecord&, const PairRecord&) = default;
};

std::string make_pair_id(std::string_view ref_id, CorruptionKind kind);

/// The 30 specs for one reference: level drawn uniformly from 1..5 and a
/// per-pair seed, both derived from (master_seed, ref_id, kind).
std::vector<PairRecord> plan_pairs(const ReferenceEntry& ref, std::uint64_t master_seed,
                                   const ParamSchedule& sched, const Backends& backends = {});

struct Manifest {
  std::uint64_t master_seed = 0;
  std::string rng = "mt19937_64";
  std::vector<PairRecord> pairs;
};

/// Line-delimited JSON: a header object then one PairRecord per line.
void write_manifest(const std::filesystem::path& path, const Manifest& m);
Manifest read_manifest(const std::filesystem::path& path);

struct SkippedReference {
  std::string ref_id;
  std::string reason;
};

struct GenerateOptions {
  std::filesystem::path out_dir;
  std::uint64_t master_seed = 0;
  Backends backends;
  /// Raster extension for distorted images; ".png" needs the OpenCV backend.
  std::string extension = ".png";
};

struct GenerateReport {
  Manifest manifest;
  std::vector<SkippedReference> skipped;
  bool ok() const noexcept { return skipped.empty(); }
};

/// Writes out_dir/manifest.jsonl and out_dir/images/<ref>/NN_<Kind>_L<k>.<ext>.
/// Unreadable references are skipped and reported; any other failure
/// (codec unavailable, bad schedule) aborts. Output bytes do not depend on
/// the thread count.
GenerateReport generate_dataset(const std::vector<ReferenceEntry>& refs,
                                const ParamSchedule& sched, const GenerateOptions& opts);

}  // namespace mpd::corruption
