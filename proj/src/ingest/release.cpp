// Copyright 2026 The MPD Toolkit Authors
// SPDX-License-Identifier: Apache-2.0

#include "mpd/ingest/release.hpp"

#include <array>
#include <map>
#include <set>

#include "mpd/common/error.hpp"
#include "mpd/common/hash.hpp"
#include "mpd/common/table.hpp"

namespace mpd::ingest {

namespace fs = std::filesystem;
using tasks::Dimension;

namespace {

constexpr const char* kHashedFiles[] = {"manifest.jsonl", "responses.jsonl", "scores.tsv",  "mos.tsv",
                                        "splits.tsv",     "normalization.json", "weights.json",
                                        "completeness.json"};

}  // namespace

nlohmann::json CompletenessReport::to_json() const {
  return {{"schema", "mpd.completeness"},
          {"version", kReleaseVersion},
          {"pairs", pairs},
          {"complete_pairs", complete_pairs},
          {"annotations", annotations},
          {"expected_annotations", expected_annotations},
          {"complete", complete()},
          {"missing", missing}};
}

CompletenessReport check_completeness(const Release& r, int subjects_per_dimension) {
  CompletenessReport rep;
  rep.pairs = r.manifest.pairs.size();
  rep.expected_annotations = rep.pairs * tasks::kNumDimensions * static_cast<std::size_t>(subjects_per_dimension);

  std::vector<std::array<int, tasks::kNumDimensions>> counts(r.scores.pairs().size());
  for (const auto& row : r.scores.rows()) {
    ++counts[row.pair][static_cast<int>(tasks::dimension_of(r.scores.task_of_subject(row.subject)))];
  }
  std::set<std::string> with_mos;
  for (const auto& m : r.mos) with_mos.insert(m.pair_id);
  std::set<std::string> in_split(r.splits.pair_ids.begin(), r.splits.pair_ids.end());

  for (const auto& p : r.manifest.pairs) {
    bool ok = true;
    const std::uint32_t idx = r.scores.pairs().find(p.pair_id);
    for (Dimension d : tasks::all_dimensions()) {
      const int have = idx == UINT32_MAX ? 0 : counts[idx][static_cast<int>(d)];
      rep.annotations += static_cast<std::size_t>(have);
      if (have < subjects_per_dimension) {
        ok = false;
        rep.missing.push_back(p.pair_id + ": " + std::string(tasks::dimension_name(d)) + " has " +
                              std::to_string(have) + "/" + std::to_string(subjects_per_dimension) + " subjects");
      }
    }
    if (!with_mos.count(p.pair_id)) {
      ok = false;
      rep.missing.push_back(p.pair_id + ": no MOS record");
    }
    if (!in_split.count(p.pair_id)) {
      ok = false;
      rep.missing.push_back(p.pair_id + ": not in splits");
    }
    if (ok) ++rep.complete_pairs;
  }
  return rep;
}

CompletenessReport export_dataset(const fs::path& dir, const Release& r) {
  fs::create_directories(dir);
  if (fs::exists(dir / "masks")) fs::remove_all(dir / "masks");
  const CompletenessReport rep = check_completeness(r);

  corruption::write_manifest(dir / "manifest.jsonl", r.manifest);
  write_responses(dir / "responses.jsonl", r.responses);
  r.scores.save(dir / "scores.tsv");
  aggregate::write_mos(dir / "mos.tsv", r.mos);
  aggregate::write_splits(dir / "splits.tsv", r.splits);
  write_file(dir / "normalization.json", r.normalization.to_json().dump(2) + "\n");
  write_file(dir / "weights.json", r.weights.to_json().dump(2) + "\n");
  write_file(dir / "completeness.json", rep.to_json().dump(2) + "\n");

  nlohmann::json files = nlohmann::json::object();
  for (const char* f : kHashedFiles) files[f] = sha256_file(dir / f);
  const nlohmann::json prov = {{"schema", "mpd.release"},
                               {"version", kReleaseVersion},
                               {"schedule_hash", r.schedule_hash},
                               {"normalization_hash", r.normalization.hash()},
                               {"weights_hash", r.weights.hash()},
                               {"files", files}};
  write_file(dir / "provenance.json", prov.dump(2) + "\n");
  return rep;
}

Release load_release(const fs::path& dir) {
  nlohmann::json prov;
  try {
    prov = nlohmann::json::parse(read_file(dir / "provenance.json"));
  } catch (const nlohmann::json::exception& e) {
    throw SchemaError("provenance.json: " + std::string(e.what()));
  }
  if (prov.value("schema", "") != "mpd.release" || prov.value("version", 0) != kReleaseVersion) {
    throw SchemaError("provenance.json: expected schema mpd.release version " + std::to_string(kReleaseVersion));
  }
  for (const char* f : kHashedFiles) {
    const std::string want = prov["files"].value(f, "");
    if (sha256_file(dir / f) != want) throw SchemaError(std::string(f) + ": content hash mismatch");
  }

  Release r;
  r.manifest = corruption::read_manifest(dir / "manifest.jsonl");
  r.responses = load_responses(dir / "responses.jsonl").records;
  r.scores = aggregate::SubjectScoreTable::load(dir / "scores.tsv");
  r.mos = aggregate::read_mos(dir / "mos.tsv");
  r.splits = aggregate::read_splits(dir / "splits.tsv");
  try {
    r.normalization = aggregate::NormalizationParams::from_json(nlohmann::json::parse(read_file(dir / "normalization.json")));
    r.weights = aggregate::DimensionWeights::from_json(nlohmann::json::parse(read_file(dir / "weights.json")));
  } catch (const nlohmann::json::exception& e) {
    throw SchemaError(dir.string() + ": " + e.what());
  }
  r.schedule_hash = prov.value("schedule_hash", "");
  if (r.normalization.hash() != prov.value("normalization_hash", "")) {
    throw SchemaError("normalization.json: hash does not match provenance");
  }
  return r;
}

}  // namespace mpd::ingest
