// Copyright 2026 The MPD Toolkit Authors
// SPDX-License-Identifier: Apache-2.0

#include "fixtures.hpp"

#include <unistd.h>

#include <atomic>
#include <cstdio>

#include "mpd/common/hash.hpp"
#include "mpd/common/table.hpp"
#include "mpd/imgcore/io.hpp"
#include "mpd/imgcore/synthetic.hpp"
#include "mpd/ingest/roster.hpp"

namespace mpd::testing {

namespace fs = std::filesystem;

TempDir::TempDir(const std::string& tag) {
  static std::atomic<int> counter{0};
  path_ = fs::temp_directory_path() /
          ("mpd-" + tag + "-" + std::to_string(::getpid()) + "-" + std::to_string(counter++));
  fs::remove_all(path_);
  fs::create_directories(path_);
}

TempDir::~TempDir() {
  std::error_code ec;
  fs::remove_all(path_, ec);
}

namespace {

std::string ref_name(int i) {
  char id[16];
  std::snprintf(id, sizeof id, "ref%04d", i);
  return id;
}

constexpr corruption::ContentType kTypes[] = {corruption::ContentType::kNSI, corruption::ContentType::kSCI,
                                              corruption::ContentType::kAIGI};

}  // namespace

std::vector<corruption::ReferenceEntry> write_synthetic_refs(const fs::path& dir, int count, int size) {
  std::vector<corruption::ReferenceEntry> out;
  std::string listing;
  for (int i = 0; i < count; ++i) {
    const std::string id = ref_name(i);
    const fs::path p = dir / "refs" / (id + ".ppm");
    imgcore::write_image(p, imgcore::synthetic_image(static_cast<std::uint64_t>(i), size, size));
    out.push_back({id, kTypes[i % 3], p.string()});
    listing += "{\"ref_id\":\"" + id + "\",\"content_type\":\"" +
               std::string(corruption::content_type_name(kTypes[i % 3])) + "\",\"path\":\"refs/" + id + ".ppm\"}\n";
  }
  write_file(dir / "refs.jsonl", listing);
  return out;
}

std::vector<corruption::PairRecord> plan_fixture_pairs(int refs, std::uint64_t seed) {
  const auto sched = corruption::ParamSchedule::load_default();
  std::vector<corruption::PairRecord> pairs;
  for (int i = 0; i < refs; ++i) {
    corruption::ReferenceEntry e{ref_name(i), kTypes[i % 3], "refs/" + ref_name(i) + ".ppm"};
    for (auto& p : corruption::plan_pairs(e, seed, sched)) pairs.push_back(std::move(p));
  }
  return pairs;
}

std::map<std::string, annotate::QABundle> fixture_bundles(const std::vector<corruption::PairRecord>& pairs) {
  std::map<std::string, annotate::QABundle> out;
  for (const auto& p : pairs)
    if (!out.count(p.ref_id)) out.emplace(p.ref_id, annotate::synthetic_bundle(p.ref_id));
  return out;
}

MockRun run_mock(const std::vector<corruption::PairRecord>& pairs, double sensitivity, std::uint64_t seed,
                 const fs::path& work, const std::optional<aggregate::NormalizationParams>& params) {
  const auto sched = corruption::ParamSchedule::load_default();
  ingest::MockProfile profile;
  profile.sensitivity = sensitivity;
  profile.seed = seed;
  const auto roster = ingest::SubjectRoster::standard_mock();
  const auto recs = ingest::mock_responses(profile, roster, pairs, fixture_bundles(pairs), sched);
  const fs::path file = work / "responses.jsonl";
  ingest::write_responses(file, recs);

  MockRun run;
  ingest::LoadOptions lo;
  lo.roster = &roster;
  run.responses = ingest::load_responses(file, lo);
  run.scoring = ingest::score_pairs(pairs, run.responses);
  run.params = params ? *params : aggregate::fit_normalization(run.scoring.table);
  run.mos = aggregate::compute_mos(run.scoring.table, run.params);
  return run;
}

}  // namespace mpd::testing
