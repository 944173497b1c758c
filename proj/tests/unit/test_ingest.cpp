// Copyright 2026 The MPD Toolkit Authors
// SPDX-License-Identifier: Apache-2.0

#include <doctest.h>

#include <filesystem>
#include <map>

#include "fixtures.hpp"
#include "mpd/aggregate/split.hpp"
#include "mpd/common/error.hpp"
#include "mpd/common/hash.hpp"
#include "mpd/common/rng.hpp"
#include "mpd/common/table.hpp"
#include "mpd/ingest/release.hpp"
#include "mpd/ingest/roster.hpp"

using namespace mpd;
using namespace mpd::ingest;
using tasks::Task;
namespace fs = std::filesystem;

namespace {

const std::string kHeader = R"({"schema":"mpd.responses","version":1})";

std::string line(const std::string& image, const std::string& subject, const std::string& task,
                 const std::string& payload, double temperature = 0.0) {
  nlohmann::json j = {{"image_id", image},
                      {"subject", subject},
                      {"task", task},
                      {"temperature", temperature},
                      {"payload", nlohmann::json::parse(payload)}};
  return j.dump() + "\n";
}

bool same_payload(const Payload& a, const Payload& b) {
  if (a.index() != b.index()) return false;
  return std::visit(
      [&](const auto& x) {
        using T = std::decay_t<decltype(x)>;
        const T& y = std::get<T>(b);
        if constexpr (std::is_same_v<T, tasks::LogitPair>) {
          return x.yes == y.yes && x.no == y.no;
        } else if constexpr (std::is_same_v<T, TextPayload>) {
          return x.text == y.text;
        } else if constexpr (std::is_same_v<T, tasks::SegMask>) {
          return x.width == y.width && x.height == y.height && x.bits == y.bits;
        } else if constexpr (std::is_same_v<T, tasks::DetectionSet>) {
          if (x.size() != y.size()) return false;
          for (std::size_t i = 0; i < x.size(); ++i) {
            if (x[i].category != y[i].category || x[i].confidence != y[i].confidence ||
                x[i].box.x0 != y[i].box.x0 || x[i].box.y0 != y[i].box.y0 || x[i].box.x1 != y[i].box.x1 ||
                x[i].box.y1 != y[i].box.y1) {
              return false;
            }
          }
          return true;
        } else {
          return x == y;
        }
      },
      a);
}

Release build_release(const std::vector<corruption::PairRecord>& pairs, const testing::MockRun& run) {
  Release r;
  r.manifest.master_seed = 1;
  r.manifest.pairs = pairs;
  r.responses = run.responses.records;
  r.scores = run.scoring.table;
  r.mos = run.mos.records;
  r.splits = aggregate::split_train_val(pairs, 1);
  r.normalization = run.params;
  r.schedule_hash = corruption::ParamSchedule::load_default().hash();
  return r;
}

}  // namespace

TEST_CASE("response files load with per-record rejects") {
  testing::TempDir dir("responses");
  const std::string ranking = "[5,4,3,2,1,0,9,8,7,6]";
  std::string text = kHeader + "\n" + line("img1", "a", "yon", R"({"yes":1.5,"no":-0.5})") +
                     line("img1", "a", "mcq", R"({"logits":[1,2,3,4]})") +
                     line("img1", "a", "vqa", R"({"text":"A red car"})") +
                     line("img1", "r", "ret", R"({"ranking":)" + ranking + "}", 0.7);
  write_file(dir / "ok.jsonl", text);
  const ResponseSet ok = load_responses(dir / "ok.jsonl");
  REQUIRE(ok.records.size() == 4);
  CHECK(ok.rejects.empty());
  CHECK(ok.find("img1", "a", Task::kMCQ) == 1);
  CHECK(ok.find("img1", "a", Task::kCAP) == -1);
  CHECK(std::get<tasks::LogitPair>(ok.records[0].payload).yes == 1.5);
  CHECK(std::get<tasks::RetrievalRanking>(ok.records[3].payload).front() == 5);
  CHECK(ok.records[3].temperature == 0.7);

  const std::string bad = text + line("img2", "a", "mcq", R"({"logits":[1,2,3]})") +
                          line("img1", "a", "yon", R"({"yes":0,"no":0})") +
                          line("img3", "a", "cap", R"({"text":"..."})") +
                          line("img3", "a", "yon", R"({"yes":0,"no":0})", 0.5) + "{not json\n";
  write_file(dir / "bad.jsonl", bad);
  LoadOptions lenient;
  lenient.max_reject_fraction = 0.9;
  const ResponseSet rs = load_responses(dir / "bad.jsonl", lenient);
  CHECK(rs.records.size() == 4);
  REQUIRE(rs.rejects.size() == 5);
  CHECK(rs.rejects[0].reason == "arity");
  CHECK(rs.rejects[0].line == 6);
  CHECK(rs.rejects[1].reason == "duplicate");
  CHECK(rs.rejects[2].reason == "empty-text");
  CHECK(rs.rejects[3].reason == "temperature");
  CHECK(rs.rejects[4].reason == "parse");
  CHECK_THROWS_AS(load_responses(dir / "bad.jsonl"), SchemaError);

  write_file(dir / "nohdr.jsonl", line("img1", "a", "yon", R"({"yes":1,"no":0})"));
  CHECK_THROWS_AS(load_responses(dir / "nohdr.jsonl"), SchemaError);
  CHECK_THROWS_AS(load_responses(dir / "absent.jsonl"), MissingInput);
}

TEST_CASE("reject threshold is one percent by default") {
  testing::TempDir dir("threshold");
  std::string text = kHeader + "\n";
  for (int i = 0; i < 99; ++i) text += line("img" + std::to_string(i), "a", "yon", R"({"yes":1,"no":0})");
  text += line("bad", "a", "mcq", R"({"logits":[1]})");
  write_file(dir / "one.jsonl", text);
  CHECK(load_responses(dir / "one.jsonl").rejects.size() == 1);
  text += line("bad2", "a", "mcq", R"({"logits":[1]})");
  write_file(dir / "two.jsonl", text);
  CHECK_THROWS_AS(load_responses(dir / "two.jsonl"), SchemaError);
}

TEST_CASE("roster checks subjects and tasks") {
  testing::TempDir dir("roster");
  const SubjectRoster roster = SubjectRoster::standard_mock();
  CHECK(roster.coverage_problems().empty());
  CHECK(roster.subjects().size() == 30);
  CHECK(roster.covers("lmm03", Task::kCAP));
  CHECK_FALSE(roster.covers("seg01", Task::kDET));
  const SubjectRoster back = SubjectRoster::from_json(roster.to_json());
  CHECK(back.to_json() == roster.to_json());

  SubjectRoster short_roster;
  short_roster.add({"x", "x", SubjectKind::kLMM, {Task::kYoN}});
  CHECK(short_roster.coverage_problems().size() == 7);

  write_file(dir / "r.jsonl", kHeader + "\n" + line("img", "lmm01", "yon", R"({"yes":1,"no":0})") +
                                  line("img", "stranger", "yon", R"({"yes":1,"no":0})") +
                                  line("img", "seg01", "det", R"({"detections":[]})"));
  LoadOptions o;
  o.roster = &roster;
  o.max_reject_fraction = 1.0;
  const auto rs = load_responses(dir / "r.jsonl", o);
  CHECK(rs.records.size() == 1);
  REQUIRE(rs.rejects.size() == 2);
  CHECK(rs.rejects[0].reason == "unknown-subject");
  CHECK(rs.rejects[1].reason == "task-not-covered");
}

TEST_CASE("PBM masks round-trip") {
  Rng rng(1);
  for (int w : {1, 7, 8, 9, 64, 65}) {
    tasks::SegMask m(w, 5);
    for (int y = 0; y < 5; ++y)
      for (int x = 0; x < w; ++x) m.set(x, y, rng.bernoulli(0.5));
    const auto back = decode_pbm(encode_pbm(m), "t");
    CHECK(back.width == w);
    CHECK(back.bits == m.bits);
  }
  const std::vector<std::uint8_t> junk = {'P', '4', '\n', '9'};
  CHECK_THROWS_AS(decode_pbm(junk, "t"), SchemaError);
}

TEST_CASE("segmentation responses verify the mask hash") {
  testing::TempDir dir("masks");
  tasks::SegMask m(9, 4);
  m.set(3, 2, true);
  const auto bytes = encode_pbm(m);
  const std::string blob(bytes.begin(), bytes.end());
  write_file(dir / "masks/a.pbm", blob);
  const std::string good = sha256_hex(blob);
  write_file(dir / "seg.jsonl", kHeader + "\n" +
                                    line("i1", "s", "seg", R"({"mask":"masks/a.pbm","sha256":")" + good + "\"}") +
                                    line("i2", "s", "seg", R"({"mask":"masks/a.pbm","sha256":"00"})") +
                                    line("i3", "s", "seg", R"({"mask":"masks/none.pbm","sha256":"00"})"));
  LoadOptions o;
  o.max_reject_fraction = 1.0;
  const auto rs = load_responses(dir / "seg.jsonl", o);
  REQUIRE(rs.records.size() == 1);
  CHECK(std::get<tasks::SegMask>(rs.records[0].payload).at(3, 2));
  REQUIRE(rs.rejects.size() == 2);
  CHECK(rs.rejects[0].reason == "mask-hash");
  CHECK(rs.rejects[1].reason == "mask-missing");
}

TEST_CASE("mock responses are deterministic and complete") {
  const auto pairs = testing::plan_fixture_pairs(2, 4);
  const auto bundles = testing::fixture_bundles(pairs);
  const auto sched = corruption::ParamSchedule::load_default();
  const auto roster = SubjectRoster::standard_mock();
  MockProfile prof;
  prof.seed = 3;
  const auto a = mock_responses(prof, roster, pairs, bundles, sched);
  const auto b = mock_responses(prof, roster, pairs, bundles, sched);
  REQUIRE(a.size() == (2 + pairs.size()) * 75);
  for (std::size_t i = 0; i < a.size(); ++i) {
    CHECK(a[i].image_id == b[i].image_id);
    CHECK(same_payload(a[i].payload, b[i].payload));
  }
  prof.seed = 4;
  const auto c = mock_responses(prof, roster, pairs, bundles, sched);
  std::size_t differ = 0;
  for (std::size_t i = 0; i < a.size(); ++i) differ += !same_payload(a[i].payload, c[i].payload);
  CHECK(differ > a.size() / 2);

  prof.sensitivity = -1;
  CHECK_THROWS_AS(mock_responses(prof, roster, pairs, bundles, sched), InvalidInput);
}

TEST_CASE("zero sensitivity copies reference responses") {
  const auto pairs = testing::plan_fixture_pairs(2, 9);
  const auto sched = corruption::ParamSchedule::load_default();
  MockProfile prof;
  prof.sensitivity = 0.0;
  const auto recs =
      mock_responses(prof, SubjectRoster::standard_mock(), pairs, testing::fixture_bundles(pairs), sched);
  std::map<std::tuple<std::string, std::string, Task>, const ResponseRecord*> by_key;
  for (const auto& r : recs) by_key[{r.image_id, r.subject, r.task}] = &r;
  std::size_t checked = 0;
  for (const auto& p : pairs)
    for (const auto& r : recs) {
      if (r.image_id != p.pair_id) continue;
      const ResponseRecord* ref = by_key.at({p.ref_id, r.subject, r.task});
      CHECK(same_payload(ref->payload, r.payload));
      ++checked;
    }
  CHECK(checked == pairs.size() * 75);
}

TEST_CASE("scoring fills every pair, subject and task") {
  testing::TempDir dir("scoring");
  const auto pairs = testing::plan_fixture_pairs(3, 2);
  const auto run = testing::run_mock(pairs, 1.0, 5, dir.path());
  CHECK(run.scoring.cider_documents == 3 * 15);
  CHECK(run.scoring.table.rows().size() == pairs.size() * 75);
  CHECK(run.mos.records.size() == pairs.size());
  CHECK(run.mos.incomplete.empty());
  for (const auto& m : run.mos.records) {
    CHECK(m.mos > 0.0);
    CHECK(m.mos < 5.0);
  }
}

TEST_CASE("release export is byte-identical and reloads") {
  testing::TempDir dir("release");
  const auto pairs = testing::plan_fixture_pairs(1, 8);
  fs::create_directories(dir / "work");
  const auto run = testing::run_mock(pairs, 1.0, 2, dir / "work");
  const Release rel = build_release(pairs, run);

  const CompletenessReport rep = export_dataset(dir / "a", rel);
  export_dataset(dir / "b", rel);
  CHECK(rep.pairs == 30);
  CHECK(rep.annotations == 2250);
  CHECK(rep.expected_annotations == 2250);
  CHECK(rep.complete());
  for (const char* f : {"manifest.jsonl", "responses.jsonl", "scores.tsv", "mos.tsv", "splits.tsv",
                        "normalization.json", "weights.json", "completeness.json", "provenance.json"}) {
    CHECK_MESSAGE(read_file(dir / "a" / f) == read_file(dir / "b" / f), f);
  }

  const Release back = load_release(dir / "a");
  CHECK(back.manifest.pairs.size() == 30);
  CHECK(back.responses.size() == rel.responses.size());
  CHECK(back.scores.rows().size() == rel.scores.rows().size());
  CHECK(back.mos.size() == rel.mos.size());
  CHECK(back.normalization.hash() == rel.normalization.hash());
  CHECK(back.schedule_hash == rel.schedule_hash);

  write_file(dir / "a" / "mos.tsv", read_file(dir / "a" / "mos.tsv") + "\n");
  CHECK_THROWS_AS(load_release(dir / "a"), SchemaError);
}

TEST_CASE("completeness reports missing subjects, MOS and split rows") {
  testing::TempDir dir("complete");
  const auto pairs = testing::plan_fixture_pairs(1, 8);
  const auto run = testing::run_mock(pairs, 1.0, 2, dir.path());
  Release rel = build_release(pairs, run);
  rel.mos.pop_back();
  rel.splits.pair_ids.pop_back();
  rel.splits.labels.pop_back();
  aggregate::SubjectScoreTable partial;
  for (std::size_t i = 1; i < rel.scores.rows().size(); ++i) {
    const auto& row = rel.scores.rows()[i];
    partial.add(rel.scores.pairs().name(row.pair), rel.scores.subject_id(row.subject),
                {row.task, row.value, rel.scores.flags_of(i), row.excluded});
  }
  rel.scores = partial;
  const auto rep = check_completeness(rel);
  CHECK(rep.annotations == 2249);
  CHECK(rep.complete_pairs == 28);
  CHECK(rep.missing.size() == 3);
}
