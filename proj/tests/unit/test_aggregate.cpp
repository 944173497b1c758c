// Copyright 2026 The MPD Toolkit Authors
// SPDX-License-Identifier: Apache-2.0

#include <doctest.h>

#include <algorithm>
#include <cmath>
#include <map>
#include <set>

#include "fixtures.hpp"
#include "mpd/aggregate/agreement.hpp"
#include "mpd/aggregate/mos.hpp"
#include "mpd/aggregate/score_table.hpp"
#include "mpd/aggregate/split.hpp"
#include "mpd/common/error.hpp"
#include "mpd/common/rng.hpp"
#include "mpd/common/table.hpp"

using namespace mpd;
using namespace mpd::aggregate;
using tasks::Dimension;
using tasks::Task;
using tasks::TaskScore;

namespace {

std::string subject_name(int i) { return "s" + std::to_string(100 + i).substr(1); }

// Standard layout: 15 subjects per dimension, Others split 5/5/5 over SEG, DET, RET.
std::vector<std::pair<std::string, Task>> layout() {
  std::vector<std::pair<std::string, Task>> out;
  for (Task t : {Task::kYoN, Task::kMCQ, Task::kVQA, Task::kCAP})
    for (int i = 0; i < 15; ++i) out.emplace_back(subject_name(i), t);
  for (int i = 0; i < 15; ++i) out.emplace_back(subject_name(i), i < 5 ? Task::kSEG : i < 10 ? Task::kDET : Task::kRET);
  return out;
}

double draw_value(Rng& rng, Task t) {
  switch (t) {
    case Task::kCAP: return rng.uniform(0, 11);
    case Task::kRET: return static_cast<double>(rng.below(4));
    default: return rng.uniform();
  }
}

struct Toy {
  SubjectScoreTable table;
  // raw[pair][slot]
  std::vector<std::vector<double>> raw;
};

Toy toy_table(int pairs, std::uint64_t seed) {
  Rng rng(seed);
  Toy toy;
  const auto lay = layout();
  for (int p = 0; p < pairs; ++p) {
    toy.raw.emplace_back();
    for (const auto& [s, t] : lay) {
      const double v = draw_value(rng, t);
      toy.raw.back().push_back(v);
      toy.table.add("pair" + std::to_string(p), s, {t, v, "", false});
    }
  }
  return toy;
}

}  // namespace

TEST_CASE("orientation flips only the degradation task") {
  CHECK(orient(Task::kYoN, 0.3) == doctest::Approx(0.7));
  CHECK(orient(Task::kMCQ, 0.3) == 0.3);
  CHECK(orient(Task::kRET, 2.0) == 2.0);
  CHECK(orient(TaskScore{Task::kYoN, 1.0, "", false}) == 0.0);
}

TEST_CASE("score table rejects duplicates and non-finite values") {
  SubjectScoreTable t;
  t.add("p", "a", {Task::kYoN, 0.5, "", false});
  t.add("p", "a", {Task::kMCQ, 0.5, "", false});
  CHECK_THROWS_AS(t.add("p", "a", {Task::kYoN, 0.1, "", false}), InvalidInput);
  CHECK_THROWS_AS(t.add("q", "a", {Task::kYoN, NAN, "", false}), InvalidInput);
  CHECK(t.rows().size() == 2);
  CHECK(t.subjects().size() == 2);
  CHECK(t.subjects_in(Dimension::kYoN).size() == 1);
}

TEST_CASE("score table round-trips through TSV") {
  testing::TempDir dir("table");
  SubjectScoreTable t;
  t.add("p1", "a", {Task::kDET, 0.0, "no-detection", false});
  t.add("p1", "b", {Task::kDET, 0.0, "no-ref-detection", true});
  t.add("p2", "a", {Task::kCAP, 1.0 / 3.0, "bleu,spice=absent", false});
  t.save(dir / "scores.tsv");
  const auto back = SubjectScoreTable::load(dir / "scores.tsv");
  REQUIRE(back.rows().size() == 3);
  for (std::size_t i = 0; i < 3; ++i) {
    CHECK(back.rows()[i].value == t.rows()[i].value);
    CHECK(back.rows()[i].excluded == t.rows()[i].excluded);
    CHECK(back.flags_of(i) == t.flags_of(i));
    CHECK(back.pairs().name(back.rows()[i].pair) == t.pairs().name(t.rows()[i].pair));
  }
}

TEST_CASE("fitted ranges are the extremes of oriented scores") {
  SubjectScoreTable t;
  for (int v = 0; v < 4; ++v) t.add("p" + std::to_string(v), "r", {Task::kRET, double(v), "", false});
  t.add("p0", "y", {Task::kYoN, 0.9, "", false});
  t.add("p1", "y", {Task::kYoN, 0.1, "", false});
  t.add("p2", "d", {Task::kDET, 5.0, "", true});  // excluded rows do not count
  t.add("p3", "d", {Task::kDET, 0.5, "", false});
  t.add("p0", "d", {Task::kDET, 0.25, "", false});
  const auto params = fit_normalization(t);
  CHECK(params.range(Task::kRET).min == 0.0);
  CHECK(params.range(Task::kRET).max == 3.0);
  CHECK(params.normalize(Task::kRET, 1.0) == doctest::Approx(1.0 / 3.0));
  CHECK(params.normalize(Task::kRET, 2.0) == doctest::Approx(2.0 / 3.0));
  CHECK(params.range(Task::kYoN).min == doctest::Approx(0.1));
  CHECK(params.range(Task::kYoN).max == doctest::Approx(0.9));
  CHECK(params.range(Task::kDET).max == 0.5);
  CHECK(params.range(Task::kSEG).min == 0.0);  // unseen task keeps [0,1]
  CHECK(params.range(Task::kSEG).max == 1.0);
  CHECK(params.normalize(Task::kRET, 7.0) == 1.0);
  CHECK(params.normalize(Task::kRET, -1.0) == 0.0);

  SubjectScoreTable flat;
  for (int i = 0; i < 3; ++i) flat.add("p" + std::to_string(i), "x", {Task::kVQA, 0.4, "", false});
  CHECK_THROWS_AS(fit_normalization(flat), DegenerateDimension);
}

TEST_CASE("percentile clipping trims outliers") {
  SubjectScoreTable t;
  for (int i = 0; i <= 100; ++i) t.add("p" + std::to_string(i), "m", {Task::kMCQ, i / 100.0, "", false});
  FitOptions o;
  o.percentile_clip = true;
  const auto p = fit_normalization(t, o);
  CHECK(p.range(Task::kMCQ).min == doctest::Approx(0.01));
  CHECK(p.range(Task::kMCQ).max == doctest::Approx(0.99));
}

TEST_CASE("normalization parameters serialize") {
  const Toy toy = toy_table(4, 1);
  const auto p = fit_normalization(toy.table);
  const auto back = NormalizationParams::from_json(nlohmann::json::parse(p.to_json().dump()));
  CHECK(back.hash() == p.hash());
  for (Task t : tasks::all_tasks()) CHECK(back.range(t).max == p.range(t).max);
  nlohmann::json bad = p.to_json();
  bad["tasks"]["cap"]["max"] = bad["tasks"]["cap"]["min"];
  CHECK_THROWS_AS(NormalizationParams::from_json(bad), ConfigError);
  CHECK_THROWS_AS(NormalizationParams::from_json({{"schema", "other"}}), ConfigError);
}

TEST_CASE("MOS matches a direct computation") {
  const Toy toy = toy_table(12, 7);
  const auto lay = layout();

  for (auto order : {PoolingOrder::kNormalizeThenAverage, PoolingOrder::kAverageThenNormalize}) {
    FitOptions fo;
    fo.order = order;
    const auto params = fit_normalization(toy.table, fo);
    const MosResult res = compute_mos(toy.table, params);
    REQUIRE(res.records.size() == 12);
    CHECK(res.incomplete.empty());

    // Oracle ranges from the raw grid.
    std::map<Task, std::pair<double, double>> range;
    std::map<std::pair<int, Task>, std::vector<double>> per_task;
    for (int p = 0; p < 12; ++p)
      for (std::size_t k = 0; k < lay.size(); ++k)
        per_task[{p, lay[k].second}].push_back(orient(lay[k].second, toy.raw[p][k]));
    for (const auto& [key, v] : per_task) {
      std::vector<double> pool = v;
      if (order == PoolingOrder::kAverageThenNormalize) {
        double s = 0;
        for (double x : v) s += x;
        pool = {s / v.size()};
      }
      auto& r = range.try_emplace(key.second, INFINITY, -INFINITY).first->second;
      for (double x : pool) {
        r.first = std::min(r.first, x);
        r.second = std::max(r.second, x);
      }
    }
    auto norm = [&](Task t, double v) {
      return std::clamp((v - range[t].first) / (range[t].second - range[t].first), 0.0, 1.0);
    };

    for (int p = 0; p < 12; ++p) {
      std::array<double, 5> dims{};
      std::array<int, 5> n{};
      if (order == PoolingOrder::kNormalizeThenAverage) {
        for (std::size_t k = 0; k < lay.size(); ++k) {
          const int d = static_cast<int>(tasks::dimension_of(lay[k].second));
          dims[d] += norm(lay[k].second, orient(lay[k].second, toy.raw[p][k]));
          n[d] += 1;
        }
      } else {
        for (Task t : tasks::all_tasks()) {
          const auto& v = per_task[{p, t}];
          double s = 0;
          for (double x : v) s += x;
          const int d = static_cast<int>(tasks::dimension_of(t));
          dims[d] += norm(t, s / v.size());
          n[d] += 1;
        }
      }
      double mos = 0;
      for (int d = 0; d < 5; ++d) {
        dims[d] /= n[d];
        mos += dims[d];
      }
      const auto& rec = res.records[p];
      CHECK(rec.pair_id == "pair" + std::to_string(p));
      for (int d = 0; d < 5; ++d) CHECK(rec.dims[d] == doctest::Approx(dims[d]).epsilon(1e-12));
      CHECK(rec.mos == doctest::Approx(mos).epsilon(1e-12));
      CHECK(rec.provenance == params.hash());
    }
  }
}

TEST_CASE("MOS stays in range and moves with each subject") {
  const Toy toy = toy_table(6, 3);
  const auto params = fit_normalization(toy.table);
  const auto lay = layout();
  const auto base = compute_mos(toy.table, params);
  Rng rng(99);
  for (int trial = 0; trial < 200; ++trial) {
    const int p = static_cast<int>(rng.below(6));
    const std::size_t k = rng.below(lay.size());
    const Task t = lay[k].second;
    // push the oriented score up by a random amount
    const double bump = rng.uniform(0.0, t == Task::kCAP ? 5.0 : 0.5);
    SubjectScoreTable mod;
    for (int q = 0; q < 6; ++q)
      for (std::size_t j = 0; j < lay.size(); ++j) {
        double v = toy.raw[q][j];
        if (q == p && j == k) v = t == Task::kYoN ? v - bump : v + bump;
        mod.add("pair" + std::to_string(q), lay[j].first, {lay[j].second, v, "", false});
      }
    const auto res = compute_mos(mod, params);
    for (const auto& r : res.records) {
      CHECK(r.mos >= 0.0);
      CHECK(r.mos <= 5.0);
      for (double d : r.dims) {
        CHECK(d >= 0.0);
        CHECK(d <= 1.0);
      }
    }
    CHECK(res.records[p].mos >= base.records[p].mos);
    for (int q = 0; q < 6; ++q)
      if (q != p) CHECK(res.records[q].mos == base.records[q].mos);
  }
}

TEST_CASE("incomplete pairs are left out unless partial scoring is allowed") {
  Toy toy = toy_table(3, 5);
  SubjectScoreTable t;
  const auto lay = layout();
  for (int p = 0; p < 3; ++p)
    for (std::size_t k = 0; k < lay.size(); ++k) {
      if (p == 1 && k == 3) continue;
      t.add("pair" + std::to_string(p), lay[k].first, {lay[k].second, toy.raw[p][k], "", false});
    }
  const auto params = fit_normalization(t);
  const auto strict = compute_mos(t, params);
  CHECK(strict.records.size() == 2);
  CHECK(strict.incomplete == std::vector<std::string>{"pair1"});
  MosOptions o;
  o.allow_partial = true;
  const auto loose = compute_mos(t, params, o);
  REQUIRE(loose.records.size() == 3);
  CHECK(loose.records[1].flags == "partial");
}

TEST_CASE("excluded rows are flagged and skipped") {
  Toy toy = toy_table(3, 9);
  SubjectScoreTable t;
  const auto lay = layout();
  for (int p = 0; p < 3; ++p)
    for (std::size_t k = 0; k < lay.size(); ++k) {
      const bool excl = p == 0 && lay[k].second == Task::kDET && k % 2 == 0;
      t.add("pair" + std::to_string(p), lay[k].first, {lay[k].second, toy.raw[p][k], "", excl});
    }
  const auto res = compute_mos(t, fit_normalization(t));
  REQUIRE(res.records.size() == 3);
  CHECK(res.records[0].flags.find("excluded=") != std::string::npos);
  CHECK(res.records[1].flags.empty());
}

TEST_CASE("dimension weights scale MOS and mark provenance") {
  const Toy toy = toy_table(4, 2);
  const auto params = fit_normalization(toy.table);
  MosOptions o;
  o.weights = DimensionWeights::from_json({{"cap", 2.0}, {"others", 0.0}});
  CHECK_FALSE(o.weights.is_default());
  const auto a = compute_mos(toy.table, params);
  const auto b = compute_mos(toy.table, params, o);
  for (std::size_t i = 0; i < a.records.size(); ++i) {
    const auto& d = a.records[i].dims;
    CHECK(b.records[i].mos == doctest::Approx(d[0] + d[1] + d[2] + 2 * d[3]));
  }
  CHECK(b.records[0].provenance == params.hash() + "+w" + o.weights.hash());
  CHECK_THROWS_AS(DimensionWeights::from_json({{"Nope", 1.0}}), ConfigError);
  CHECK_THROWS_AS(DimensionWeights::from_json({{"yon", -1.0}}), ConfigError);
}

TEST_CASE("MOS files round-trip") {
  testing::TempDir dir("mos");
  const Toy toy = toy_table(5, 4);
  const auto res = compute_mos(toy.table, fit_normalization(toy.table));
  write_mos(dir / "mos.tsv", res.records);
  const auto back = read_mos(dir / "mos.tsv");
  REQUIRE(back.size() == res.records.size());
  for (std::size_t i = 0; i < back.size(); ++i) {
    CHECK(back[i].pair_id == res.records[i].pair_id);
    CHECK(back[i].mos == res.records[i].mos);
    CHECK(back[i].dims == res.records[i].dims);
    CHECK(back[i].provenance == res.records[i].provenance);
  }
}

TEST_CASE("train/val split groups by reference and is deterministic") {
  const auto pairs = testing::plan_fixture_pairs(50, 17);
  const auto a = split_train_val(pairs, 5);
  const auto b = split_train_val(pairs, 5);
  CHECK(a.labels == b.labels);
  CHECK(a.count(SplitLabel::kTrain) == 40 * 30);
  CHECK(a.count(SplitLabel::kVal) == 10 * 30);
  std::map<std::string, std::set<SplitLabel>> per_ref;
  for (std::size_t i = 0; i < pairs.size(); ++i) per_ref[pairs[i].ref_id].insert(a.labels[i]);
  for (const auto& [ref, labels] : per_ref) CHECK(labels.size() == 1);
  const auto c = split_train_val(pairs, 6);
  CHECK(c.labels != a.labels);
  CHECK_THROWS_AS(split_train_val(pairs, 5, 1.5), InvalidInput);
}

TEST_CASE("mild/severe labels follow cell means at the boundary") {
  const auto pairs = testing::plan_fixture_pairs(4, 3);
  SplitAssignment split;
  std::vector<MosRecord> mos;
  for (const auto& p : pairs) {
    split.pair_ids.push_back(p.pair_id);
    split.labels.push_back(SplitLabel::kVal);
    MosRecord m;
    m.pair_id = p.pair_id;
    // level 1 sits exactly on the threshold, level 2 just above
    m.mos = p.spec.level == 1 ? kMildThreshold : p.spec.level == 2 ? kMildThreshold + 1e-9 : 2.0;
    mos.push_back(m);
  }
  SplitAssignment strict = split;
  std::set<CellKey> covered;
  for (const auto& p : pairs) covered.insert({p.spec.kind, p.spec.level});
  const auto warnings = split_mild_severe(strict, pairs, mos);
  CHECK(warnings.size() == 150 - covered.size());
  SplitAssignment loose = split;
  split_mild_severe(loose, pairs, mos, {kMildThreshold, false});
  for (std::size_t i = 0; i < pairs.size(); ++i) {
    const int level = pairs[i].spec.level;
    CHECK(strict.labels[i] == (level == 2 ? SplitLabel::kMild : SplitLabel::kSevere));
    CHECK(loose.labels[i] == (level <= 2 ? SplitLabel::kMild : SplitLabel::kSevere));
  }

  SplitAssignment one = split;
  one.labels.assign(one.labels.size(), SplitLabel::kTrain);
  one.labels[0] = SplitLabel::kVal;
  CHECK(split_mild_severe(one, pairs, mos).size() == 149);

  std::vector<MosRecord> short_mos(mos.begin() + 1, mos.end());
  SplitAssignment s2 = split;
  try {
    split_mild_severe(s2, pairs, short_mos);
    FAIL("expected AlignmentError");
  } catch (const AlignmentError& e) {
    CHECK(e.first_id() == pairs[0].pair_id);
  }
}

TEST_CASE("cell means average MOS per kind and level") {
  const auto pairs = testing::plan_fixture_pairs(3, 1);
  std::vector<MosRecord> mos;
  std::map<CellKey, std::vector<double>> want;
  Rng rng(1);
  for (const auto& p : pairs) {
    MosRecord m;
    m.pair_id = p.pair_id;
    m.mos = rng.uniform(0, 5);
    want[{p.spec.kind, p.spec.level}].push_back(m.mos);
    mos.push_back(m);
  }
  const auto cells = cell_means(pairs, mos);
  CHECK(cells.size() == want.size());
  for (const auto& [k, v] : want) {
    double s = 0;
    for (double x : v) s += x;
    CHECK(cells.at(k).mean == doctest::Approx(s / v.size()));
    CHECK(cells.at(k).n == v.size());
  }
}

TEST_CASE("splits round-trip and feed the standard subsets") {
  testing::TempDir dir("splits");
  const auto pairs = testing::plan_fixture_pairs(10, 2);
  auto split = split_train_val(pairs, 1);
  for (std::size_t i = 0; i < split.labels.size(); ++i)
    if (split.is_val(i)) split.labels[i] = pairs[i].spec.level <= 2 ? SplitLabel::kMild : SplitLabel::kSevere;
  write_splits(dir / "splits.tsv", split);
  const auto back = read_splits(dir / "splits.tsv");
  CHECK(back.pair_ids == split.pair_ids);
  CHECK(back.labels == split.labels);

  const auto subsets = standard_subsets(pairs, &back);
  std::map<std::string, std::size_t> sizes;
  for (const auto& s : subsets) sizes[s.name] = s.ids.size();
  const std::size_t val = split.labels.size() - split.count(SplitLabel::kTrain);
  CHECK(sizes["overall"] == val);
  CHECK(sizes["mild"] + sizes["severe"] == val);
  std::size_t level1 = 0;
  for (std::size_t i = 0; i < pairs.size(); ++i) level1 += split.is_val(i) && pairs[i].spec.level == 1;
  CHECK(sizes["strength1"] == level1);
  CHECK(sizes["NSI"] + sizes["SCI"] + sizes["AIGI"] == val);

  const auto all = standard_subsets(pairs, nullptr);
  CHECK(all.front().name == "overall");
  CHECK(all.front().ids.size() == pairs.size());

  write_file(dir / "bad.tsv", "pair_id\tsplit\na\ttest\n");
  CHECK_THROWS_AS(read_splits(dir / "bad.tsv"), SchemaError);
}

TEST_CASE("subject agreement") {
  SubjectScoreTable t;
  for (int p = 0; p < 10; ++p) {
    const std::string id = "p" + std::to_string(p);
    t.add(id, "a", {Task::kMCQ, p / 10.0, "", false});
    t.add(id, "b", {Task::kMCQ, p * p / 100.0, "", false});
    t.add(id, "c", {Task::kMCQ, 1.0 - p / 10.0, "", false});
    t.add(id, "d", {Task::kMCQ, 0.5, "", false});
  }
  const auto m = subject_agreement(t, AgreementScope::of(Task::kMCQ));
  REQUIRE(m.subjects.size() == 4);
  CHECK(m.at(0, 1) == doctest::Approx(1.0));
  CHECK(m.at(0, 2) == doctest::Approx(-1.0));
  CHECK(m.undefined[3]);
  CHECK(std::isnan(m.at(0, 3)));
  CHECK(m.pairs_used == 10);
  CHECK(m.mean_off_diagonal == doctest::Approx(-1.0 / 3.0));

  const auto dm = subject_agreement(t, AgreementScope::of(Dimension::kMCQ));
  CHECK(dm.at(0, 1) == m.at(0, 1));

  const Toy toy = toy_table(8, 4);
  const auto params = fit_normalization(toy.table);
  CHECK_THROWS_AS(subject_agreement(toy.table, AgreementScope::overall()), InvalidInput);
  const auto om = subject_agreement(toy.table, AgreementScope::overall(), &params);
  CHECK(om.subjects.size() == 15);
  CHECK(om.pairs_used == 8);
}
