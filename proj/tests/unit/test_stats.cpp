// Copyright 2026 The MPD Toolkit Authors
// SPDX-License-Identifier: Apache-2.0

#include <doctest.h>

#include <algorithm>
#include <cmath>

#include "fixtures.hpp"
#include "mpd/common/error.hpp"
#include "mpd/common/rng.hpp"
#include "mpd/common/table.hpp"
#include "mpd/corruption/apply.hpp"
#include "mpd/imgcore/synthetic.hpp"
#include "mpd/stats/correlation.hpp"
#include "mpd/stats/evaluate.hpp"
#include "mpd/stats/features.hpp"

using namespace mpd;
using namespace mpd::stats;

namespace {

// Textbook definitions, quadratic time, long double accumulation.
double oracle_pearson(const std::vector<double>& x, const std::vector<double>& y) {
  const std::size_t n = x.size();
  long double mx = 0, my = 0;
  for (std::size_t i = 0; i < n; ++i) {
    mx += x[i];
    my += y[i];
  }
  mx /= n;
  my /= n;
  long double sxy = 0, sxx = 0, syy = 0;
  for (std::size_t i = 0; i < n; ++i) {
    sxy += (x[i] - mx) * (y[i] - my);
    sxx += (x[i] - mx) * (x[i] - mx);
    syy += (y[i] - my) * (y[i] - my);
  }
  return static_cast<double>(sxy / std::sqrt(sxx * syy));
}

std::vector<double> oracle_ranks(const std::vector<double>& v) {
  std::vector<double> r(v.size());
  for (std::size_t i = 0; i < v.size(); ++i) {
    double less = 0, equal = 0;
    for (double w : v) {
      less += w < v[i];
      equal += w == v[i];
    }
    r[i] = less + (equal + 1) / 2;
  }
  return r;
}

double oracle_srcc(const std::vector<double>& x, const std::vector<double>& y) {
  return oracle_pearson(oracle_ranks(x), oracle_ranks(y));
}

double oracle_tau_b(const std::vector<double>& x, const std::vector<double>& y) {
  long long c = 0, d = 0, tx = 0, ty = 0;
  for (std::size_t i = 0; i < x.size(); ++i)
    for (std::size_t j = i + 1; j < x.size(); ++j) {
      const double a = x[i] - x[j], b = y[i] - y[j];
      if (a == 0 && b == 0) continue;
      if (a == 0) {
        ++tx;
      } else if (b == 0) {
        ++ty;
      } else if ((a > 0) == (b > 0)) {
        ++c;
      } else {
        ++d;
      }
    }
  return (c - d) / std::sqrt(static_cast<double>(c + d + tx) * static_cast<double>(c + d + ty));
}

std::vector<double> draw(Rng& rng, std::size_t n, int levels) {
  std::vector<double> v(n);
  for (double& x : v) x = levels > 0 ? static_cast<double>(rng.below(levels)) : rng.normal();
  return v;
}

ScoreVector make_scores(const std::vector<double>& v, const std::string& prefix = "p") {
  ScoreVector s;
  for (std::size_t i = 0; i < v.size(); ++i) s.push(prefix + std::to_string(i), v[i]);
  return s;
}

}  // namespace

TEST_CASE("average ranks share ties") {
  const std::vector<double> v = {3, 1, 3, 2, 3};
  CHECK(average_ranks(v) == std::vector<double>{4, 1, 4, 2, 4});
}

TEST_CASE("hand-computed correlations") {
  const std::vector<double> x = {1, 2, 3, 4, 5}, y = {2, 1, 4, 3, 5};
  CHECK(srcc(x, y) == doctest::Approx(0.8).epsilon(1e-14));
  CHECK(krcc(x, y) == doctest::Approx(0.6).epsilon(1e-14));
  const std::vector<double> a = {1, 2, 3}, b = {1, 3, 2};
  CHECK(krcc(a, b) == doctest::Approx(1.0 / 3.0).epsilon(1e-14));
  CHECK(srcc(a, b) == doctest::Approx(0.5).epsilon(1e-14));
  CHECK(pearson(x, x) == 1.0);
  std::vector<double> neg(x.rbegin(), x.rend());
  CHECK(srcc(x, neg) == doctest::Approx(-1.0));
  CHECK(krcc(x, neg) == doctest::Approx(-1.0));
}

TEST_CASE("correlations agree with brute-force oracles, ties included") {
  Rng rng(2024);
  for (int trial = 0; trial < 300; ++trial) {
    const std::size_t n = 3 + rng.below(60);
    const int lx = trial % 3 == 0 ? 0 : 2 + static_cast<int>(rng.below(6));
    const int ly = trial % 4 == 0 ? 0 : 2 + static_cast<int>(rng.below(6));
    const auto x = draw(rng, n, lx);
    const auto y = draw(rng, n, ly);
    const bool const_x = std::all_of(x.begin(), x.end(), [&](double v) { return v == x[0]; });
    const bool const_y = std::all_of(y.begin(), y.end(), [&](double v) { return v == y[0]; });
    if (const_x || const_y) {
      CHECK_THROWS_AS(srcc(x, y), UndefinedCorrelation);
      CHECK_THROWS_AS(krcc(x, y), UndefinedCorrelation);
      CHECK_THROWS_AS(pearson(x, y), UndefinedCorrelation);
      continue;
    }
    CHECK(std::abs(pearson(x, y) - oracle_pearson(x, y)) < 1e-12);
    CHECK(std::abs(srcc(x, y) - oracle_srcc(x, y)) < 1e-12);
    CHECK(std::abs(krcc(x, y) - oracle_tau_b(x, y)) < 1e-12);
  }
}

TEST_CASE("correlation inputs are validated") {
  const std::vector<double> two = {1, 2}, three = {1, 2, 3}, inf = {1, INFINITY, 3};
  CHECK_THROWS_AS(pearson(two, two), InvalidInput);
  CHECK_THROWS_AS(srcc(three, two), InvalidInput);
  CHECK_THROWS_AS(krcc(three, inf), InvalidInput);
}

TEST_CASE("rank correlations are invariant to monotone maps") {
  Rng rng(8);
  const auto x = draw(rng, 200, 0);
  const auto y = draw(rng, 200, 0);
  std::vector<double> fx(x.size());
  for (std::size_t i = 0; i < x.size(); ++i) fx[i] = std::exp(3 * x[i]) + 7;
  CHECK(srcc(fx, y) == doctest::Approx(srcc(x, y)).epsilon(1e-12));
  CHECK(krcc(fx, y) == doctest::Approx(krcc(x, y)).epsilon(1e-12));
}

TEST_CASE("logistic fit recovers a noiseless curve") {
  const LogisticParams truth{{4.5, 1.2, 0.3, 0.15}};
  std::vector<double> x, y;
  for (int i = 0; i < 60; ++i) {
    x.push_back(-0.5 + i / 40.0);
    y.push_back(truth(x.back()));
  }
  const LogisticFit fit = fit_logistic(x, y);
  CHECK(fit.converged);
  CHECK(fit.sse < 1e-10);
  const PlccResult r = plcc(x, y, true);
  REQUIRE(r.logistic.has_value());
  CHECK(*r.logistic == doctest::Approx(1.0).epsilon(1e-9));
  CHECK(r.raw < *r.logistic);
  CHECK_FALSE(r.fallback);

  const PlccResult plain = plcc(x, y, false);
  CHECK_FALSE(plain.logistic.has_value());
  CHECK(plain.raw == r.raw);
}

TEST_CASE("logistic fit on decreasing noisy data") {
  Rng rng(4);
  std::vector<double> x, y;
  for (int i = 0; i < 300; ++i) {
    const double v = rng.uniform(0, 10);
    x.push_back(v);
    y.push_back(5.0 - 4.0 / (1 + std::exp(-(v - 5) / 1.5)) + rng.normal(0, 0.1));
  }
  const PlccResult r = plcc(x, y, true);
  REQUIRE(r.logistic.has_value());
  CHECK(*r.logistic > 0.95);
  CHECK(r.raw < 0);
}

TEST_CASE("evaluation aligns by id and reports per subset") {
  Rng rng(12);
  std::vector<double> mos(50), pred(50);
  for (int i = 0; i < 50; ++i) {
    mos[i] = rng.uniform(1, 5);
    pred[i] = mos[i] + rng.normal(0, 0.5);
  }
  ScoreVector p = make_scores(pred);
  // shuffle prediction order; alignment must not depend on it
  ScoreVector shuffled;
  for (int i = 49; i >= 0; --i) shuffled.push(p.ids[i], p.values[i]);
  const ScoreVector m = make_scores(mos);

  Subset all{"all", m.ids};
  Subset half{"half", std::vector<std::string>(m.ids.begin(), m.ids.begin() + 25)};
  Subset tiny{"tiny", {"p0", "p1"}};
  const Evaluation ev = evaluate_metric(shuffled, {{"mos", m}}, {all, half, tiny});
  REQUIRE(ev.reports.size() == 2);
  CHECK(ev.reports[0].subset == "all");
  CHECK(ev.reports[0].n == 50);
  CHECK(ev.reports[0].srcc == doctest::Approx(oracle_srcc(pred, mos)).epsilon(1e-12));
  CHECK(ev.reports[0].krcc == doctest::Approx(oracle_tau_b(pred, mos)).epsilon(1e-12));
  CHECK(ev.reports[0].plcc == doctest::Approx(oracle_pearson(pred, mos)).epsilon(1e-12));
  std::vector<double> hp(pred.begin(), pred.begin() + 25), hm(mos.begin(), mos.begin() + 25);
  CHECK(ev.reports[1].srcc == doctest::Approx(oracle_srcc(hp, hm)).epsilon(1e-12));
  REQUIRE(ev.warnings.size() == 1);
  CHECK(ev.warnings[0].find("tiny") != std::string::npos);

  ScoreVector missing = p;
  missing.ids.pop_back();
  missing.values.pop_back();
  try {
    evaluate_metric(missing, {{"mos", m}}, {all});
    FAIL("expected AlignmentError");
  } catch (const AlignmentError& e) {
    CHECK(e.first_id() == "p49");
  }

  const nlohmann::json j = reports_to_json(ev);
  CHECK(j.dump().find("\"srcc\"") != std::string::npos);
  CHECK(format_reports(ev.reports).rfind("subset\ttarget", 0) == 0);
}

TEST_CASE("constant targets become warnings") {
  const ScoreVector p = make_scores({1, 2, 3, 4});
  const ScoreVector c = make_scores({2, 2, 2, 2});
  const Evaluation ev = evaluate_metric(p, {{"flat", c}}, {{"all", p.ids}});
  CHECK(ev.reports.empty());
  CHECK(ev.warnings.size() == 1);
}

TEST_CASE("align_to rejects duplicates and strays") {
  const ScoreVector a = make_scores({1, 2, 3});
  ScoreVector b;
  b.push("p2", 30);
  b.push("p0", 10);
  b.push("p1", 20);
  CHECK(align_to(a, b) == std::vector<double>{10, 20, 30});
  b.push("p9", 90);
  CHECK_THROWS_AS(align_to(a, b), AlignmentError);
  ScoreVector dup = make_scores({1, 2, 3});
  dup.push("p0", 5);
  CHECK_THROWS_AS(align_to(a, dup), AlignmentError);
  CHECK(consistency(a, make_scores({3, 6, 9})).srcc == doctest::Approx(1.0));
}

TEST_CASE("read_scores checks columns and duplicates") {
  testing::TempDir dir("scores");
  write_file(dir / "ok.tsv", "pair_id\tscore\na\t1.5\nb\t2\n");
  const ScoreVector s = read_scores(dir / "ok.tsv", "score");
  CHECK(s.ids == std::vector<std::string>{"a", "b"});
  CHECK(s.values == std::vector<double>{1.5, 2.0});
  write_file(dir / "dup.tsv", "pair_id\tscore\na\t1\na\t2\n");
  CHECK_THROWS_AS(read_scores(dir / "dup.tsv", "score"), SchemaError);
  write_file(dir / "bad.tsv", "pair_id\tscore\na\tx\n");
  CHECK_THROWS_AS(read_scores(dir / "bad.tsv", "score"), SchemaError);
  CHECK_THROWS_AS(read_scores(dir / "ok.tsv", "other"), SchemaError);
}

TEST_CASE("feature profile responds to blur and brightness") {
  const auto img = imgcore::synthetic_image(3, 96, 96);
  const auto sched = corruption::ParamSchedule::load_default();
  const auto blurred = corruption::apply(img, {corruption::CorruptionKind::kGaussianFilter, 5, 1}, sched);
  const auto bright = corruption::apply(img, {corruption::CorruptionKind::kMeanBrighten, 5, 1}, sched);
  const FeatureProfile f0 = features(img);
  CHECK(features(blurred).blur < f0.blur);
  CHECK(features(bright).luminance > f0.luminance);
  imgcore::ImageBuf flat(16, 16, 3);
  const FeatureProfile ff = features(flat);
  CHECK(ff.contrast == 0.0);
  CHECK(ff.blur == 0.0);
  CHECK(ff.chrominance == doctest::Approx(0.0).epsilon(1e-9));
}
