// Copyright 2026 The MPD Toolkit Authors
// SPDX-License-Identifier: Apache-2.0

#include "mpd/ingest/mock.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <set>
#include <span>

#include "mpd/common/error.hpp"
#include "mpd/common/rng.hpp"
#include "mpd/tasks/text.hpp"

namespace mpd::ingest {

using tasks::Task;

void MockProfile::validate() const {
  for (double a : base_accuracy)
    if (!(a >= 0.0 && a <= 1.0)) throw InvalidInput("mock accuracy must be in [0,1]");
  if (!(sensitivity >= 0.0) || !std::isfinite(sensitivity)) {
    throw InvalidInput("mock sensitivity must be a finite value >= 0");
  }
}

namespace {

constexpr const char* kConfusers[] = {"blurry", "shape", "thing", "dark", "object", "pattern",
                                      "noise", "unclear", "texture", "spot", "area", "stuff"};
constexpr int kMaskSide = 64;
constexpr double kFrame = 256.0;


Payload clean_response(Task task, const annotate::QABundle& qa, double accuracy, Rng& rng) {
  const bool correct = rng.bernoulli(accuracy);
  switch (task) {
    case Task::kYoN: {
      const double m = rng.uniform(2.0, 4.0);
      const bool says_yes = correct ? qa.yon_answer : !qa.yon_answer;
      return tasks::LogitPair{says_yes ? m / 2 : -m / 2, says_yes ? -m / 2 : m / 2};
    }
    case Task::kMCQ: {
      tasks::LogitQuad q{};
      for (double& v : q) v = rng.normal(0.0, 0.3);
      int pick = qa.mcq_correct;
      if (!correct) pick = static_cast<int>((qa.mcq_correct + 1 + rng.below(3)) % 4);
      q[pick] += rng.uniform(2.0, 4.0);
      return q;
    }
    case Task::kVQA:
    case Task::kCAP: {
      auto words = tasks::tokenize(task == Task::kVQA ? qa.vqa_answer : qa.caption);
      if (!correct && !words.empty()) words[rng.below(words.size())] = kConfusers[rng.below(12)];
      std::string text;
      for (const auto& w : words) text += (text.empty() ? "" : " ") + w;
      return TextPayload{text};
    }
    case Task::kSEG: {
      tasks::SegMask m(kMaskSide, kMaskSide);
      const double cx = rng.uniform(20, 44), cy = rng.uniform(20, 44);
      const double rx = rng.uniform(8, 18), ry = rng.uniform(8, 18);
      for (int y = 0; y < kMaskSide; ++y)
        for (int x = 0; x < kMaskSide; ++x) {
          const double dx = (x + 0.5 - cx) / rx, dy = (y + 0.5 - cy) / ry;
          m.set(x, y, dx * dx + dy * dy <= 1.0);
        }
      return m;
    }
    case Task::kDET: {
      tasks::DetectionSet d;
      const int n = 1 + static_cast<int>(rng.below(3));
      double conf = rng.uniform(0.8, 0.99);
      for (int i = 0; i < n; ++i) {
        tasks::Detection det;
        det.category = static_cast<int>(rng.below(80));
        det.confidence = conf;
        conf *= rng.uniform(0.5, 0.95);
        const double x0 = rng.uniform(0, 150), y0 = rng.uniform(0, 150);
        det.box = {x0, y0, x0 + rng.uniform(30, 100), y0 + rng.uniform(30, 100)};
        d.push_back(det);
      }
      return d;
    }
    case Task::kRET: {
      std::vector<int> ids(tasks::kRetrievalUniverse);
      std::iota(ids.begin(), ids.end(), 0);
      for (int i = 0; i < 20; ++i) std::swap(ids[i], ids[i + rng.below(ids.size() - i)]);
      return tasks::RetrievalRanking(ids.begin(), ids.begin() + 20);
    }
  }
  throw InvalidInput("unknown task");
}

void perturb_logits(std::span<double> l, double s, Rng& rng) {
  for (double& v : l) v *= 1.0 - 0.6 * s;
  if (rng.bernoulli(0.5 * s)) {
    const auto top = static_cast<std::size_t>(std::max_element(l.begin(), l.end()) - l.begin());
    const std::size_t other = (top + 1 + rng.below(l.size() - 1)) % l.size();
    std::swap(l[top], l[other]);
  }
  for (double& v : l) v += rng.normal(0.0, 1.5 * s);
}

Payload perturb(const Payload& clean, Task task, double s, Rng& rng) {
  switch (task) {
    case Task::kYoN: {
      auto p = std::get<tasks::LogitPair>(clean);
      double l[2] = {p.yes, p.no};
      perturb_logits(l, s, rng);
      return tasks::LogitPair{l[0], l[1]};
    }
    case Task::kMCQ: {
      auto q = std::get<tasks::LogitQuad>(clean);
      perturb_logits(q, s, rng);
      return q;
    }
    case Task::kVQA:
    case Task::kCAP: {
      auto words = tasks::tokenize(std::get<TextPayload>(clean).text);
      std::string text;
      for (auto& w : words) {
        if (rng.bernoulli(0.8 * s)) w = kConfusers[rng.below(12)];
        text += (text.empty() ? "" : " ") + w;
      }
      return TextPayload{text};
    }
    case Task::kSEG: {
      const auto& m = std::get<tasks::SegMask>(clean);
      const double angle = rng.uniform(0, 2 * 3.141592653589793);
      const double dist = s * rng.uniform(4, 14);
      const int dx = static_cast<int>(std::lround(dist * std::cos(angle)));
      const int dy = static_cast<int>(std::lround(dist * std::sin(angle)));
      const int erode = static_cast<int>(std::lround(s * rng.uniform(0, 4)));
      tasks::SegMask out(m.width, m.height);
      for (int y = 0; y < m.height; ++y)
        for (int x = 0; x < m.width; ++x) {
          const int sx = x - dx, sy = y - dy;
          bool on = sx >= 0 && sy >= 0 && sx < m.width && sy < m.height && m.at(sx, sy);
          for (int k = 1; on && k <= erode; ++k) {
            const int nb[4][2] = {{sx - k, sy}, {sx + k, sy}, {sx, sy - k}, {sx, sy + k}};
            for (const auto& q : nb) {
              if (q[0] < 0 || q[1] < 0 || q[0] >= m.width || q[1] >= m.height || !m.at(q[0], q[1])) on = false;
            }
          }
          out.set(x, y, on);
        }
      return out;
    }
    case Task::kDET: {
      auto d = std::get<tasks::DetectionSet>(clean);
      for (auto& det : d) {
        auto& b = det.box;
        b.x0 = std::clamp(b.x0 + rng.normal(0, 20 * s), 0.0, kFrame - 2);
        b.y0 = std::clamp(b.y0 + rng.normal(0, 20 * s), 0.0, kFrame - 2);
        b.x1 = std::clamp(b.x1 + rng.normal(0, 20 * s), b.x0 + 1, kFrame);
        b.y1 = std::clamp(b.y1 + rng.normal(0, 20 * s), b.y0 + 1, kFrame);
        det.confidence *= 1.0 - 0.5 * s;
      }
      if (!d.empty() && rng.bernoulli(0.5 * s)) d.front().category = (d.front().category + 1 + static_cast<int>(rng.below(79))) % 80;
      return d;
    }
    case Task::kRET: {
      const auto& r = std::get<tasks::RetrievalRanking>(clean);
      std::vector<std::pair<double, int>> keyed;
      for (std::size_t i = 0; i < r.size(); ++i) keyed.emplace_back(static_cast<double>(i) + rng.normal(0, 8 * s), r[i]);
      std::stable_sort(keyed.begin(), keyed.end(), [](auto& a, auto& b) { return a.first < b.first; });
      tasks::RetrievalRanking out;
      for (const auto& [k, id] : keyed) out.push_back(id);
      return out;
    }
  }
  throw InvalidInput("unknown task");
}

}  // namespace

std::vector<ResponseRecord> mock_responses(const MockProfile& profile, const SubjectRoster& roster,
                                           const std::vector<corruption::PairRecord>& pairs,
                                           const std::map<std::string, annotate::QABundle>& bundles,
                                           const corruption::ParamSchedule& sched) {
  profile.validate();
  std::vector<std::string> refs;
  std::set<std::string> seen;
  for (const auto& p : pairs) {
    if (seen.insert(p.ref_id).second) refs.push_back(p.ref_id);
  }
  for (const auto& r : refs) {
    if (!bundles.count(r)) throw MissingInput("no QA bundle for reference " + r);
  }

  struct Slot {
    std::string subject;
    Task task;
    double factor;
  };
  std::vector<Slot> slots;
  for (const auto& [id, info] : roster.subjects()) {
    Rng srng(derive_seed(profile.seed, "subject:" + id));
    const double factor = srng.uniform(0.8, 1.2);
    for (Task t : info.tasks) slots.push_back({id, t, factor});
  }

  std::vector<ResponseRecord> out;
  std::map<std::pair<std::string, std::size_t>, Payload> clean;
  for (const auto& ref : refs) {
    for (std::size_t k = 0; k < slots.size(); ++k) {
      const Slot& s = slots[k];
      Rng rng(derive_seed(profile.seed, s.subject + "|" + ref, static_cast<std::uint64_t>(s.task)));
      Payload p = clean_response(s.task, bundles.at(ref), profile.base_accuracy[static_cast<int>(s.task)], rng);
      clean.emplace(std::make_pair(ref, k), p);
      out.push_back({ref, s.subject, s.task, std::move(p), 0.0});
    }
  }
  for (const auto& pair : pairs) {
    const double severity = corruption::severity_of(pair.spec, sched);
    for (std::size_t k = 0; k < slots.size(); ++k) {
      const Slot& s = slots[k];
      const double strength = std::min(1.0, profile.sensitivity * s.factor * severity);
      const Payload& base = clean.at({pair.ref_id, k});
      if (strength <= 0.0) {
        out.push_back({pair.pair_id, s.subject, s.task, base, 0.0});
        continue;
      }
      Rng rng(derive_seed(profile.seed, s.subject + "|" + pair.pair_id, static_cast<std::uint64_t>(s.task)));
      out.push_back({pair.pair_id, s.subject, s.task, perturb(base, s.task, strength, rng), 0.0});
    }
  }
  return out;
}

}  // namespace mpd::ingest
