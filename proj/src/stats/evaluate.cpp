// Copyright 2026 The MPD Toolkit Authors
// SPDX-License-Identifier: Apache-2.0

#include "mpd/stats/evaluate.hpp"

#include <unordered_map>
#include <unordered_set>

#include "mpd/common/error.hpp"
#include "mpd/common/table.hpp"

namespace mpd::stats {

ScoreVector read_scores(const std::filesystem::path& path, const std::string& value_column,
                        const std::string& id_column) {
  const Table t = read_table(path);
  const int ic = t.column(id_column);
  const int vc = t.column(value_column);
  if (ic < 0 || vc < 0) {
    throw SchemaError(path.string() + ": needs columns '" + id_column + "' and '" + value_column + "'");
  }
  ScoreVector out;
  std::unordered_set<std::string> seen;
  for (const auto& row : t.rows) {
    if (!seen.insert(row[ic]).second) throw SchemaError(path.string() + ": duplicate id '" + row[ic] + "'");
    double v;
    try {
      v = parse_double(row[vc], path.string());
    } catch (const Error& e) {
      throw SchemaError(e.what());
    }
    out.push(row[ic], v);
  }
  return out;
}

std::vector<double> align_to(const ScoreVector& a, const ScoreVector& b) {
  std::unordered_map<std::string_view, std::size_t> pos;
  pos.reserve(b.size());
  for (std::size_t i = 0; i < b.size(); ++i) {
    if (!pos.emplace(b.ids[i], i).second) throw AlignmentError("duplicate id " + b.ids[i], b.ids[i]);
  }
  std::vector<double> out;
  out.reserve(a.size());
  std::unordered_set<std::string_view> seen;
  for (const auto& id : a.ids) {
    auto it = pos.find(id);
    if (it == pos.end()) throw AlignmentError("id " + id + " has no counterpart", id);
    if (!seen.insert(id).second) throw AlignmentError("duplicate id " + id, id);
    out.push_back(b.values[it->second]);
  }
  if (a.size() != b.size()) {
    for (const auto& id : b.ids)
      if (!seen.count(id)) throw AlignmentError("id " + id + " has no counterpart", id);
  }
  return out;
}

namespace {

CorrelationReport correlate(const std::string& subset, const std::string& target,
                            std::span<const double> x, std::span<const double> y, bool logistic) {
  CorrelationReport r;
  r.subset = subset;
  r.target = target;
  r.n = x.size();
  r.srcc = srcc(x, y);
  r.krcc = krcc(x, y);
  const PlccResult p = plcc(x, y, logistic);
  r.plcc = p.raw;
  r.plcc_logistic = p.logistic;
  r.logistic_params = p.params;
  if (p.fallback) r.flags = "logistic-fallback";
  return r;
}

}  // namespace

Evaluation evaluate_metric(const ScoreVector& preds, const std::vector<NamedTarget>& targets,
                           const std::vector<Subset>& subsets, bool logistic) {
  std::unordered_map<std::string_view, std::size_t> pred_pos;
  for (std::size_t i = 0; i < preds.size(); ++i) pred_pos.emplace(preds.ids[i], i);
  std::vector<std::unordered_map<std::string_view, std::size_t>> target_pos(targets.size());
  for (std::size_t t = 0; t < targets.size(); ++t)
    for (std::size_t i = 0; i < targets[t].values.size(); ++i)
      target_pos[t].emplace(targets[t].values.ids[i], i);

  const std::size_t jobs = subsets.size() * targets.size();
  std::vector<std::optional<CorrelationReport>> slots(jobs);
  std::vector<std::string> slot_warning(jobs);
  // Id lookups first so alignment errors surface before any parallel work.
  std::vector<std::vector<double>> xs(jobs), ys(jobs);
  for (std::size_t s = 0; s < subsets.size(); ++s) {
    for (std::size_t t = 0; t < targets.size(); ++t) {
      auto& x = xs[s * targets.size() + t];
      auto& y = ys[s * targets.size() + t];
      for (const auto& id : subsets[s].ids) {
        auto pi = pred_pos.find(id);
        if (pi == pred_pos.end()) throw AlignmentError("prediction missing for " + id, id);
        auto ti = target_pos[t].find(id);
        if (ti == target_pos[t].end()) {
          throw AlignmentError(targets[t].name + " missing for " + id, id);
        }
        x.push_back(preds.values[pi->second]);
        y.push_back(targets[t].values.values[ti->second]);
      }
    }
  }

#pragma omp parallel for schedule(dynamic, 1)
  for (std::size_t j = 0; j < jobs; ++j) {
    const auto& sub = subsets[j / targets.size()];
    const auto& tgt = targets[j % targets.size()];
    if (xs[j].size() < 3) {
      slot_warning[j] = "subset " + sub.name + "/" + tgt.name + " skipped: n=" +
                        std::to_string(xs[j].size()) + " < 3";
      continue;
    }
    try {
      slots[j] = correlate(sub.name, tgt.name, xs[j], ys[j], logistic);
    } catch (const UndefinedCorrelation&) {
      slot_warning[j] = "subset " + sub.name + "/" + tgt.name + " skipped: constant values";
    }
  }

  Evaluation ev;
  for (std::size_t j = 0; j < jobs; ++j) {
    if (slots[j]) ev.reports.push_back(std::move(*slots[j]));
    if (!slot_warning[j].empty()) ev.warnings.push_back(std::move(slot_warning[j]));
  }
  return ev;
}

CorrelationReport consistency(const ScoreVector& a, const ScoreVector& b) {
  const auto bv = align_to(a, b);
  return correlate("all", "consistency", a.values, bv, false);
}

std::string format_reports(const std::vector<CorrelationReport>& reports) {
  std::string out = "subset\ttarget\tn\tsrcc\tkrcc\tplcc\tplcc_logistic\tflags\n";
  for (const auto& r : reports) {
    out += r.subset + '\t' + r.target + '\t' + std::to_string(r.n) + '\t' + format_double(r.srcc) +
           '\t' + format_double(r.krcc) + '\t' + format_double(r.plcc) + '\t' +
           (r.plcc_logistic ? format_double(*r.plcc_logistic) : std::string()) + '\t' + r.flags +
           '\n';
  }
  return out;
}

nlohmann::json reports_to_json(const Evaluation& ev) {
  nlohmann::json rows = nlohmann::json::array();
  for (const auto& r : ev.reports) {
    nlohmann::json j = {{"subset", r.subset}, {"target", r.target}, {"n", r.n},
                        {"srcc", r.srcc},     {"krcc", r.krcc},     {"plcc", r.plcc}};
    if (r.plcc_logistic) j["plcc_logistic"] = *r.plcc_logistic;
    if (r.logistic_params) j["logistic_beta"] = r.logistic_params->beta;
    if (!r.flags.empty()) j["flags"] = r.flags;
    rows.push_back(std::move(j));
  }
  return {{"reports", rows}, {"warnings", ev.warnings}};
}

}  // namespace mpd::stats
