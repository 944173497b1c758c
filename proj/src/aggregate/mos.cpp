// Copyright 2026 The MPD Toolkit Authors
// SPDX-License-Identifier: Apache-2.0

#include "mpd/aggregate/mos.hpp"

#include <algorithm>
#include <cmath>
#include <map>
#include <optional>
#include <set>

#include "mpd/common/error.hpp"
#include "mpd/common/hash.hpp"
#include "mpd/common/table.hpp"

namespace mpd::aggregate {

using tasks::Dimension;
using tasks::Task;

double NormalizationParams::normalize(Task t, double oriented) const {
  const Range& r = range(t);
  return std::clamp((oriented - r.min) / (r.max - r.min), 0.0, 1.0);
}

nlohmann::json NormalizationParams::to_json() const {
  nlohmann::json tasks_j = nlohmann::json::object();
  for (Task t : tasks::all_tasks()) {
    tasks_j[std::string(tasks::task_name(t))] = {{"min", range(t).min}, {"max", range(t).max}};
  }
  return {{"schema", "mpd.normalization"},
          {"version", 1},
          {"percentile_clip", percentile_clip},
          {"order", order == PoolingOrder::kNormalizeThenAverage ? "normalize-then-average"
                                                                 : "average-then-normalize"},
          {"tasks", tasks_j}};
}

NormalizationParams NormalizationParams::from_json(const nlohmann::json& j) {
  if (j.value("schema", "") != "mpd.normalization") throw ConfigError("not a normalization file");
  NormalizationParams p;
  try {
    p.percentile_clip = j.at("percentile_clip").get<bool>();
    const std::string order = j.at("order").get<std::string>();
    if (order == "normalize-then-average") {
      p.order = PoolingOrder::kNormalizeThenAverage;
    } else if (order == "average-then-normalize") {
      p.order = PoolingOrder::kAverageThenNormalize;
    } else {
      throw ConfigError("unknown pooling order '" + order + "'");
    }
    for (Task t : tasks::all_tasks()) {
      const auto& r = j.at("tasks").at(std::string(tasks::task_name(t)));
      p.ranges[static_cast<int>(t)] = {r.at("min").get<double>(), r.at("max").get<double>()};
      if (!(p.range(t).max > p.range(t).min)) {
        throw ConfigError("normalization range for " + std::string(tasks::task_name(t)) + " is empty");
      }
    }
  } catch (const nlohmann::json::exception& e) {
    throw ConfigError(std::string("malformed normalization file: ") + e.what());
  }
  return p;
}

std::string NormalizationParams::hash() const { return sha256_hex(to_json().dump()).substr(0, 16); }

namespace {

double percentile(std::vector<double> v, double q) {
  std::sort(v.begin(), v.end());
  const double pos = q * static_cast<double>(v.size() - 1);
  const auto lo = static_cast<std::size_t>(std::floor(pos));
  const auto hi = std::min(lo + 1, v.size() - 1);
  return v[lo] + (pos - static_cast<double>(lo)) * (v[hi] - v[lo]);
}

// Per (pair, task) mean of oriented non-excluded values.
std::map<std::pair<std::uint32_t, Task>, std::pair<double, int>> task_means(
    const SubjectScoreTable& table) {
  std::map<std::pair<std::uint32_t, Task>, std::pair<double, int>> acc;
  for (const auto& r : table.rows()) {
    if (r.excluded) continue;
    auto& a = acc[{r.pair, r.task}];
    a.first += orient(r.task, r.value);
    a.second += 1;
  }
  return acc;
}

}  // namespace

NormalizationParams fit_normalization(const SubjectScoreTable& table, const FitOptions& opts) {
  std::array<std::vector<double>, tasks::kNumTasks> values;
  if (opts.order == PoolingOrder::kNormalizeThenAverage) {
    for (const auto& r : table.rows())
      if (!r.excluded) values[static_cast<int>(r.task)].push_back(orient(r.task, r.value));
  } else {
    for (const auto& [key, a] : task_means(table))
      values[static_cast<int>(key.second)].push_back(a.first / a.second);
  }
  NormalizationParams p;
  p.percentile_clip = opts.percentile_clip;
  p.order = opts.order;
  for (Task t : tasks::all_tasks()) {
    auto& v = values[static_cast<int>(t)];
    if (v.empty()) continue;  // keeps the identity range [0,1]
    Range r;
    if (opts.percentile_clip) {
      r = {percentile(v, 0.01), percentile(v, 0.99)};
    } else {
      const auto [lo, hi] = std::minmax_element(v.begin(), v.end());
      r = {*lo, *hi};
    }
    if (!(r.max > r.min)) {
      throw DegenerateDimension("task " + std::string(tasks::task_name(t)) +
                                " has no spread on the fitting set");
    }
    p.ranges[static_cast<int>(t)] = r;
  }
  return p;
}

bool DimensionWeights::is_default() const {
  return std::all_of(w.begin(), w.end(), [](double x) { return x == 1.0; });
}

nlohmann::json DimensionWeights::to_json() const {
  nlohmann::json j = nlohmann::json::object();
  for (Dimension d : tasks::all_dimensions()) j[std::string(tasks::dimension_name(d))] = w[static_cast<int>(d)];
  return j;
}

DimensionWeights DimensionWeights::from_json(const nlohmann::json& j) {
  if (!j.is_object()) throw ConfigError("weights must be a JSON object");
  DimensionWeights out;
  for (const auto& [k, v] : j.items()) {
    const auto d = tasks::parse_dimension(k);
    if (!d) throw ConfigError("unknown dimension '" + k + "' in weights");
    if (!v.is_number() || !std::isfinite(v.get<double>()) || v.get<double>() < 0) {
      throw ConfigError("weight for '" + k + "' must be a non-negative number");
    }
    out.w[static_cast<int>(*d)] = v.get<double>();
  }
  return out;
}

std::string DimensionWeights::hash() const { return sha256_hex(to_json().dump()).substr(0, 16); }

MosResult compute_mos(const SubjectScoreTable& table, const NormalizationParams& params,
                      const MosOptions& opts) {
  const std::size_t npairs = table.pairs().size();
  struct Acc {
    std::array<double, tasks::kNumDimensions> sum{};
    std::array<int, tasks::kNumDimensions> present{};  // responses, excluded included
    std::array<int, tasks::kNumDimensions> used{};
    std::array<double, tasks::kNumTasks> task_sum{};
    std::array<int, tasks::kNumTasks> task_n{};
    int excluded = 0;
  };
  std::vector<Acc> acc(npairs);
  for (const auto& r : table.rows()) {
    Acc& a = acc[r.pair];
    const int d = static_cast<int>(tasks::dimension_of(r.task));
    a.present[d] += 1;
    if (r.excluded) {
      a.excluded += 1;
      continue;
    }
    a.used[d] += 1;
    const double o = orient(r.task, r.value);
    if (params.order == PoolingOrder::kNormalizeThenAverage) {
      a.sum[d] += params.normalize(r.task, o);
    } else {
      a.task_sum[static_cast<int>(r.task)] += o;
      a.task_n[static_cast<int>(r.task)] += 1;
    }
  }

  std::string provenance = params.hash();
  if (!opts.weights.is_default()) provenance += "+w" + opts.weights.hash();

  MosResult out;
  std::vector<std::optional<MosRecord>> slots(npairs);
  const auto n = static_cast<std::int64_t>(npairs);
#pragma omp parallel for schedule(static)
  for (std::int64_t i = 0; i < n; ++i) {
    const Acc& a = acc[i];
    bool partial = false, empty = false;
    for (int d = 0; d < tasks::kNumDimensions; ++d) {
      if (a.present[d] != opts.subjects_per_dimension) partial = true;
      if (a.used[d] == 0) empty = true;
    }
    if (empty || (partial && !opts.allow_partial)) continue;
    MosRecord rec;
    rec.pair_id = table.pairs().name(static_cast<std::uint32_t>(i));
    for (int d = 0; d < tasks::kNumDimensions; ++d) {
      if (params.order == PoolingOrder::kNormalizeThenAverage) {
        rec.dims[d] = a.sum[d] / a.used[d];
      } else {
        double s = 0;
        int k = 0;
        for (Task t : tasks::all_tasks()) {
          const int ti = static_cast<int>(t);
          if (static_cast<int>(tasks::dimension_of(t)) != d || a.task_n[ti] == 0) continue;
          s += params.normalize(t, a.task_sum[ti] / a.task_n[ti]);
          ++k;
        }
        rec.dims[d] = s / k;
      }
      rec.mos += opts.weights.w[d] * rec.dims[d];
    }
    if (partial) rec.flags = "partial";
    if (a.excluded > 0) {
      rec.flags += (rec.flags.empty() ? "" : ",") + std::string("excluded=") + std::to_string(a.excluded);
    }
    rec.provenance = provenance;
    slots[i] = std::move(rec);
  }
  for (std::size_t i = 0; i < npairs; ++i) {
    if (slots[i]) {
      out.records.push_back(std::move(*slots[i]));
    } else {
      out.incomplete.push_back(table.pairs().name(static_cast<std::uint32_t>(i)));
    }
  }
  return out;
}

void write_mos(const std::filesystem::path& path, const std::vector<MosRecord>& recs) {
  Table t;
  t.header = {"pair_id", "dim_yon", "dim_mcq", "dim_vqa", "dim_cap", "dim_others",
              "mos", "flags", "provenance"};
  for (const auto& r : recs) {
    std::vector<std::string> row{r.pair_id};
    for (double d : r.dims) row.push_back(format_double(d));
    row.push_back(format_double(r.mos));
    row.push_back(r.flags);
    row.push_back(r.provenance);
    t.rows.push_back(std::move(row));
  }
  write_table(path, t);
}

std::vector<MosRecord> read_mos(const std::filesystem::path& path) {
  const Table t = read_table(path);
  static const char* kCols[] = {"pair_id", "dim_yon", "dim_mcq", "dim_vqa", "dim_cap",
                                "dim_others", "mos"};
  int idx[7];
  for (int i = 0; i < 7; ++i) {
    idx[i] = t.column(kCols[i]);
    if (idx[i] < 0) throw SchemaError(path.string() + ": missing column " + kCols[i]);
  }
  const int cf = t.column("flags"), cp = t.column("provenance");
  std::vector<MosRecord> out;
  std::set<std::string> seen;
  for (const auto& row : t.rows) {
    MosRecord r;
    r.pair_id = row[idx[0]];
    if (!seen.insert(r.pair_id).second) throw SchemaError(path.string() + ": duplicate " + r.pair_id);
    try {
      for (int d = 0; d < 5; ++d) r.dims[d] = parse_double(row[idx[d + 1]], path.string());
      r.mos = parse_double(row[idx[6]], path.string());
    } catch (const Error& e) {
      throw SchemaError(e.what());
    }
    if (cf >= 0) r.flags = row[cf];
    if (cp >= 0) r.provenance = row[cp];
    out.push_back(std::move(r));
  }
  return out;
}

}  // namespace mpd::aggregate
