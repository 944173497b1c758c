// Copyright 2026 The MPD Toolkit Authors
// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <filesystem>
#include <optional>
#include <string>
#include <vector>

#include <json.hpp>

#include "mpd/stats/correlation.hpp"

namespace mpd::stats {

/// Values keyed by pair id.
struct ScoreVector {
  std::vector<std::string> ids;
  std::vector<double> values;

  std::size_t size() const noexcept { return ids.size(); }
  void push(std::string id, double v) {
    ids.push_back(std::move(id));
    values.push_back(v);
  }
};

/// Reads `value_column` keyed by `id_column` from a TSV table. Throws
/// SchemaError on missing columns, non-numeric values or duplicate ids.
ScoreVector read_scores(const std::filesystem::path& path, const std::string& value_column,
                        const std::string& id_column = "pair_id");

/// Reorders `b` to follow `a`'s ids. Throws AlignmentError carrying the
/// first id (in `a` order, then `b` order) present on only one side.
std::vector<double> align_to(const ScoreVector& a, const ScoreVector& b);

struct CorrelationReport {
  std::string subset;
  std::string target;
  std::size_t n = 0;
  double srcc = 0.0;
  double krcc = 0.0;
  double plcc = 0.0;
  std::optional<double> plcc_logistic;
  std::optional<LogisticParams> logistic_params;
  std::string flags;
};

/// Named group of pair ids evaluated together.
struct Subset {
  std::string name;
  std::vector<std::string> ids;
};

struct NamedTarget {
  std::string name;  // e.g. "mos", "dim_yon"
  ScoreVector values;
};

struct Evaluation {
  std::vector<CorrelationReport> reports;
  std::vector<std::string> warnings;
};

/// One report per (subset, target). Subsets with fewer than 3 pairs or a
/// constant side are skipped with a warning. Every subset id must exist in
/// `preds` and in each target (else AlignmentError).
Evaluation evaluate_metric(const ScoreVector& preds, const std::vector<NamedTarget>& targets,
                           const std::vector<Subset>& subsets, bool logistic = false);

/// SRCC/KRCC/PLCC between two labelings of the same pairs.
CorrelationReport consistency(const ScoreVector& a, const ScoreVector& b);

/// TSV with columns subset, target, n, srcc, krcc, plcc, plcc_logistic, flags.
std::string format_reports(const std::vector<CorrelationReport>& reports);
nlohmann::json reports_to_json(const Evaluation& ev);

}  // namespace mpd::stats
