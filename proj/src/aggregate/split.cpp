// Copyright 2026 The MPD Toolkit Authors
// SPDX-License-Identifier: Apache-2.0

#include "mpd/aggregate/split.hpp"

#include <algorithm>
#include <cmath>
#include <set>
#include <unordered_map>

#include "mpd/common/error.hpp"
#include "mpd/common/rng.hpp"
#include "mpd/common/table.hpp"

namespace mpd::aggregate {

std::string_view split_name(SplitLabel s) {
  switch (s) {
    case SplitLabel::kTrain: return "train";
    case SplitLabel::kVal: return "val";
    case SplitLabel::kMild: return "mild";
    case SplitLabel::kSevere: return "severe";
  }
  return "?";
}

SplitLabel parse_split(std::string_view s) {
  if (s == "train") return SplitLabel::kTrain;
  if (s == "val") return SplitLabel::kVal;
  if (s == "mild") return SplitLabel::kMild;
  if (s == "severe") return SplitLabel::kSevere;
  throw SchemaError("unknown split label '" + std::string(s) + "'");
}

std::size_t SplitAssignment::count(SplitLabel s) const {
  return static_cast<std::size_t>(std::count(labels.begin(), labels.end(), s));
}

SplitAssignment split_train_val(const std::vector<corruption::PairRecord>& pairs,
                                std::uint64_t seed, double train_fraction) {
  if (!(train_fraction >= 0.0 && train_fraction <= 1.0)) {
    throw InvalidInput("train fraction must be in [0,1]");
  }
  std::set<std::string> ref_set;
  for (const auto& p : pairs) ref_set.insert(p.ref_id);
  std::vector<std::string> refs(ref_set.begin(), ref_set.end());
  Rng rng(derive_seed(seed, "split"));
  for (std::size_t i = refs.size(); i > 1; --i) std::swap(refs[i - 1], refs[rng.below(i)]);
  const auto n_train = static_cast<std::size_t>(std::llround(train_fraction * static_cast<double>(refs.size())));
  std::set<std::string> train(refs.begin(), refs.begin() + static_cast<std::ptrdiff_t>(n_train));

  SplitAssignment out;
  for (const auto& p : pairs) {
    out.pair_ids.push_back(p.pair_id);
    out.labels.push_back(train.count(p.ref_id) ? SplitLabel::kTrain : SplitLabel::kVal);
  }
  return out;
}

std::map<CellKey, CellMean> cell_means(const std::vector<corruption::PairRecord>& pairs,
                                       const std::vector<MosRecord>& mos) {
  std::unordered_map<std::string, double> by_id;
  for (const auto& m : mos) by_id.emplace(m.pair_id, m.mos);
  std::map<CellKey, CellMean> out;
  for (const auto& p : pairs) {
    auto it = by_id.find(p.pair_id);
    if (it == by_id.end()) continue;
    CellMean& c = out[{p.spec.kind, p.spec.level}];
    c.mean += it->second;
    c.n += 1;
  }
  for (auto& [k, c] : out) c.mean /= static_cast<double>(c.n);
  return out;
}

std::vector<std::string> split_mild_severe(SplitAssignment& split,
                                           const std::vector<corruption::PairRecord>& pairs,
                                           const std::vector<MosRecord>& mos,
                                           const ThresholdRule& rule) {
  std::unordered_map<std::string, std::size_t> pair_index;
  for (std::size_t i = 0; i < pairs.size(); ++i) pair_index.emplace(pairs[i].pair_id, i);
  std::unordered_map<std::string, double> mos_by_id;
  for (const auto& m : mos) mos_by_id.emplace(m.pair_id, m.mos);

  std::vector<corruption::PairRecord> val_pairs;
  std::vector<std::size_t> val_slots;
  for (std::size_t i = 0; i < split.pair_ids.size(); ++i) {
    if (!split.is_val(i)) continue;
    auto pi = pair_index.find(split.pair_ids[i]);
    if (pi == pair_index.end()) {
      throw AlignmentError("split pair " + split.pair_ids[i] + " is not in the manifest", split.pair_ids[i]);
    }
    if (!mos_by_id.count(split.pair_ids[i])) {
      throw AlignmentError("validation pair " + split.pair_ids[i] + " has no MOS", split.pair_ids[i]);
    }
    val_pairs.push_back(pairs[pi->second]);
    val_slots.push_back(i);
  }
  const auto cells = cell_means(val_pairs, mos);
  std::vector<std::string> warnings;
  for (auto kind : corruption::all_kinds()) {
    for (int level = 1; level <= corruption::kNumLevels; ++level) {
      if (!cells.count({kind, level})) {
        warnings.push_back("cell " + std::string(corruption::kind_name(kind)) + " level " +
                           std::to_string(level) + " has no validation pairs");
      }
    }
  }
  for (std::size_t j = 0; j < val_pairs.size(); ++j) {
    const CellMean& c = cells.at({val_pairs[j].spec.kind, val_pairs[j].spec.level});
    split.labels[val_slots[j]] = rule.is_mild(c.mean) ? SplitLabel::kMild : SplitLabel::kSevere;
  }
  return warnings;
}

void write_splits(const std::filesystem::path& path, const SplitAssignment& s) {
  Table t;
  t.header = {"pair_id", "split"};
  for (std::size_t i = 0; i < s.pair_ids.size(); ++i) {
    t.rows.push_back({s.pair_ids[i], std::string(split_name(s.labels[i]))});
  }
  write_table(path, t);
}

SplitAssignment read_splits(const std::filesystem::path& path) {
  const Table t = read_table(path);
  const int ci = t.column("pair_id"), cs = t.column("split");
  if (ci < 0 || cs < 0) throw SchemaError(path.string() + ": needs pair_id and split columns");
  SplitAssignment s;
  std::set<std::string> seen;
  for (const auto& row : t.rows) {
    if (!seen.insert(row[ci]).second) throw SchemaError(path.string() + ": duplicate " + row[ci]);
    s.pair_ids.push_back(row[ci]);
    s.labels.push_back(parse_split(row[cs]));
  }
  return s;
}

std::vector<stats::Subset> standard_subsets(const std::vector<corruption::PairRecord>& pairs,
                                            const SplitAssignment* split) {
  std::unordered_map<std::string, SplitLabel> label;
  bool any_val = false;
  if (split) {
    for (std::size_t i = 0; i < split->pair_ids.size(); ++i) {
      label.emplace(split->pair_ids[i], split->labels[i]);
      any_val = any_val || split->is_val(i);
    }
  }
  stats::Subset overall{"overall", {}}, severe{"severe", {}}, mild{"mild", {}};
  std::map<std::string, stats::Subset> by_type;
  std::array<stats::Subset, corruption::kNumLevels> by_level;
  for (int l = 0; l < corruption::kNumLevels; ++l) by_level[l].name = "strength" + std::to_string(l + 1);
  for (auto t : {corruption::ContentType::kNSI, corruption::ContentType::kSCI, corruption::ContentType::kAIGI}) {
    by_type[std::string(corruption::content_type_name(t))].name = std::string(corruption::content_type_name(t));
  }
  for (const auto& p : pairs) {
    auto it = label.find(p.pair_id);
    const bool has_label = it != label.end();
    if (any_val && (!has_label || it->second == SplitLabel::kTrain)) continue;
    overall.ids.push_back(p.pair_id);
    if (has_label && it->second == SplitLabel::kSevere) severe.ids.push_back(p.pair_id);
    if (has_label && it->second == SplitLabel::kMild) mild.ids.push_back(p.pair_id);
    by_type[std::string(corruption::content_type_name(p.content_type))].ids.push_back(p.pair_id);
    by_level[p.spec.level - 1].ids.push_back(p.pair_id);
  }
  std::vector<stats::Subset> out;
  auto keep = [&](stats::Subset s) {
    if (!s.ids.empty()) out.push_back(std::move(s));
  };
  keep(std::move(overall));
  keep(std::move(severe));
  keep(std::move(mild));
  for (const char* t : {"NSI", "SCI", "AIGI"}) keep(std::move(by_type[t]));
  for (auto& s : by_level) keep(std::move(s));
  return out;
}

}  // namespace mpd::aggregate
