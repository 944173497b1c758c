// Copyright 2026 The MPD Toolkit Authors
// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <cstdint>
#include <filesystem>
#include <map>
#include <string>
#include <vector>

#include "mpd/aggregate/mos.hpp"
#include "mpd/corruption/dataset.hpp"
#include "mpd/stats/evaluate.hpp"

namespace mpd::aggregate {

inline constexpr double kMildThreshold = 3.333;

enum class SplitLabel { kTrain, kVal, kMild, kSevere };
std::string_view split_name(SplitLabel s);
SplitLabel parse_split(std::string_view s);

/// pair id -> label, in pair order.
struct SplitAssignment {
  std::vector<std::string> pair_ids;
  std::vector<SplitLabel> labels;

  std::size_t count(SplitLabel s) const;
  /// Val, mild and severe all count as validation.
  bool is_val(std::size_t i) const { return labels[i] != SplitLabel::kTrain; }
};

/// Reference-grouped random split: the sorted reference ids are shuffled
/// with `seed` and the first round(train_fraction * refs) go to train.
SplitAssignment split_train_val(const std::vector<corruption::PairRecord>& pairs,
                                std::uint64_t seed, double train_fraction = 0.8);

struct CellKey {
  corruption::CorruptionKind kind;
  int level;
  auto operator<=>(const CellKey&) const = default;
};

struct CellMean {
  double mean = 0.0;
  std::size_t n = 0;
};

/// Mean MOS per (kind, level) over the pairs present in `mos`.
std::map<CellKey, CellMean> cell_means(const std::vector<corruption::PairRecord>& pairs,
                                       const std::vector<MosRecord>& mos);

struct ThresholdRule {
  double threshold = kMildThreshold;
  /// mean > threshold is mild; false makes it mean >= threshold.
  bool strict = true;
  bool is_mild(double mean) const { return strict ? mean > threshold : mean >= threshold; }
};

/// Relabels validation pairs mild or severe from their cell's mean MOS over
/// the validation set. Throws AlignmentError when a validation pair has no
/// MOS. Warnings name cells with no validation pairs.
std::vector<std::string> split_mild_severe(SplitAssignment& split,
                                           const std::vector<corruption::PairRecord>& pairs,
                                           const std::vector<MosRecord>& mos,
                                           const ThresholdRule& rule = {});

/// TSV: pair_id, split.
void write_splits(const std::filesystem::path& path, const SplitAssignment& s);
SplitAssignment read_splits(const std::filesystem::path& path);

/// Evaluation subsets: overall (validation pairs, or every pair when there
/// is no validation side), severe, mild, NSI, SCI, AIGI and strength1..5.
/// Empty subsets are omitted.
std::vector<stats::Subset> standard_subsets(const std::vector<corruption::PairRecord>& pairs,
                                            const SplitAssignment* split);

}  // namespace mpd::aggregate
