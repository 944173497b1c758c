// Copyright 2026 The MPD Toolkit Authors
// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <map>
#include <string>
#include <string_view>
#include <vector>

#include "mpd/tasks/task.hpp"

namespace mpd::tasks {

using Tokens = std::vector<std::string>;
using NgramCounts = std::map<std::vector<std::string>, int>;

NgramCounts ngram_counts(const Tokens& tokens, int n);

/// Clipped n-gram precision as a fraction (matches, total).
struct Precision {
  int matched = 0;
  int total = 0;
};
Precision modified_precision(const Tokens& cand, const std::vector<Tokens>& refs, int n);

struct BleuOptions {
  int max_n = 4;
  /// Zero clipped counts are replaced by epsilon before the log.
  double epsilon = 0.1;
};

/// Sentence BLEU with brevity penalty against the closest reference length.
/// Orders longer than the candidate are left out of the geometric mean.
double bleu(const Tokens& cand, const std::vector<Tokens>& refs, const BleuOptions& opts = {});

/// Document frequencies for CIDEr-D: one document per reference set.
class CiderCorpus {
 public:
  static constexpr int kMaxN = 4;
  void add_document(const std::vector<Tokens>& refs);
  std::size_t size() const noexcept { return docs_; }
  /// log(N) - log(max(1, df)), with log(N) taken as 1 for a one-document
  /// corpus so a self-match scores above zero.
  double idf(const std::vector<std::string>& ngram) const;

 private:
  std::size_t docs_ = 0;
  std::map<std::vector<std::string>, int> df_;
};

struct CiderOptions {
  double sigma = 6.0;
};

/// CIDEr-D: TF-IDF n-gram cosine with min-clipping and a Gaussian length
/// penalty, averaged over n = 1..4 and over references, times 10.
/// Throws ConfigError on an empty corpus.
double cider(const Tokens& cand, const std::vector<Tokens>& refs, const CiderCorpus& corpus,
             const CiderOptions& opts = {});

/// External SPICE scorer.
class SpiceAdapter {
 public:
  virtual ~SpiceAdapter() = default;
  virtual double score(std::string_view cand, std::string_view ref) const = 0;
};

struct CaptionEvaluators {
  bool use_bleu = true;
  const CiderCorpus* cider = nullptr;  // null disables CIDEr
  const SpiceAdapter* spice = nullptr;
};

/// Sum of the available evaluators with the distorted caption as the
/// candidate and the reference caption as the single reference. Flags list
/// the contributors ("bleu,cider,spice=absent"). Throws ConfigError when
/// no evaluator is available.
TaskScore score_cap(std::string_view ref, std::string_view dis, const CaptionEvaluators& ev);

/// Highest score_cap can reach for a caption identical to `ref`.
double cap_identity_score(std::string_view ref, const CaptionEvaluators& ev);

}  // namespace mpd::tasks
