// Copyright 2026 The MPD Toolkit Authors
// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <string>
#include <vector>

#include "mpd/aggregate/score_table.hpp"
#include "mpd/corruption/dataset.hpp"
#include "mpd/ingest/responses.hpp"
#include "mpd/tasks/caption.hpp"
#include "mpd/tasks/text.hpp"
#include "mpd/tasks/vision.hpp"

namespace mpd::ingest {

struct ScoringOptions {
  const tasks::TextEmbedder* embedder = nullptr;  // null: built-in hashing embedder
  bool use_bleu = true;
  bool use_cider = true;
  const tasks::SpiceAdapter* spice = nullptr;
  tasks::RetrievalAnchor ret_anchor = tasks::RetrievalAnchor::kReferenceTop1;
};

struct ScoringResult {
  aggregate::SubjectScoreTable table;
  /// Distorted-image responses that could not be scored, one line each.
  std::vector<std::string> warnings;
  /// CIDEr document count (one per reference caption).
  std::size_t cider_documents = 0;
};

/// Builds the CIDEr document-frequency corpus from every reference-image
/// caption in `responses`.
tasks::CiderCorpus build_cider_corpus(const std::vector<corruption::PairRecord>& pairs,
                                      const ResponseSet& responses);

/// Scores each distorted-image response against the same subject's answer
/// for the reference image. Pairs are scored in parallel; the table is
/// filled in manifest order so the result does not depend on thread count.
ScoringResult score_pairs(const std::vector<corruption::PairRecord>& pairs, const ResponseSet& responses,
                          const ScoringOptions& opts = {});

}  // namespace mpd::ingest
