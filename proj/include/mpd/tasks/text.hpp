// Copyright 2026 The MPD Toolkit Authors
// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <map>
#include <memory>
#include <string>
#include <string_view>
#include <vector>

#include "mpd/tasks/task.hpp"

namespace mpd::tasks {

/// Lowercases ASCII, turns punctuation into spaces and collapses runs of
/// whitespace. Non-ASCII bytes pass through unchanged.
std::string normalize_text(std::string_view text);
/// Whitespace tokens of normalize_text(text).
std::vector<std::string> tokenize(std::string_view text);

/// Maps text to a fixed-dimension unit vector.
class TextEmbedder {
 public:
  virtual ~TextEmbedder() = default;
  virtual std::string name() const = 0;
  virtual std::vector<double> embed(std::string_view text) const = 0;
  /// Default loops over embed(); adapters override to batch one call.
  virtual std::vector<std::vector<double>> embed_batch(const std::vector<std::string>& texts) const;
};

/// Deterministic character n-gram embedder.
///
/// Features are the whole words plus character 1..3-grams inside each word
/// of the normalized text. A feature lands in bucket
/// first_byte * 16 + (fnv1a64(feature) mod 16), so strings sharing no
/// characters get orthogonal embeddings.
class HashingEmbedder final : public TextEmbedder {
 public:
  static constexpr int kDim = 256 * 16;
  std::string name() const override { return "hashing-ngram"; }
  /// Throws InvalidInput when the normalized text is empty.
  std::vector<double> embed(std::string_view text) const override;
};

/// Cosine of the two answer embeddings, in [-1,1].
TaskScore score_vqa(std::string_view ref, std::string_view dis, const TextEmbedder& e);

}  // namespace mpd::tasks
