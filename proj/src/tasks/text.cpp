// Copyright 2026 The MPD Toolkit Authors
// SPDX-License-Identifier: Apache-2.0

#include "mpd/tasks/text.hpp"

#include <cctype>
#include <cmath>

#include "mpd/common/error.hpp"
#include "mpd/common/hash.hpp"
#include "mpd/tasks/logits.hpp"

namespace mpd::tasks {

std::string normalize_text(std::string_view text) {
  std::string out;
  out.reserve(text.size());
  bool pending_space = false;
  for (unsigned char ch : text) {
    if (ch < 0x80 && (std::isspace(ch) || std::ispunct(ch) || std::iscntrl(ch))) {
      pending_space = !out.empty();
      continue;
    }
    if (pending_space) {
      out.push_back(' ');
      pending_space = false;
    }
    out.push_back(ch < 0x80 ? static_cast<char>(std::tolower(ch)) : static_cast<char>(ch));
  }
  return out;
}

std::vector<std::string> tokenize(std::string_view text) {
  std::vector<std::string> out;
  const std::string norm = normalize_text(text);
  std::size_t start = 0;
  while (start < norm.size()) {
    std::size_t end = norm.find(' ', start);
    if (end == std::string::npos) end = norm.size();
    out.emplace_back(norm.substr(start, end - start));
    start = end + 1;
  }
  return out;
}

std::vector<std::vector<double>> TextEmbedder::embed_batch(
    const std::vector<std::string>& texts) const {
  std::vector<std::vector<double>> out;
  out.reserve(texts.size());
  for (const auto& t : texts) out.push_back(embed(t));
  return out;
}

std::vector<double> HashingEmbedder::embed(std::string_view text) const {
  const auto words = tokenize(text);
  if (words.empty()) throw InvalidInput("cannot embed empty text");
  std::vector<double> v(kDim, 0.0);
  auto add = [&](std::string_view feature, double weight) {
    const auto first = static_cast<unsigned char>(feature.front());
    v[first * 16 + fnv1a64(feature) % 16] += weight;
  };
  for (const auto& w : words) {
    add(w, 1.0);
    for (std::size_t n = 1; n <= 3; ++n)
      for (std::size_t i = 0; i + n <= w.size(); ++i) add(std::string_view(w).substr(i, n), 1.0 / n);
  }
  double norm = 0;
  for (double x : v) norm += x * x;
  norm = std::sqrt(norm);
  for (double& x : v) x /= norm;
  return v;
}

TaskScore score_vqa(std::string_view ref, std::string_view dis, const TextEmbedder& e) {
  if (normalize_text(ref).empty() || normalize_text(dis).empty()) {
    throw InvalidInput("VQA answers must be non-empty after normalization");
  }
  const auto a = e.embed(ref);
  const auto b = e.embed(dis);
  return {Task::kVQA, cosine(a, b), "", false};
}

}  // namespace mpd::tasks
