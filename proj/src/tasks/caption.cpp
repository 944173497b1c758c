// Copyright 2026 The MPD Toolkit Authors
// SPDX-License-Identifier: Apache-2.0

#include "mpd/tasks/caption.hpp"

#include <algorithm>
#include <cmath>
#include <cstdlib>
#include <set>

#include "mpd/common/error.hpp"
#include "mpd/tasks/text.hpp"

namespace mpd::tasks {

NgramCounts ngram_counts(const Tokens& tokens, int n) {
  NgramCounts out;
  if (n <= 0) return out;
  for (std::size_t i = 0; i + n <= tokens.size(); ++i) {
    ++out[std::vector<std::string>(tokens.begin() + i, tokens.begin() + i + n)];
  }
  return out;
}

Precision modified_precision(const Tokens& cand, const std::vector<Tokens>& refs, int n) {
  const auto cc = ngram_counts(cand, n);
  std::map<std::vector<std::string>, int> max_ref;
  for (const auto& r : refs)
    for (const auto& [g, c] : ngram_counts(r, n)) max_ref[g] = std::max(max_ref[g], c);
  Precision p;
  for (const auto& [g, c] : cc) {
    p.total += c;
    auto it = max_ref.find(g);
    if (it != max_ref.end()) p.matched += std::min(c, it->second);
  }
  return p;
}

double bleu(const Tokens& cand, const std::vector<Tokens>& refs, const BleuOptions& opts) {
  if (cand.empty() || refs.empty()) throw InvalidInput("BLEU needs a candidate and a reference");
  double log_sum = 0;
  int orders = 0;
  for (int n = 1; n <= opts.max_n; ++n) {
    const Precision p = modified_precision(cand, refs, n);
    if (p.total == 0) continue;
    const double num = p.matched > 0 ? p.matched : opts.epsilon;
    log_sum += std::log(num / p.total);
    ++orders;
  }
  const auto c = static_cast<double>(cand.size());
  double r = 0;
  double best = INFINITY;
  for (const auto& ref : refs) {
    const double d = std::abs(static_cast<double>(ref.size()) - c);
    if (d < best || (d == best && ref.size() < r)) {
      best = d;
      r = static_cast<double>(ref.size());
    }
  }
  const double bp = c > r ? 1.0 : std::exp(1.0 - r / c);
  return bp * std::exp(log_sum / orders);
}

void CiderCorpus::add_document(const std::vector<Tokens>& refs) {
  ++docs_;
  for (int n = 1; n <= kMaxN; ++n) {
    std::set<std::vector<std::string>> seen;
    for (const auto& r : refs)
      for (const auto& [g, c] : ngram_counts(r, n)) seen.insert(g);
    for (const auto& g : seen) ++df_[g];
  }
}

double CiderCorpus::idf(const std::vector<std::string>& ngram) const {
  const double log_n = docs_ == 1 ? 1.0 : std::log(static_cast<double>(docs_));
  auto it = df_.find(ngram);
  const double df = it == df_.end() ? 1.0 : std::max(1, it->second);
  return log_n - std::log(df);
}

namespace {

struct TfIdf {
  std::map<std::vector<std::string>, double> vec;
  double norm = 0;
};

TfIdf tfidf(const Tokens& t, int n, const CiderCorpus& corpus) {
  TfIdf out;
  for (const auto& [g, c] : ngram_counts(t, n)) {
    const double w = c * corpus.idf(g);
    out.vec[g] = w;
    out.norm += w * w;
  }
  out.norm = std::sqrt(out.norm);
  return out;
}

}  // namespace

double cider(const Tokens& cand, const std::vector<Tokens>& refs, const CiderCorpus& corpus,
             const CiderOptions& opts) {
  if (corpus.size() == 0) throw ConfigError("CIDEr corpus statistics are empty");
  if (refs.empty()) throw InvalidInput("CIDEr needs at least one reference");
  double total = 0;
  for (int n = 1; n <= CiderCorpus::kMaxN; ++n) {
    const TfIdf c = tfidf(cand, n, corpus);
    double sum_refs = 0;
    for (const auto& ref : refs) {
      const TfIdf r = tfidf(ref, n, corpus);
      double dot = 0;
      for (const auto& [g, w] : c.vec) {
        auto it = r.vec.find(g);
        if (it != r.vec.end()) dot += std::min(w, it->second) * it->second;
      }
      double sim = 0.0;
      if (c.norm != 0 && r.norm != 0) sim = cand == ref ? 1.0 : std::min(1.0, dot / (c.norm * r.norm));
      const double delta = static_cast<double>(cand.size()) - static_cast<double>(ref.size());
      sim *= std::exp(-(delta * delta) / (2 * opts.sigma * opts.sigma));
      sum_refs += sim;
    }
    total += sum_refs / refs.size();
  }
  return total / CiderCorpus::kMaxN * 10.0;
}

TaskScore score_cap(std::string_view ref, std::string_view dis, const CaptionEvaluators& ev) {
  if (!ev.use_bleu && !ev.cider && !ev.spice) throw ConfigError("no caption evaluator available");
  const Tokens r = tokenize(ref);
  const Tokens d = tokenize(dis);
  if (r.empty() || d.empty()) throw InvalidInput("captions must be non-empty after normalization");
  TaskScore s{Task::kCAP, 0.0, "", false};
  std::string flags;
  auto note = [&](std::string_view f) {
    if (!flags.empty()) flags += ',';
    flags += f;
  };
  if (ev.use_bleu) {
    s.value += bleu(d, {r});
    note("bleu");
  }
  if (ev.cider) {
    s.value += cider(d, {r}, *ev.cider);
    note("cider");
  }
  if (ev.spice) {
    s.value += ev.spice->score(dis, ref);
    note("spice");
  } else {
    note("spice=absent");
  }
  s.flags = flags;
  return s;
}

double cap_identity_score(std::string_view ref, const CaptionEvaluators& ev) {
  return score_cap(ref, ref, ev).value;
}

}  // namespace mpd::tasks
