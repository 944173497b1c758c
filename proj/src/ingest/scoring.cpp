// Copyright 2026 The MPD Toolkit Authors
// SPDX-License-Identifier: Apache-2.0

#include "mpd/ingest/scoring.hpp"

#include <map>
#include <optional>
#include <set>

#include "mpd/common/error.hpp"
#include "mpd/tasks/logits.hpp"

namespace mpd::ingest {

using tasks::Task;

tasks::CiderCorpus build_cider_corpus(const std::vector<corruption::PairRecord>& pairs,
                                      const ResponseSet& responses) {
  std::set<std::string> refs;
  for (const auto& p : pairs) refs.insert(p.ref_id);
  tasks::CiderCorpus corpus;
  for (const auto& r : responses.records) {
    if (r.task != Task::kCAP || !refs.count(r.image_id)) continue;
    corpus.add_document({tasks::tokenize(std::get<TextPayload>(r.payload).text)});
  }
  return corpus;
}

namespace {

tasks::TaskScore score_one(const ResponseRecord& ref, const ResponseRecord& dis, const ScoringOptions& opts,
                           const tasks::TextEmbedder& embedder, const tasks::CaptionEvaluators& ev) {
  switch (dis.task) {
    case Task::kYoN:
      return tasks::score_yon(std::get<tasks::LogitPair>(ref.payload), std::get<tasks::LogitPair>(dis.payload));
    case Task::kMCQ:
      return tasks::score_mcq(std::get<tasks::LogitQuad>(ref.payload), std::get<tasks::LogitQuad>(dis.payload));
    case Task::kVQA:
      return tasks::score_vqa(std::get<TextPayload>(ref.payload).text, std::get<TextPayload>(dis.payload).text,
                              embedder);
    case Task::kCAP:
      return tasks::score_cap(std::get<TextPayload>(ref.payload).text, std::get<TextPayload>(dis.payload).text, ev);
    case Task::kSEG:
      return tasks::score_seg(std::get<tasks::SegMask>(ref.payload), std::get<tasks::SegMask>(dis.payload));
    case Task::kDET:
      return tasks::score_det(std::get<tasks::DetectionSet>(ref.payload),
                              std::get<tasks::DetectionSet>(dis.payload));
    case Task::kRET:
      return tasks::score_ret(std::get<tasks::RetrievalRanking>(ref.payload),
                              std::get<tasks::RetrievalRanking>(dis.payload), opts.ret_anchor);
  }
  throw InvalidInput("unknown task");
}

}  // namespace

ScoringResult score_pairs(const std::vector<corruption::PairRecord>& pairs, const ResponseSet& responses,
                          const ScoringOptions& opts) {
  ScoringResult result;
  tasks::HashingEmbedder fallback;
  const tasks::TextEmbedder& embedder = opts.embedder ? *opts.embedder : fallback;

  tasks::CiderCorpus corpus;
  if (opts.use_cider) {
    corpus = build_cider_corpus(pairs, responses);
    result.cider_documents = corpus.size();
  }
  tasks::CaptionEvaluators ev;
  ev.use_bleu = opts.use_bleu;
  ev.cider = opts.use_cider && corpus.size() > 0 ? &corpus : nullptr;
  ev.spice = opts.spice;

  std::map<std::string, std::vector<long>> by_image;
  for (long i = 0; i < static_cast<long>(responses.records.size()); ++i) {
    by_image[responses.records[i].image_id].push_back(i);
  }

  struct Job {
    std::size_t pair;
    long dis;
    long ref;
  };
  std::vector<Job> jobs;
  for (std::size_t p = 0; p < pairs.size(); ++p) {
    auto it = by_image.find(pairs[p].pair_id);
    if (it == by_image.end()) continue;
    for (long d : it->second) {
      const auto& rec = responses.records[d];
      const long r = responses.find(pairs[p].ref_id, rec.subject, rec.task);
      if (r < 0) {
        result.warnings.push_back(pairs[p].pair_id + ": " + rec.subject + "/" +
                                  std::string(tasks::task_name(rec.task)) + " has no reference-image response");
        continue;
      }
      jobs.push_back({p, d, r});
    }
  }

  std::vector<std::optional<tasks::TaskScore>> scores(jobs.size());
  std::vector<std::string> errors(jobs.size());
#pragma omp parallel for schedule(dynamic, 64)
  for (long j = 0; j < static_cast<long>(jobs.size()); ++j) {
    try {
      scores[j] = score_one(responses.records[jobs[j].ref], responses.records[jobs[j].dis], opts, embedder, ev);
    } catch (const std::exception& e) {
      errors[j] = e.what();
    }
  }

  result.table.reserve(jobs.size());
  for (std::size_t j = 0; j < jobs.size(); ++j) {
    const auto& rec = responses.records[jobs[j].dis];
    if (!scores[j]) {
      result.warnings.push_back(pairs[jobs[j].pair].pair_id + ": " + rec.subject + "/" +
                                std::string(tasks::task_name(rec.task)) + " unscorable: " + errors[j]);
      continue;
    }
    result.table.add(pairs[jobs[j].pair].pair_id, rec.subject, *scores[j]);
  }
  return result;
}

}  // namespace mpd::ingest
