// Copyright 2026 The MPD Toolkit Authors
// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <filesystem>
#include <map>
#include <string>
#include <tuple>
#include <variant>
#include <vector>

#include "mpd/ingest/roster.hpp"
#include "mpd/tasks/logits.hpp"
#include "mpd/tasks/vision.hpp"

namespace mpd::ingest {

inline constexpr int kResponsesVersion = 1;

/// VQA answer or caption.
struct TextPayload {
  std::string text;
};

using Payload = std::variant<tasks::LogitPair, tasks::LogitQuad, TextPayload, tasks::SegMask,
                             tasks::DetectionSet, tasks::RetrievalRanking>;

/// One subject's output for one image. Reference images use the reference
/// id as image_id; distorted images use the pair id.
struct ResponseRecord {
  std::string image_id;
  std::string subject;
  tasks::Task task = tasks::Task::kYoN;
  Payload payload;
  double temperature = 0.0;
};

struct Reject {
  int line = 0;
  std::string reason;  // short code: "arity", "duplicate", "schema", ...
  std::string detail;
};

struct ResponseSet {
  std::vector<ResponseRecord> records;
  std::vector<Reject> rejects;

  /// Index of the record for (image, subject, task), or -1.
  long find(const std::string& image_id, const std::string& subject, tasks::Task t) const;
  void rebuild_index();

 private:
  std::map<std::tuple<std::string, std::string, tasks::Task>, long> index_;
};

struct LoadOptions {
  const SubjectRoster* roster = nullptr;  // null: subject ids are not checked
  double max_reject_fraction = 0.01;
};

/// Parses a responses file: header {"schema":"mpd.responses","version":1}
/// then one record per line with image_id, subject, task, payload and
/// temperature. Payload shapes by task:
///   yon {"yes": x, "no": y}; mcq {"logits": [a,b,c,d]}; vqa/cap {"text": s};
///   seg {"mask": "<path relative to the file>", "sha256": "<hex>"} (PBM P4);
///   det {"detections": [{"category", "confidence", "box": [x0,y0,x1,y1]}]};
///   ret {"ranking": [ids...]}.
/// Invalid records are collected as rejects; more than the allowed
/// fraction raises SchemaError.
ResponseSet load_responses(const std::filesystem::path& path, const LoadOptions& opts = {});

/// Writes records in the order given; masks go to masks/<n>.pbm next to the
/// file, named by record index.
void write_responses(const std::filesystem::path& path, const std::vector<ResponseRecord>& records);

std::vector<std::uint8_t> encode_pbm(const tasks::SegMask& m);
tasks::SegMask decode_pbm(const std::vector<std::uint8_t>& bytes, const std::string& context);

}  // namespace mpd::ingest
