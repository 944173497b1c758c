// Copyright 2026 The MPD Toolkit Authors
// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <array>
#include <string>
#include <vector>

#include <json.hpp>

namespace mpd::annotate {

inline constexpr int kMcqOptions = 4;
inline constexpr int kMaxVqaWords = 5;
inline constexpr int kMinCaptionWords = 30;
inline constexpr int kMaxCaptionWords = 40;

/// Question/answer material authored for one reference image.
struct QABundle {
  std::string image_id;
  std::string yon_question;
  bool yon_answer = true;
  std::string mcq_question;
  std::vector<std::string> mcq_options;  // exactly 4
  int mcq_correct = 0;
  std::string vqa_question;
  std::string vqa_answer;
  std::string caption;

  friend bool operator==(const QABundle&, const QABundle&) = default;
};

nlohmann::json to_json(const QABundle& b);
/// Throws SchemaError on missing or mistyped fields.
QABundle bundle_from_json(const nlohmann::json& j);

struct RuleVerdict {
  std::string rule;
  bool passed = true;
  bool hard = true;  // false: warning only
  std::string detail;
};

struct ValidationReport {
  std::vector<RuleVerdict> verdicts;
  bool ok() const;             // no hard failure
  bool has_warnings() const;   // some soft rule failed
  nlohmann::json to_json() const;
};

/// Hard rules: "mcq arity" (4 options), "mcq correct index", "vqa length"
/// (1..5 words), "caption length" (30..40 words), "non-empty questions".
/// Soft rule: "option length" (each wrong option within +-50% of the
/// correct option's character length).
ValidationReport validate_bundle(const QABundle& b);

int word_count(const std::string& s);

/// Procedurally authored bundle for fixture images; passes validation.
QABundle synthetic_bundle(const std::string& image_id);

/// Line-delimited JSON, one bundle per line.
std::vector<QABundle> read_bundles(const std::string& path);
void write_bundles(const std::string& path, const std::vector<QABundle>& bundles);

}  // namespace mpd::annotate
