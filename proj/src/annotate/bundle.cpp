// Copyright 2026 The MPD Toolkit Authors
// SPDX-License-Identifier: Apache-2.0

#include "mpd/annotate/bundle.hpp"

#include <cmath>
#include <set>
#include <sstream>

#include "mpd/common/error.hpp"
#include "mpd/common/hash.hpp"
#include "mpd/common/rng.hpp"
#include "mpd/common/table.hpp"

namespace mpd::annotate {

using nlohmann::json;

json to_json(const QABundle& b) {
  return {{"image_id", b.image_id},
          {"yon", {{"question", b.yon_question}, {"answer", b.yon_answer}}},
          {"mcq", {{"question", b.mcq_question}, {"options", b.mcq_options}, {"correct", b.mcq_correct}}},
          {"vqa", {{"question", b.vqa_question}, {"answer", b.vqa_answer}}},
          {"cap", {{"caption", b.caption}}}};
}

QABundle bundle_from_json(const json& j) {
  QABundle b;
  try {
    b.image_id = j.at("image_id").get<std::string>();
    b.yon_question = j.at("yon").at("question").get<std::string>();
    b.yon_answer = j.at("yon").at("answer").get<bool>();
    b.mcq_question = j.at("mcq").at("question").get<std::string>();
    b.mcq_options = j.at("mcq").at("options").get<std::vector<std::string>>();
    b.mcq_correct = j.at("mcq").at("correct").get<int>();
    b.vqa_question = j.at("vqa").at("question").get<std::string>();
    b.vqa_answer = j.at("vqa").at("answer").get<std::string>();
    b.caption = j.at("cap").at("caption").get<std::string>();
  } catch (const json::exception& e) {
    throw SchemaError(std::string("malformed QA bundle: ") + e.what());
  }
  return b;
}

int word_count(const std::string& s) {
  std::istringstream in(s);
  std::string w;
  int n = 0;
  while (in >> w) ++n;
  return n;
}

bool ValidationReport::ok() const {
  for (const auto& v : verdicts)
    if (v.hard && !v.passed) return false;
  return true;
}

bool ValidationReport::has_warnings() const {
  for (const auto& v : verdicts)
    if (!v.hard && !v.passed) return true;
  return false;
}

json ValidationReport::to_json() const {
  json rules = json::array();
  for (const auto& v : verdicts) {
    rules.push_back({{"rule", v.rule}, {"passed", v.passed}, {"severity", v.hard ? "hard" : "soft"},
                     {"detail", v.detail}});
  }
  return {{"ok", ok()}, {"warnings", has_warnings()}, {"rules", rules}};
}

ValidationReport validate_bundle(const QABundle& b) {
  ValidationReport r;
  auto add = [&](std::string rule, bool passed, bool hard, std::string detail) {
    r.verdicts.push_back({std::move(rule), passed, hard, std::move(detail)});
  };
  const bool questions = word_count(b.yon_question) > 0 && word_count(b.mcq_question) > 0 &&
                         word_count(b.vqa_question) > 0;
  add("non-empty questions", questions, true, questions ? "" : "a question is empty");

  const int n_opt = static_cast<int>(b.mcq_options.size());
  add("mcq arity", n_opt == kMcqOptions, true,
      "expected 4 options, got " + std::to_string(n_opt));
  const bool idx_ok = b.mcq_correct >= 0 && b.mcq_correct < n_opt;
  add("mcq correct index", idx_ok, true, "index " + std::to_string(b.mcq_correct));

  const int vqa_words = word_count(b.vqa_answer);
  add("vqa length", vqa_words >= 1 && vqa_words <= kMaxVqaWords, true,
      std::to_string(vqa_words) + " words (1-5 allowed)");
  const int cap_words = word_count(b.caption);
  add("caption length", cap_words >= kMinCaptionWords && cap_words <= kMaxCaptionWords, true,
      std::to_string(cap_words) + " words (30-40 allowed)");

  if (idx_ok && n_opt > 0) {
    const double correct_len = static_cast<double>(b.mcq_options[b.mcq_correct].size());
    std::string detail;
    for (int i = 0; i < n_opt; ++i) {
      if (i == b.mcq_correct) continue;
      const double len = static_cast<double>(b.mcq_options[i].size());
      if (len < 0.5 * correct_len || len > 1.5 * correct_len) {
        detail += (detail.empty() ? "" : "; ") + std::string("option ") +
                  static_cast<char>('A' + i) + " has " + std::to_string(static_cast<int>(len)) +
                  " chars vs " + std::to_string(static_cast<int>(correct_len));
      }
    }
    add("option length", detail.empty(), false, detail);
  }
  return r;
}

namespace {

constexpr const char* kObjects[] = {"lighthouse", "bicycle", "teapot", "violin", "sailboat",
                                    "umbrella", "tractor", "lantern", "cactus", "penguin",
                                    "clock", "bridge", "kettle", "balloon", "castle", "giraffe"};
constexpr const char* kColors[] = {"red", "blue", "green", "yellow", "white", "black", "orange",
                                   "purple"};
constexpr const char* kPlaces[] = {"a quiet harbor", "a busy street", "a snowy field",
                                   "a wooden table", "a sunny beach", "a dim kitchen",
                                   "a rocky hillside", "an empty parking lot"};
constexpr const char* kFillers[] = {
    "soft light falls across the scene from the left",
    "the background is slightly out of focus",
    "several small details are visible near the edges",
    "the colors look natural and balanced overall",
    "a few shadows stretch toward the lower corner",
    "the composition keeps the main subject near the center",
    "fine textures can be seen on nearby surfaces",
    "the sky above is pale with thin clouds"};

template <std::size_t N>
const char* pick(const char* const (&arr)[N], Rng& rng) {
  return arr[rng.below(N)];
}

}  // namespace

QABundle synthetic_bundle(const std::string& image_id) {
  Rng rng(fnv1a64(image_id));
  QABundle b;
  b.image_id = image_id;
  const std::string object = pick(kObjects, rng);
  const std::string color = pick(kColors, rng);
  const std::string place = pick(kPlaces, rng);
  b.yon_answer = rng.bernoulli(0.5);
  b.yon_question = b.yon_answer ? "Is there a " + object + " in the image?"
                                : "Is there a " + std::string(pick(kObjects, rng)) + " flying in the sky?";
  std::vector<std::string> opts;
  std::set<std::string> used{color};
  opts.push_back(color);
  while (opts.size() < kMcqOptions) {
    const std::string c = pick(kColors, rng);
    if (used.insert(c).second) opts.push_back(c);
  }
  b.mcq_correct = static_cast<int>(rng.below(kMcqOptions));
  std::swap(opts[0], opts[b.mcq_correct]);
  b.mcq_options = opts;
  b.mcq_question = "What is the main color of the " + object + "?";
  b.vqa_question = "Where is the " + object + "?";
  b.vqa_answer = "on " + place;

  std::string cap = "A " + color + " " + object + " stands on " + place + ".";
  std::vector<std::string> fillers(std::begin(kFillers), std::end(kFillers));
  for (std::size_t i = fillers.size(); i > 1; --i) std::swap(fillers[i - 1], fillers[rng.below(i)]);
  for (const auto& f : fillers) {
    const std::string next = cap + " " + f + ".";
    if (word_count(next) > kMaxCaptionWords) break;
    cap = next;
    if (word_count(cap) >= kMinCaptionWords + 2) break;
  }
  b.caption = cap;
  return b;
}

std::vector<QABundle> read_bundles(const std::string& path) {
  std::vector<QABundle> out;
  std::istringstream in(read_file(path));
  std::string line;
  int lineno = 0;
  while (std::getline(in, line)) {
    ++lineno;
    if (line.find_first_not_of(" \t\r") == std::string::npos) continue;
    try {
      out.push_back(bundle_from_json(json::parse(line)));
    } catch (const json::exception& e) {
      throw SchemaError(path + ":" + std::to_string(lineno) + ": " + e.what());
    }
  }
  return out;
}

void write_bundles(const std::string& path, const std::vector<QABundle>& bundles) {
  std::string text;
  for (const auto& b : bundles) text += to_json(b).dump() + "\n";
  write_file(path, text);
}

}  // namespace mpd::annotate
