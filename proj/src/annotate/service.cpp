// Copyright 2026 The MPD Toolkit Authors
// SPDX-License-Identifier: Apache-2.0

#include "mpd/annotate/service.hpp"

#include <fcntl.h>
#include <unistd.h>

#include <algorithm>
#include <cerrno>
#include <chrono>
#include <cstring>
#include <ctime>
#include <mutex>

#include "mpd/common/error.hpp"
#include "mpd/common/table.hpp"

namespace mpd::annotate {

namespace fs = std::filesystem;
using nlohmann::json;

namespace {

constexpr std::string_view kStateNames[] = {"pending",         "answered", "under-edit",
                                            "awaiting-review", "accepted", "excluded"};
constexpr std::string_view kKindNames[] = {"answer",         "unlock",            "edit-choice", "redesign-question",
                                           "review-verdict", "exclude-unnatural", "exclude-nsfw"};
// Editable field name and its location in the bundle JSON.
constexpr std::pair<const char*, const char*> kEditable[] = {
    {"yon_question", "/yon/question"}, {"yon_answer", "/yon/answer"},     {"mcq_question", "/mcq/question"},
    {"mcq_options", "/mcq/options"},   {"mcq_correct", "/mcq/correct"},   {"vqa_question", "/vqa/question"},
    {"vqa_answer", "/vqa/answer"},     {"caption", "/cap/caption"}};

std::string now_utc() {
  const auto t = std::chrono::system_clock::to_time_t(std::chrono::system_clock::now());
  std::tm tm{};
  gmtime_r(&t, &tm);
  char buf[32];
  std::strftime(buf, sizeof buf, "%Y-%m-%dT%H:%M:%SZ", &tm);
  return buf;
}

json log_header() { return {{"schema", "mpd.annotation-log"}, {"version", kEventLogVersion}}; }

// Overwrites the editable fields present in `patch`; returns their names.
std::vector<std::string> patch_bundle(QABundle& b, const json& patch) {
  if (!patch.is_object()) throw InvalidInput("edit payload must be an object");
  for (const auto& [key, _] : patch.items()) {
    if (std::none_of(std::begin(kEditable), std::end(kEditable), [&](const auto& e) { return key == e.first; })) {
      throw InvalidInput("field '" + key + "' is not editable");
    }
  }
  json merged = to_json(b);
  std::vector<std::string> changed;
  for (const auto& [f, ptr] : kEditable) {
    const json::json_pointer at(ptr);
    if (patch.contains(f) && patch[f] != merged[at]) {
      merged[at] = patch[f];
      changed.emplace_back(f);
    }
  }
  try {
    b = bundle_from_json(merged);
  } catch (const SchemaError& e) {
    throw InvalidInput(e.what());
  }
  return changed;
}

void check_edit(const Item& item, const AnnotationEvent& ev) {
  QABundle b = item.bundle;
  patch_bundle(b, ev.payload);
  const ValidationReport rep = validate_bundle(b);
  if (!rep.ok()) {
    for (const auto& v : rep.verdicts)
      if (v.hard && !v.passed) throw InvalidInput("edited bundle fails '" + v.rule + "': " + v.detail);
  }
}

}  // namespace

std::string_view state_name(ItemState s) { return kStateNames[static_cast<int>(s)]; }
std::string_view event_kind_name(EventKind k) { return kKindNames[static_cast<int>(k)]; }

std::optional<EventKind> parse_event_kind(std::string_view s) {
  for (int i = 0; i < 7; ++i)
    if (kKindNames[i] == s) return static_cast<EventKind>(i);
  return std::nullopt;
}

json AnnotationEvent::to_json() const {
  return {{"id", id},
          {"expert", expert},
          {"image_id", image_id},
          {"kind", event_kind_name(kind)},
          {"payload", payload},
          {"timestamp", timestamp}};
}

AnnotationEvent AnnotationEvent::from_json(const json& j) {
  if (!j.is_object()) throw SchemaError("event must be an object");
  AnnotationEvent ev;
  try {
    ev.id = j.value("id", std::uint64_t{0});
    ev.expert = j.at("expert").get<std::string>();
    ev.image_id = j.at("image_id").get<std::string>();
    const auto kind = parse_event_kind(j.at("kind").get<std::string>());
    if (!kind) throw SchemaError("unknown event kind '" + j.at("kind").get<std::string>() + "'");
    ev.kind = *kind;
    ev.payload = j.value("payload", json::object());
    ev.timestamp = j.value("timestamp", "");
  } catch (const json::exception& e) {
    throw SchemaError(std::string("event: ") + e.what());
  }
  if (ev.expert.empty()) throw SchemaError("event: empty expert id");
  return ev;
}

json Item::to_json() const {
  return {{"image_id", bundle.image_id},
          {"state", state_name(state)},
          {"lock_holder", lock_holder},
          {"author", author},
          {"changed_fields", changed_fields},
          {"bundle", annotate::to_json(bundle)}};
}

std::string check_transition(const Item& item, const AnnotationEvent& ev) {
  const std::string from = std::string(state_name(item.state));
  const auto illegal = [&] { return std::string(event_kind_name(ev.kind)) + " is illegal from " + from; };
  const bool holder = item.state == ItemState::kUnderEdit && item.lock_holder == ev.expert;
  try {
    switch (ev.kind) {
      case EventKind::kAnswer:
        if (item.state != ItemState::kPending && !holder) return illegal();
        return {};
      case EventKind::kUnlock:
        if (item.state != ItemState::kPending) return illegal();
        return {};
      case EventKind::kEditChoice:
      case EventKind::kRedesignQuestion:
        if (!holder) {
          return item.state == ItemState::kUnderEdit ? "item is unlocked by " + item.lock_holder : illegal();
        }
        check_edit(item, ev);
        return {};
      case EventKind::kReviewVerdict:
        if (item.state != ItemState::kAwaitingReview) return illegal();
        if (ev.expert == item.author) return "reviewer must differ from author " + item.author;
        if (!ev.payload.contains("accept") || !ev.payload["accept"].is_boolean()) {
          return "review verdict needs a boolean 'accept'";
        }
        return {};
      case EventKind::kExcludeUnnatural:
      case EventKind::kExcludeNSFW:
        if (item.state != ItemState::kPending && !holder) return illegal();
        return {};
    }
  } catch (const InvalidInput& e) {
    return e.what();
  }
  return illegal();
}

void apply_event(Item& item, const AnnotationEvent& ev) {
  if (auto why = check_transition(item, ev); !why.empty()) throw InvalidInput(why);
  switch (ev.kind) {
    case EventKind::kAnswer:
      item.answers = ev.payload.value("answers", json::object());
      item.state = ItemState::kAnswered;
      item.lock_holder.clear();
      break;
    case EventKind::kUnlock:
      item.before_edit = item.bundle;
      item.lock_holder = ev.expert;
      item.state = ItemState::kUnderEdit;
      break;
    case EventKind::kEditChoice:
      for (auto& f : patch_bundle(item.bundle, ev.payload))
        if (std::find(item.changed_fields.begin(), item.changed_fields.end(), f) == item.changed_fields.end())
          item.changed_fields.push_back(f);
      break;
    case EventKind::kRedesignQuestion:
      for (auto& f : patch_bundle(item.bundle, ev.payload))
        if (std::find(item.changed_fields.begin(), item.changed_fields.end(), f) == item.changed_fields.end())
          item.changed_fields.push_back(f);
      item.author = ev.expert;
      item.redesigners.insert(ev.expert);
      item.lock_holder.clear();
      item.state = ItemState::kAwaitingReview;
      break;
    case EventKind::kReviewVerdict:
      if (ev.payload["accept"].get<bool>()) {
        item.state = ItemState::kAccepted;
      } else {
        item.bundle = item.before_edit;
        item.changed_fields.clear();
        item.author.clear();
        item.state = ItemState::kPending;
      }
      break;
    case EventKind::kExcludeUnnatural:
    case EventKind::kExcludeNSFW:
      item.lock_holder.clear();
      item.state = ItemState::kExcluded;
      break;
  }
}

void AnnotationService::init(const fs::path& dir, const std::vector<QABundle>& corpus,
                             const std::vector<std::string>& experts) {
  if (fs::exists(dir / "corpus.jsonl")) throw InvalidInput(dir.string() + " already holds a corpus");
  std::set<std::string> ids;
  for (const auto& b : corpus)
    if (!ids.insert(b.image_id).second) throw InvalidInput("duplicate image id " + b.image_id);
  fs::create_directories(dir);
  write_bundles((dir / "corpus.jsonl").string(), corpus);
  if (!experts.empty()) write_file(dir / "experts.json", json(experts).dump() + "\n");
  write_file(dir / "events.jsonl", log_header().dump() + "\n");
}

AnnotationService::AnnotationService(const fs::path& dir) : dir_(dir) {
  for (auto& b : read_bundles((dir / "corpus.jsonl").string())) {
    order_.push_back(b.image_id);
    Item it;
    it.bundle = b;
    it.before_edit = b;
    items_.emplace(b.image_id, std::move(it));
  }
  if (fs::exists(dir / "experts.json")) {
    try {
      for (const auto& e : json::parse(read_file(dir / "experts.json"))) experts_.insert(e.get<std::string>());
    } catch (const json::exception& e) {
      throw SchemaError("experts.json: " + std::string(e.what()));
    }
  }

  const fs::path log = dir / "events.jsonl";
  const std::string text = fs::exists(log) ? read_file(log) : std::string();
  std::size_t pos = 0;
  std::size_t good_end = 0;
  bool header_seen = false;
  while (pos < text.size()) {
    const std::size_t nl = text.find('\n', pos);
    std::string err;
    if (nl == std::string::npos) {
      err = "unterminated final line";
    } else {
      const std::string line = text.substr(pos, nl - pos);
      try {
        const json j = json::parse(line);
        if (!header_seen) {
          if (j != log_header()) throw SchemaError("bad log header");
          header_seen = true;
        } else {
          const AnnotationEvent ev = AnnotationEvent::from_json(j);
          if (ev.id != last_id_ + 1) throw SchemaError("event id " + std::to_string(ev.id) + " out of sequence");
          auto it = items_.find(ev.image_id);
          if (it == items_.end()) throw SchemaError("unknown image " + ev.image_id);
          apply_event(it->second, ev);
          last_id_ = ev.id;
          ++recovery_.events;
        }
      } catch (const std::exception& e) {
        err = e.what();
      }
    }
    if (!err.empty()) {
      recovery_.first_error = "line " + std::to_string(recovery_.events + 2) + ": " + err;
      for (std::size_t p = pos; p < text.size();) {
        ++recovery_.dropped_lines;
        const std::size_t n = text.find('\n', p);
        if (n == std::string::npos) break;
        p = n + 1;
      }
      break;
    }
    pos = nl + 1;
    good_end = pos;
  }
  if (!header_seen) {
    recovery_.truncated_bytes = text.size();
    write_file(log, log_header().dump() + "\n");
  } else if (good_end < text.size()) {
    recovery_.truncated_bytes = text.size() - good_end;
    fs::resize_file(log, good_end);
  }

  log_fd_ = ::open(log.c_str(), O_WRONLY | O_APPEND | O_CLOEXEC);
  if (log_fd_ < 0) throw InvalidInput("cannot open " + log.string() + ": " + std::strerror(errno));
}

AnnotationService::~AnnotationService() {
  if (log_fd_ >= 0) ::close(log_fd_);
}

bool AnnotationService::knows_expert(const std::string& expert) const {
  return !expert.empty() && (experts_.empty() || experts_.count(expert) > 0);
}

std::optional<AnnotationService::Next> AnnotationService::next_item(const std::string& expert) const {
  if (!knows_expert(expert)) throw InvalidInput("unknown expert '" + expert + "'");
  std::shared_lock lock(mu_);
  const Item* pending = nullptr;
  const Item* review = nullptr;
  for (const auto& id : order_) {
    const Item& it = items_.at(id);
    if (it.state == ItemState::kUnderEdit && it.lock_holder == expert) return Next{it.bundle, it.state};
    if (!pending && it.state == ItemState::kPending && !it.redesigners.count(expert)) pending = &it;
    if (!review && it.state == ItemState::kAwaitingReview && it.author != expert && !it.redesigners.count(expert)) {
      review = &it;
    }
  }
  if (pending) return Next{pending->bundle, pending->state};
  if (review) return Next{review->bundle, review->state};
  return std::nullopt;
}

SubmitResult AnnotationService::submit(AnnotationEvent ev) {
  SubmitResult res;
  if (!knows_expert(ev.expert)) {
    res.error = "unknown expert '" + ev.expert + "'";
    return res;
  }
  std::unique_lock lock(mu_);
  auto it = items_.find(ev.image_id);
  if (it == items_.end()) throw MissingInput("unknown image " + ev.image_id);
  res.state = it->second.state;
  if (auto why = check_transition(it->second, ev); !why.empty()) {
    res.error = why;
    return res;
  }
  ev.id = last_id_ + 1;
  if (ev.timestamp.empty()) ev.timestamp = now_utc();
  const std::string line = ev.to_json().dump() + "\n";
  std::size_t off = 0;
  while (off < line.size()) {
    const ssize_t n = ::write(log_fd_, line.data() + off, line.size() - off);
    if (n < 0) {
      if (errno == EINTR) continue;
      throw InvalidInput("event log write failed: " + std::string(std::strerror(errno)));
    }
    off += static_cast<std::size_t>(n);
  }
  if (::fsync(log_fd_) != 0) throw InvalidInput("event log fsync failed: " + std::string(std::strerror(errno)));
  apply_event(it->second, ev);
  last_id_ = ev.id;
  res.accepted = true;
  res.state = it->second.state;
  res.event_id = ev.id;
  return res;
}

std::optional<Item> AnnotationService::item(const std::string& image_id) const {
  std::shared_lock lock(mu_);
  auto it = items_.find(image_id);
  if (it == items_.end()) return std::nullopt;
  return it->second;
}

std::size_t AnnotationService::event_count() const {
  std::shared_lock lock(mu_);
  return last_id_;
}

std::vector<QABundle> AnnotationService::export_corpus() const {
  std::shared_lock lock(mu_);
  std::vector<QABundle> out;
  for (const auto& [id, it] : items_) {
    if (it.state == ItemState::kAccepted || it.state == ItemState::kAnswered) out.push_back(it.bundle);
  }
  return out;
}

std::string AnnotationService::export_jsonl() const {
  std::string out;
  for (const auto& b : export_corpus()) out += to_json(b).dump() + "\n";
  return out;
}

}  // namespace mpd::annotate
