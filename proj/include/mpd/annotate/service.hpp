// Copyright 2026 The MPD Toolkit Authors
// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <cstdint>
#include <filesystem>
#include <map>
#include <memory>
#include <optional>
#include <set>
#include <shared_mutex>
#include <string>
#include <vector>

#include <json.hpp>

#include "mpd/annotate/bundle.hpp"

namespace mpd::annotate {

inline constexpr int kEventLogVersion = 1;

enum class ItemState : std::uint8_t { kPending, kAnswered, kUnderEdit, kAwaitingReview, kAccepted, kExcluded };

enum class EventKind : std::uint8_t {
  kAnswer,
  kUnlock,
  kEditChoice,
  kRedesignQuestion,
  kReviewVerdict,
  kExcludeUnnatural,
  kExcludeNSFW,
};

/// "pending", "answered", "under-edit", "awaiting-review", "accepted", "excluded".
std::string_view state_name(ItemState s);
/// "answer", "unlock", "edit-choice", "redesign-question", "review-verdict",
/// "exclude-unnatural", "exclude-nsfw".
std::string_view event_kind_name(EventKind k);
std::optional<EventKind> parse_event_kind(std::string_view s);

struct AnnotationEvent {
  std::uint64_t id = 0;  // assigned on append
  std::string expert;
  std::string image_id;
  EventKind kind = EventKind::kAnswer;
  /// Answer: {"answers": {...}}. EditChoice / RedesignQuestion: bundle
  /// fields to overwrite. ReviewVerdict: {"accept": bool}.
  nlohmann::json payload = nlohmann::json::object();
  std::string timestamp;  // set by the service when empty

  nlohmann::json to_json() const;
  /// Throws SchemaError.
  static AnnotationEvent from_json(const nlohmann::json& j);
};

struct Item {
  QABundle bundle;
  QABundle before_edit;  // restored when a redesign is rejected
  ItemState state = ItemState::kPending;
  std::string lock_holder;  // expert who unlocked it
  std::string author;       // expert whose redesign awaits or passed review
  std::vector<std::string> changed_fields;
  nlohmann::json answers;   // last Answer payload
  std::set<std::string> redesigners;  // never offered this item again

  nlohmann::json to_json() const;
};

struct SubmitResult {
  bool accepted = false;
  ItemState state = ItemState::kPending;
  std::uint64_t event_id = 0;
  std::string error;
};

struct RecoveryReport {
  std::size_t events = 0;
  std::size_t dropped_lines = 0;
  std::uintmax_t truncated_bytes = 0;
  std::string first_error;

  bool clean() const { return dropped_lines == 0; }
};

/// Legality of `ev` against `item`; empty when legal, otherwise the reason.
std::string check_transition(const Item& item, const AnnotationEvent& ev);
/// Applies a legal event. Throws InvalidInput when illegal.
void apply_event(Item& item, const AnnotationEvent& ev);

/// Event-sourced annotation state.
///
/// A state directory holds corpus.jsonl (the initial bundles), experts.json
/// (registered expert ids, optional) and events.jsonl (header line plus one
/// event per line). Item state is the fold of the log over the corpus.
/// Submissions are serialized and flushed to disk before they take effect;
/// reads share a lock.
class AnnotationService {
 public:
  /// Creates a state directory. Throws InvalidInput if it already has a corpus.
  static void init(const std::filesystem::path& dir, const std::vector<QABundle>& corpus,
                   const std::vector<std::string>& experts = {});

  /// Replays the log; a corrupt tail is truncated and reported.
  explicit AnnotationService(const std::filesystem::path& dir);
  ~AnnotationService();

  const RecoveryReport& recovery() const noexcept { return recovery_; }

  bool knows_expert(const std::string& expert) const;

  struct Next {
    QABundle bundle;
    ItemState state;
  };
  /// The expert's own UnderEdit item, else the first Pending item the expert
  /// never redesigned, else the first AwaitingReview item authored by
  /// someone else. nullopt when nothing is left for this expert.
  std::optional<Next> next_item(const std::string& expert) const;

  SubmitResult submit(AnnotationEvent ev);

  std::optional<Item> item(const std::string& image_id) const;
  std::size_t event_count() const;

  /// Accepted and Answered bundles ordered by image id.
  std::vector<QABundle> export_corpus() const;
  /// export_corpus as line-delimited JSON.
  std::string export_jsonl() const;

 private:
  std::filesystem::path dir_;
  std::vector<std::string> order_;  // corpus order
  std::map<std::string, Item> items_;
  std::set<std::string> experts_;
  std::uint64_t last_id_ = 0;
  RecoveryReport recovery_;
  mutable std::shared_mutex mu_;
  int log_fd_ = -1;
};

/// HTTP front end: GET /item/next?expert=, POST /event, GET /state/<id>,
/// GET /export. The expert id comes from the X-Expert-Id header or the
/// "expert" query/body field.
class AnnotationServer {
 public:
  explicit AnnotationServer(AnnotationService& service);
  ~AnnotationServer();

  /// Binds to a free port on `host` and returns it.
  int bind_any_port(const std::string& host = "127.0.0.1");
  bool bind(const std::string& host, int port);
  /// Blocks until stop().
  void run();
  void stop();

 private:
  struct Impl;
  std::unique_ptr<Impl> impl_;
};

}  // namespace mpd::annotate
