// Copyright 2026 The MPD Toolkit Authors
// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <string>
#include <vector>

#include <json.hpp>

#include "mpd/tasks/caption.hpp"
#include "mpd/tasks/text.hpp"

namespace mpd::tasks {

/// How to reach an external scorer. Requests and responses are
/// line-delimited JSON objects matched by their integer "id".
///
/// kSubprocess runs `command` through /bin/sh with the request lines on
/// stdin and reads response lines from stdout. kHttp POSTs the request
/// lines to `url` (http://host[:port]/path) and reads the response body.
struct AdapterConfig {
  enum class Transport { kSubprocess, kHttp };
  Transport transport = Transport::kSubprocess;
  std::string command;
  std::string url;
  double timeout_seconds = 30.0;
  int retries = 2;

  static AdapterConfig from_json(const nlohmann::json& j);
};

/// Sends `requests` and returns the responses ordered like the requests.
/// Throws BackendError naming the failing ids after the retries run out.
std::vector<nlohmann::json> call_adapter(const AdapterConfig& cfg,
                                         const std::vector<nlohmann::json>& requests);

/// Embeddings from an external service: {"id", "text"} -> {"id", "vector"}.
/// Returned vectors are L2-normalized.
class ExternalEmbedder final : public TextEmbedder {
 public:
  explicit ExternalEmbedder(AdapterConfig cfg) : cfg_(std::move(cfg)) {}
  std::string name() const override { return "external"; }
  std::vector<double> embed(std::string_view text) const override;
  std::vector<std::vector<double>> embed_batch(const std::vector<std::string>& texts) const override;

 private:
  AdapterConfig cfg_;
};

/// SPICE from an external scorer:
/// {"id", "candidate", "reference"} -> {"id", "value"}.
class ExternalSpice final : public SpiceAdapter {
 public:
  explicit ExternalSpice(AdapterConfig cfg) : cfg_(std::move(cfg)) {}
  double score(std::string_view cand, std::string_view ref) const override;

 private:
  AdapterConfig cfg_;
};

}  // namespace mpd::tasks
