// Copyright 2026 The MPD Toolkit Authors
// SPDX-License-Identifier: Apache-2.0

#include "mpd/tasks/adapters.hpp"

#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <filesystem>
#include <map>
#include <sstream>

#include <unistd.h>

#include <httplib.h>

#include "mpd/common/error.hpp"
#include "mpd/common/table.hpp"

namespace mpd::tasks {

namespace fs = std::filesystem;
using nlohmann::json;

AdapterConfig AdapterConfig::from_json(const json& j) {
  AdapterConfig c;
  const std::string t = j.value("transport", "subprocess");
  if (t == "subprocess") {
    c.transport = Transport::kSubprocess;
    c.command = j.value("command", "");
    if (c.command.empty()) throw ConfigError("subprocess adapter needs a command");
  } else if (t == "http") {
    c.transport = Transport::kHttp;
    c.url = j.value("url", "");
    if (c.url.rfind("http://", 0) != 0) throw ConfigError("http adapter needs an http:// url");
  } else {
    throw ConfigError("unknown adapter transport '" + t + "'");
  }
  c.timeout_seconds = j.value("timeout_seconds", c.timeout_seconds);
  c.retries = j.value("retries", c.retries);
  if (c.timeout_seconds <= 0 || c.retries < 0) throw ConfigError("bad adapter timeout/retries");
  return c;
}

namespace {

std::string shell_quote(const std::string& s) {
  std::string out = "'";
  for (char c : s) {
    if (c == '\'') out += "'\\''";
    else out += c;
  }
  return out + "'";
}

class TempDir {
 public:
  TempDir() {
    std::string tmpl = (fs::temp_directory_path() / "mpd-adapter-XXXXXX").string();
    if (!mkdtemp(tmpl.data())) throw BackendError("cannot create temp directory");
    path_ = tmpl;
  }
  ~TempDir() {
    std::error_code ec;
    fs::remove_all(path_, ec);
  }
  const fs::path& path() const { return path_; }

 private:
  fs::path path_;
};

std::string run_subprocess(const AdapterConfig& cfg, const std::string& body) {
  TempDir dir;
  const fs::path in = dir.path() / "request.jsonl";
  const fs::path out = dir.path() / "response.jsonl";
  write_file(in, body);
  char timeout[32];
  std::snprintf(timeout, sizeof timeout, "%.3f", cfg.timeout_seconds);
  const std::string cmd = "timeout " + std::string(timeout) + " /bin/sh -c " +
                          shell_quote(cfg.command) + " < " + shell_quote(in.string()) + " > " +
                          shell_quote(out.string());
  const int rc = std::system(cmd.c_str());
  if (rc != 0) throw BackendError("adapter command exited with status " + std::to_string(rc));
  return read_file(out);
}

std::string run_http(const AdapterConfig& cfg, const std::string& body) {
  const std::string rest = cfg.url.substr(7);
  const auto slash = rest.find('/');
  const std::string host_port = rest.substr(0, slash);
  const std::string path = slash == std::string::npos ? "/" : rest.substr(slash);
  httplib::Client cli("http://" + host_port);
  const auto secs = static_cast<time_t>(cfg.timeout_seconds);
  const auto usecs = static_cast<time_t>((cfg.timeout_seconds - secs) * 1e6);
  cli.set_connection_timeout(secs, usecs);
  cli.set_read_timeout(secs, usecs);
  cli.set_write_timeout(secs, usecs);
  auto res = cli.Post(path, body, "application/x-ndjson");
  if (!res) throw BackendError("adapter request to " + cfg.url + " failed: " + httplib::to_string(res.error()));
  if (res->status != 200) throw BackendError("adapter returned HTTP " + std::to_string(res->status));
  return res->body;
}

std::vector<json> parse_responses(const std::string& text,
                                  const std::vector<json>& requests) {
  std::map<long long, json> by_id;
  std::istringstream in(text);
  std::string line;
  while (std::getline(in, line)) {
    if (line.find_first_not_of(" \t\r") == std::string::npos) continue;
    json j;
    try {
      j = json::parse(line);
    } catch (const json::exception& e) {
      throw BackendError(std::string("adapter sent malformed JSON: ") + e.what());
    }
    if (!j.contains("id") || !j["id"].is_number_integer()) throw BackendError("adapter response has no id");
    const auto id = j["id"].get<long long>();
    by_id[id] = std::move(j);
  }
  std::vector<json> out;
  std::string missing;
  for (const auto& r : requests) {
    const auto id = r.at("id").get<long long>();
    auto it = by_id.find(id);
    if (it == by_id.end()) {
      missing += (missing.empty() ? "" : ",") + std::to_string(id);
      continue;
    }
    out.push_back(std::move(it->second));
  }
  if (!missing.empty()) throw BackendError("adapter gave no response for ids " + missing);
  return out;
}

}  // namespace

std::vector<json> call_adapter(const AdapterConfig& cfg, const std::vector<json>& requests) {
  std::string body;
  for (const auto& r : requests) body += r.dump() + "\n";
  std::string last_error;
  for (int attempt = 0; attempt <= cfg.retries; ++attempt) {
    try {
      const std::string text = cfg.transport == AdapterConfig::Transport::kSubprocess
                                   ? run_subprocess(cfg, body)
                                   : run_http(cfg, body);
      return parse_responses(text, requests);
    } catch (const BackendError& e) {
      last_error = e.what();
    }
  }
  std::string ids;
  for (std::size_t i = 0; i < requests.size() && i < 8; ++i) {
    ids += (i ? "," : "") + requests[i].at("id").dump();
  }
  if (requests.size() > 8) ids += ",...";
  throw BackendError(last_error + " (request ids " + ids + ")");
}

std::vector<double> ExternalEmbedder::embed(std::string_view text) const {
  return embed_batch({std::string(text)}).front();
}

std::vector<std::vector<double>> ExternalEmbedder::embed_batch(
    const std::vector<std::string>& texts) const {
  std::vector<json> req;
  for (std::size_t i = 0; i < texts.size(); ++i) req.push_back({{"id", i}, {"text", texts[i]}});
  const auto res = call_adapter(cfg_, req);
  std::vector<std::vector<double>> out;
  std::size_t dim = 0;
  for (std::size_t i = 0; i < res.size(); ++i) {
    std::vector<double> v;
    try {
      v = res[i].at("vector").get<std::vector<double>>();
    } catch (const json::exception&) {
      throw BackendError("embedding response " + std::to_string(i) + " has no vector");
    }
    if (i == 0) dim = v.size();
    double norm = 0;
    for (double x : v) norm += x * x;
    norm = std::sqrt(norm);
    if (v.empty() || v.size() != dim || !(norm > 0) || !std::isfinite(norm)) {
      throw BackendError("embedding response " + std::to_string(i) + " is not a usable vector");
    }
    for (double& x : v) x /= norm;
    out.push_back(std::move(v));
  }
  return out;
}

double ExternalSpice::score(std::string_view cand, std::string_view ref) const {
  const auto res = call_adapter(cfg_, {{{"id", 0}, {"candidate", cand}, {"reference", ref}}});
  try {
    const double v = res.front().at("value").get<double>();
    if (!std::isfinite(v)) throw BackendError("SPICE value is not finite");
    return v;
  } catch (const json::exception&) {
    throw BackendError("SPICE response has no value");
  }
}

}  // namespace mpd::tasks
