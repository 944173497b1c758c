// Copyright 2026 The MPD Toolkit Authors
// SPDX-License-Identifier: Apache-2.0

#include <httplib.h>

#include "mpd/annotate/service.hpp"
#include "mpd/common/error.hpp"

namespace mpd::annotate {

using nlohmann::json;

namespace {

constexpr const char* kJson = "application/json";

json envelope() { return {{"schema", "mpd.annotation"}, {"version", kEventLogVersion}}; }

void reply(httplib::Response& res, int status, json body) {
  res.status = status;
  res.set_content(body.dump() + "\n", kJson);
}

void fail(httplib::Response& res, int status, const std::string& msg) {
  json j = envelope();
  j["error"] = msg;
  reply(res, status, std::move(j));
}

std::string expert_of(const httplib::Request& req) {
  if (req.has_header("X-Expert-Id")) return req.get_header_value("X-Expert-Id");
  return req.get_param_value("expert");
}

}  // namespace

struct AnnotationServer::Impl {
  AnnotationService& service;
  httplib::Server server;
};

AnnotationServer::AnnotationServer(AnnotationService& service) : impl_(new Impl{service, {}}) {
  auto& svc = impl_->service;
  auto& srv = impl_->server;

  srv.Get("/item/next", [&svc](const httplib::Request& req, httplib::Response& res) {
    const std::string expert = expert_of(req);
    if (!svc.knows_expert(expert)) return fail(res, 403, "unknown expert '" + expert + "'");
    json j = envelope();
    const auto next = svc.next_item(expert);
    if (next) {
      j["empty"] = false;
      j["item"] = to_json(next->bundle);
      j["state"] = state_name(next->state);
    } else {
      j["empty"] = true;
      j["item"] = nullptr;
    }
    reply(res, 200, std::move(j));
  });

  srv.Post("/event", [&svc](const httplib::Request& req, httplib::Response& res) {
    AnnotationEvent ev;
    try {
      json body = json::parse(req.body);
      if (body.is_object() && !body.contains("expert")) body["expert"] = expert_of(req);
      ev = AnnotationEvent::from_json(body);
    } catch (const std::exception& e) {
      return fail(res, 400, e.what());
    }
    if (req.has_header("X-Expert-Id") && req.get_header_value("X-Expert-Id") != ev.expert) {
      return fail(res, 400, "X-Expert-Id does not match event expert");
    }
    if (!svc.knows_expert(ev.expert)) return fail(res, 403, "unknown expert '" + ev.expert + "'");
    SubmitResult r;
    try {
      r = svc.submit(ev);
    } catch (const MissingInput& e) {
      return fail(res, 404, e.what());
    } catch (const std::exception& e) {
      return fail(res, 500, e.what());
    }
    json j = envelope();
    j["accepted"] = r.accepted;
    j["state"] = state_name(r.state);
    if (r.accepted) {
      j["event_id"] = r.event_id;
    } else {
      j["error"] = r.error;
    }
    reply(res, r.accepted ? 200 : 409, std::move(j));
  });

  srv.Get(R"(/state/([^/]+))", [&svc](const httplib::Request& req, httplib::Response& res) {
    const auto it = svc.item(req.matches[1]);
    if (!it) return fail(res, 404, "unknown image " + std::string(req.matches[1]));
    json j = envelope();
    j["item"] = it->to_json();
    reply(res, 200, std::move(j));
  });

  srv.Get("/export", [&svc](const httplib::Request&, httplib::Response& res) {
    res.set_content(svc.export_jsonl(), "application/x-ndjson");
  });
}

AnnotationServer::~AnnotationServer() { stop(); }

int AnnotationServer::bind_any_port(const std::string& host) { return impl_->server.bind_to_any_port(host); }

bool AnnotationServer::bind(const std::string& host, int port) { return impl_->server.bind_to_port(host, port); }

void AnnotationServer::run() { impl_->server.listen_after_bind(); }

void AnnotationServer::stop() {
  if (impl_) impl_->server.stop();
}

}  // namespace mpd::annotate
