/*
 * Copyright 2026 The stepfix Authors. All rights reserved.
 *
 * Licensed under the Apache License, Version 2.0 (the "License");
 * you may not use this file except in compliance with the License.
 * You may obtain a copy of the License at
 *
 *     http://www.apache.org/licenses/LICENSE-2.0
 *
 * Unless required by applicable law or agreed to in writing, software
 * distributed under the License is distributed on an "AS IS" BASIS,
 * WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
 * See the License for the specific language governing permissions and
 * limitations under the License.
 */

#include "httplib.h"
#include "stepfix/error.hpp"
#include "stepfix/gateway.hpp"

namespace stepfix {

int http_status(ErrorKind kind, std::string_view endpoint) {
  switch (kind) {
    case ErrorKind::NotFound: return 404;
    case ErrorKind::Conflict: return 409;
    case ErrorKind::IoError:
    case ErrorKind::RemoteError: return 500;
    default: break;
  }
  if (endpoint == "feedback") return 422;
  if (endpoint == "create") return 400;
  return 500;
}

Json error_body(ErrorKind kind, std::string_view message) {
  return Json{{"error", {{"kind", std::string(to_string(kind))}, {"message", std::string(message)}}}};
}

struct GatewayServer::Impl {
  SessionManager& sessions;
  httplib::Server server;
  explicit Impl(SessionManager& s) : sessions(s) {}
};

namespace {

void reply(httplib::Response& res, int status, const Json& body) {
  res.status = status;
  res.set_content(body.dump(), "application/json");
}

template <typename Fn>
void guarded(httplib::Response& res, std::string_view endpoint, int ok_status, Fn&& fn) {
  try {
    reply(res, ok_status, fn());
  } catch (const Error& e) {
    reply(res, http_status(e.kind(), endpoint), error_body(e.kind(), e.what()));
  } catch (const std::exception& e) {
    reply(res, 500, Json{{"error", {{"kind", "Internal"}, {"message", e.what()}}}});
  }
}

Json body_json(const httplib::Request& req) {
  if (req.body.empty()) return Json::object();
  return parse_json(req.body, "request body");
}

}  // namespace

GatewayServer::GatewayServer(SessionManager& sessions) : impl_(std::make_unique<Impl>(sessions)) {
  auto& srv = impl_->server;
  auto& mgr = impl_->sessions;
  srv.set_default_headers({{"Access-Control-Allow-Origin", "*"},
                           {"Access-Control-Allow-Headers", "Content-Type"},
                           {"Access-Control-Allow-Methods", "GET, POST, OPTIONS"}});
  srv.Options(R"(.*)", [](const httplib::Request&, httplib::Response& res) { res.status = 204; });
  srv.Get("/health", [](const httplib::Request&, httplib::Response& res) { reply(res, 200, Json{{"status", "ok"}}); });
  srv.Post("/sessions", [&mgr](const httplib::Request& req, httplib::Response& res) {
    guarded(res, "create", 201, [&] { return mgr.create(session_request_from_json(body_json(req))); });
  });
  srv.Post(R"(/sessions/([^/]+)/feedback)", [&mgr](const httplib::Request& req, httplib::Response& res) {
    guarded(res, "feedback", 200, [&] {
      std::string id = req.matches[1];
      Json body;
      try {
        body = body_json(req);
      } catch (const Error& e) {
        fail(ErrorKind::UnrecognizedOperation, e.what());
      }
      if (!body.contains("utterance") || !body["utterance"].is_string())
        fail(ErrorKind::UnrecognizedOperation, "utterance is required");
      return mgr.feedback(id, body["utterance"].get<std::string>());
    });
  });
  srv.Post(R"(/sessions/([^/]+)/confirm)", [&mgr](const httplib::Request& req, httplib::Response& res) {
    guarded(res, "confirm", 200, [&] { return mgr.confirm(req.matches[1]); });
  });
  srv.Get(R"(/sessions/([^/]+))", [&mgr](const httplib::Request& req, httplib::Response& res) {
    guarded(res, "view", 200, [&] { return mgr.view(req.matches[1]); });
  });
}

GatewayServer::~GatewayServer() { stop(); }

int GatewayServer::bind(const std::string& host, int port) {
  int bound = port == 0 ? impl_->server.bind_to_any_port(host) : (impl_->server.bind_to_port(host, port) ? port : -1);
  if (bound < 0) fail(ErrorKind::IoError, "cannot bind " + host + ":" + std::to_string(port));
  return bound;
}

void GatewayServer::listen() { impl_->server.listen_after_bind(); }

void GatewayServer::stop() {
  if (impl_ && impl_->server.is_running()) impl_->server.stop();
}

}  // namespace stepfix
