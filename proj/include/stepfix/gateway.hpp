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

#ifndef STEPFIX_GATEWAY_HPP
#define STEPFIX_GATEWAY_HPP

#include <chrono>
#include <map>
#include <memory>
#include <mutex>
#include <optional>
#include <string>
#include <vector>

#include "stepfix/corrector.hpp"
#include "stepfix/json_io.hpp"

namespace stepfix {

struct DialogueTurn {
  std::string speaker;  // "agent" or "user"
  std::string text;
  std::optional<std::string> op;  // normalized utterance, user turns only
  std::string lf_snapshot;

  bool operator==(const DialogueTurn&) const = default;
};

struct DialogueRecord {
  std::string id;
  std::string complex_question;
  std::string predicted_lf;
  std::optional<std::string> gold_lf;
  std::vector<DialogueTurn> turns;

  bool operator==(const DialogueRecord&) const = default;
};

Json record_to_json(const DialogueRecord& record);
DialogueRecord record_from_json(const Json& j);

// Append-only JSONL file of confirmed dialogues. One write per record.
class RecordStore {
 public:
  explicit RecordStore(std::string path) : path_(std::move(path)) {}

  // No-op when a record with this id is already stored. IoError on failure.
  void append(const DialogueRecord& record);
  std::vector<DialogueRecord> load_all() const;
  std::optional<DialogueRecord> find(const std::string& id) const;
  const std::string& path() const { return path_; }

 private:
  std::string path_;
  mutable std::mutex mutex_;
};

struct SessionRequest {
  std::string question;
  std::string predicted_lf;
  EntityMap entities;
  std::optional<std::string> gold_lf;  // needed by the oracle model
  std::optional<EntityMap> gold_entities;
  std::optional<std::string> store_tsv;  // per-session store
};

SessionRequest session_request_from_json(const Json& j);

struct GatewayOptions {
  const TemplateCorpus* corpus = nullptr;
  const TripleStore* store = nullptr;
  std::string model = "template-inverse";
  RecordStore* records = nullptr;
};

// Sessions are independent; each one is guarded by its own mutex.
class SessionManager {
 public:
  explicit SessionManager(GatewayOptions options);

  Json create(const SessionRequest& request);
  Json feedback(const std::string& id, const std::string& utterance);
  Json confirm(const std::string& id);
  Json view(const std::string& id);

  std::size_t size() const;

 private:
  struct Session {
    std::mutex mutex;
    std::string id;
    DialogueState state;
    std::string status = "open";
    std::chrono::system_clock::time_point created, updated;
    DialogueRecord record;
    std::unique_ptr<CorrectionModel> model;
    std::shared_ptr<const TripleStore> own_store;
    const TripleStore* store = nullptr;
    std::string last_lf;
  };

  std::shared_ptr<Session> get(const std::string& id) const;
  Json view_locked(const Session& s) const;
  std::string agent_text(const Session& s) const;

  GatewayOptions options_;
  mutable std::mutex map_mutex_;
  std::map<std::string, std::shared_ptr<Session>> sessions_;
  std::size_t next_id_ = 1;
};

// Status code for an error raised while serving `endpoint`
// ("create", "feedback", "confirm" or "view").
int http_status(ErrorKind kind, std::string_view endpoint);
Json error_body(ErrorKind kind, std::string_view message);

class GatewayServer {
 public:
  explicit GatewayServer(SessionManager& sessions);
  ~GatewayServer();
  GatewayServer(const GatewayServer&) = delete;
  GatewayServer& operator=(const GatewayServer&) = delete;

  // Port 0 picks a free port. Returns the bound port.
  int bind(const std::string& host, int port);
  void listen();  // blocks until stop()
  void stop();

 private:
  struct Impl;
  std::unique_ptr<Impl> impl_;
};

}  // namespace stepfix

#endif  // STEPFIX_GATEWAY_HPP
