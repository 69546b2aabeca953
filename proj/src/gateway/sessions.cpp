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

#include <cstdio>
#include <ctime>
#include <sstream>

#include "stepfix/error.hpp"
#include "stepfix/gateway.hpp"
#include "stepfix/remote.hpp"

namespace stepfix {
namespace {

std::string iso_time(std::chrono::system_clock::time_point t) {
  std::time_t tt = std::chrono::system_clock::to_time_t(t);
  std::tm tm{};
  gmtime_r(&tt, &tm);
  char buf[32];
  std::strftime(buf, sizeof buf, "%Y-%m-%dT%H:%M:%SZ", &tm);
  return buf;
}

std::string format_id(std::size_t n) {
  char buf[24];
  std::snprintf(buf, sizeof buf, "s-%06zu", n);
  return buf;
}

std::optional<std::size_t> id_number(const std::string& id) {
  if (id.rfind("s-", 0) != 0 || id.size() < 3) return std::nullopt;
  std::size_t v = 0;
  for (char c : id.substr(2)) {
    if (c < '0' || c > '9') return std::nullopt;
    v = v * 10 + static_cast<std::size_t>(c - '0');
  }
  return v;
}

std::optional<std::string> try_compile(const DialogueState& s) {
  try {
    return serialize(compile(s));
  } catch (const Error&) {
    return std::nullopt;
  }
}

}  // namespace

SessionRequest session_request_from_json(const Json& j) {
  if (!j.is_object()) fail(ErrorKind::InvalidArgument, "request body must be a JSON object");
  SessionRequest r;
  if (!j.contains("predicted_lf") || !j["predicted_lf"].is_string())
    fail(ErrorKind::InvalidArgument, "predicted_lf is required");
  r.predicted_lf = j["predicted_lf"].get<std::string>();
  if (j.contains("question") && j["question"].is_string()) r.question = j["question"].get<std::string>();
  if (j.contains("entities")) r.entities = entities_from_json(j["entities"]);
  if (j.contains("gold_lf") && j["gold_lf"].is_string()) r.gold_lf = j["gold_lf"].get<std::string>();
  if (j.contains("gold_entities")) r.gold_entities = entities_from_json(j["gold_entities"]);
  if (j.contains("store") && j["store"].is_string()) r.store_tsv = j["store"].get<std::string>();
  return r;
}

SessionManager::SessionManager(GatewayOptions options) : options_(std::move(options)) {
  if (!options_.corpus) fail(ErrorKind::InvalidArgument, "gateway needs a template corpus");
  if (options_.records)
    for (const auto& r : options_.records->load_all())
      if (auto n = id_number(r.id)) next_id_ = std::max(next_id_, *n + 1);
}

std::size_t SessionManager::size() const {
  std::lock_guard lock(map_mutex_);
  return sessions_.size();
}

std::shared_ptr<SessionManager::Session> SessionManager::get(const std::string& id) const {
  std::lock_guard lock(map_mutex_);
  auto it = sessions_.find(id);
  if (it == sessions_.end()) return nullptr;
  return it->second;
}

std::string SessionManager::agent_text(const Session& s) const {
  std::ostringstream os;
  auto d = as_decomposition(s.state);
  std::optional<Evaluation> ev;
  if (s.store) {
    try {
      ev = eval_decomposition(*s.store, d, s.state.entities);
    } catch (const Error&) {
    }
  }
  for (std::size_t i = 0; i < step_count(d); ++i) {
    std::string q;
    if (i < s.state.steps.size()) {
      q = s.state.steps[i].templated_q;
    } else {
      try {
        q = render_step(d, i, s.state.entities, *options_.corpus).text;
      } catch (const Error&) {
      }
    }
    os << (i ? "\n" : "") << i + 1 << ". " << q;
    if (ev && i < ev->steps.size()) os << " [" << display_answers(ev->steps[i]) << "]";
  }
  return os.str();
}

Json SessionManager::view_locked(const Session& s) const {
  auto d = as_decomposition(s.state);
  std::optional<Evaluation> ev;
  std::optional<std::string> eval_error;
  if (s.store) {
    try {
      ev = eval_decomposition(*s.store, d, s.state.entities);
    } catch (const Error& e) {
      eval_error = std::string(to_string(e.kind())) + ": " + e.what();
    }
  }
  Json steps = Json::array();
  for (std::size_t i = 0; i < step_count(d); ++i) {
    Json step{{"index", i + 1}};
    if (i < s.state.steps.size()) {
      step["templated_q"] = s.state.steps[i].templated_q;
      step["kind"] = "component";
    } else {
      step["templated_q"] = render_step(d, i, s.state.entities, *options_.corpus).text;
      step["kind"] = "sort";
    }
    if (ev && i < ev->steps.size()) {
      step["answers"] = answers_json(ev->steps[i]);
      step["answers_text"] = display_answers(ev->steps[i]);
    } else {
      step["answers"] = nullptr;
    }
    steps.push_back(step);
  }
  Json j{{"id", s.id},
         {"status", s.status},
         {"question", s.state.complex_question},
         {"qtype", std::string(to_string(s.state.qtype))},
         {"steps", steps},
         {"history", s.state.history_q},
         {"created", iso_time(s.created)},
         {"updated", iso_time(s.updated)}};
  if (auto lf = try_compile(s.state)) {
    j["compiled_lf"] = *lf;
  } else {
    j["compiled_lf"] = nullptr;
    j["compile_error"] = "the current steps do not form a connected query";
  }
  if (eval_error) j["answers_error"] = *eval_error;
  if (ev) j["final_answers"] = answers_json(ev->final);
  return j;
}

Json SessionManager::create(const SessionRequest& req) {
  const TemplateCorpus& corpus = *options_.corpus;
  auto s = std::make_shared<Session>();
  LogicalForm lf = parse_lf(req.predicted_lf);
  auto d = decompose(lf, corpus);
  render_all(d, req.entities, corpus);  // surfaces MissingEntity up front
  s->state = make_state(req.question, lf, req.entities, corpus);

  if (options_.model == "template-inverse") {
    s->model = std::make_unique<TemplateInverseModel>(corpus);
  } else if (options_.model == "oracle") {
    if (!req.gold_lf) fail(ErrorKind::InvalidArgument, "the oracle model needs gold_lf");
    auto gold = decompose(parse_lf(*req.gold_lf), corpus);
    s->model = std::make_unique<OracleModel>(gold, req.gold_entities.value_or(req.entities), corpus);
  } else if (options_.model.rfind("remote:", 0) == 0) {
    s->model = std::make_unique<RemoteCorrectionModel>(options_.model.substr(7), corpus);
  } else {
    fail(ErrorKind::InvalidArgument, "unknown model '" + options_.model + "'");
  }

  if (req.store_tsv) {
    s->own_store = std::make_shared<TripleStore>(parse_store(*req.store_tsv, "request store"));
    s->store = s->own_store.get();
  } else {
    s->store = options_.store;
  }
  s->created = s->updated = std::chrono::system_clock::now();
  s->last_lf = try_compile(s->state).value_or(serialize(lf));
  s->record.complex_question = req.question;
  s->record.predicted_lf = req.predicted_lf;
  s->record.gold_lf = req.gold_lf;

  std::lock_guard lock(map_mutex_);
  s->id = format_id(next_id_++);
  s->record.id = s->id;
  s->record.turns.push_back(DialogueTurn{"agent", agent_text(*s), std::nullopt, s->last_lf});
  sessions_[s->id] = s;
  return view_locked(*s);
}

Json SessionManager::feedback(const std::string& id, const std::string& utterance) {
  auto s = get(id);
  if (!s) {
    if (options_.records && options_.records->find(id))
      fail(ErrorKind::Conflict, "session '" + id + "' is already confirmed");
    fail(ErrorKind::NotFound, "no session '" + id + "'");
  }
  std::lock_guard lock(s->mutex);
  if (s->status == "confirmed") fail(ErrorKind::Conflict, "session '" + id + "' is already confirmed");
  EditOp op = parse_feedback(utterance);
  s->state = apply_op(s->state, op, *s->model, *options_.corpus);
  if (auto lf = try_compile(s->state)) s->last_lf = *lf;
  s->updated = std::chrono::system_clock::now();
  s->record.turns.push_back(DialogueTurn{"user", utterance, render_op(op), s->last_lf});
  s->record.turns.push_back(DialogueTurn{"agent", agent_text(*s), std::nullopt, s->last_lf});
  return view_locked(*s);
}

Json SessionManager::confirm(const std::string& id) {
  auto s = get(id);
  if (!s) {
    if (options_.records)
      if (auto r = options_.records->find(id)) return record_to_json(*r);
    fail(ErrorKind::NotFound, "no session '" + id + "'");
  }
  std::lock_guard lock(s->mutex);
  if (s->status != "confirmed") {
    if (options_.records) options_.records->append(s->record);
    s->status = "confirmed";
    s->updated = std::chrono::system_clock::now();
  }
  return record_to_json(s->record);
}

Json SessionManager::view(const std::string& id) {
  auto s = get(id);
  if (!s) {
    if (options_.records)
      if (auto r = options_.records->find(id))
        return Json{{"id", id}, {"status", "confirmed"}, {"record", record_to_json(*r)}};
    fail(ErrorKind::NotFound, "no session '" + id + "'");
  }
  std::lock_guard lock(s->mutex);
  return view_locked(*s);
}

}  // namespace stepfix
