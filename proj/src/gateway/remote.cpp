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

#include "stepfix/remote.hpp"

#include "httplib.h"
#include "stepfix/error.hpp"

namespace stepfix {
namespace {

struct Url {
  std::string origin;  // scheme://host[:port]
  std::string path;
};

Url split_url(const std::string& url) {
  auto scheme = url.find("://");
  if (scheme == std::string::npos || url.compare(0, scheme, "http") != 0)
    fail(ErrorKind::RemoteError, "expected an http:// URL, got '" + url + "'");
  auto slash = url.find('/', scheme + 3);
  if (slash == std::string::npos) return {url, "/"};
  return {url.substr(0, slash), url.substr(slash)};
}

const Json& outputs(const Json& response, const std::string& url) {
  if (!response.is_object() || !response.contains("outputs") || !response["outputs"].is_array())
    fail(ErrorKind::RemoteError, url + " returned no outputs array");
  return response["outputs"];
}

Json state_summary(const DialogueState& state) {
  Json steps = Json::array();
  for (const auto& s : state.steps) steps.push_back(s.templated_q);
  return Json{{"question", state.complex_question},
              {"qtype", std::string(to_string(state.qtype))},
              {"steps", steps},
              {"entities", entities_json(state.entities)}};
}

}  // namespace

Json post_json(const std::string& url, const Json& body, int timeout_seconds) {
  Url u = split_url(url);
  httplib::Client client(u.origin);
  client.set_connection_timeout(timeout_seconds);
  client.set_read_timeout(timeout_seconds);
  auto res = client.Post(u.path, body.dump(), "application/json");
  if (!res) fail(ErrorKind::RemoteError, "cannot reach " + url + ": " + httplib::to_string(res.error()));
  if (res->status != 200) fail(ErrorKind::RemoteError, url + " answered HTTP " + std::to_string(res->status));
  try {
    return Json::parse(res->body);
  } catch (const Json::parse_error&) {
    fail(ErrorKind::RemoteError, url + " answered with malformed JSON");
  }
}

std::vector<Candidate> RemoteCorrectionModel::resolve(const ResolveRequest& request, const DialogueState& state) const {
  Json inputs = state_summary(state);
  inputs["utterance_question"] = request.question;
  inputs["step_index"] = request.context.step_index;
  inputs["upstream_var"] = request.context.upstream_var ? Json(request.context.upstream_var->text) : Json(nullptr);
  inputs["output_var"] = request.context.output_var ? Json(request.context.output_var->text) : Json(nullptr);
  Json response = post_json(url_, Json{{"inputs", inputs}});
  std::vector<Candidate> out;
  for (const auto& o : outputs(response, url_)) {
    if (!o.is_object() || !o.contains("statements") || !o["statements"].is_string())
      fail(ErrorKind::RemoteError, url_ + " output lacks statements");
    Candidate c;
    try {
      c.component = component_from_statements(parse_statements(o["statements"].get<std::string>()), corpus_,
                                              request.context.upstream_var);
      if (o.contains("new_entities")) c.new_entities = entities_from_json(o["new_entities"]);
    } catch (const Error& e) {
      fail(ErrorKind::RemoteError, url_ + " output is not a usable sub-LF: " + e.what());
    }
    c.entry_key = c.component.key;
    out.push_back(std::move(c));
  }
  if (out.empty()) fail(ErrorKind::NoTemplateMatch, url_ + " returned no candidates");
  return out;
}

std::vector<std::string> RemoteFeedback::next_ops(const DialogueState& state, const Decomposition& gold,
                                                  const EntityMap& gold_entities, int attempt) const {
  Json inputs = state_summary(state);
  Json gold_steps = Json::array();
  for (const auto& q : render_all(gold, gold_entities, corpus_)) gold_steps.push_back(q.text);
  inputs["gold_steps"] = gold_steps;
  inputs["attempt"] = attempt;
  Json response = post_json(url_, Json{{"inputs", inputs}});
  std::vector<std::string> out;
  for (const auto& o : outputs(response, url_)) {
    if (!o.is_string()) fail(ErrorKind::RemoteError, url_ + " output is not an utterance string");
    out.push_back(o.get<std::string>());
  }
  return out;
}

std::vector<double> RemoteScorer::token_logprobs(const std::vector<std::string>& target, std::string_view source) const {
  Json response = post_json(url_, Json{{"inputs", {{"target", target}, {"source", std::string(source)}}}});
  std::vector<double> out;
  for (const auto& o : outputs(response, url_)) {
    if (!o.is_number()) fail(ErrorKind::RemoteError, url_ + " output is not a number");
    out.push_back(o.get<double>());
  }
  return out;
}

}  // namespace stepfix
