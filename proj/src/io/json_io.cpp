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

#include "stepfix/json_io.hpp"

#include <charconv>

#include "stepfix/error.hpp"

namespace stepfix {

Json entities_json(const EntityMap& entities) {
  Json j = Json::object();
  for (const auto& [i, e] : entities) j[std::to_string(i)] = Json{{"surface", e.surface}, {"kb_id", e.kb_id}};
  return j;
}

EntityMap entities_from_json(const Json& j) {
  EntityMap out;
  if (j.is_null()) return out;
  if (!j.is_object()) fail(ErrorKind::InvalidArgument, "entities must be an object keyed by index");
  for (const auto& [key, value] : j.items()) {
    int index = 0;
    auto [p, ec] = std::from_chars(key.data(), key.data() + key.size(), index);
    if (ec != std::errc() || p != key.data() + key.size() || index < 1)
      fail(ErrorKind::InvalidArgument, "entity key '" + key + "' is not a positive index");
    Entity e;
    if (value.is_string()) {
      e.surface = value.get<std::string>();
    } else if (value.is_object() && value.contains("surface") && value["surface"].is_string()) {
      e.surface = value["surface"].get<std::string>();
      if (value.contains("kb_id") && value["kb_id"].is_string()) e.kb_id = value["kb_id"].get<std::string>();
    } else {
      fail(ErrorKind::InvalidArgument, "entity " + key + " needs a surface");
    }
    out[index] = std::move(e);
  }
  return out;
}

Json value_json(const Value& v) {
  if (const auto* d = std::get_if<double>(&v)) return *d;
  return std::get<std::string>(v);
}

Value value_from_json(const Json& j) {
  if (j.is_number()) return j.get<double>();
  if (j.is_string()) return j.get<std::string>();
  return j.dump();
}

Json answers_json(const AnswerSet& answers) {
  Json out = Json::array();
  for (const auto& v : answers.values) out.push_back(value_json(v));
  return out;
}

Json parse_json(std::string_view text, const std::string& source) {
  try {
    return Json::parse(text.begin(), text.end());
  } catch (const Json::parse_error& e) {
    fail(ErrorKind::ParseError, source + ": " + e.what());
  }
}

}  // namespace stepfix
