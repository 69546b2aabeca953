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

#include <fstream>
#include <sstream>

#include "stepfix/error.hpp"
#include "stepfix/gateway.hpp"

namespace stepfix {

Json record_to_json(const DialogueRecord& r) {
  Json turns = Json::array();
  for (const auto& t : r.turns) {
    Json e{{"speaker", t.speaker}, {"text", t.text}, {"lf_snapshot", t.lf_snapshot}};
    e["op"] = t.op ? Json(*t.op) : Json(nullptr);
    turns.push_back(e);
  }
  Json j{{"id", r.id}, {"complex_question", r.complex_question}, {"predicted_lf", r.predicted_lf}, {"turns", turns}};
  j["gold_lf"] = r.gold_lf ? Json(*r.gold_lf) : Json(nullptr);
  return j;
}

DialogueRecord record_from_json(const Json& j) {
  try {
    DialogueRecord r;
    r.id = j.at("id").get<std::string>();
    r.complex_question = j.value("complex_question", "");
    r.predicted_lf = j.at("predicted_lf").get<std::string>();
    if (j.contains("gold_lf") && j["gold_lf"].is_string()) r.gold_lf = j["gold_lf"].get<std::string>();
    for (const auto& t : j.at("turns")) {
      DialogueTurn turn;
      turn.speaker = t.at("speaker").get<std::string>();
      turn.text = t.at("text").get<std::string>();
      turn.lf_snapshot = t.value("lf_snapshot", "");
      if (t.contains("op") && t["op"].is_string()) turn.op = t["op"].get<std::string>();
      r.turns.push_back(std::move(turn));
    }
    return r;
  } catch (const Json::exception& e) {
    fail(ErrorKind::ParseError, std::string("malformed dialogue record: ") + e.what());
  }
}

namespace {

std::vector<DialogueRecord> read_all(const std::string& path) {
  std::vector<DialogueRecord> out;
  std::ifstream in(path);
  if (!in) return out;
  std::string line;
  int n = 0;
  while (std::getline(in, line)) {
    ++n;
    if (line.find_first_not_of(" \t\r") == std::string::npos) continue;
    out.push_back(record_from_json(parse_json(line, path + ":" + std::to_string(n))));
  }
  return out;
}

}  // namespace

void RecordStore::append(const DialogueRecord& record) {
  std::lock_guard lock(mutex_);
  for (const auto& r : read_all(path_))
    if (r.id == record.id) return;
  std::string line = record_to_json(record).dump() + "\n";
  std::ofstream out(path_, std::ios::app | std::ios::binary);
  if (!out) fail(ErrorKind::IoError, "cannot open " + path_ + " for appending");
  out.write(line.data(), static_cast<std::streamsize>(line.size()));
  out.flush();
  if (!out) fail(ErrorKind::IoError, "write to " + path_ + " failed");
}

std::vector<DialogueRecord> RecordStore::load_all() const {
  std::lock_guard lock(mutex_);
  return read_all(path_);
}

std::optional<DialogueRecord> RecordStore::find(const std::string& id) const {
  for (auto& r : load_all())
    if (r.id == id) return r;
  return std::nullopt;
}

}  // namespace stepfix
