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

#include <algorithm>
#include <fstream>
#include <sstream>

#include "stepfix/corpus.hpp"
#include "stepfix/error.hpp"

namespace stepfix {
namespace {

std::vector<std::string> split(std::string_view s, char sep) {
  std::vector<std::string> out;
  std::size_t start = 0;
  while (true) {
    auto pos = s.find(sep, start);
    out.emplace_back(s.substr(start, pos == std::string_view::npos ? pos : pos - start));
    if (pos == std::string_view::npos) break;
    start = pos + 1;
  }
  return out;
}

std::string trim(std::string_view s) {
  auto b = s.find_first_not_of(" \t\r\n");
  if (b == std::string_view::npos) return {};
  auto e = s.find_last_not_of(" \t\r\n");
  return std::string(s.substr(b, e - b + 1));
}

std::size_t count_of(std::string_view text, std::string_view needle) {
  std::size_t n = 0;
  for (auto pos = text.find(needle); pos != std::string_view::npos;
       pos = text.find(needle, pos + needle.size()))
    ++n;
  return n;
}

void replace_all(std::string& s, std::string_view from, std::string_view to) {
  for (auto pos = s.find(from); pos != std::string::npos; pos = s.find(from, pos + to.size()))
    s.replace(pos, from.size(), to);
}

std::vector<Statement> parse_body(const std::string& body) {
  std::string text = body;
  replace_all(text, kBodyInput, "#entity1#");
  replace_all(text, kBodyOutput, "?out");
  return parse_statements(text);
}

}  // namespace

std::vector<std::string> predicate_signature(const std::vector<Statement>& statements) {
  std::vector<std::string> preds;
  for (const auto& t : collect_triples(statements)) preds.push_back(t.predicate);
  std::sort(preds.begin(), preds.end());
  return preds;
}

void TemplateCorpus::add(TemplateEntry entry) {
  if (entry.kind == EntryKind::Restriction) {
    if (count_of(entry.text, kSlot) != 1)
      fail(ErrorKind::ParseError, "mini-template for " + entry.key + " needs exactly one <PH>");
    if (entries_.count(entry.key))
      fail(ErrorKind::ParseError, entry.key + " is both a restriction and a template key");
    minis_[entry.key] = MiniTemplate{entry.key, entry.text};
    return;
  }
  // <NUM> is accepted as the numeric spelling of the placeholder.
  if (count_of(entry.text, kSlot) == 0 && count_of(entry.text, kNumberSlot) == 1)
    replace_all(entry.text, kNumberSlot, kSlot);
  if (count_of(entry.text, kSlot) != 1)
    fail(ErrorKind::ParseError, "template for " + entry.key + " needs exactly one <PH>");
  if (count_of(entry.text, kRestrictionSlot) > 1)
    fail(ErrorKind::ParseError, "template for " + entry.key + " has more than one <RSTR>");
  if (minis_.count(entry.key))
    fail(ErrorKind::ParseError, entry.key + " is both a restriction and a template key");
  if (entry.kind == EntryKind::Cvt) {
    auto parts = split(entry.key, '|');
    if (parts.size() != 2 || parts[0].empty() || parts[1].empty())
      fail(ErrorKind::ParseError, "cvt key must be pred1|pred2: " + entry.key);
    cvt_pairs_.emplace(parts[0], parts[1]);
  }
  if (entry.kind == EntryKind::Union) {
    if (entry.body.empty()) fail(ErrorKind::ParseError, "union group " + entry.key + " lacks body=");
    std::vector<Statement> body;
    try {
      body = parse_body(entry.body);
    } catch (const Error& e) {
      fail(ErrorKind::ParseError, "union group " + entry.key + ": " + e.what());
    }
    auto unions = std::count_if(body.begin(), body.end(), [](const Statement& s) { return s.is_union(); });
    auto filters = std::count_if(body.begin(), body.end(), [](const Statement& s) { return s.is_filter(); });
    if (unions != 1 || unions + filters != static_cast<long>(body.size()))
      fail(ErrorKind::ParseError,
           "union group " + entry.key + " body must be one union block plus optional filters");
    union_groups_[predicate_signature(body)] = entry.key;
    union_bodies_[entry.key] = std::move(body);
  }
  entries_[entry.key] = std::move(entry);
}

TemplateCorpus TemplateCorpus::parse(std::string_view tsv, const std::string& source) {
  TemplateCorpus corpus;
  std::size_t line_no = 0;
  for (const auto& raw : split(tsv, '\n')) {
    ++line_no;
    std::string line = raw;
    if (!line.empty() && line.back() == '\r') line.pop_back();
    if (trim(line).empty()) continue;
    if (line[0] == '#') {
      auto pos = line.find("stepfix-corpus v");
      if (pos != std::string::npos) corpus.version_ = std::atoi(line.c_str() + pos + 16);
      continue;
    }
    auto cols = split(line, '\t');
    auto where = source + ":" + std::to_string(line_no);
    if (cols.size() < 4) fail(ErrorKind::ParseError, where + ": expected 4 tab-separated columns");
    TemplateEntry e;
    e.key = trim(cols[0]);
    e.text = trim(cols[1]);
    auto side = trim(cols[2]);
    auto kind = trim(cols[3]);
    if (side == "subject") {
      e.side = AnswerSide::Subject;
    } else if (side == "object") {
      e.side = AnswerSide::Object;
    } else if (kind != "restriction") {
      fail(ErrorKind::ParseError, where + ": answer_side must be subject|object");
    }
    if (kind == "single") {
      e.kind = EntryKind::Single;
    } else if (kind == "cvt") {
      e.kind = EntryKind::Cvt;
    } else if (kind == "union") {
      e.kind = EntryKind::Union;
    } else if (kind == "restriction") {
      e.kind = EntryKind::Restriction;
    } else {
      fail(ErrorKind::ParseError, where + ": unknown kind '" + kind + "'");
    }
    if (cols.size() > 4) {
      for (const auto& flag : split(cols[4], ';')) {
        auto f = trim(flag);
        if (f.empty()) continue;
        auto eq = f.find('=');
        if (eq == std::string::npos) fail(ErrorKind::ParseError, where + ": bad flag '" + f + "'");
        auto name = f.substr(0, eq);
        auto value = f.substr(eq + 1);
        if (name == "wh") {
          e.wh = value;
        } else if (name == "body") {
          e.body = value;
        } else {
          fail(ErrorKind::ParseError, where + ": unknown flag '" + name + "'");
        }
      }
    }
    try {
      corpus.add(std::move(e));
    } catch (const Error& err) {
      fail(ErrorKind::ParseError, where + ": " + err.what());
    }
  }
  return corpus;
}

TemplateCorpus TemplateCorpus::load(const std::string& path) {
  std::ifstream in(path);
  if (!in) fail(ErrorKind::IoError, "cannot open corpus " + path);
  std::stringstream ss;
  ss << in.rdbuf();
  return parse(ss.str(), path);
}

const TemplateEntry* TemplateCorpus::find(std::string_view key) const {
  auto it = entries_.find(std::string(key));
  return it == entries_.end() ? nullptr : &it->second;
}

const MiniTemplate* TemplateCorpus::restriction(std::string_view predicate) const {
  auto it = minis_.find(std::string(predicate));
  return it == minis_.end() ? nullptr : &it->second;
}

bool TemplateCorpus::is_cvt_pair(std::string_view first, std::string_view second) const {
  return cvt_pairs_.count({std::string(first), std::string(second)}) > 0;
}

const TemplateEntry* TemplateCorpus::union_group(const std::vector<std::string>& signature) const {
  auto it = union_groups_.find(signature);
  return it == union_groups_.end() ? nullptr : find(it->second);
}

std::vector<Statement> TemplateCorpus::union_body(const TemplateEntry& entry) const {
  auto it = union_bodies_.find(entry.key);
  if (it == union_bodies_.end()) fail(ErrorKind::UnknownPredicate, entry.key);
  return it->second;
}

std::vector<std::vector<std::string>> TemplateCorpus::lint() const {
  std::map<std::string, std::vector<std::string>> by_text;
  for (const auto& [key, e] : entries_) by_text[e.text].push_back(key);
  std::vector<std::vector<std::string>> out;
  for (auto& [_, keys] : by_text)
    if (keys.size() > 1) out.push_back(keys);
  return out;
}

}  // namespace stepfix
