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

#include <charconv>
#include <cmath>
#include <fstream>
#include <sstream>

#include "stepfix/error.hpp"
#include "stepfix/kb_store.hpp"

namespace stepfix {
namespace {

const std::vector<Value> kNoValues;
const std::vector<std::string> kNoNames;
const std::vector<StoredTriple> kNoTriples;

std::string trim(std::string_view s) {
  auto b = s.find_first_not_of(" \t\r");
  if (b == std::string_view::npos) return {};
  auto e = s.find_last_not_of(" \t\r");
  return std::string(s.substr(b, e - b + 1));
}

Value parse_object(const std::string& text) {
  double v = 0;
  auto [p, ec] = std::from_chars(text.data(), text.data() + text.size(), v);
  if (ec == std::errc() && p == text.data() + text.size() && std::isfinite(v)) return v;
  return text;
}

}  // namespace

std::string value_text(const Value& v) {
  if (const auto* s = std::get_if<std::string>(&v)) return *s;
  return format_number(std::get<double>(v));
}

bool TripleStore::add(std::string subject, std::string predicate, Value object) {
  auto [it, inserted] = triples_.insert(StoredTriple{subject, predicate, object});
  if (!inserted) return false;
  nodes_.insert(subject);
  if (const auto* s = std::get_if<std::string>(&object)) nodes_.insert(*s);
  by_sp_[{subject, predicate}].push_back(object);
  by_po_[{predicate, object}].push_back(subject);
  by_p_[predicate].push_back(*it);
  return true;
}

const std::vector<Value>& TripleStore::objects(const std::string& subject,
                                               const std::string& predicate) const {
  auto it = by_sp_.find({subject, predicate});
  return it == by_sp_.end() ? kNoValues : it->second;
}

const std::vector<std::string>& TripleStore::subjects(const std::string& predicate,
                                                      const Value& object) const {
  auto it = by_po_.find({predicate, object});
  return it == by_po_.end() ? kNoNames : it->second;
}

const std::vector<StoredTriple>& TripleStore::with_predicate(const std::string& predicate) const {
  auto it = by_p_.find(predicate);
  return it == by_p_.end() ? kNoTriples : it->second;
}

TripleStore parse_store(std::string_view text, const std::string& source) {
  TripleStore store;
  std::size_t line_no = 0;
  std::size_t start = 0;
  while (start <= text.size()) {
    auto end = text.find('\n', start);
    if (end == std::string_view::npos) end = text.size();
    std::string line(text.substr(start, end - start));
    start = end + 1;
    ++line_no;
    if (!line.empty() && line.back() == '\r') line.pop_back();
    if (trim(line).empty() || trim(line)[0] == '#') continue;
    std::vector<std::string> cols;
    std::size_t pos = 0;
    while (true) {
      auto tab = line.find('\t', pos);
      cols.push_back(trim(line.substr(pos, tab == std::string::npos ? tab : tab - pos)));
      if (tab == std::string::npos) break;
      pos = tab + 1;
    }
    if (cols.size() != 3 || cols[0].empty() || cols[1].empty() || cols[2].empty())
      fail(ErrorKind::ParseError, source + ":" + std::to_string(line_no) +
                                      ": expected subject<TAB>predicate<TAB>object");
    std::string predicate = cols[1].rfind("ns:", 0) == 0 ? cols[1].substr(3) : cols[1];
    store.add(cols[0], predicate, parse_object(cols[2]));
  }
  return store;
}

TripleStore load_store(const std::string& path) {
  std::ifstream in(path);
  if (!in) fail(ErrorKind::IoError, "cannot open store " + path);
  std::stringstream ss;
  ss << in.rdbuf();
  return parse_store(ss.str(), path);
}

std::string display_answers(const AnswerSet& answers) {
  if (answers.values.empty()) return std::string(kNoAnswers);
  std::string out;
  for (const auto& v : answers.values) {
    if (!out.empty()) out += ", ";
    out += value_text(v);
    auto it = answers.keys.find(v);
    if (it != answers.keys.end() && !it->second.empty()) {
      out += " (";
      bool first = true;
      for (double k : it->second) {
        out += (first ? "" : ", ") + format_number(k);
        first = false;
      }
      out += ")";
    }
  }
  return out;
}

}  // namespace stepfix
