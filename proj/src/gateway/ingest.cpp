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

#include "stepfix/ingest.hpp"

#include <fstream>
#include <regex>
#include <sstream>
#include <tuple>

#include "stepfix/corrector.hpp"
#include "stepfix/error.hpp"

namespace stepfix {
namespace {

constexpr auto kIcase = std::regex::icase | std::regex::ECMAScript;

std::string trim(std::string_view s) {
  auto b = s.find_first_not_of(" \t\r\n");
  if (b == std::string_view::npos) return {};
  auto e = s.find_last_not_of(" \t\r\n");
  return std::string(s.substr(b, e - b + 1));
}

std::size_t matching(const std::string& s, std::size_t open, char l, char r) {
  int depth = 0;
  for (std::size_t i = open; i < s.size(); ++i) {
    if (s[i] == l) ++depth;
    if (s[i] == r && --depth == 0) return i;
  }
  fail(ErrorKind::ParseError, std::string("unbalanced '") + l + "'");
}

std::string drop_language_filters(std::string body) {
  static const std::regex lang(R"(FILTER\s*\(\s*!\s*isLiteral)", kIcase);
  std::smatch m;
  while (std::regex_search(body, m, lang)) {
    std::size_t start = static_cast<std::size_t>(m.position(0));
    std::size_t open = body.find('(', start);
    std::size_t close = matching(body, open, '(', ')');
    body.erase(start, close + 1 - start);
  }
  return body;
}

std::string string_field(const Json& item, std::initializer_list<const char*> names) {
  for (const char* n : names)
    if (item.contains(n) && item[n].is_string()) return item[n].get<std::string>();
  return {};
}

std::vector<Entity> annotated_entities(const Json& item) {
  std::vector<Entity> out;
  if (!item.contains("entities")) return out;
  const Json& e = item["entities"];
  auto one = [&](const Json& x) {
    Entity en;
    if (x.is_object()) {
      en.surface = x.value("surface", x.value("mention", ""));
      en.kb_id = x.value("kb_id", x.value("id", ""));
    }
    if (en.kb_id.empty()) fail(ErrorKind::InvalidArgument, "entity annotation without kb_id");
    if (en.surface.empty()) en.surface = en.kb_id;
    out.push_back(en);
  };
  if (e.is_array()) {
    for (const auto& x : e) one(x);
  } else if (e.is_object()) {
    // already an index map; keep its order
    for (const auto& [i, x] : entities_from_json(e)) out.push_back(x);
  }
  return out;
}

std::vector<Value> answers_of(const Json& item) {
  std::vector<Value> out;
  if (!item.contains("answers") || !item["answers"].is_array()) return out;
  for (const auto& a : item["answers"]) {
    if (a.is_object()) {
      std::string text = a.value("answer", a.value("answer_id", ""));
      if (!text.empty()) out.emplace_back(text);
    } else {
      out.push_back(value_from_json(a));
    }
  }
  return out;
}

}  // namespace

std::string normalize_sparql(std::string_view sparql, std::optional<QType> qtype) {
  std::string text = trim(sparql);
  if (text.rfind("<sparql-header-", 0) == 0) return text;

  static const std::regex unsupported(R"((?:^|[\s{}(])(OPTIONAL|GROUP\s+BY|VALUES|BIND|MINUS|SERVICE|COUNT)(?=[\s({<]))", kIcase);
  std::smatch m;
  if (std::regex_search(text, m, unsupported)) {
    std::string word = m.str(1);
    for (auto& c : word) c = static_cast<char>(std::toupper(static_cast<unsigned char>(c)));
    fail(ErrorKind::ParseError, "unsupported " + word + " clause");
  }
  static const std::regex prefix(R"(PREFIX\s+\S*\s*<[^>]*>)", kIcase);
  text = std::regex_replace(text, prefix, " ");
  static const std::regex where(R"(\bWHERE\b)", kIcase);
  std::size_t open = std::string::npos;
  if (std::regex_search(text, m, where))
    open = text.find('{', static_cast<std::size_t>(m.position(0)));
  else
    open = text.find('{');
  if (open == std::string::npos) fail(ErrorKind::ParseError, "no WHERE block");
  std::size_t close = matching(text, open, '{', '}');
  std::string body = drop_language_filters(text.substr(open + 1, close - open - 1));
  std::string tail = text.substr(close + 1);

  std::string sort;
  static const std::regex order(R"(ORDER\s+BY\s+(DESC|ASC)?\s*\(?\s*(?:xsd:\w+\s*\(\s*)?(\?\w+))", kIcase);
  static const std::regex limit(R"(LIMIT\s+(\d+))", kIcase);
  if (std::regex_search(tail, m, order)) {
    bool desc = m[1].matched && (m.str(1)[0] == 'D' || m.str(1)[0] == 'd');
    std::string var = m.str(2);
    std::smatch lm;
    std::string n = std::regex_search(tail, lm, limit) ? lm.str(1) : "1";
    sort = desc ? " } order by desc ( " + var + " ) limit " + n : " } order by " + var + " limit " + n;
  } else if (trim(tail).size() > 0 && !std::regex_match(trim(tail), std::regex(R"(LIMIT\s+\d+)", kIcase))) {
    fail(ErrorKind::ParseError, "unsupported solution modifier '" + trim(tail) + "'");
  }
  Header header = qtype && *qtype != QType::Composition ? Header::H2 : Header::H1;
  return std::string(header_token(header)) + " " + trim(body) + sort;
}

IngestResult ingest_items(const Json& items, const TemplateCorpus& corpus) {
  IngestResult out;
  if (!items.is_array()) fail(ErrorKind::ParseError, "ingest input must be a JSON array");
  std::size_t n = 0;
  for (const auto& item : items) {
    ++n;
    std::string id = item.is_object() ? string_field(item, {"id", "ID"}) : "";
    if (id.empty()) id = "item-" + std::to_string(n);
    try {
      if (!item.is_object()) fail(ErrorKind::InvalidArgument, "item is not an object");
      std::string sparql = string_field(item, {"sparql", "Sparql", "lf"});
      if (sparql.empty()) fail(ErrorKind::InvalidArgument, "no sparql field");
      std::optional<QType> qtype;
      if (auto t = string_field(item, {"compositionality_type", "type"}); !t.empty()) {
        qtype = qtype_from_string(t);
        if (!qtype) fail(ErrorKind::InvalidArgument, "unknown compositionality type '" + t + "'");
      }
      std::string text = normalize_sparql(sparql, qtype);
      std::string delex;
      EntityMap entities;
      if (text.find("#entity") != std::string::npos && item.contains("entities") && item["entities"].is_object()) {
        delex = text;
        entities = entities_from_json(item["entities"]);
      } else {
        std::tie(delex, entities) = delexicalize(text, annotated_entities(item));
      }
      LogicalForm lf = parse_lf(delex);
      Decomposition d = decompose(lf, corpus);
      if (!qtype) {
        lf.header = d.qtype == QType::Composition ? Header::H1 : Header::H2;
        d = decompose(lf, corpus);
      } else if (d.qtype != *qtype) {
        fail(ErrorKind::UnclassifiableForm, "labelled " + std::string(to_string(*qtype)) + " but decomposes as " +
                                                std::string(to_string(d.qtype)));
      }
      std::size_t steps = step_count(d);
      if (steps < 2 || steps > 4)
        fail(ErrorKind::InvalidArgument, "decomposes to " + std::to_string(steps) + " step(s); gold forms need 2-4");
      render_all(d, entities, corpus);
      auto state = make_state("", lf, entities, corpus);
      if (!em_equal(compile(state), lf, &entities))
        fail(ErrorKind::InvalidArgument, "recompiling the decomposition does not give the same form");
      SuiteRecord r;
      r.id = id;
      r.lf = serialize(lf);
      r.question = string_field(item, {"question", "machine_question"});
      r.entities = entities;
      r.answers = answers_of(item);
      out.gold.push_back(std::move(r));
    } catch (const Error& e) {
      out.rejects.push_back({id, std::string(to_string(e.kind())) + ": " + e.what()});
    } catch (const Json::exception& e) {
      out.rejects.push_back({id, std::string("ParseError: ") + e.what()});
    }
  }
  return out;
}

IngestResult ingest_cwq(const std::string& path, const TemplateCorpus& corpus) {
  std::ifstream in(path);
  if (!in) fail(ErrorKind::IoError, "cannot open " + path);
  std::stringstream ss;
  ss << in.rdbuf();
  std::string text = ss.str();
  if (trim(text).empty()) return {};
  return ingest_items(parse_json(text, path), corpus);
}

void write_ingest(const IngestResult& result, const std::string& pred_path, const std::string& gold_path,
                  const std::string& rejects_path) {
  auto open = [](const std::string& p) {
    std::ofstream f(p, std::ios::binary | std::ios::trunc);
    if (!f) fail(ErrorKind::IoError, "cannot write " + p);
    return f;
  };
  auto pred = open(pred_path);
  auto gold = open(gold_path);
  auto rej = open(rejects_path);
  for (const auto& r : result.gold) {
    std::string line = record_json(r) + "\n";
    pred << line;
    gold << line;
  }
  for (const auto& r : result.rejects) rej << Json{{"id", r.id}, {"reason", r.reason}}.dump() << "\n";
  if (!pred || !gold || !rej) fail(ErrorKind::IoError, "writing ingest output failed");
}

}  // namespace stepfix
