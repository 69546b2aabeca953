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

#include <cctype>

#include "stepfix/error.hpp"
#include "stepfix/templater.hpp"

namespace stepfix {
namespace {

void replace_first(std::string& s, std::string_view from, std::string_view to) {
  auto pos = s.find(from);
  if (pos != std::string::npos) s.replace(pos, from.size(), to);
}

std::string lower_first(std::string s) {
  if (!s.empty()) s[0] = static_cast<char>(std::tolower(static_cast<unsigned char>(s[0])));
  return s;
}

const FilterClause* comparison_on(const Component& c, const Term& var) {
  for (const auto& f : c.filters)
    if (f.kind == FilterClause::Kind::Comparison && f.var == var) return &f;
  return nullptr;
}

std::string last_segment(std::string_view predicate) {
  auto dot = predicate.rfind('.');
  return std::string(dot == std::string_view::npos ? predicate : predicate.substr(dot + 1));
}

}  // namespace

std::string display_surface(const Term& term, const EntityMap& entities) {
  std::string text;
  switch (term.kind) {
    case Term::Kind::Entity: {
      auto it = entities.find(term.index);
      if (it == entities.end())
        fail(ErrorKind::MissingEntity, "no entity for #entity" + std::to_string(term.index) + "#");
      text = it->second.surface;
      break;
    }
    case Term::Kind::Number: text = format_number(term.number); break;
    case Term::Kind::String:
      text = term.text.size() >= 2 ? term.text.substr(1, term.text.size() - 2) : term.text;
      break;
    default: text = term.text; break;
  }
  if (text.size() >= 2 && text.front() == '[' && text.back() == ']')
    text = text.substr(1, text.size() - 2);
  return text;
}

std::string sort_sentence(const SortClause& sort, std::string_view predicate) {
  auto seg = last_segment(predicate);
  bool date = seg.ends_with("career_start") || seg.find("date") != std::string::npos;
  bool asc = sort.direction == SortClause::Direction::Ascending;
  std::string what = date ? (asc ? "earliest date" : "latest date")
                          : (asc ? "smallest value" : "largest value");
  return "Of these, which is the entity associated with the " + what + "?";
}

std::string sort_predicate(const Decomposition& d) {
  if (!d.sort) return {};
  for (const auto& c : d.components) {
    std::vector<Triple> triples = c.triples;
    if (c.union_block) triples = collect_triples({Statement{*c.union_block}});
    for (auto it = triples.rbegin(); it != triples.rend(); ++it)
      if (it->object == d.sort->var || it->subject == d.sort->var) return it->predicate;
  }
  return {};
}

TemplatedQuestion render_step(const Decomposition& d, std::size_t index, const EntityMap& entities,
                              const TemplateCorpus& corpus) {
  TemplatedQuestion q;
  q.step_index = index + 1;
  if (index == d.components.size() && d.sort) {
    q.text = sort_sentence(*d.sort, sort_predicate(d));
    return q;
  }
  if (index >= d.components.size())
    fail(ErrorKind::IndexOutOfRange, "step " + std::to_string(index + 1) + " does not exist");

  const Component& c = d.components[index];
  const TemplateEntry* entry = corpus.find(c.key);
  if (!entry) fail(ErrorKind::UnknownPredicate, c.key);

  bool subject_side = entry->side == AnswerSide::Subject;
  const Term& described = subject_side ? c.subject_end : c.object_end;
  const Term& slot = subject_side ? c.object_end : c.subject_end;
  const FilterClause* cmp = comparison_on(c, slot);

  std::string fill;
  if (cmp) {
    fill = std::string(cmp->op == '>' ? "greater than " : "less than ") + format_number(cmp->value);
  } else if (slot.is_grounded()) {
    fill = display_surface(slot, entities);
  } else if (slot == c.output || (c.value_var && slot == *c.value_var)) {
    fill = "what";
  } else {
    fill = "that entity";
  }

  std::string body = entry->text;
  if (c.restriction) {
    const MiniTemplate* mini = corpus.restriction(c.restriction->predicate);
    if (!mini) fail(ErrorKind::UnknownPredicate, c.restriction->predicate);
    std::string text = mini->pattern;
    replace_first(text, kSlot, display_surface(c.restriction->object, entities));
    q.fills["RSTR"] = text;
    if (body.find(kRestrictionSlot) != std::string::npos) {
      replace_first(body, kRestrictionSlot, text);
    } else {
      body += " (" + text + ")";
    }
  } else {
    for (std::string_view gap : {" (<RSTR>)", " <RSTR>", "<RSTR>"}) replace_first(body, gap, "");
  }
  replace_first(body, kSlot, fill);
  q.fills["PH"] = fill;

  std::string prefix;
  bool upstream = described.is_variable() && described == c.input;
  if (described.is_grounded()) {
    prefix = display_surface(described, entities) + " is/are";
  } else if ((described == c.output && !upstream) || cmp) {
    std::string wh = entry->wh.empty() ? "What is/are" : entry->wh;
    prefix = index > 0 && d.qtype != QType::Composition ? "Of which, " + lower_first(wh) : wh;
  } else if (upstream && d.qtype == QType::Superlative && c.value_var && slot == *c.value_var) {
    prefix = "These entities are";
  } else {
    prefix = "That entity is/are";
  }
  q.fills["prefix"] = prefix;
  q.text = prefix + " " + body + "?";
  return q;
}

std::vector<TemplatedQuestion> render_all(const Decomposition& d, const EntityMap& entities,
                                          const TemplateCorpus& corpus) {
  std::vector<TemplatedQuestion> out;
  std::string problems;
  std::optional<ErrorKind> first;
  for (std::size_t i = 0; i < step_count(d); ++i) {
    try {
      out.push_back(render_step(d, i, entities, corpus));
    } catch (const Error& e) {
      if (!first) first = e.kind();
      problems += (problems.empty() ? "" : "; ") + ("step " + std::to_string(i + 1) + ": ") + e.what();
    }
  }
  if (first) fail(*first, problems);
  return out;
}

}  // namespace stepfix
