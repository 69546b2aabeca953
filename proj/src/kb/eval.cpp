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

#include "stepfix/error.hpp"
#include "stepfix/kb_store.hpp"

namespace stepfix {
namespace {

struct Ctx {
  const TripleStore& store;
  const EntityMap& entities;
};

// Known value of a term under a binding; nullopt for free variables and blanks.
std::optional<Value> known(const Term& t, const Binding& b, const Ctx& ctx) {
  if (t.is_variable()) {
    auto it = b.find(t);
    if (it == b.end()) return std::nullopt;
    return it->second;
  }
  if (t.kind == Term::Kind::Blank) return std::nullopt;
  return resolve_term(t, ctx.entities, ctx.store);
}

bool bind_term(Binding& b, const Term& t, const Value& v) {
  if (!t.is_variable()) return true;  // blank or grounded (already checked)
  auto [it, inserted] = b.emplace(t, v);
  return inserted || it->second == v;
}

int boundness(const Triple& t, const Binding& b) {
  auto score = [&](const Term& x) { return x.is_grounded() || (x.is_variable() && b.count(x)) ? 1 : 0; };
  return score(t.subject) + score(t.object);
}

std::vector<Binding> solve_list(const std::vector<Statement>& list, const Binding& seed, const Ctx& ctx);

void join(std::vector<Triple> pending, Binding b, const Ctx& ctx, std::vector<Binding>& out) {
  if (pending.empty()) {
    out.push_back(std::move(b));
    return;
  }
  auto best = std::max_element(pending.begin(), pending.end(), [&](const Triple& x, const Triple& y) {
    return boundness(x, b) < boundness(y, b);
  });
  Triple t = *best;
  pending.erase(best);

  auto s = known(t.subject, b, ctx);
  auto o = known(t.object, b, ctx);
  if (s) {
    const auto* name = std::get_if<std::string>(&*s);
    if (!name) return;
    for (const auto& value : ctx.store.objects(*name, t.predicate)) {
      if (o && *o != value) continue;
      Binding next = b;
      if (bind_term(next, t.object, value)) join(pending, std::move(next), ctx, out);
    }
  } else if (o) {
    for (const auto& subject : ctx.store.subjects(t.predicate, *o)) {
      Binding next = b;
      if (bind_term(next, t.subject, subject)) join(pending, std::move(next), ctx, out);
    }
  } else {
    for (const auto& st : ctx.store.with_predicate(t.predicate)) {
      Binding next = b;
      if (bind_term(next, t.subject, st.subject) && bind_term(next, t.object, st.object))
        join(pending, std::move(next), ctx, out);
    }
  }
}

bool keep(const FilterClause& f, const Binding& b, const Ctx& ctx) {
  switch (f.kind) {
    case FilterClause::Kind::Comparison: {
      auto it = b.find(f.var);
      if (it == b.end()) return false;
      const auto* num = std::get_if<double>(&it->second);
      if (!num)
        fail(ErrorKind::TypeMismatch,
             "comparison over non-numeric value '" + value_text(it->second) + "' of " + f.var.text);
      return f.op == '>' ? *num > f.value : *num < f.value;
    }
    case FilterClause::Kind::Inequality: {
      auto a = known(f.var, b, ctx);
      auto c = known(f.other, b, ctx);
      return !a || !c || *a != *c;
    }
    case FilterClause::Kind::NotExists:
      return solve_list(f.body, b, ctx).empty();
  }
  return true;
}

std::vector<Binding> solve_list(const std::vector<Statement>& list, const Binding& seed, const Ctx& ctx) {
  std::vector<Triple> triples;
  for (const auto& st : list)
    if (st.is_triple()) triples.push_back(st.triple());
  std::vector<Binding> current;
  join(triples, seed, ctx, current);

  for (const auto& st : list) {
    if (!st.is_union()) continue;
    std::vector<Binding> next;
    for (const auto& b : current)
      for (const auto& branch : st.union_block().branches)
        for (auto& sol : solve_list(branch, b, ctx)) next.push_back(std::move(sol));
    current = std::move(next);
  }
  for (const auto& st : list) {
    if (!st.is_filter()) continue;
    std::vector<Binding> next;
    for (auto& b : current)
      if (keep(st.filter(), b, ctx)) next.push_back(std::move(b));
    current = std::move(next);
  }
  return current;
}

void collect(const Component& c, const Binding& sol, AnswerSet& out) {
  auto it = sol.find(c.output);
  if (it == sol.end()) return;
  out.values.insert(it->second);
  if (c.value_var) {
    auto v = sol.find(*c.value_var);
    if (v != sol.end())
      if (const auto* num = std::get_if<double>(&v->second)) out.keys[it->second].insert(*num);
  }
}

AnswerSet intersect(const AnswerSet& a, const AnswerSet& b) {
  AnswerSet out;
  for (const auto& v : b.values)
    if (a.values.count(v)) {
      out.values.insert(v);
      if (auto it = b.keys.find(v); it != b.keys.end()) out.keys[v] = it->second;
    }
  return out;
}

}  // namespace

Value resolve_term(const Term& term, const EntityMap& entities, const TripleStore& store) {
  switch (term.kind) {
    case Term::Kind::Entity: {
      auto it = entities.find(term.index);
      if (it == entities.end())
        fail(ErrorKind::MissingEntity, "no entity for #entity" + std::to_string(term.index) + "#");
      if (!it->second.kb_id.empty() && store.has_node(it->second.kb_id)) return it->second.kb_id;
      return it->second.surface;
    }
    case Term::Kind::Number: return term.number;
    case Term::Kind::String:
      return term.text.size() >= 2 ? term.text.substr(1, term.text.size() - 2) : term.text;
    default: return term.text;
  }
}

std::vector<Binding> solve(const TripleStore& store, const std::vector<Statement>& statements,
                           const EntityMap& entities, const Binding& seed) {
  return solve_list(statements, seed, Ctx{store, entities});
}

AnswerSet eval_component(const TripleStore& store, const Component& component,
                         const AnswerSet& inputs, const EntityMap& entities) {
  auto stmts = component_statements(component);
  AnswerSet out;
  if (component.input.is_variable()) {
    for (const auto& v : inputs.values)
      for (const auto& sol : solve(store, stmts, entities, {{component.input, v}}))
        collect(component, sol, out);
  } else {
    for (const auto& sol : solve(store, stmts, entities)) collect(component, sol, out);
  }
  return out;
}

Evaluation eval_decomposition(const TripleStore& store, const Decomposition& d,
                              const EntityMap& entities) {
  Evaluation ev;
  AnswerSet running;
  for (std::size_t i = 0; i < d.components.size(); ++i) {
    const auto& c = d.components[i];
    AnswerSet answer = eval_component(store, c, running, entities);
    ev.steps.push_back(answer);
    running = i > 0 && !c.input.is_variable() ? intersect(running, answer) : answer;
  }
  if (d.sort) {
    std::vector<std::pair<double, Value>> pairs;
    for (const auto& v : running.values)
      if (auto it = running.keys.find(v); it != running.keys.end())
        for (double k : it->second) pairs.emplace_back(k, v);
    bool asc = d.sort->direction == SortClause::Direction::Ascending;
    std::sort(pairs.begin(), pairs.end(), [&](const auto& a, const auto& b) {
      if (a.first != b.first) return asc ? a.first < b.first : a.first > b.first;
      return a.second < b.second;
    });
    AnswerSet head;
    for (const auto& [k, v] : pairs) {
      if (head.values.size() >= static_cast<std::size_t>(d.sort->limit)) break;
      if (head.values.insert(v).second) head.keys[v].insert(k);
    }
    ev.steps.push_back(head);
    running = head;
  }
  ev.final = running;
  return ev;
}

}  // namespace stepfix
