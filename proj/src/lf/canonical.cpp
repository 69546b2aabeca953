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
#include <climits>
#include <functional>
#include <tuple>

#include "stepfix/lf.hpp"

namespace stepfix {
namespace {

constexpr int kUnreached = INT_MAX / 4;

void terms_of(const Statement& st, std::vector<Term>& out) {
  if (st.is_triple()) {
    out.push_back(st.triple().subject);
    out.push_back(st.triple().object);
  } else if (st.is_union()) {
    for (const auto& b : st.union_block().branches)
      for (const auto& s : b) terms_of(s, out);
  }
}

using Distances = std::map<Term, int>;

int term_distance(const Term& t, const Distances& dist) {
  if (t.is_grounded()) return 0;
  if (!t.is_variable()) return kUnreached;
  auto it = dist.find(t);
  return it == dist.end() ? kUnreached : it->second;
}

// Hop distance of every variable from the grounded terms, treating each
// triple and each union block as an edge over the terms it mentions.
Distances distances(const std::vector<Statement>& list) {
  Distances dist;
  bool changed = true;
  while (changed) {
    changed = false;
    for (const auto& st : list) {
      std::vector<Term> terms;
      terms_of(st, terms);
      int m = kUnreached;
      for (const auto& t : terms) m = std::min(m, term_distance(t, dist));
      if (m == kUnreached) continue;
      for (const auto& t : terms) {
        if (!t.is_variable()) continue;
        auto it = dist.find(t);
        if (it == dist.end() || it->second > m + 1) {
          dist[t] = m + 1;
          changed = true;
        }
      }
    }
  }
  return dist;
}

struct Roles {
  std::optional<Term> answer;
  std::set<Term> numeric;
};

std::string term_shape(const Term& t, const Roles& roles) {
  if (!t.is_variable()) return t.str();
  if (roles.answer && t == *roles.answer) return "?a";
  if (roles.numeric.count(t)) return "?n";
  return "?";
}

std::string statement_shape(const Statement& st, const Roles& roles) {
  if (st.is_triple()) {
    const auto& t = st.triple();
    return term_shape(t.subject, roles) + " " + t.predicate + " " + term_shape(t.object, roles);
  }
  if (st.is_filter()) {
    const auto& f = st.filter();
    std::string s = "filter " + std::to_string(static_cast<int>(f.kind)) + " " +
                    term_shape(f.var, roles);
    if (f.kind == FilterClause::Kind::Comparison) s += std::string(1, f.op) + format_number(f.value);
    if (f.kind == FilterClause::Kind::Inequality) s += " " + term_shape(f.other, roles);
    for (const auto& b : f.body) s += " {" + statement_shape(b, roles) + "}";
    return s;
  }
  std::string s = "union";
  for (const auto& b : st.union_block().branches) {
    s += " {";
    for (const auto& x : b) s += statement_shape(x, roles) + ";";
    s += "}";
  }
  return s;
}

std::string pred_signature_text(const Statement& st) {
  std::vector<Triple> ts = collect_triples({st});
  std::vector<std::string> preds;
  for (const auto& t : ts) preds.push_back(t.predicate);
  std::sort(preds.begin(), preds.end());
  std::string out;
  for (const auto& p : preds) out += p + " ";
  return out;
}

std::vector<Term> filter_terms(const FilterClause& f) {
  std::vector<Term> out{f.var};
  if (f.kind == FilterClause::Kind::Inequality) out.push_back(f.other);
  if (f.kind == FilterClause::Kind::NotExists)
    for (const auto& b : f.body) terms_of(b, out);
  return out;
}

std::vector<Statement> order_list(const std::vector<Statement>& list, const Distances& dist,
                                  const Roles& roles);

Statement order_nested(const Statement& st, const Distances& dist, const Roles& roles) {
  if (st.is_union()) {
    UnionBlock u = st.union_block();
    for (auto& b : u.branches) b = order_list(b, dist, roles);
    return Statement{u};
  }
  if (st.is_filter() && st.filter().kind == FilterClause::Kind::NotExists) {
    FilterClause f = st.filter();
    f.body = order_list(f.body, dist, roles);
    return Statement{f};
  }
  return st;
}

// Dependency order: statements closer to grounded entities come first; ties
// break on predicate text and shape, never on variable spelling. Filters
// follow the last statement mentioning one of their variables.
std::vector<Statement> order_list(const std::vector<Statement>& list, const Distances& dist,
                                  const Roles& roles) {
  struct Keyed {
    int level;
    int kind;
    std::string preds;
    std::string shape;
    std::size_t original;
    Statement st;
  };
  std::vector<Keyed> main;
  std::vector<Statement> filters;
  for (std::size_t i = 0; i < list.size(); ++i) {
    Statement st = order_nested(list[i], dist, roles);
    if (st.is_filter()) {
      filters.push_back(std::move(st));
      continue;
    }
    std::vector<Term> terms;
    terms_of(st, terms);
    int level = kUnreached;
    for (const auto& t : terms) level = std::min(level, term_distance(t, dist));
    main.push_back({level, st.is_union() ? 1 : 0, pred_signature_text(st),
                    statement_shape(st, roles), i, std::move(st)});
  }
  std::stable_sort(main.begin(), main.end(), [](const Keyed& a, const Keyed& b) {
    return std::tie(a.level, a.kind, a.preds, a.shape) <
           std::tie(b.level, b.kind, b.preds, b.shape);
  });

  // anchor index -> filters placed after it; -1 means before everything
  std::map<long, std::vector<Statement>> anchored;
  for (auto& f : filters) {
    long anchor = -1;
    for (const auto& t : filter_terms(f.filter())) {
      if (!t.is_variable()) continue;
      for (std::size_t i = 0; i < main.size(); ++i) {
        std::vector<Term> terms;
        terms_of(main[i].st, terms);
        if (std::find(terms.begin(), terms.end(), t) != terms.end())
          anchor = std::max(anchor, static_cast<long>(i));
      }
    }
    anchored[anchor].push_back(std::move(f));
  }
  for (auto& [_, group] : anchored) {
    std::stable_sort(group.begin(), group.end(), [&](const Statement& a, const Statement& b) {
      return statement_shape(a, roles) < statement_shape(b, roles);
    });
  }

  std::vector<Statement> out;
  auto flush = [&](long anchor) {
    auto it = anchored.find(anchor);
    if (it == anchored.end()) return;
    for (auto& f : it->second) out.push_back(std::move(f));
  };
  flush(-1);
  for (std::size_t i = 0; i < main.size(); ++i) {
    out.push_back(std::move(main[i].st));
    flush(static_cast<long>(i));
  }
  return out;
}

void visit_terms(std::vector<Statement>& list, const std::function<void(Term&)>& fn);

void visit_statement(Statement& st, const std::function<void(Term&)>& fn) {
  if (auto* t = std::get_if<Triple>(&st.node)) {
    fn(t->subject);
    fn(t->object);
  } else if (auto* f = std::get_if<FilterClause>(&st.node)) {
    fn(f->var);
    if (f->kind == FilterClause::Kind::Inequality) fn(f->other);
    visit_terms(f->body, fn);
  } else if (auto* u = std::get_if<UnionBlock>(&st.node)) {
    for (auto& b : u->branches) visit_terms(b, fn);
  }
}

void visit_terms(std::vector<Statement>& list, const std::function<void(Term&)>& fn) {
  for (auto& st : list) visit_statement(st, fn);
}

}  // namespace

std::optional<Term> answer_variable(const LogicalForm& lf) {
  auto x = Term::variable("?x");
  std::optional<Term> last;
  std::set<Term> seen;
  for (const auto& t : collect_triples(lf.statements)) {
    for (const auto* term : {&t.subject, &t.object}) {
      if (!term->is_variable()) continue;
      if (*term == x) return x;
      if (seen.insert(*term).second) last = *term;
    }
  }
  return last;
}

std::set<Term> numeric_variables(const LogicalForm& lf) {
  std::set<Term> out;
  std::function<void(const std::vector<Statement>&)> walk = [&](const std::vector<Statement>& l) {
    for (const auto& st : l) {
      if (st.is_filter() && st.filter().kind == FilterClause::Kind::Comparison)
        out.insert(st.filter().var);
      if (st.is_union())
        for (const auto& b : st.union_block().branches) walk(b);
    }
  };
  walk(lf.statements);
  if (lf.sort) out.insert(lf.sort->var);
  return out;
}

LogicalForm canonicalize(const LogicalForm& lf) {
  Roles roles;
  roles.answer = answer_variable(lf);
  roles.numeric = numeric_variables(lf);
  if (roles.answer) roles.numeric.erase(*roles.answer);

  LogicalForm out = lf;
  out.statements = order_list(lf.statements, distances(lf.statements), roles);

  static const char* kPool[] = {"?c", "?y", "?k"};
  std::map<Term, Term> rename;
  std::size_t plain = 0, numeric = 0;
  auto assign = [&](Term& t) {
    if (!t.is_variable() || rename.count(t)) return;
    std::string name;
    if (roles.answer && t == *roles.answer) {
      name = "?x";
    } else if (roles.numeric.count(t)) {
      name = numeric == 0 ? "?num" : "?num" + std::to_string(numeric + 1);
      ++numeric;
    } else {
      name = plain < 3 ? kPool[plain] : "?v" + std::to_string(plain + 1);
      ++plain;
    }
    rename.emplace(t, Term::variable(name));
  };
  visit_terms(out.statements, assign);
  auto apply = [&](Term& t) {
    if (auto it = rename.find(t); it != rename.end()) t = it->second;
  };
  visit_terms(out.statements, apply);
  if (out.sort) apply(out.sort->var);
  return out;
}

std::string entity_identity(const Entity& entity) {
  return entity.kb_id.empty() ? entity.surface : entity.kb_id;
}

LogicalForm ground_entities(const LogicalForm& lf, const EntityMap& entities) {
  LogicalForm out = lf;
  visit_terms(out.statements, [&](Term& t) {
    if (!t.is_entity()) return;
    if (auto it = entities.find(t.index); it != entities.end())
      t = Term::constant(entity_identity(it->second));
  });
  return out;
}

std::string canonical_text(const LogicalForm& lf, const EntityMap* entities) {
  return serialize(canonicalize(entities ? ground_entities(lf, *entities) : lf));
}

bool em_equal(const LogicalForm& a, const LogicalForm& b, const EntityMap* entities) {
  return canonical_text(a, entities) == canonical_text(b, entities);
}

}  // namespace stepfix
