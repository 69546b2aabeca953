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
#include <functional>

#include "stepfix/decomposer.hpp"
#include "stepfix/error.hpp"

namespace stepfix {

std::string_view to_string(QType qtype) {
  switch (qtype) {
    case QType::Composition: return "composition";
    case QType::Conjunction: return "conjunction";
    case QType::Comparative: return "comparative";
    case QType::Superlative: return "superlative";
  }
  return "composition";
}

std::optional<QType> qtype_from_string(std::string_view name) {
  for (auto q : {QType::Composition, QType::Conjunction, QType::Comparative, QType::Superlative})
    if (to_string(q) == name) return q;
  return std::nullopt;
}

std::string_view to_string(ComponentKind kind) {
  switch (kind) {
    case ComponentKind::Single: return "single";
    case ComponentKind::Cvt: return "cvt";
    case ComponentKind::Union: return "union";
  }
  return "single";
}

std::vector<Statement> component_statements(const Component& c) {
  std::vector<Statement> out;
  if (c.union_block) {
    out.push_back(Statement{*c.union_block});
  } else {
    for (const auto& t : c.triples) out.push_back(Statement{t});
  }
  if (c.restriction) out.push_back(Statement{*c.restriction});
  for (const auto& f : c.filters) out.push_back(Statement{f});
  return out;
}

const FilterClause* comparison_filter(const Component& c) {
  for (const auto& f : c.filters)
    if (f.kind == FilterClause::Kind::Comparison) return &f;
  return nullptr;
}

namespace {

void rename_terms(std::vector<Statement>& list, const std::function<void(Term&)>& fn) {
  for (auto& st : list) {
    if (auto* t = std::get_if<Triple>(&st.node)) {
      fn(t->subject);
      fn(t->object);
    } else if (auto* f = std::get_if<FilterClause>(&st.node)) {
      fn(f->var);
      if (f->kind == FilterClause::Kind::Inequality) fn(f->other);
      rename_terms(f->body, fn);
    } else if (auto* u = std::get_if<UnionBlock>(&st.node)) {
      for (auto& l : u->labels) l.clear();
      for (auto& b : u->branches) rename_terms(b, fn);
    }
  }
}

bool mentions(const std::vector<Statement>& list, const Term& var) {
  bool hit = false;
  std::vector<Statement> copy = list;
  rename_terms(copy, [&](Term& t) { hit = hit || t == var; });
  return hit;
}

}  // namespace

Component map_terms(const Component& c, const std::function<Term(const Term&)>& fn) {
  Component out = c;
  auto apply = [&](Term& t) { t = fn(t); };
  for (auto& t : out.triples) {
    apply(t.subject);
    apply(t.object);
  }
  if (out.union_block) {
    std::vector<Statement> wrapped{Statement{*out.union_block}};
    std::vector<std::string> labels = out.union_block->labels;
    rename_terms(wrapped, apply);
    out.union_block = wrapped[0].union_block();
    out.union_block->labels = labels;
  }
  if (out.restriction) {
    apply(out.restriction->subject);
    apply(out.restriction->object);
  }
  std::vector<Statement> filters;
  for (const auto& f : out.filters) filters.push_back(Statement{f});
  rename_terms(filters, apply);
  for (std::size_t i = 0; i < filters.size(); ++i) out.filters[i] = filters[i].filter();
  apply(out.subject_end);
  apply(out.object_end);
  apply(out.input);
  apply(out.output);
  if (out.value_var) apply(*out.value_var);
  return out;
}

std::string component_key(const Component& c, const EntityMap* entities) {
  std::map<Term, Term> names;
  if (c.input.is_variable()) names[c.input] = Term::variable("?in");
  if (c.output.is_variable() && !names.count(c.output)) names[c.output] = Term::variable("?out");
  if (c.value_var && !names.count(*c.value_var)) names[*c.value_var] = Term::variable("?num");
  int internal = 0;

  auto stmts = component_statements(c);
  auto fn = [&](Term& t) {
    if (t.is_variable()) {
      auto it = names.find(t);
      if (it == names.end())
        it = names.emplace(t, Term::variable("?i" + std::to_string(++internal))).first;
      t = it->second;
    } else if (t.is_entity() && entities) {
      if (auto it = entities->find(t.index); it != entities->end())
        t = Term::constant(entity_identity(it->second));
    }
  };
  rename_terms(stmts, fn);

  std::string out(to_string(c.kind));
  std::vector<std::string> filters;
  for (const auto& st : stmts) {
    if (st.is_filter()) {
      filters.push_back(serialize(st));
    } else {
      out += " " + serialize(st);
    }
  }
  std::sort(filters.begin(), filters.end());
  for (const auto& f : filters) out += " " + f;
  return out;
}

bool same_component(const Component& a, const Component& b, const EntityMap* entities) {
  return component_key(a, entities) == component_key(b, entities);
}

namespace {

struct Draft {
  Component comp;
  std::size_t position;  // textual index of the first statement
};

std::vector<Term> ends(const Component& c) { return {c.subject_end, c.object_end}; }

bool has_end(const Component& c, const Term& t) {
  return c.subject_end == t || c.object_end == t;
}

std::size_t mention_count(const std::vector<Statement>& top, const Term& var) {
  std::size_t n = 0;
  for (const auto& st : top) {
    if (st.is_triple()) {
      n += st.triple().subject == var;
      n += st.triple().object == var;
    } else if (st.is_union() && mentions({st}, var)) {
      ++n;
    }
  }
  return n;
}

Component make_union(const UnionBlock& u, const std::vector<Statement>& top,
                     const TemplateCorpus& corpus) {
  std::vector<Statement> as_list{Statement{u}};
  auto sig = predicate_signature(as_list);
  const TemplateEntry* entry = corpus.union_group(sig);
  if (!entry) {
    std::string joined;
    for (const auto& p : sig) joined += (joined.empty() ? "" : ",") + p;
    fail(ErrorKind::UnknownPredicate, "union{" + joined + "}");
  }
  Component c;
  c.kind = ComponentKind::Union;
  c.key = entry->key;
  c.union_block = u;

  std::vector<Term> common;
  for (const auto& v : collect_variables(u.branches[0])) {
    bool everywhere = std::all_of(u.branches.begin(), u.branches.end(),
                                  [&](const auto& b) { return mentions(b, v); });
    if (everywhere) common.push_back(v);
  }
  if (common.size() > 1) {
    std::vector<Term> outside;
    for (const auto& v : common) {
      std::size_t uses = 0;
      for (const auto& st : top)
        if (!(st.is_union() && st.union_block() == u) && !st.is_filter() && mentions({st}, v)) ++uses;
      if (uses) outside.push_back(v);
    }
    if (!outside.empty()) common = outside;
  }
  if (common.size() > 1) {
    auto x = std::find(common.begin(), common.end(), Term::variable("?x"));
    if (x == common.end()) fail(ErrorKind::AmbiguousGrouping, "union exposes several shared variables");
    common = {*x};
  }
  if (common.empty()) fail(ErrorKind::MultipleAnswerVars, "union branches share no variable");
  Term out = common[0];

  auto first = collect_triples(u.branches[0]);
  std::optional<Term> grounded;
  for (const auto& t : first) {
    if (t.subject.is_grounded()) { grounded = t.subject; break; }
    if (t.object.is_grounded()) { grounded = t.object; break; }
  }
  bool out_is_object = true;
  for (const auto& t : first) {
    if (t.object == out) { out_is_object = true; break; }
    if (t.subject == out) { out_is_object = false; break; }
  }
  Term other = grounded ? *grounded : first.front().subject;
  c.subject_end = out_is_object ? other : out;
  c.object_end = out_is_object ? out : other;
  return c;
}

std::vector<Draft> group(const std::vector<Statement>& top, const std::optional<SortClause>& sort,
                         const TemplateCorpus& corpus) {
  std::vector<Draft> drafts;
  std::vector<bool> used(top.size(), false);

  for (std::size_t i = 0; i < top.size(); ++i) {
    if (!top[i].is_union()) continue;
    drafts.push_back({make_union(top[i].union_block(), top, corpus), i});
    used[i] = true;
  }

  std::vector<std::pair<std::size_t, Triple>> restrictions;
  for (std::size_t i = 0; i < top.size(); ++i) {
    if (!top[i].is_triple()) continue;
    const auto& t = top[i].triple();
    if (corpus.restriction(t.predicate) && t.subject.is_variable() && t.object.is_grounded()) {
      restrictions.emplace_back(i, t);
      used[i] = true;
    }
  }

  for (std::size_t i = 0; i < top.size(); ++i) {
    if (used[i] || !top[i].is_triple()) continue;
    const auto& a = top[i].triple();
    if (!a.object.is_variable()) continue;
    for (std::size_t j = 0; j < top.size(); ++j) {
      if (j == i || used[j] || !top[j].is_triple()) continue;
      const auto& b = top[j].triple();
      if (b.subject != a.object || !corpus.is_cvt_pair(a.predicate, b.predicate)) continue;
      if (mention_count(top, a.object) > 2 || (sort && sort->var == a.object))
        fail(ErrorKind::AmbiguousGrouping,
             "connector " + a.object.text + " links more than two triples");
      Component c;
      c.kind = ComponentKind::Cvt;
      c.key = a.predicate + "|" + b.predicate;
      c.triples = {a, b};
      c.subject_end = a.subject;
      c.object_end = b.object;
      drafts.push_back({std::move(c), std::min(i, j)});
      used[i] = used[j] = true;
      break;
    }
  }

  for (std::size_t i = 0; i < top.size(); ++i) {
    if (used[i] || !top[i].is_triple()) continue;
    const auto& t = top[i].triple();
    const TemplateEntry* e = corpus.find(t.predicate);
    if (!e || e->kind != EntryKind::Single) fail(ErrorKind::UnknownPredicate, t.predicate);
    Component c;
    c.kind = ComponentKind::Single;
    c.key = t.predicate;
    c.triples = {t};
    c.subject_end = t.subject;
    c.object_end = t.object;
    drafts.push_back({std::move(c), i});
    used[i] = true;
  }

  std::sort(drafts.begin(), drafts.end(),
            [](const Draft& a, const Draft& b) { return a.position < b.position; });

  auto host_for = [&](const Term& var) -> Component* {
    for (auto& d : drafts)
      if (has_end(d.comp, var)) return &d.comp;
    for (auto& d : drafts)
      if (mentions(component_statements(d.comp), var)) return &d.comp;
    return nullptr;
  };

  for (const auto& [pos, t] : restrictions) {
    Component* host = host_for(t.subject);
    if (!host) fail(ErrorKind::AmbiguousGrouping, "restriction on unbound " + t.subject.text);
    if (host->restriction) fail(ErrorKind::AmbiguousGrouping, "two restrictions on one component");
    host->restriction = t;
  }

  for (std::size_t i = 0; i < top.size(); ++i) {
    if (!top[i].is_filter()) continue;
    const auto& f = top[i].filter();
    Component* host = nullptr;
    if (f.kind == FilterClause::Kind::NotExists) {
      for (const auto& v : collect_variables(f.body))
        if ((host = host_for(v))) break;
    } else {
      host = host_for(f.var);
      if (!host && f.kind == FilterClause::Kind::Inequality && f.other.is_variable())
        host = host_for(f.other);
    }
    if (!host) fail(ErrorKind::UnboundVariable, "filter variable is not bound by any component");
    host->filters.push_back(f);
    if (f.kind == FilterClause::Kind::Comparison && has_end(*host, f.var)) host->value_var = f.var;
  }

  if (sort) {
    Component* host = host_for(sort->var);
    if (host && has_end(*host, sort->var)) host->value_var = sort->var;
  }
  return drafts;
}

// Dependency order: a component is ready once one of its ends is grounded or
// bound by an earlier component; ties go to textual order.
std::vector<Component> order_and_bind(std::vector<Draft> drafts, std::set<Term> bound,
                                      std::optional<Term> prev_out) {
  std::vector<Component> out;
  while (!drafts.empty()) {
    auto ready = [&](const Draft& d) {
      for (const auto& e : ends(d.comp))
        if (e.is_grounded() || bound.count(e)) return true;
      return false;
    };
    auto it = std::find_if(drafts.begin(), drafts.end(), ready);
    if (it == drafts.end()) it = drafts.begin();
    Component c = std::move(it->comp);
    drafts.erase(it);

    const Term& s = c.subject_end;
    const Term& o = c.object_end;
    if (s.is_grounded() && o.is_grounded())
      fail(ErrorKind::AmbiguousGrouping, "component " + c.key + " has no variable end");
    if (s.is_grounded()) {
      c.input = s;
    } else if (o.is_grounded()) {
      c.input = o;
    } else if (prev_out && (s == *prev_out || o == *prev_out)) {
      c.input = *prev_out;
    } else if (bound.count(s)) {
      c.input = s;
    } else if (bound.count(o)) {
      c.input = o;
    } else {
      c.input = s;
    }
    Term other = c.input == s ? o : s;
    if (c.input.is_variable() && c.value_var && other == *c.value_var) {
      c.output = c.input;
    } else {
      c.output = other;
    }
    for (const auto& e : ends(c))
      if (e.is_variable()) bound.insert(e);
    prev_out = c.output;
    out.push_back(std::move(c));
  }
  return out;
}

}  // namespace

QType classify(const LogicalForm& lf, const std::vector<Component>& components) {
  if (components.empty()) fail(ErrorKind::UnclassifiableForm, "no components");
  if (lf.sort && lf.sort->limit == 1) return QType::Superlative;
  for (const auto& c : components)
    if (comparison_filter(c)) return QType::Comparative;
  auto answer = answer_variable(lf);
  std::size_t sharing = 0;
  bool chained = false;
  for (const auto& c : components) {
    if (answer && c.output == *answer) ++sharing;
    if (c.input.is_variable()) chained = true;
  }
  if (sharing >= 2) {
    if (chained && lf.header == Header::H1) return QType::Composition;
    return QType::Conjunction;
  }
  return QType::Composition;
}

Decomposition decompose(const LogicalForm& lf, const TemplateCorpus& corpus) {
  Decomposition d;
  d.header = lf.header;
  d.sort = lf.sort;
  d.components = order_and_bind(group(lf.statements, lf.sort, corpus), {}, std::nullopt);
  d.qtype = classify(lf, d.components);
  return d;
}

Component component_from_statements(const std::vector<Statement>& statements,
                                    const TemplateCorpus& corpus,
                                    const std::optional<Term>& upstream) {
  auto drafts = group(statements, std::nullopt, corpus);
  if (drafts.size() != 1)
    fail(ErrorKind::InvalidArgument,
         "sub-LF forms " + std::to_string(drafts.size()) + " components, expected 1");
  std::set<Term> bound;
  if (upstream) bound.insert(*upstream);
  return order_and_bind(std::move(drafts), bound, upstream).front();
}

}  // namespace stepfix
