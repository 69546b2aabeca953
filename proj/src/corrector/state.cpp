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

#include "stepfix/corrector.hpp"
#include "stepfix/error.hpp"

namespace stepfix {
namespace {

bool mentions(const std::vector<Statement>& list, const Term& var) {
  return collect_variables(list).count(var) > 0;
}

std::optional<SortClause::Direction> sort_direction(std::string_view question) {
  for (auto dir : {SortClause::Direction::Ascending, SortClause::Direction::Descending})
    for (std::string_view pred : {"career_start", "area"}) {
      SortClause probe{Term::variable("?num"), dir, 1};
      if (sort_sentence(probe, pred) == question) return dir;
    }
  return std::nullopt;
}

std::optional<SortClause> sort_from_sentence(const DialogueState& s, std::string_view question) {
  auto dir = sort_direction(question);
  if (!dir) return std::nullopt;
  for (auto it = s.steps.rbegin(); it != s.steps.rend(); ++it)
    if (it->component.value_var) return SortClause{*it->component.value_var, *dir, 1};
  fail(ErrorKind::ResolutionFailed, "no step produces values to sort");
}

InvertContext context_for(const DialogueState& s, std::size_t position, bool replacing) {
  InvertContext ctx;
  ctx.qtype = s.qtype;
  ctx.step_index = position;
  if (position > 0 && position - 1 < s.steps.size()) ctx.upstream_var = s.steps[position - 1].component.output;
  if (replacing) ctx.output_var = s.steps[position].component.output;
  ctx.entities = &s.entities;
  return ctx;
}

Component choose(DialogueState& s, const std::string& question, const InvertContext& ctx,
                 const CorrectionModel& model) {
  std::vector<Candidate> candidates;
  try {
    candidates = model.resolve(ResolveRequest{question, ctx}, s);
  } catch (const Error& e) {
    fail(ErrorKind::ResolutionFailed, std::string(to_string(e.kind())) + ": " + e.what());
  }
  for (auto& c : candidates) {
    EntityMap merged = s.entities;
    merged.insert(c.new_entities.begin(), c.new_entities.end());
    if (s.rejected.count(component_key(c.component, &merged))) continue;
    s.entities = std::move(merged);
    return c.component;
  }
  fail(ErrorKind::ResolutionFailed,
       candidates.empty() ? "model returned no candidates" : "every candidate was rejected earlier");
}

}  // namespace

Decomposition as_decomposition(const DialogueState& state) {
  Decomposition d;
  d.qtype = state.qtype;
  d.header = state.header;
  d.sort = state.sort;
  for (const auto& s : state.steps) d.components.push_back(s.component);
  return d;
}

DialogueState make_state(std::string complex_question, const LogicalForm& lf, EntityMap entities,
                         const TemplateCorpus& corpus) {
  auto d = decompose(lf, corpus);
  DialogueState s;
  s.complex_question = std::move(complex_question);
  s.qtype = s.original_qtype = d.qtype;
  s.header = lf.header;
  s.sort = d.sort;
  s.entities = std::move(entities);
  for (auto& c : d.components) s.steps.push_back(Step{std::move(c), {}, {}, {}, false});
  refresh_questions(s, corpus);
  return s;
}

void refresh_questions(DialogueState& state, const TemplateCorpus& corpus) {
  auto d = as_decomposition(state);
  for (std::size_t i = 0; i < state.steps.size(); ++i) {
    try {
      state.steps[i].templated_q = render_step(d, i, state.entities, corpus).text;
    } catch (const Error&) {
      if (state.steps[i].natural_q) state.steps[i].templated_q = *state.steps[i].natural_q;
    }
  }
}

void refresh_answers(DialogueState& state, const TripleStore& store) {
  auto ev = eval_decomposition(store, as_decomposition(state), state.entities);
  for (std::size_t i = 0; i < state.steps.size(); ++i) state.steps[i].answers = ev.steps[i];
}

std::size_t insert_position(const std::vector<Step>& steps, const Component& c) {
  if (c.output.is_variable() && c.output != c.input)
    for (std::size_t j = 0; j < steps.size(); ++j)
      if (steps[j].component.input == c.output) return j;
  if (c.input.is_variable()) {
    for (std::size_t j = steps.size(); j-- > 0;)
      if (steps[j].component.output == c.input) return j + 1;
    return steps.size();
  }
  for (std::size_t j = 0; j < steps.size(); ++j) {
    const Term& in = steps[j].component.input;
    if (!in.is_variable()) continue;
    bool produced = std::any_of(steps.begin(), steps.begin() + static_cast<long>(j),
                                [&](const Step& k) { return k.component.output == in; });
    if (!produced) return j;
  }
  return steps.size();
}

DialogueState apply_op(const DialogueState& in, const EditOp& op, const CorrectionModel& model,
                       const TemplateCorpus& corpus) {
  DialogueState s = in;
  const std::size_t n = s.steps.size();
  auto check = [&](std::size_t index) {
    if (index < 1 || index > s.displayed_steps())
      fail(ErrorKind::IndexOutOfRange, "question #" + std::to_string(index) + " does not exist (" +
                                           std::to_string(s.displayed_steps()) + " shown)");
  };
  auto invalidate_from = [&](std::size_t pos) {
    for (std::size_t j = pos; j < s.steps.size(); ++j) s.steps[j].answers.reset();
  };

  switch (op.kind) {
    case EditOp::Kind::Delete: {
      check(op.index);
      if (s.sort && op.index == n + 1) {
        s.sort.reset();
        break;
      }
      if (n == 1) fail(ErrorKind::InvalidArgument, "cannot delete the only question");
      if (const Step& gone = s.steps[op.index - 1]; gone.resolved_by_model)
        s.rejected.insert(component_key(gone.component, &s.entities));
      s.steps.erase(s.steps.begin() + static_cast<long>(op.index - 1));
      invalidate_from(op.index - 1);
      break;
    }
    case EditOp::Kind::Replace: {
      check(op.index);
      if (s.sort && op.index == n + 1) {
        auto sort = sort_from_sentence(s, op.question);
        if (!sort) fail(ErrorKind::ResolutionFailed, "the last question must be a sort sentence");
        s.sort = sort;
        break;
      }
      std::size_t pos = op.index - 1;
      const Step& old = s.steps[pos];
      if (old.resolved_by_model) s.rejected.insert(component_key(old.component, &s.entities));
      auto ctx = context_for(s, pos, true);
      Component chosen = choose(s, op.question, ctx, model);
      s.steps[pos] = Step{std::move(chosen), {}, op.question, {}, true};
      invalidate_from(pos);
      break;
    }
    case EditOp::Kind::Insert: {
      if (sort_direction(op.question)) {
        s.sort = sort_from_sentence(s, op.question);
        break;
      }
      auto ctx = context_for(s, n, false);
      Component chosen = choose(s, op.question, ctx, model);
      std::size_t pos = insert_position(s.steps, chosen);
      s.steps.insert(s.steps.begin() + static_cast<long>(pos), Step{std::move(chosen), {}, op.question, {}, true});
      invalidate_from(pos);
      break;
    }
  }

  s.history_q.push_back(render_op(op));
  try {
    LogicalForm lf = compile(s);
    s.history_lf.push_back(serialize(lf));
    std::vector<Component> comps;
    for (const auto& st : s.steps) comps.push_back(st.component);
    s.qtype = classify(lf, comps);
  } catch (const Error&) {
    s.history_lf.emplace_back();
  }
  refresh_questions(s, corpus);
  return s;
}

LogicalForm compile(const DialogueState& state) {
  if (state.steps.empty()) fail(ErrorKind::InvalidArgument, "nothing to compile");
  int counter = 0;
  auto fresh = [&] { return Term::variable("?v" + std::to_string(++counter)); };

  std::vector<Component> renamed;
  std::optional<Term> prev_out;
  std::optional<Term> sort_var;
  for (std::size_t i = 0; i < state.steps.size(); ++i) {
    const Component& c = state.steps[i].component;
    std::map<Term, Term> names;
    if (c.input.is_variable()) {
      if (!prev_out)
        fail(ErrorKind::DisconnectedComponents,
             "question #" + std::to_string(i + 1) + " needs " + c.input.text + " but no earlier step binds it");
      names[c.input] = *prev_out;
    }
    if (!c.output.is_variable())
      fail(ErrorKind::DisconnectedComponents, "question #" + std::to_string(i + 1) + " has no variable output");
    if (!names.count(c.output)) names[c.output] = i > 0 && !c.input.is_variable() ? *prev_out : fresh();
    if (c.union_block)
      for (const auto& branch : c.union_block->branches)
        if (!mentions(branch, c.output))
          fail(ErrorKind::MultipleAnswerVars, "union branches do not share " + c.output.text);
    Component r = map_terms(c, [&](const Term& t) {
      if (!t.is_variable()) return t;
      auto it = names.find(t);
      if (it == names.end()) it = names.emplace(t, fresh()).first;
      return it->second;
    });
    if (state.sort && c.value_var && *c.value_var == state.sort->var) sort_var = r.value_var;
    prev_out = r.output;
    renamed.push_back(std::move(r));
  }
  if (state.sort && !sort_var) {
    for (auto it = renamed.rbegin(); it != renamed.rend() && !sort_var; ++it) sort_var = it->value_var;
    if (!sort_var) fail(ErrorKind::DisconnectedComponents, "no step produces the sorted values");
  }

  const Term answer = *prev_out;
  const Term x = Term::variable("?x");
  auto to_x = [&](const Term& t) { return t == answer ? x : t; };
  LogicalForm lf;
  lf.header = state.header;
  for (auto& r : renamed) {
    r = map_terms(r, to_x);
    auto stmts = component_statements(r);
    lf.statements.insert(lf.statements.end(), stmts.begin(), stmts.end());
  }
  if (state.sort) {
    lf.sort = *state.sort;
    lf.sort->var = to_x(*sort_var);
  }
  QType qtype = classify(lf, renamed);
  if (qtype != state.original_qtype) lf.header = qtype == QType::Composition ? Header::H1 : Header::H2;
  return canonicalize(lf);
}

}  // namespace stepfix
