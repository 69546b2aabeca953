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

std::vector<Candidate> TemplateInverseModel::resolve(const ResolveRequest& request,
                                                     const DialogueState&) const {
  return invert(request.question, request.context, corpus_);
}

OracleModel::OracleModel(const Decomposition& gold, const EntityMap& gold_entities,
                         const TemplateCorpus& corpus)
    : gold_entities_(gold_entities) {
  for (std::size_t i = 0; i < gold.components.size(); ++i) {
    try {
      table_.emplace_back(render_step(gold, i, gold_entities, corpus).text, gold.components[i]);
    } catch (const Error&) {
      // unrenderable gold steps can never be asked for
    }
  }
}

std::vector<Candidate> OracleModel::resolve(const ResolveRequest& request,
                                            const DialogueState& state) const {
  std::vector<Candidate> out;
  for (const auto& [text, gold] : table_) {
    if (text != request.question) continue;
    Candidate c;
    int next = state.entities.empty() ? 1 : state.entities.rbegin()->first + 1;
    std::map<int, int> moved;
    c.component = map_terms(gold, [&](const Term& t) {
      if (!t.is_entity()) return t;
      if (auto m = moved.find(t.index); m != moved.end()) return Term::entity(m->second);
      auto g = gold_entities_.find(t.index);
      if (g == gold_entities_.end()) return t;
      auto id = entity_identity(g->second);
      for (const auto& [i, e] : state.entities)
        if (entity_identity(e) == id) return Term::entity(moved[t.index] = i);
      c.new_entities[next] = g->second;
      return Term::entity(moved[t.index] = next++);
    });
    c.specificity = text.size();
    c.entry_key = gold.key;
    out.push_back(std::move(c));
  }
  if (out.empty()) fail(ErrorKind::NoTemplateMatch, "oracle has no gold step rendered as: " + request.question);
  return out;
}

}  // namespace stepfix
