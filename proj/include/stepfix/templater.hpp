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

#ifndef STEPFIX_TEMPLATER_HPP
#define STEPFIX_TEMPLATER_HPP

#include <map>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "stepfix/corpus.hpp"
#include "stepfix/decomposer.hpp"
#include "stepfix/lf.hpp"

namespace stepfix {

struct TemplatedQuestion {
  std::string text;
  std::size_t step_index = 1;  // 1-based display number
  std::map<std::string, std::string> fills;  // "prefix", "PH", "RSTR"
};

// Renders component `index` (0-based) of `d`; index == components.size()
// renders the superlative sort step.
TemplatedQuestion render_step(const Decomposition& d, std::size_t index, const EntityMap& entities,
                              const TemplateCorpus& corpus);
std::vector<TemplatedQuestion> render_all(const Decomposition& d, const EntityMap& entities,
                                          const TemplateCorpus& corpus);

// "Of these, which is the entity associated with the earliest date?" and its
// direction / value-kind variants.
std::string sort_sentence(const SortClause& sort, std::string_view predicate);
// The predicate whose object the sort ranks, or empty.
std::string sort_predicate(const Decomposition& d);

// Surface text shown for a grounded term; `[Name]` is shown as `Name`.
std::string display_surface(const Term& term, const EntityMap& entities);

struct InvertContext {
  QType qtype = QType::Composition;
  std::size_t step_index = 0;          // 0-based position the question will take
  std::optional<Term> upstream_var;    // output of the step before it
  std::optional<Term> output_var;      // preferred name for a fresh output
  const EntityMap* entities = nullptr; // known surfaces
};

struct Candidate {
  Component component;
  EntityMap new_entities;   // surfaces not found in ctx.entities
  std::size_t specificity = 0;
  std::string entry_key;
};

// Ranked reconstructions of a templated question. Throws NoTemplateMatch.
std::vector<Candidate> invert(std::string_view question, const InvertContext& ctx,
                              const TemplateCorpus& corpus);

}  // namespace stepfix

#endif  // STEPFIX_TEMPLATER_HPP
