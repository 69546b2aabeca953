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

#ifndef STEPFIX_DECOMPOSER_HPP
#define STEPFIX_DECOMPOSER_HPP

#include <functional>
#include <optional>
#include <string>
#include <vector>

#include "stepfix/corpus.hpp"
#include "stepfix/lf.hpp"

namespace stepfix {

enum class QType { Composition, Conjunction, Comparative, Superlative };

std::string_view to_string(QType qtype);
std::optional<QType> qtype_from_string(std::string_view name);

enum class ComponentKind { Single, Cvt, Union };

std::string_view to_string(ComponentKind kind);

// One sub-LF: a single triple, a CVT pair joined through a connector
// variable, or a union block, plus an optional restriction triple and any
// filters on its variables.
//
// The relation runs from `subject_end` to `object_end` (for CVT pairs, the
// subject of the first triple and the object of the second). `input` is the
// end that is grounded or bound upstream; `output` the end handed downstream.
// Components that only filter or annotate a bound variable (comparison
// filters, superlative values) have output == input and name the numeric end
// in `value_var`.
struct Component {
  ComponentKind kind = ComponentKind::Single;
  std::string key;  // corpus key
  std::vector<Triple> triples;
  std::optional<UnionBlock> union_block;
  std::optional<Triple> restriction;
  std::vector<FilterClause> filters;
  Term subject_end;
  Term object_end;
  Term input;
  Term output;
  std::optional<Term> value_var;

  bool operator==(const Component&) const = default;
};

// Copy of `component` with every term passed through `fn` (ends, roles and
// all statements, including nested ones).
Component map_terms(const Component& component, const std::function<Term(const Term&)>& fn);

// Main statements followed by the restriction and the filters.
std::vector<Statement> component_statements(const Component& component);

const FilterClause* comparison_filter(const Component& component);

// Role-normalized text: input/output/value/internal variables are renamed by
// role so the key is independent of variable spelling. With `entities`,
// placeholders compare by entity identity.
std::string component_key(const Component& component, const EntityMap* entities = nullptr);
bool same_component(const Component& a, const Component& b,
                    const EntityMap* entities = nullptr);

struct Decomposition {
  QType qtype = QType::Composition;
  Header header = Header::H1;
  std::vector<Component> components;
  std::optional<SortClause> sort;  // rendered as a trailing step
};

Decomposition decompose(const LogicalForm& lf, const TemplateCorpus& corpus);
QType classify(const LogicalForm& lf, const std::vector<Component>& components);

// Builds a component from a bare sub-LF statement list; `upstream` names the
// variable bound by the previous step, if any.
Component component_from_statements(const std::vector<Statement>& statements,
                                    const TemplateCorpus& corpus,
                                    const std::optional<Term>& upstream = std::nullopt);

// Number of displayed steps, including the superlative sort step.
inline std::size_t step_count(const Decomposition& d) {
  return d.components.size() + (d.sort ? 1 : 0);
}

}  // namespace stepfix

#endif  // STEPFIX_DECOMPOSER_HPP
