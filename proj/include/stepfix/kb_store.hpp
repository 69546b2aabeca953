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

#ifndef STEPFIX_KB_STORE_HPP
#define STEPFIX_KB_STORE_HPP

#include <map>
#include <set>
#include <string>
#include <variant>
#include <vector>

#include "stepfix/decomposer.hpp"
#include "stepfix/lf.hpp"

namespace stepfix {

using Value = std::variant<std::string, double>;

std::string value_text(const Value& v);

struct StoredTriple {
  std::string subject;
  std::string predicate;
  Value object;

  auto operator<=>(const StoredTriple&) const = default;
};

// Set-semantics triple store with (s,p) and (p,o) indexes.
class TripleStore {
 public:
  // Returns false when the triple was already present.
  bool add(std::string subject, std::string predicate, Value object);

  std::size_t size() const { return triples_.size(); }
  const std::set<StoredTriple>& triples() const { return triples_; }
  bool has_node(const std::string& name) const { return nodes_.count(name) > 0; }

  const std::vector<Value>& objects(const std::string& subject, const std::string& predicate) const;
  const std::vector<std::string>& subjects(const std::string& predicate, const Value& object) const;
  const std::vector<StoredTriple>& with_predicate(const std::string& predicate) const;

 private:
  std::set<StoredTriple> triples_;
  std::set<std::string> nodes_;
  std::map<std::pair<std::string, std::string>, std::vector<Value>> by_sp_;
  std::map<std::pair<std::string, Value>, std::vector<std::string>> by_po_;
  std::map<std::string, std::vector<StoredTriple>> by_p_;
};

// TSV: subject <TAB> predicate <TAB> object, '#' comments. Objects that parse
// completely as a finite number are stored as numbers. Predicates may carry
// the ns: prefix.
TripleStore parse_store(std::string_view text, const std::string& source = "<memory>");
TripleStore load_store(const std::string& path);

struct AnswerSet {
  std::set<Value> values;
  // Numeric sort key(s) per value, filled for value-producing steps.
  std::map<Value, std::set<double>> keys;

  bool operator==(const AnswerSet&) const = default;
};

inline constexpr std::string_view kNoAnswers = "(no answers found)";

// "Egypt, Sudan", "p1 (1999), p2 (1950)" or the empty marker.
std::string display_answers(const AnswerSet& answers);

// Store node for a grounded term: the entity's kb_id when the store knows
// it, else its surface.
Value resolve_term(const Term& term, const EntityMap& entities, const TripleStore& store);

// Answers of one component. A variable input is bound to each value of
// `inputs`; a grounded input ignores `inputs`.
AnswerSet eval_component(const TripleStore& store, const Component& component,
                         const AnswerSet& inputs, const EntityMap& entities);

struct Evaluation {
  std::vector<AnswerSet> steps;  // one per displayed step
  AnswerSet final;
};

Evaluation eval_decomposition(const TripleStore& store, const Decomposition& d,
                              const EntityMap& entities);

// All solutions of a statement list as variable bindings (exposed for tests
// and for evaluating whole forms).
using Binding = std::map<Term, Value>;
std::vector<Binding> solve(const TripleStore& store, const std::vector<Statement>& statements,
                           const EntityMap& entities, const Binding& seed = {});

}  // namespace stepfix

#endif  // STEPFIX_KB_STORE_HPP
