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

#ifndef STEPFIX_LF_HPP
#define STEPFIX_LF_HPP

#include <compare>
#include <map>
#include <optional>
#include <set>
#include <string>
#include <string_view>
#include <utility>
#include <variant>
#include <vector>

namespace stepfix {

//! A slot of a triple pattern. Variables keep their leading '?'.
struct Term {
  enum class Kind { Variable, Entity, Number, String, Constant, Blank };

  Kind kind = Kind::Blank;
  std::string text;   // variable name, string literal (quoted), constant id
  int index = 0;      // entity placeholder number (#entityN#)
  double number = 0;  // numeric literal

  static Term variable(std::string name);
  static Term entity(int index);
  static Term numeric(double value);
  static Term string_literal(std::string quoted);
  static Term constant(std::string kb_id);
  static Term blank();

  bool is_variable() const { return kind == Kind::Variable; }
  bool is_entity() const { return kind == Kind::Entity; }
  bool is_literal() const { return kind == Kind::Number || kind == Kind::String; }
  // Entities, literals and constants; anything that does not need binding.
  bool is_grounded() const { return kind != Kind::Variable && kind != Kind::Blank; }

  std::string str() const;

  auto operator<=>(const Term&) const = default;
  bool operator==(const Term&) const = default;
};

struct Triple {
  Term subject;
  std::string predicate;  // stored without the ns: prefix
  Term object;

  auto operator<=>(const Triple&) const = default;
  bool operator==(const Triple&) const = default;
};

struct Statement;

struct FilterClause {
  enum class Kind { Comparison, Inequality, NotExists };

  Kind kind = Kind::Comparison;
  Term var;
  char op = '>';           // Comparison only: '<' or '>'
  double value = 0;        // Comparison only
  std::string cast;        // Comparison only, e.g. "xsd:integer"; may be empty
  Term other;              // Inequality only
  std::vector<Statement> body;  // NotExists only

  bool operator==(const FilterClause&) const;
};

struct UnionBlock {
  std::vector<std::vector<Statement>> branches;
  std::vector<std::string> labels;  // one per branch, empty when unlabeled

  bool operator==(const UnionBlock&) const;
};

struct Statement {
  std::variant<Triple, FilterClause, UnionBlock> node;

  bool is_triple() const { return std::holds_alternative<Triple>(node); }
  bool is_filter() const { return std::holds_alternative<FilterClause>(node); }
  bool is_union() const { return std::holds_alternative<UnionBlock>(node); }
  const Triple& triple() const { return std::get<Triple>(node); }
  const FilterClause& filter() const { return std::get<FilterClause>(node); }
  const UnionBlock& union_block() const { return std::get<UnionBlock>(node); }

  bool operator==(const Statement&) const = default;
};

enum class Header { H1, H2 };

std::string_view header_token(Header header);

struct SortClause {
  enum class Direction { Ascending, Descending };

  Term var;
  Direction direction = Direction::Ascending;
  int limit = 1;

  bool operator==(const SortClause&) const = default;
};

struct LogicalForm {
  Header header = Header::H1;
  std::vector<Statement> statements;
  std::optional<SortClause> sort;

  bool operator==(const LogicalForm&) const = default;
};

struct Entity {
  std::string surface;
  std::string kb_id;

  bool operator==(const Entity&) const = default;
};

// Placeholder index -> entity. Indices are dense from 1.
using EntityMap = std::map<int, Entity>;

// Parsing and serialization of the bracketed statement syntax, e.g.
//   <sparql-header-1> ?c ns:location.country.capital #entity1# . ?c ns:a.b ?x .
LogicalForm parse_lf(std::string_view text);
// Parses a bare statement list (no header, no sort suffix).
std::vector<Statement> parse_statements(std::string_view text);

std::string serialize(const LogicalForm& lf);
std::string serialize(const Statement& statement);
std::string serialize(const std::vector<Statement>& statements);
std::string format_number(double value);

// Renames variables and reorders statements into a canonical form so that
// forms differing only in variable spelling or statement order compare equal.
LogicalForm canonicalize(const LogicalForm& lf);

// Exact match under canonicalization. When `entities` is given, placeholders
// are compared by entity identity (kb_id, else surface) instead of by number.
bool em_equal(const LogicalForm& a, const LogicalForm& b,
              const EntityMap* entities = nullptr);
std::string canonical_text(const LogicalForm& lf,
                           const EntityMap* entities = nullptr);

// Replaces #entityN# placeholders by constants carrying the entity identity.
LogicalForm ground_entities(const LogicalForm& lf, const EntityMap& entities);
std::string entity_identity(const Entity& entity);

// The projected answer variable: ?x when present, otherwise the variable
// introduced last in statement order.
std::optional<Term> answer_variable(const LogicalForm& lf);
// Variables used by comparison filters or by the sort clause.
std::set<Term> numeric_variables(const LogicalForm& lf);

// All triples at any nesting depth, in textual order.
std::vector<Triple> collect_triples(const std::vector<Statement>& statements);
std::set<Term> collect_variables(const std::vector<Statement>& statements);

// Swaps ns:<kb_id> occurrences for ordered #entityN# placeholders.
std::pair<std::string, EntityMap> delexicalize(
    std::string_view text, const std::vector<Entity>& entities);

enum class RelexMode { Surface, KbId };
std::string relexicalize(std::string_view text, const EntityMap& entities,
                         RelexMode mode = RelexMode::Surface);

// Lowest-numbered placeholder whose surface equals `surface`.
std::optional<int> find_entity(const EntityMap& entities, std::string_view surface);

}  // namespace stepfix

#endif  // STEPFIX_LF_HPP
