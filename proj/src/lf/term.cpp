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

#include <charconv>
#include <cmath>

#include "stepfix/error.hpp"
#include "stepfix/lf.hpp"

namespace stepfix {

Term Term::variable(std::string name) {
  Term t;
  t.kind = Kind::Variable;
  t.text = std::move(name);
  return t;
}

Term Term::entity(int index) {
  Term t;
  t.kind = Kind::Entity;
  t.index = index;
  return t;
}

Term Term::numeric(double value) {
  Term t;
  t.kind = Kind::Number;
  t.number = value;
  return t;
}

Term Term::string_literal(std::string quoted) {
  Term t;
  t.kind = Kind::String;
  t.text = std::move(quoted);
  return t;
}

Term Term::constant(std::string kb_id) {
  Term t;
  t.kind = Kind::Constant;
  t.text = std::move(kb_id);
  return t;
}

Term Term::blank() { return Term{}; }

std::string format_number(double value) {
  if (std::isfinite(value) && value == std::floor(value) && std::fabs(value) < 1e15) {
    return std::to_string(static_cast<long long>(value));
  }
  char buf[64];
  auto [end, ec] = std::to_chars(buf, buf + sizeof buf, value);
  return std::string(buf, end);
}

std::string Term::str() const {
  switch (kind) {
    case Kind::Variable: return text;
    case Kind::Entity: return "#entity" + std::to_string(index) + "#";
    case Kind::Number: return format_number(number);
    case Kind::String: return text;
    case Kind::Constant: return "ns:" + text;
    case Kind::Blank: return "[]";
  }
  return {};
}

bool FilterClause::operator==(const FilterClause& o) const {
  if (kind != o.kind || !(var == o.var)) return false;
  switch (kind) {
    case Kind::Comparison: return op == o.op && value == o.value && cast == o.cast;
    case Kind::Inequality: return other == o.other;
    case Kind::NotExists: return body == o.body;
  }
  return false;
}

bool UnionBlock::operator==(const UnionBlock& o) const {
  return branches == o.branches && labels == o.labels;
}

std::string_view header_token(Header header) {
  return header == Header::H1 ? "<sparql-header-1>" : "<sparql-header-2>";
}

namespace {

void append_statement(std::string& out, const Statement& st, bool in_not_exists);

void append_list(std::string& out, const std::vector<Statement>& list, bool in_not_exists) {
  for (std::size_t i = 0; i < list.size(); ++i) {
    if (i) out += ' ';
    append_statement(out, list[i], in_not_exists);
  }
}

void append_statement(std::string& out, const Statement& st, bool in_not_exists) {
  if (st.is_triple()) {
    const auto& t = st.triple();
    out += t.subject.str();
    out += " ns:";
    out += t.predicate;
    out += ' ';
    out += t.object.str();
    if (!in_not_exists) out += " .";
    return;
  }
  if (st.is_filter()) {
    const auto& f = st.filter();
    switch (f.kind) {
      case FilterClause::Kind::Comparison:
        out += "filter ( ";
        if (f.cast.empty()) {
          out += f.var.str();
        } else {
          out += f.cast + " ( " + f.var.str() + " )";
        }
        out += ' ';
        out += f.op;
        out += ' ';
        out += format_number(f.value);
        out += " ) .";
        break;
      case FilterClause::Kind::Inequality:
        out += "filter ( " + f.var.str() + " != " + f.other.str() + " )";
        break;
      case FilterClause::Kind::NotExists:
        out += "filter ( not exists { ";
        append_list(out, f.body, true);
        out += " } )";
        break;
    }
    return;
  }
  const auto& u = st.union_block();
  for (std::size_t b = 0; b < u.branches.size(); ++b) {
    out += b ? " } union { " : "{ ";
    if (b < u.labels.size() && !u.labels[b].empty()) out += "# " + u.labels[b] + ' ';
    append_list(out, u.branches[b], in_not_exists);
  }
  out += " }";
}

}  // namespace

std::string serialize(const Statement& statement) {
  std::string out;
  append_statement(out, statement, false);
  return out;
}

std::string serialize(const std::vector<Statement>& statements) {
  std::string out;
  append_list(out, statements, false);
  return out;
}

std::string serialize(const LogicalForm& lf) {
  std::string out(header_token(lf.header));
  if (!lf.statements.empty()) {
    out += ' ';
    append_list(out, lf.statements, false);
  }
  if (lf.sort) {
    out += " } order by ";
    if (lf.sort->direction == SortClause::Direction::Descending) {
      out += "desc ( " + lf.sort->var.str() + " )";
    } else {
      out += lf.sort->var.str();
    }
    out += " limit " + std::to_string(lf.sort->limit);
  }
  return out;
}

}  // namespace stepfix
