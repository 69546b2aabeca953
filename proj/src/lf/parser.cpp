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
#include <cctype>
#include <charconv>
#include <cmath>

#include "stepfix/error.hpp"
#include "stepfix/lf.hpp"

namespace stepfix {
namespace {

struct Token {
  std::string text;
  std::size_t pos = 0;
};

bool is_delim(char c) { return c == '{' || c == '}' || c == '(' || c == ')'; }

std::vector<Token> tokenize(std::string_view in) {
  std::vector<Token> out;
  std::size_t i = 0;
  while (i < in.size()) {
    char c = in[i];
    if (std::isspace(static_cast<unsigned char>(c))) {
      ++i;
      continue;
    }
    std::size_t start = i;
    if (is_delim(c)) {
      out.push_back({std::string(1, c), start});
      ++i;
      continue;
    }
    if (c == '[' && i + 1 < in.size() && in[i + 1] == ']') {
      out.push_back({"[]", start});
      i += 2;
      continue;
    }
    if (c == '"') {
      ++i;
      while (i < in.size() && in[i] != '"') {
        if (in[i] == '\\') ++i;
        ++i;
      }
      if (i >= in.size()) throw SyntaxError(start, "closing quote");
      ++i;
      while (i < in.size() && !std::isspace(static_cast<unsigned char>(in[i])) &&
             !is_delim(in[i]))
        ++i;
      out.push_back({std::string(in.substr(start, i - start)), start});
      continue;
    }
    while (i < in.size() && !std::isspace(static_cast<unsigned char>(in[i])) &&
           !is_delim(in[i]))
      ++i;
    std::string tok(in.substr(start, i - start));
    // "?x." -> "?x" "."; predicates and ids never end in a dot.
    if (tok.size() > 1 && tok.back() == '.' &&
        (tok[0] == '?' || tok[0] == '#' || tok.rfind("ns:", 0) == 0)) {
      tok.pop_back();
      out.push_back({tok, start});
      out.push_back({".", start + tok.size()});
    } else {
      out.push_back({tok, start});
    }
  }
  return out;
}

bool iequals(std::string_view a, std::string_view b) {
  return a.size() == b.size() &&
         std::equal(a.begin(), a.end(), b.begin(), [](char x, char y) {
           return std::tolower(static_cast<unsigned char>(x)) ==
                  std::tolower(static_cast<unsigned char>(y));
         });
}

std::optional<int> entity_index(std::string_view tok) {
  constexpr std::string_view prefix = "#entity";
  if (tok.size() < prefix.size() + 2 || tok.substr(0, prefix.size()) != prefix ||
      tok.back() != '#')
    return std::nullopt;
  auto digits = tok.substr(prefix.size(), tok.size() - prefix.size() - 1);
  int value = 0;
  auto [p, ec] = std::from_chars(digits.data(), digits.data() + digits.size(), value);
  if (ec != std::errc() || p != digits.data() + digits.size() || value < 1)
    return std::nullopt;
  return value;
}

std::optional<double> parse_number(std::string_view tok) {
  if (tok.empty()) return std::nullopt;
  double value = 0;
  auto [p, ec] = std::from_chars(tok.data(), tok.data() + tok.size(), value);
  if (ec != std::errc() || p != tok.data() + tok.size() || !std::isfinite(value))
    return std::nullopt;
  return value;
}

class Parser {
 public:
  Parser(std::string_view text) : text_size_(text.size()), toks_(tokenize(text)) {}

  LogicalForm parse_form() {
    LogicalForm lf;
    if (at_end()) throw SyntaxError(0, "header token");
    const auto& h = peek();
    if (h.text == "<sparql-header-1>") {
      lf.header = Header::H1;
    } else if (h.text == "<sparql-header-2>") {
      lf.header = Header::H2;
    } else {
      throw SyntaxError(h.pos, "header token");
    }
    ++i_;
    lf.statements = parse_list();
    if (!at_end() && peek().text == "}") {
      ++i_;
      lf.sort = parse_sort();
    }
    if (!at_end()) throw SyntaxError(peek().pos, "end of input");
    return lf;
  }

  std::vector<Statement> parse_bare() {
    auto list = parse_list();
    if (!at_end()) throw SyntaxError(peek().pos, "end of input");
    return list;
  }

 private:
  bool at_end() const { return i_ >= toks_.size(); }
  const Token& peek() const { return toks_[i_]; }
  std::size_t here() const { return at_end() ? text_size_ : peek().pos; }

  const Token& next(const char* expected) {
    if (at_end()) throw SyntaxError(text_size_, expected);
    return toks_[i_++];
  }

  void expect(std::string_view word) {
    const auto& t = next(std::string(word).c_str());
    if (!iequals(t.text, word)) throw SyntaxError(t.pos, std::string(word));
  }

  bool accept(std::string_view word) {
    if (!at_end() && iequals(peek().text, word)) {
      ++i_;
      return true;
    }
    return false;
  }

  std::vector<Statement> parse_list() {
    std::vector<Statement> out;
    while (!at_end() && peek().text != "}") {
      out.push_back(parse_statement());
      accept(".");
    }
    return out;
  }

  Statement parse_statement() {
    if (iequals(peek().text, "filter")) {
      ++i_;
      return Statement{parse_filter()};
    }
    if (peek().text == "{") return Statement{parse_union()};
    return Statement{parse_triple()};
  }

  Triple parse_triple() {
    std::size_t pos = here();
    Triple t;
    t.subject = parse_term();
    t.predicate = parse_predicate();
    t.object = parse_term();
    if (t.subject.is_literal() && t.object.is_literal())
      throw SyntaxError(pos, "a non-literal subject or object");
    return t;
  }

  std::string parse_predicate() {
    const auto& t = next("predicate");
    if (t.text.rfind("ns:", 0) != 0) throw SyntaxError(t.pos, "ns: predicate");
    std::string pred = t.text.substr(3);
    std::size_t dots = std::count(pred.begin(), pred.end(), '.');
    bool empty_segment = pred.empty() || pred.front() == '.' || pred.back() == '.' ||
                         pred.find("..") != std::string::npos;
    if (dots < 1 || empty_segment) throw SyntaxError(t.pos, "dotted predicate");
    return pred;
  }

  Term parse_term() {
    const auto& t = next("term");
    const std::string& s = t.text;
    if (s.size() > 1 && s[0] == '?') return Term::variable(s);
    if (auto idx = entity_index(s)) return Term::entity(*idx);
    if (s == "[]") return Term::blank();
    if (s[0] == '"') return Term::string_literal(s);
    if (auto num = parse_number(s)) return Term::numeric(*num);
    if (s.rfind("ns:", 0) == 0 && s.size() > 3) return Term::constant(s.substr(3));
    throw SyntaxError(t.pos, "term");
  }

  Term parse_variable() {
    std::size_t pos = here();
    Term v = parse_term();
    if (!v.is_variable()) throw SyntaxError(pos, "variable");
    return v;
  }

  FilterClause parse_filter() {
    expect("(");
    FilterClause f;
    if (accept("not")) {
      expect("exists");
      expect("{");
      f.kind = FilterClause::Kind::NotExists;
      f.body = parse_list();
      expect("}");
      expect(")");
      return f;
    }
    if (!at_end() && peek().text.rfind("xsd:", 0) == 0) {
      f.cast = next("cast").text;
      expect("(");
      f.var = parse_variable();
      expect(")");
    } else {
      f.var = parse_variable();
    }
    const auto& op = next("comparison operator");
    if (op.text == "<" || op.text == ">") {
      f.kind = FilterClause::Kind::Comparison;
      f.op = op.text[0];
      const auto& num = next("number");
      auto value = parse_number(num.text);
      if (!value) throw SyntaxError(num.pos, "finite number");
      f.value = *value;
    } else if (op.text == "!=" && f.cast.empty()) {
      f.kind = FilterClause::Kind::Inequality;
      f.other = parse_term();
    } else {
      throw SyntaxError(op.pos, "'<', '>' or '!='");
    }
    expect(")");
    return f;
  }

  std::vector<Statement> parse_group(std::string& label) {
    expect("{");
    if (!at_end() && peek().text[0] == '#' && !entity_index(peek().text)) {
      const auto& c = next("comment");
      label = c.text.size() > 1 ? c.text.substr(1) : next("label").text;
    }
    auto list = parse_list();
    std::size_t pos = here();
    expect("}");
    if (list.empty()) throw SyntaxError(pos, "statement in union branch");
    return list;
  }

  UnionBlock parse_union() {
    UnionBlock u;
    std::size_t pos = here();
    do {
      std::string label;
      u.branches.push_back(parse_group(label));
      u.labels.push_back(label);
    } while (accept("union"));
    if (u.branches.size() < 2) throw SyntaxError(pos, "'union' after group");
    return u;
  }

  SortClause parse_sort() {
    expect("order");
    expect("by");
    SortClause s;
    if (accept("desc")) {
      s.direction = SortClause::Direction::Descending;
      expect("(");
      s.var = parse_variable();
      expect(")");
    } else if (accept("asc")) {
      expect("(");
      s.var = parse_variable();
      expect(")");
    } else {
      s.var = parse_variable();
    }
    expect("limit");
    const auto& n = next("limit value");
    auto value = parse_number(n.text);
    if (!value || *value < 1 || *value != std::floor(*value))
      throw SyntaxError(n.pos, "positive integer limit");
    s.limit = static_cast<int>(*value);
    return s;
  }

  std::size_t text_size_;
  std::vector<Token> toks_;
  std::size_t i_ = 0;
};

void check_bound(const std::vector<Statement>& list, const std::set<Term>& outer) {
  std::set<Term> bound = outer;
  for (const auto& t : collect_triples(list)) {
    if (t.subject.is_variable()) bound.insert(t.subject);
    if (t.object.is_variable()) bound.insert(t.object);
  }
  for (const auto& st : list) {
    if (st.is_filter()) {
      const auto& f = st.filter();
      if (f.kind == FilterClause::Kind::NotExists) {
        check_bound(f.body, bound);
        continue;
      }
      if (!bound.count(f.var)) fail(ErrorKind::UnboundVariable, f.var.text);
      if (f.kind == FilterClause::Kind::Inequality && f.other.is_variable() &&
          !bound.count(f.other))
        fail(ErrorKind::UnboundVariable, f.other.text);
    } else if (st.is_union()) {
      for (const auto& b : st.union_block().branches) check_bound(b, bound);
    }
  }
}

}  // namespace

LogicalForm parse_lf(std::string_view text) {
  Parser p(text);
  LogicalForm lf = p.parse_form();
  check_bound(lf.statements, {});
  if (lf.sort) {
    auto vars = collect_variables(lf.statements);
    if (!vars.count(lf.sort->var)) fail(ErrorKind::UnboundVariable, lf.sort->var.text);
  }
  return lf;
}

std::vector<Statement> parse_statements(std::string_view text) {
  Parser p(text);
  return p.parse_bare();
}

void collect_into(const std::vector<Statement>& list, std::vector<Triple>& out) {
  for (const auto& st : list) {
    if (st.is_triple()) {
      out.push_back(st.triple());
    } else if (st.is_union()) {
      for (const auto& b : st.union_block().branches) collect_into(b, out);
    }
  }
}

std::vector<Triple> collect_triples(const std::vector<Statement>& statements) {
  std::vector<Triple> out;
  collect_into(statements, out);
  return out;
}

std::set<Term> collect_variables(const std::vector<Statement>& statements) {
  std::set<Term> out;
  for (const auto& t : collect_triples(statements)) {
    if (t.subject.is_variable()) out.insert(t.subject);
    if (t.object.is_variable()) out.insert(t.object);
  }
  return out;
}

}  // namespace stepfix
