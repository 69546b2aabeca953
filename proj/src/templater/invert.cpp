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
#include <functional>

#include "stepfix/error.hpp"
#include "stepfix/templater.hpp"

namespace stepfix {
namespace {

constexpr std::string_view kDefaultWh = "What is/are";
constexpr std::string_view kOfWhich = "Of which, ";
constexpr std::string_view kThatEntity = "That entity is/are ";
constexpr std::string_view kTheseEntities = "These entities are ";
constexpr std::string_view kCopula = " is/are ";
constexpr std::string_view kSortLead = "Of these, which is the entity associated with";

// Who the described end of the relation is, judging by the question prefix.
enum class Lead { Named, Ask, OfWhich, ThatEntity, These };

struct Reading {
  Lead lead;
  std::string wh;       // Ask / OfWhich
  std::string surface;  // Named
  std::string rest;     // text after the prefix, without the trailing '?'
};

// A template variant is a sequence of literal pieces and captures.
struct Piece {
  bool capture = false;
  std::string text;  // literal text, or capture name ("PH" / "MINI")
};

struct Variant {
  std::vector<Piece> pieces;
  const MiniTemplate* mini = nullptr;
  std::size_t literal_chars = 0;
};

std::string lower_first(std::string s) {
  if (!s.empty()) s[0] = static_cast<char>(std::tolower(static_cast<unsigned char>(s[0])));
  return s;
}

bool iequal_prefix(std::string_view text, std::string_view prefix) {
  if (text.size() < prefix.size()) return false;
  for (std::size_t i = 0; i < prefix.size(); ++i)
    if (std::tolower(static_cast<unsigned char>(text[i])) !=
        std::tolower(static_cast<unsigned char>(prefix[i])))
      return false;
  return true;
}

void append_pieces(std::vector<Piece>& out, std::string_view text, std::string_view slot,
                   const std::string& name) {
  std::size_t start = 0;
  while (true) {
    auto pos = text.find(slot, start);
    std::string lit(text.substr(start, pos == std::string_view::npos ? pos : pos - start));
    if (!lit.empty()) {
      if (!out.empty() && !out.back().capture) {
        out.back().text += lit;
      } else {
        out.push_back({false, lit});
      }
    }
    if (pos == std::string_view::npos) break;
    out.push_back({true, name});
    start = pos + slot.size();
  }
}

std::vector<Piece> split_template(std::string_view text, const MiniTemplate* mini) {
  std::vector<Piece> out;
  auto rpos = text.find(kRestrictionSlot);
  if (rpos == std::string_view::npos) {
    append_pieces(out, text, kSlot, "PH");
    if (mini) {
      append_pieces(out, " (", kSlot, "PH");
      append_pieces(out, mini->pattern, kSlot, "MINI");
      append_pieces(out, ")", kSlot, "PH");
    }
    return out;
  }
  append_pieces(out, text.substr(0, rpos), kSlot, "PH");
  if (mini) append_pieces(out, mini->pattern, kSlot, "MINI");
  append_pieces(out, text.substr(rpos + kRestrictionSlot.size()), kSlot, "PH");
  return out;
}

std::vector<Variant> variants_of(const TemplateEntry& entry, const TemplateCorpus& corpus) {
  std::vector<Variant> out;
  std::string bare = entry.text;
  for (std::string_view gap : {" (<RSTR>)", " <RSTR>", "<RSTR>"}) {
    auto pos = bare.find(gap);
    if (pos != std::string::npos) {
      bare.erase(pos, gap.size());
      break;
    }
  }
  out.push_back({split_template(bare, nullptr), nullptr, 0});
  for (const auto& [_, mini] : corpus.minis()) out.push_back({split_template(entry.text, &mini), &mini, 0});
  for (auto& v : out)
    for (const auto& p : v.pieces)
      if (!p.capture) v.literal_chars += p.text.size();
  return out;
}

using Captures = std::map<std::string, std::string>;

void match(const std::vector<Piece>& pieces, std::size_t k, std::string_view text, std::size_t pos,
           Captures& caps, std::vector<Captures>& results) {
  if (k == pieces.size()) {
    if (pos == text.size()) results.push_back(caps);
    return;
  }
  const Piece& p = pieces[k];
  if (!p.capture) {
    if (text.compare(pos, p.text.size(), p.text) == 0)
      match(pieces, k + 1, text, pos + p.text.size(), caps, results);
    return;
  }
  for (std::size_t end = pos + 1; end <= text.size(); ++end) {
    if (k + 1 < pieces.size() && !pieces[k + 1].capture &&
        text.compare(end, pieces[k + 1].text.size(), pieces[k + 1].text) != 0)
      continue;
    caps[p.text] = std::string(text.substr(pos, end - pos));
    match(pieces, k + 1, text, end, caps, results);
  }
  caps.erase(p.text);
}

std::vector<std::string> wh_forms(const TemplateCorpus& corpus) {
  std::vector<std::string> forms{std::string(kDefaultWh)};
  for (const auto& [_, e] : corpus.entries())
    if (!e.wh.empty() && std::find(forms.begin(), forms.end(), e.wh) == forms.end())
      forms.push_back(e.wh);
  return forms;
}

std::vector<Reading> readings(std::string_view q, const TemplateCorpus& corpus) {
  std::vector<Reading> out;
  if (q.empty() || q.back() != '?') return out;
  q.remove_suffix(1);
  auto forms = wh_forms(corpus);
  for (const auto& wh : forms) {
    std::string of_which = std::string(kOfWhich) + lower_first(wh) + " ";
    if (iequal_prefix(q, of_which))
      out.push_back({Lead::OfWhich, wh, "", std::string(q.substr(of_which.size()))});
    std::string ask = wh + " ";
    if (iequal_prefix(q, ask)) out.push_back({Lead::Ask, wh, "", std::string(q.substr(ask.size()))});
  }
  if (iequal_prefix(q, kThatEntity))
    out.push_back({Lead::ThatEntity, "", "", std::string(q.substr(kThatEntity.size()))});
  if (iequal_prefix(q, kTheseEntities))
    out.push_back({Lead::These, "", "", std::string(q.substr(kTheseEntities.size()))});
  if (out.empty()) {
    for (auto pos = q.find(kCopula); pos != std::string_view::npos; pos = q.find(kCopula, pos + 1))
      if (pos > 0)
        out.push_back({Lead::Named, "", std::string(q.substr(0, pos)),
                       std::string(q.substr(pos + kCopula.size()))});
  }
  return out;
}

struct Comparison {
  char op;
  double value;
};

std::optional<Comparison> parse_comparison(std::string_view fill) {
  for (auto [lead, op] : {std::pair{std::string_view("greater than "), '>'},
                          std::pair{std::string_view("less than "), '<'}}) {
    if (fill.rfind(lead, 0) != 0) continue;
    auto num = fill.substr(lead.size());
    double v = 0;
    auto [p, ec] = std::from_chars(num.data(), num.data() + num.size(), v);
    if (ec == std::errc() && p == num.data() + num.size()) return Comparison{op, v};
  }
  return std::nullopt;
}

class Builder {
 public:
  explicit Builder(const InvertContext& ctx) : ctx_(ctx) {
    if (ctx.upstream_var) taken_.insert(*ctx.upstream_var);
    if (ctx.entities)
      for (const auto& [i, _] : *ctx.entities) next_ = std::max(next_, i + 1);
  }

  Term entity(const std::string& surface) {
    if (ctx_.entities)
      if (auto i = find_entity(*ctx_.entities, surface)) return Term::entity(*i);
    if (auto i = find_entity(fresh_, surface)) return Term::entity(*i);
    int index = next_++;
    fresh_[index] = Entity{surface, ""};
    return Term::entity(index);
  }

  Term fresh(const std::string& stem) {
    Term t = Term::variable(stem);
    for (int n = 2; taken_.count(t); ++n) t = Term::variable(stem + std::to_string(n));
    taken_.insert(t);
    return t;
  }

  Term output() {
    if (ctx_.output_var && !taken_.count(*ctx_.output_var)) {
      taken_.insert(*ctx_.output_var);
      return *ctx_.output_var;
    }
    return fresh("?x");
  }

  // Replaces constants naming a known entity by its placeholder.
  void ground_back(Term& t) const {
    if (t.kind != Term::Kind::Constant || !ctx_.entities) return;
    for (const auto& [i, e] : *ctx_.entities)
      if (e.kb_id == t.text) {
        t = Term::entity(i);
        return;
      }
  }

  const EntityMap& new_entities() const { return fresh_; }

 private:
  const InvertContext& ctx_;
  std::set<Term> taken_;
  EntityMap fresh_;
  int next_ = 1;
};

void rewrite(std::vector<Statement>& list, const std::function<void(Term&)>& fn) {
  for (auto& st : list) {
    if (auto* t = std::get_if<Triple>(&st.node)) {
      fn(t->subject);
      fn(t->object);
    } else if (auto* f = std::get_if<FilterClause>(&st.node)) {
      fn(f->var);
      if (f->kind == FilterClause::Kind::Inequality) fn(f->other);
      rewrite(f->body, fn);
    } else if (auto* u = std::get_if<UnionBlock>(&st.node)) {
      for (auto& b : u->branches) rewrite(b, fn);
    }
  }
}

std::optional<Candidate> build(const TemplateEntry& entry, const Variant& variant,
                               const Reading& reading, const Captures& caps,
                               const InvertContext& ctx, const TemplateCorpus& corpus) {
  Builder b(ctx);
  const std::string& fill = caps.at("PH");
  auto cmp = parse_comparison(fill);
  bool open = fill == "what";
  bool upstream_ref = fill == "that entity";
  const auto& up = ctx.upstream_var;

  Term described;
  Term slot;
  bool value_slot = false;
  switch (reading.lead) {
    case Lead::Named:
      if (!open && !upstream_ref) return std::nullopt;
      described = b.entity(reading.surface);
      break;
    case Lead::Ask:
      if (open) return std::nullopt;
      described = cmp && up ? *up : b.output();
      break;
    case Lead::OfWhich:
      if (open) return std::nullopt;
      described = up ? *up : b.output();
      break;
    case Lead::ThatEntity:
      if (!up || upstream_ref) return std::nullopt;
      described = *up;
      break;
    case Lead::These:
      if (!up || !open) return std::nullopt;
      described = *up;
      value_slot = true;
      break;
  }
  std::optional<FilterClause> filter;
  if (cmp) {
    if (reading.lead != Lead::Ask && reading.lead != Lead::OfWhich) return std::nullopt;
    slot = b.fresh("?num");
    FilterClause f;
    f.kind = FilterClause::Kind::Comparison;
    f.var = slot;
    f.op = cmp->op;
    f.value = cmp->value;
    f.cast = cmp->value == static_cast<double>(static_cast<long long>(cmp->value)) ? "xsd:integer"
                                                                                  : "xsd:float";
    filter = f;
  } else if (value_slot) {
    slot = b.fresh("?num");
  } else if (open) {
    slot = b.output();
  } else if (upstream_ref) {
    if (!up || described == *up) return std::nullopt;
    slot = *up;
  } else {
    if (described.is_grounded()) return std::nullopt;
    slot = b.entity(fill);
  }

  bool subject_side = entry.side == AnswerSide::Subject;
  Term s = subject_side ? described : slot;
  Term o = subject_side ? slot : described;

  std::vector<Statement> stmts;
  switch (entry.kind) {
    case EntryKind::Single:
      stmts.push_back(Statement{Triple{s, entry.key, o}});
      break;
    case EntryKind::Cvt: {
      auto bar = entry.key.find('|');
      Term k = b.fresh("?k");
      stmts.push_back(Statement{Triple{s, entry.key.substr(0, bar), k}});
      stmts.push_back(Statement{Triple{k, entry.key.substr(bar + 1), o}});
      break;
    }
    case EntryKind::Union: {
      stmts = corpus.union_body(entry);
      std::map<Term, Term> internal;
      rewrite(stmts, [&](Term& t) {
        if (t == Term::entity(1)) {
          t = s;
        } else if (t == Term::variable("?out")) {
          t = o;
        } else if (t.is_variable()) {
          auto it = internal.find(t);
          if (it == internal.end()) it = internal.emplace(t, b.fresh(t.text)).first;
          t = it->second;
        } else {
          b.ground_back(t);
        }
      });
      break;
    }
    case EntryKind::Restriction:
      return std::nullopt;
  }
  if (variant.mini) {
    Term host = !o.is_grounded() && o != described && !value_slot ? o : described;
    if (!host.is_variable()) host = s.is_variable() ? s : o;
    stmts.push_back(Statement{Triple{host, variant.mini->predicate, b.entity(caps.at("MINI"))}});
  }
  if (filter) stmts.push_back(Statement{*filter});

  Candidate c;
  try {
    c.component = component_from_statements(stmts, corpus, up);
  } catch (const Error&) {
    return std::nullopt;
  }
  if (value_slot) {
    c.component.value_var = slot;
    c.component.input = described;
    c.component.output = described;
  }
  c.new_entities = b.new_entities();
  c.specificity = variant.literal_chars;
  c.entry_key = entry.key;
  return c;
}

}  // namespace

std::vector<Candidate> invert(std::string_view question, const InvertContext& ctx,
                              const TemplateCorpus& corpus) {
  std::string q(question);
  while (!q.empty() && std::isspace(static_cast<unsigned char>(q.back()))) q.pop_back();
  if (iequal_prefix(q, kSortLead))
    fail(ErrorKind::NoTemplateMatch, "sort sentences do not name a relation");

  std::vector<Candidate> found;
  for (const auto& reading : readings(q, corpus)) {
    for (const auto& [key, entry] : corpus.entries()) {
      if (reading.lead == Lead::Ask || reading.lead == Lead::OfWhich) {
        std::string wh = entry.wh.empty() ? std::string(kDefaultWh) : entry.wh;
        if (wh != reading.wh) continue;
      }
      for (const auto& variant : variants_of(entry, corpus)) {
        Captures caps;
        std::vector<Captures> matches;
        match(variant.pieces, 0, reading.rest, 0, caps, matches);
        for (const auto& m : matches)
          if (auto c = build(entry, variant, reading, m, ctx, corpus)) found.push_back(std::move(*c));
      }
    }
  }
  if (found.empty()) fail(ErrorKind::NoTemplateMatch, "no template matches: " + q);

  std::stable_sort(found.begin(), found.end(), [](const Candidate& a, const Candidate& b) {
    if (a.specificity != b.specificity) return a.specificity > b.specificity;
    return a.entry_key < b.entry_key;
  });
  std::vector<Candidate> out;
  std::set<std::string> seen;
  for (auto& c : found) {
    EntityMap merged = ctx.entities ? *ctx.entities : EntityMap{};
    merged.insert(c.new_entities.begin(), c.new_entities.end());
    if (seen.insert(component_key(c.component, &merged)).second) out.push_back(std::move(c));
  }
  return out;
}

}  // namespace stepfix
