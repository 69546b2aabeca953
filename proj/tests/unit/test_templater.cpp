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

#include <gtest/gtest.h>

#include <regex>

#include "fixtures.hpp"
#include "oracles.hpp"
#include "stepfix/decomposer.hpp"
#include "stepfix/error.hpp"
#include "stepfix/templater.hpp"

using namespace stepfix;
using stepfix::testing::printed_examples;
using stepfix::testing::starter_corpus;

namespace {

Decomposition decompose_text(const std::string& text) {
  return decompose(parse_lf(text), starter_corpus());
}

ErrorKind kind_of(const std::function<void()>& fn) {
  try {
    fn();
  } catch (const Error& e) {
    return e.kind();
  }
  ADD_FAILURE() << "no error thrown";
  return ErrorKind::InvalidArgument;
}

std::multiset<Triple> all_triples(const std::vector<Statement>& stmts) {
  auto list = collect_triples(stmts);
  return {list.begin(), list.end()};
}

}  // namespace

TEST(Decompose, ZepposComposition) {
  auto d = decompose_text(printed_examples()[1].lf);
  EXPECT_EQ(d.qtype, QType::Composition);
  ASSERT_EQ(d.components.size(), 2u);
  const auto& c1 = d.components[0];
  EXPECT_EQ(c1.kind, ComponentKind::Cvt);
  EXPECT_EQ(c1.key, "organization.organization.leadership|organization.leadership.person");
  EXPECT_EQ(c1.input, Term::entity(1));
  EXPECT_EQ(c1.output, Term::variable("?c"));
  const auto& c2 = d.components[1];
  EXPECT_EQ(c2.kind, ComponentKind::Single);
  EXPECT_EQ(c2.key, "education.educational_institution.mascot");
  EXPECT_EQ(c2.input, Term::variable("?c"));
  EXPECT_EQ(c2.output, Term::variable("?x"));
}

TEST(Decompose, CaribbeanRestrictionAndFilter) {
  auto d = decompose_text(printed_examples()[3].lf);
  EXPECT_EQ(d.qtype, QType::Comparative);
  ASSERT_EQ(d.components.size(), 2u);
  ASSERT_TRUE(d.components[0].restriction);
  EXPECT_EQ(d.components[0].restriction->predicate, "common.topic.notable_types");
  EXPECT_EQ(d.components[0].restriction->object, Term::entity(2));
  ASSERT_EQ(d.components[1].filters.size(), 1u);
  EXPECT_EQ(d.components[1].filters[0].value, 590);
  EXPECT_EQ(d.components[1].value_var, Term::variable("?num"));
}

TEST(Decompose, KennedyUnionThenCvt) {
  auto d = decompose_text(printed_examples()[5].lf);
  ASSERT_EQ(d.components.size(), 2u);
  EXPECT_EQ(d.components[0].kind, ComponentKind::Union);
  EXPECT_EQ(d.components[0].union_block->branches.size(), 4u);
  EXPECT_EQ(d.components[1].kind, ComponentKind::Cvt);
  EXPECT_EQ(d.components[1].key,
            "royalty.chivalric_order_member.belongs_to_order|royalty.chivalric_order_membership.order");
}

TEST(Decompose, ClassifiesPrintedTypes) {
  for (const auto& ex : printed_examples())
    EXPECT_EQ(to_string(decompose_text(ex.lf).qtype), ex.qtype) << ex.name;
}

TEST(Decompose, NoTripleLostOrDuplicated) {
  for (const auto& ex : printed_examples()) {
    auto lf = parse_lf(ex.lf);
    auto d = decompose(lf, starter_corpus());
    std::vector<Statement> regrouped;
    for (const auto& c : d.components) {
      auto s = component_statements(c);
      regrouped.insert(regrouped.end(), s.begin(), s.end());
    }
    EXPECT_EQ(all_triples(regrouped), all_triples(lf.statements)) << ex.name;
  }
}

TEST(Decompose, SuperlativeHasSortStep) {
  auto d = decompose_text(printed_examples()[4].lf);
  ASSERT_TRUE(d.sort);
  EXPECT_EQ(step_count(d), 3u);
}

TEST(Decompose, Errors) {
  EXPECT_EQ(kind_of([] { decompose_text("<sparql-header-1> ?x ns:no.such.pred #entity1# ."); }),
            ErrorKind::UnknownPredicate);
  EXPECT_EQ(kind_of([] {
              decompose_text(
                  "<sparql-header-1> #entity1# ns:people.person.places_lived ?y . "
                  "?y ns:people.place_lived.location ?x . ?y ns:location.country.capital #entity2# .");
            }),
            ErrorKind::AmbiguousGrouping);
}

TEST(Render, PrintedExamplesByteExact) {
  for (const auto& ex : printed_examples()) {
    auto d = decompose_text(ex.lf);
    auto qs = render_all(d, ex.entities, starter_corpus());
    ASSERT_EQ(qs.size(), ex.questions.size()) << ex.name;
    for (std::size_t i = 0; i < qs.size(); ++i) {
      EXPECT_EQ(qs[i].text, ex.questions[i]) << ex.name << " step " << i + 1;
      EXPECT_EQ(qs[i].step_index, i + 1);
    }
  }
}

TEST(Render, NoSlotTokensRemain) {
  for (const auto& ex : printed_examples())
    for (const auto& q : render_all(decompose_text(ex.lf), ex.entities, starter_corpus())) {
      EXPECT_EQ(q.text.find('<'), std::string::npos) << q.text;
      if (q.text.rfind("Of these,", 0) != 0) EXPECT_EQ(q.text.back(), '?');
    }
}

TEST(Render, BracketedSurfaceNormalized) {
  auto d = decompose_text(printed_examples()[0].lf);
  EntityMap map{{1, {"[Al Sharqia Governorate]", "m.02r9w1"}}};
  EXPECT_EQ(render_step(d, 0, map, starter_corpus()).text, printed_examples()[0].questions[0]);
}

TEST(Render, SingleComponentGivesOneQuestion) {
  auto d = decompose_text("<sparql-header-1> ?x ns:location.country.capital #entity1# .");
  auto qs = render_all(d, {{1, {"Cairo", "m.01w2v"}}}, starter_corpus());
  ASSERT_EQ(qs.size(), 1u);
  EXPECT_EQ(qs[0].text, "What is/are the location with the capital city named Cairo?");
}

TEST(Render, MissingEntityReported) {
  auto d = decompose_text(printed_examples()[0].lf);
  EXPECT_EQ(kind_of([&] { render_all(d, {}, starter_corpus()); }), ErrorKind::MissingEntity);
}

TEST(Render, SortSentenceTable) {
  SortClause asc{Term::variable("?num"), SortClause::Direction::Ascending, 1};
  SortClause desc{Term::variable("?num"), SortClause::Direction::Descending, 1};
  EXPECT_EQ(sort_sentence(asc, "sports.pro_athlete.career_start"),
            "Of these, which is the entity associated with the earliest date?");
  EXPECT_EQ(sort_sentence(desc, "film.film.release_date_s"),
            "Of these, which is the entity associated with the latest date?");
  EXPECT_EQ(sort_sentence(asc, "location.location.area"),
            "Of these, which is the entity associated with the smallest value?");
  EXPECT_EQ(sort_sentence(desc, "location.location.area"),
            "Of these, which is the entity associated with the largest value?");
}

TEST(Render, RestrictionWithoutSlotIsAppended) {
  auto lf = parse_lf(
      "<sparql-header-1> #entity1# ns:location.country.capital ?x . "
      "?x ns:common.topic.notable_types #entity2# .");
  auto d = decompose(lf, starter_corpus());
  auto q = render_step(d, 0, {{1, {"Cairo", ""}}, {2, {"city", ""}}}, starter_corpus());
  EXPECT_EQ(q.text, "Cairo is/are the location with the capital city named what (city)?");
}

TEST(Invert, CwqFirstQuestion) {
  EntityMap map = printed_examples()[0].entities;
  InvertContext ctx{QType::Composition, 0, std::nullopt, std::nullopt, &map};
  auto cands = invert(printed_examples()[0].questions[0], ctx, starter_corpus());
  ASSERT_FALSE(cands.empty());
  EXPECT_EQ(cands[0].component.key, "location.country.administrative_divisions");
  EXPECT_EQ(cands[0].component.input, Term::entity(1));
  EXPECT_TRUE(cands[0].new_entities.empty());
}

TEST(Invert, UnknownSurfaceBecomesNewEntity) {
  InvertContext ctx;
  auto cands = invert("What is/are the location with the capital city named Cairo?", ctx, starter_corpus());
  ASSERT_FALSE(cands.empty());
  ASSERT_EQ(cands[0].new_entities.size(), 1u);
  EXPECT_EQ(cands[0].new_entities.begin()->second.surface, "Cairo");
}

TEST(Invert, Gibberish) {
  InvertContext ctx;
  EXPECT_EQ(kind_of([&] { invert("gibberish text?", ctx, starter_corpus()); }), ErrorKind::NoTemplateMatch);
  EXPECT_EQ(kind_of([&] { invert(printed_examples()[4].questions[2], ctx, starter_corpus()); }),
            ErrorKind::NoTemplateMatch);
}

// Rendering then inverting every printed step gives back the component.
TEST(Invert, RoundTripOnPrintedSteps) {
  for (const auto& ex : printed_examples()) {
    auto d = decompose_text(ex.lf);
    for (std::size_t i = 0; i < d.components.size(); ++i) {
      auto text = render_step(d, i, ex.entities, starter_corpus()).text;
      InvertContext ctx{d.qtype, i, std::nullopt, d.components[i].output, &ex.entities};
      if (i > 0) ctx.upstream_var = d.components[i - 1].output;
      auto cands = invert(text, ctx, starter_corpus());
      ASSERT_FALSE(cands.empty()) << text;
      EXPECT_EQ(component_key(cands[0].component, &ex.entities),
                component_key(d.components[i], &ex.entities))
          << ex.name << " step " << i + 1 << ": " << text;
    }
  }
}

// Every entry whose text no other entry shares renders to a question that
// inverts back to that entry first.
TEST(Invert, RoundTripOnEveryUniqueCorpusEntry) {
  const auto& corpus = starter_corpus();
  std::set<std::string> shared;
  for (const auto& group : corpus.lint()) shared.insert(group.begin(), group.end());
  EntityMap entities{{1, {"Alpha Centauri", "m.0test"}}};
  std::size_t checked = 0;
  for (const auto& [key, entry] : corpus.entries()) {
    if (shared.count(key) || entry.kind == EntryKind::Restriction) continue;
    for (bool chained : {false, true}) {
      std::vector<Statement> stmts;
      if (entry.kind == EntryKind::Union) {
        if (chained) continue;
        auto body = serialize(corpus.union_body(entry));
        stmts = parse_statements(std::regex_replace(body, std::regex(R"(\?out\b)"), "?x"));
      } else {
        stmts = parse_statements(stepfix::testing::entry_statements(entry, chained));
      }
      std::optional<Term> upstream;
      if (chained) upstream = Term::variable("?c");
      Decomposition d;
      if (chained) {
        d.components.push_back(
            component_from_statements(parse_statements("?c ns:location.country.capital #entity1# ."), corpus));
      }
      d.components.push_back(component_from_statements(stmts, corpus, upstream));
      ASSERT_EQ(d.components.back().key, key);
      std::size_t index = d.components.size() - 1;
      auto text = render_step(d, index, entities, corpus).text;
      InvertContext ctx{QType::Composition, index, upstream, Term::variable("?x"), &entities};
      auto cands = invert(text, ctx, corpus);
      ASSERT_FALSE(cands.empty()) << text;
      EXPECT_EQ(component_key(cands[0].component, &entities), component_key(d.components.back(), &entities))
          << key << (chained ? " (chained)" : "") << ": " << text;
      ++checked;
    }
  }
  EXPECT_GE(checked, 2 * (corpus.entries().size() - shared.size()) - 6);
}
