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

#include <random>

#include "fixtures.hpp"
#include "stepfix/corrector.hpp"
#include "stepfix/error.hpp"

using namespace stepfix;
using stepfix::testing::printed_examples;
using stepfix::testing::starter_corpus;

namespace {

ErrorKind kind_of(const std::function<void()>& fn) {
  try {
    fn();
  } catch (const Error& e) {
    return e.kind();
  }
  ADD_FAILURE() << "no error thrown";
  return ErrorKind::InvalidArgument;
}

DialogueState state_for(const stepfix::testing::PrintedExample& ex) {
  return make_state("q", parse_lf(ex.lf), ex.entities, starter_corpus());
}

bool matches_gold(const DialogueState& s, const LogicalForm& gold, const EntityMap& gold_entities) {
  return canonical_text(compile(s), &s.entities) == canonical_text(gold, &gold_entities);
}

// Applies the diff between two forms through the oracle, one op at a time.
DialogueState correct(const std::string& pred_lf, const EntityMap& pred_entities, const std::string& gold_lf,
                      const EntityMap& gold_entities) {
  const auto& corpus = starter_corpus();
  auto gold = decompose(parse_lf(gold_lf), corpus);
  auto s = make_state("q", parse_lf(pred_lf), pred_entities, corpus);
  OracleModel oracle(gold, gold_entities, corpus);
  auto script = diff_components(as_decomposition(s), s.entities, gold, gold_entities, corpus);
  for (const auto& op : script.ops) s = apply_op(s, op, oracle, corpus);
  return s;
}

}  // namespace

TEST(Feedback, RenderParseExamples) {
  EXPECT_EQ(render_op(EditOp::replace(2, "What?")), "replace question #2 with What?");
  EXPECT_EQ(render_op(EditOp::remove(3)), "delete question #3");
  EXPECT_EQ(render_op(EditOp::insert("Who?")), "insert question Who?");
  EXPECT_EQ(parse_feedback("  Replace Question #1 WITH a b  "), EditOp::replace(1, "a b"));
  EXPECT_EQ(parse_feedback("DELETE question #12"), EditOp::remove(12));
}

TEST(Feedback, ParseErrors) {
  EXPECT_EQ(kind_of([] { parse_feedback("delete question #x"); }), ErrorKind::BadIndex);
  EXPECT_EQ(kind_of([] { parse_feedback("delete question #0"); }), ErrorKind::BadIndex);
  EXPECT_EQ(kind_of([] { parse_feedback("delete question #"); }), ErrorKind::BadIndex);
  EXPECT_EQ(kind_of([] { parse_feedback("replace question #2 with  "); }), ErrorKind::UnrecognizedOperation);
  EXPECT_EQ(kind_of([] { parse_feedback("replace question #2 by x"); }), ErrorKind::UnrecognizedOperation);
  EXPECT_EQ(kind_of([] { parse_feedback("swap question #1"); }), ErrorKind::UnrecognizedOperation);
  EXPECT_EQ(kind_of([] { parse_feedback("insert question"); }), ErrorKind::UnrecognizedOperation);
}

TEST(Feedback, RandomRoundTrip) {
  std::mt19937 rng(7);
  const std::string alphabet = "abcXYZ ?#/()'0123456789";
  std::uniform_int_distribution<int> kind(0, 2), len(1, 40), ch(0, static_cast<int>(alphabet.size()) - 1);
  std::uniform_int_distribution<std::size_t> idx(1, 999);
  for (int i = 0; i < 200; ++i) {
    std::string q;
    for (int n = len(rng); n > 0; --n) q += alphabet[ch(rng)];
    while (!q.empty() && q.front() == ' ') q.erase(q.begin());
    while (!q.empty() && q.back() == ' ') q.pop_back();
    if (q.empty()) q = "x";
    EditOp op = kind(rng) == 0 ? EditOp::replace(idx(rng), q) : kind(rng) == 1 ? EditOp::remove(idx(rng))
                                                                               : EditOp::insert(q);
    EXPECT_EQ(parse_feedback(render_op(op)), op) << render_op(op);
  }
}

TEST(Compile, PrintedExamplesRoundTrip) {
  for (const auto& ex : printed_examples()) {
    auto s = state_for(ex);
    EXPECT_TRUE(em_equal(compile(s), parse_lf(ex.lf), &ex.entities)) << ex.name << "\n" << serialize(compile(s));
  }
}

TEST(Compile, EmptyScriptKeepsState) {
  for (const auto& ex : printed_examples()) {
    auto s = state_for(ex);
    auto gold = decompose(parse_lf(ex.lf), starter_corpus());
    EXPECT_TRUE(diff_components(as_decomposition(s), s.entities, gold, ex.entities, starter_corpus()).empty())
        << ex.name;
  }
}

TEST(Apply, DeleteLeavesDanglingInput) {
  auto s = state_for(printed_examples()[0]);
  TemplateInverseModel model(starter_corpus());
  auto next = apply_op(s, EditOp::remove(1), model, starter_corpus());
  ASSERT_EQ(next.steps.size(), 1u);
  ASSERT_EQ(next.history_lf.size(), 1u);
  EXPECT_TRUE(next.history_lf[0].empty());
  EXPECT_EQ(kind_of([&] { compile(next); }), ErrorKind::DisconnectedComponents);
  EXPECT_EQ(kind_of([&] { apply_op(next, EditOp::remove(1), model, starter_corpus()); }),
            ErrorKind::InvalidArgument);
  EXPECT_EQ(kind_of([&] { apply_op(s, EditOp::remove(3), model, starter_corpus()); }), ErrorKind::IndexOutOfRange);
}

TEST(Apply, ReplaceThroughTemplates) {
  const auto& ex = printed_examples()[0];
  auto s = state_for(ex);
  TemplateInverseModel model(starter_corpus());
  auto next = apply_op(s, EditOp::replace(2, "That entity is/are the country/countries where people speak what?"),
                       model, starter_corpus());
  auto lf = parse_lf(next.history_lf.back());
  EXPECT_NE(serialize(lf).find("location.country.languages_spoken"), std::string::npos);
  EXPECT_EQ(next.steps[1].templated_q, "That entity is/are the country/countries where people speak what?");
  EXPECT_EQ(next.history_q.back(), "replace question #2 with That entity is/are the country/countries where people speak what?");
  // The original input is untouched.
  EXPECT_EQ(s.steps[1].component.key, "location.country.official_language");
}

TEST(Apply, RejectedComponentIsNotChosenAgain) {
  auto s = state_for(printed_examples()[0]);
  TemplateInverseModel model(starter_corpus());
  const std::string q = "That entity is/are the country/countries where people speak what?";
  s = apply_op(s, EditOp::replace(2, q), model, starter_corpus());
  EXPECT_EQ(kind_of([&] { apply_op(s, EditOp::replace(2, q), model, starter_corpus()); }),
            ErrorKind::ResolutionFailed);
}

TEST(Apply, InsertFirstStep) {
  const auto& ex = printed_examples()[0];
  auto gold = parse_lf(ex.lf);
  auto s = correct("<sparql-header-1> ?c ns:location.country.official_language ?x .", {}, ex.lf, ex.entities);
  ASSERT_EQ(s.steps.size(), 2u);
  EXPECT_EQ(s.steps[0].component.key, "location.country.administrative_divisions");
  EXPECT_TRUE(matches_gold(s, gold, ex.entities)) << serialize(compile(s));
}

TEST(Apply, UnknownQuestionFails) {
  auto s = state_for(printed_examples()[0]);
  TemplateInverseModel model(starter_corpus());
  EXPECT_EQ(kind_of([&] { apply_op(s, EditOp::insert("Where is the moon?"), model, starter_corpus()); }),
            ErrorKind::ResolutionFailed);
}

TEST(InsertPosition, Rules) {
  auto s = state_for(printed_examples()[0]);
  const auto& c1 = s.steps[0].component;
  const auto& c2 = s.steps[1].component;
  EXPECT_EQ(insert_position({s.steps[1]}, c1), 0u);
  EXPECT_EQ(insert_position({s.steps[0]}, c2), 1u);
}

TEST(Diff, ComponentEdits) {
  const auto& corpus = starter_corpus();
  const auto& ex = printed_examples()[2];
  auto gold = decompose(parse_lf(ex.lf), corpus);
  auto pred = decompose(parse_lf("<sparql-header-2> #entity1# ns:people.person.places_lived ?y . "
                                 "?y ns:people.place_lived.location ?x . "
                                 "?x ns:location.country.currency_used #entity2# . "
                                 "?x ns:people.person.religion #entity3# ."),
                        corpus);
  EntityMap pe = ex.entities;
  pe[3] = {"Buddhism", "m.092bf5"};
  auto script = diff_components(pred, pe, gold, ex.entities, corpus);
  ASSERT_EQ(script.ops.size(), 2u);
  // Ties prefer a replace at the later position.
  EXPECT_EQ(script.ops[0], EditOp::remove(2));
  EXPECT_EQ(script.ops[1], EditOp::replace(2, ex.questions[1]));
}

TEST(Diff, SortChanges) {
  const auto& corpus = starter_corpus();
  const auto& ex = printed_examples()[4];
  auto gold = decompose(parse_lf(ex.lf), corpus);
  auto nosort = gold;
  nosort.sort.reset();
  auto desc = gold;
  desc.sort->direction = SortClause::Direction::Descending;
  EXPECT_EQ(diff_components(nosort, ex.entities, gold, ex.entities, corpus).ops,
            std::vector<EditOp>{EditOp::insert(ex.questions[2])});
  EXPECT_EQ(diff_components(desc, ex.entities, gold, ex.entities, corpus).ops,
            std::vector<EditOp>{EditOp::replace(3, ex.questions[2])});
  EXPECT_EQ(diff_components(gold, ex.entities, nosort, ex.entities, corpus).ops,
            std::vector<EditOp>{EditOp::remove(3)});
}

TEST(Diff, OracleRepairsSortEdits) {
  const auto& ex = printed_examples()[4];
  auto gold = parse_lf(ex.lf);
  std::string nosort = ex.lf.substr(0, ex.lf.find(" } order by"));
  auto s = correct(nosort, ex.entities, ex.lf, ex.entities);
  EXPECT_TRUE(matches_gold(s, gold, ex.entities)) << serialize(compile(s));
}

TEST(Diff, EntitiesCompareByIdentity) {
  const auto& corpus = starter_corpus();
  const auto& ex = printed_examples()[2];
  auto gold = decompose(parse_lf(ex.lf), corpus);
  EntityMap swapped{{1, ex.entities.at(2)}, {2, ex.entities.at(1)}};
  auto pred = decompose(parse_lf("<sparql-header-2> #entity2# ns:people.person.places_lived ?y . "
                                 "?y ns:people.place_lived.location ?x . ?x ns:location.country.capital #entity1# ."),
                        corpus);
  EXPECT_TRUE(diff_components(pred, swapped, gold, ex.entities, corpus).empty());
}
