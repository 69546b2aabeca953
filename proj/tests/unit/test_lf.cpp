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

#include <algorithm>
#include <numeric>

#include "fixtures.hpp"
#include "stepfix/error.hpp"
#include "stepfix/lf.hpp"

using namespace stepfix;
using stepfix::testing::printed_examples;

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

}  // namespace

TEST(ParseLf, CwqExampleStructure) {
  auto lf = parse_lf(printed_examples()[0].lf);
  EXPECT_EQ(lf.header, Header::H1);
  ASSERT_EQ(lf.statements.size(), 2u);
  const auto& t0 = lf.statements[0].triple();
  EXPECT_EQ(t0.subject, Term::variable("?c"));
  EXPECT_EQ(t0.predicate, "location.country.administrative_divisions");
  EXPECT_EQ(t0.object, Term::entity(1));
  EXPECT_EQ(lf.statements[1].triple().object, Term::variable("?x"));
  EXPECT_FALSE(lf.sort);
}

TEST(ParseLf, SuperlativeSortSuffix) {
  auto lf = parse_lf(printed_examples()[4].lf);
  EXPECT_EQ(lf.header, Header::H2);
  EXPECT_EQ(lf.statements.size(), 3u);
  ASSERT_TRUE(lf.sort);
  EXPECT_EQ(lf.sort->var, Term::variable("?num"));
  EXPECT_EQ(lf.sort->direction, SortClause::Direction::Ascending);
  EXPECT_EQ(lf.sort->limit, 1);
}

TEST(ParseLf, DescendingSort) {
  auto lf = parse_lf("<sparql-header-2> ?x ns:a.b ?num . } order by desc ( ?num ) limit 1");
  ASSERT_TRUE(lf.sort);
  EXPECT_EQ(lf.sort->direction, SortClause::Direction::Descending);
  EXPECT_EQ(parse_lf(serialize(lf)), lf);
}

TEST(ParseLf, UnionLabelsCaptured) {
  auto lf = parse_lf(printed_examples()[5].lf);
  ASSERT_TRUE(lf.statements[1].is_union());
  const auto& u = lf.statements[1].union_block();
  ASSERT_EQ(u.branches.size(), 4u);
  EXPECT_EQ(u.labels, (std::vector<std::string>{"parents", "children", "siblings", "spouse"}));
}

TEST(ParseLf, Errors) {
  EXPECT_EQ(kind_of([] { parse_lf(""); }), ErrorKind::SyntaxError);
  EXPECT_EQ(kind_of([] { parse_lf("<sparql-header-1> ?c location.country.capital ?x ."); }),
            ErrorKind::SyntaxError);
  EXPECT_EQ(kind_of([] { parse_lf("<sparql-header-1> ?c ns:capital ?x ."); }), ErrorKind::SyntaxError);
  EXPECT_EQ(kind_of([] { parse_lf("<sparql-header-1> 1 ns:a.b 2 ."); }), ErrorKind::SyntaxError);
  EXPECT_EQ(kind_of([] { parse_lf("<sparql-header-1> ?c ns:a.b ?x . filter ( ?z > 3 ) ."); }),
            ErrorKind::UnboundVariable);
  EXPECT_EQ(kind_of([] { parse_lf("<sparql-header-1> ?c ns:a.b ?x . } order by ?q limit 1"); }),
            ErrorKind::UnboundVariable);
}

TEST(ParseLf, SyntaxErrorCarriesPosition) {
  try {
    parse_lf("<sparql-header-1> ?c ns:a.b");
    FAIL();
  } catch (const SyntaxError& e) {
    EXPECT_GT(e.position(), 0u);
    EXPECT_FALSE(e.expected().empty());
  }
}

TEST(Serialize, CwqExampleIsByteExact) {
  const auto& text = printed_examples()[0].lf;
  EXPECT_EQ(serialize(parse_lf(text)), text);
}

TEST(Serialize, ComparisonFilterVerbatim) {
  auto lf = parse_lf(printed_examples()[3].lf);
  EXPECT_NE(serialize(lf).find("filter ( xsd:integer ( ?num ) > 590 ) ."), std::string::npos);
}

TEST(Serialize, UnionJoinedByUnionKeyword) {
  auto text = serialize(parse_lf(printed_examples()[5].lf));
  EXPECT_NE(text.find(" } union { "), std::string::npos);
}

TEST(RoundTrip, AllPrintedFixtures) {
  for (const auto& ex : printed_examples()) {
    auto lf = parse_lf(ex.lf);
    auto again = parse_lf(serialize(lf));
    EXPECT_EQ(again, lf) << ex.name;
    EXPECT_EQ(serialize(again), serialize(lf)) << ex.name;
  }
}

TEST(Canonicalize, Idempotent) {
  for (const auto& ex : printed_examples()) {
    auto once = canonicalize(parse_lf(ex.lf));
    EXPECT_EQ(canonicalize(once), once) << ex.name;
  }
}

TEST(Canonicalize, RenamingInvariance) {
  auto a = parse_lf(
      "<sparql-header-1> ?c ns:location.country.administrative_divisions #entity1# . "
      "?c ns:location.country.official_language ?x .");
  auto b = parse_lf(
      "<sparql-header-1> ?a ns:location.country.administrative_divisions #entity1# . "
      "?a ns:location.country.official_language ?x .");
  EXPECT_EQ(canonicalize(a), canonicalize(b));
  EXPECT_TRUE(em_equal(a, b));
}

// Every ordering of the top-level statements must give one canonical form.
TEST(Canonicalize, PermutationInvarianceBruteForce) {
  for (const auto& ex : printed_examples()) {
    auto lf = parse_lf(ex.lf);
    auto reference = serialize(canonicalize(lf));
    std::vector<std::size_t> order(lf.statements.size());
    std::iota(order.begin(), order.end(), 0);
    std::size_t seen = 0;
    do {
      LogicalForm shuffled = lf;
      for (std::size_t i = 0; i < order.size(); ++i) shuffled.statements[i] = lf.statements[order[i]];
      EXPECT_EQ(serialize(canonicalize(shuffled)), reference) << ex.name;
      ++seen;
    } while (std::next_permutation(order.begin(), order.end()));
    EXPECT_GT(seen, 0u);
  }
}

TEST(EmEqual, EquivalenceRelationOnFixtures) {
  std::vector<LogicalForm> forms;
  for (const auto& ex : printed_examples()) forms.push_back(parse_lf(ex.lf));
  forms.push_back(parse_lf(
      "<sparql-header-1> ?a ns:location.country.official_language ?x . "
      "?a ns:location.country.administrative_divisions #entity1# ."));
  for (const auto& a : forms) {
    EXPECT_TRUE(em_equal(a, a));
    for (const auto& b : forms) {
      EXPECT_EQ(em_equal(a, b), em_equal(b, a));
      EXPECT_EQ(em_equal(a, b), canonical_text(a) == canonical_text(b));
      for (const auto& c : forms)
        if (em_equal(a, b) && em_equal(b, c)) EXPECT_TRUE(em_equal(a, c));
    }
  }
  EXPECT_TRUE(em_equal(forms[0], forms.back()));
}

TEST(EmEqual, EntityIdentityUnderMap) {
  auto a = parse_lf("<sparql-header-1> ?x ns:a.b #entity1# . ?x ns:c.d #entity2# .");
  auto b = parse_lf("<sparql-header-1> ?x ns:a.b #entity1# . ?x ns:c.d #entity1# .");
  EntityMap same{{1, {"Sam", "m.1"}}, {2, {"Sam", "m.1"}}};
  EXPECT_FALSE(em_equal(a, b));
  EXPECT_TRUE(em_equal(a, b, &same));
}

TEST(AnswerVariable, PrefersX) {
  EXPECT_EQ(answer_variable(parse_lf(printed_examples()[0].lf)), Term::variable("?x"));
  EXPECT_EQ(answer_variable(parse_lf("<sparql-header-1> #entity1# ns:a.b ?q .")), Term::variable("?q"));
}

TEST(Delexicalize, SingleSubstitution) {
  auto [text, map] = delexicalize("?c ns:location.country.capital ns:m.0d05w3 .", {{"Egypt", "m.0d05w3"}});
  EXPECT_EQ(text, "?c ns:location.country.capital #entity1# .");
  ASSERT_EQ(map.size(), 1u);
  EXPECT_EQ(map.at(1).surface, "Egypt");
  EXPECT_EQ(map.at(1).kb_id, "m.0d05w3");
}

TEST(Delexicalize, OrderedByLfPosition) {
  auto [text, map] = delexicalize("ns:m.b ns:p.q ?x . ?x ns:p.r ns:m.a .", {{"A", "m.a"}, {"B", "m.b"}});
  EXPECT_EQ(text, "#entity1# ns:p.q ?x . ?x ns:p.r #entity2# .");
  EXPECT_EQ(map.at(1).surface, "B");
  EXPECT_EQ(map.at(2).surface, "A");
}

TEST(Delexicalize, MissingIdFails) {
  EXPECT_EQ(kind_of([] { delexicalize("?x ns:a.b ?y .", {{"E", "m.1"}}); }), ErrorKind::EntityNotFound);
}

TEST(Delexicalize, InversePair) {
  std::string original = "ns:m.b ns:p.q ?x . ?x ns:p.r ns:m.a .";
  auto [text, map] = delexicalize(original, {{"A", "m.a"}, {"B", "m.b"}});
  EXPECT_EQ(relexicalize(text, map, RelexMode::KbId), original);
}

TEST(Relexicalize, SurfaceAndErrors) {
  EntityMap map{{1, {"Al Sharqia Governorate", "m.02r9w1"}}};
  EXPECT_EQ(relexicalize("the country/countries that contain(s) #entity1#?", map),
            "the country/countries that contain(s) Al Sharqia Governorate?");
  EXPECT_EQ(relexicalize("no placeholders", map), "no placeholders");
  EXPECT_EQ(kind_of([&] { relexicalize("#entity2#", map); }), ErrorKind::MissingEntity);
}
