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

#ifndef STEPFIX_TESTS_FIXTURES_HPP
#define STEPFIX_TESTS_FIXTURES_HPP

#include <string>
#include <vector>

#include "stepfix/corpus.hpp"
#include "stepfix/lf.hpp"

namespace stepfix::testing {

struct PrintedExample {
  std::string name;
  std::string lf;
  EntityMap entities;
  std::string qtype;
  std::vector<std::string> questions;
};

inline std::string data_path(const std::string& rel) { return std::string(STEPFIX_DATA_DIR) + "/" + rel; }
inline std::string test_data_path(const std::string& rel) {
  return std::string(STEPFIX_TEST_DATA_DIR) + "/" + rel;
}

inline const TemplateCorpus& starter_corpus() {
  static const TemplateCorpus corpus = TemplateCorpus::load(data_path("corpus.tsv"));
  return corpus;
}

inline const std::vector<PrintedExample>& printed_examples() {
  static const std::vector<PrintedExample> examples = {
      {"cwq",
       "<sparql-header-1> ?c ns:location.country.administrative_divisions #entity1# . "
       "?c ns:location.country.official_language ?x .",
       {{1, {"Al Sharqia Governorate", "m.02r9w1"}}},
       "composition",
       {"What is/are the country/countries that contain(s) Al Sharqia Governorate?",
        "That entity is/are the country/countries whose official language is what?"}},
      {"zeppos",
       "<sparql-header-1> ?c ns:organization.organization.leadership ?k . "
       "?k ns:organization.leadership.person #entity1# . "
       "?c ns:education.educational_institution.mascot ?x .",
       {{1, {"Nicholas S. Zeppos", "m.0bwfn8p"}}},
       "composition",
       {"What is/are the organization whose leadership includes a person named Nicholas S. Zeppos?",
        "That entity is/are the educational institution with the mascot what?"}},
      {"sam_shepard",
       "<sparql-header-2> #entity1# ns:people.person.places_lived ?y . "
       "?y ns:people.place_lived.location ?x . ?x ns:location.country.capital #entity2# .",
       {{1, {"Sam Shepard", "m.017r13"}}, {2, {"Hagåtña", "m.0gq4j"}}},
       "conjunction",
       {"Sam Shepard is/are the person(s) who lived in what?",
        "Of which, what is/are the location with the capital city named Hagåtña?"}},
      {"caribbean",
       "<sparql-header-2> #entity1# ns:location.location.contains ?x . "
       "?x ns:common.topic.notable_types #entity2# . ?x ns:location.country.calling_code ?num . "
       "filter ( xsd:integer ( ?num ) > 590 ) .",
       {{1, {"Caribbean", "m.0261m"}}, {2, {"country", "m.01mp"}}},
       "comparative",
       {"Caribbean is/are the location(s) containing what (country)?",
        "Of which, what is/are the country/countries whose calling code is/are greater than 590?"}},
      {"cleveland_browns",
       "<sparql-header-2> #entity1# ns:sports.professional_sports_team.draft_picks ?y . "
       "?y ns:sports.sports_league_draft_pick.player ?x . ?x ns:sports.pro_athlete.career_start ?num . "
       "} order by ?num limit 1",
       {{1, {"Cleveland Browns", "m.0cnk2q"}}},
       "superlative",
       {"Cleveland Browns is/are the team(s) that drafted the athlete(s) what?",
        "These entities are the pro athlete(s) who started their career(s) in what?",
        "Of these, which is the entity associated with the earliest date?"}},
      {"kennedy",
       "<sparql-header-2> filter ( ?x != #entity1# ) "
       "{ # parents #entity2# ns:people.person.parents ?x . } union "
       "{ # children #entity3# ns:people.person.children ?x . } union "
       "{ # siblings #entity4# ns:people.person.sibling_s ?y . ?y ns:people.sibling_relationship.sibling ?x . } union "
       "{ # spouse #entity5# ns:people.person.spouse_s ?y . ?y ns:people.marriage.spouse ?x . "
       "?y ns:people.marriage.type_of_union #entity6# . filter ( not exists { ?y ns:people.marriage.to [] } ) } "
       "?x ns:royalty.chivalric_order_member.belongs_to_order ?c . "
       "?c ns:royalty.chivalric_order_membership.order #entity7# .",
       {{1, {"John F. Kennedy", "m.0d3k14"}},
        {2, {"John F. Kennedy", "m.0d3k14"}},
        {3, {"John F. Kennedy", "m.0d3k14"}},
        {4, {"John F. Kennedy", "m.0d3k14"}},
        {5, {"John F. Kennedy", "m.0d3k14"}},
        {6, {"Marriage", "m.04ztj"}},
        {7, {"Order of the British Empire", "m.0fd3y"}}},
       "conjunction",
       {"Who is/was the family of John F. Kennedy?",
        "Of which, what is/are the member(s) of the order of Order of the British Empire?"}},
  };
  return examples;
}

}  // namespace stepfix::testing

#endif  // STEPFIX_TESTS_FIXTURES_HPP
