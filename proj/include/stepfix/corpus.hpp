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

#ifndef STEPFIX_CORPUS_HPP
#define STEPFIX_CORPUS_HPP

#include <map>
#include <set>
#include <string>
#include <string_view>
#include <vector>

#include "stepfix/lf.hpp"

namespace stepfix {

enum class AnswerSide { Subject, Object };
enum class EntryKind { Single, Cvt, Union, Restriction };

// Slot tokens used inside template text.
inline constexpr std::string_view kSlot = "<PH>";
inline constexpr std::string_view kRestrictionSlot = "<RSTR>";
inline constexpr std::string_view kNumberSlot = "<NUM>";
// Union bodies mark the grounded input and the answer end with these.
inline constexpr std::string_view kBodyInput = "<IN>";
inline constexpr std::string_view kBodyOutput = "<OUT>";

struct TemplateEntry {
  std::string key;   // predicate, "pred1|pred2" for CVT pairs, group id for unions
  std::string text;  // exactly one <PH>, at most one <RSTR>
  AnswerSide side = AnswerSide::Subject;  // which end of the relation the text describes
  EntryKind kind = EntryKind::Single;
  std::string wh;    // leading question phrase, "What is/are" when empty
  std::string body;  // union groups: statement list using <IN>/<OUT>
};

struct MiniTemplate {
  std::string predicate;
  std::string pattern;  // one <PH>
};

// Predicate -> template mapping with CVT pairs, restriction mini-templates and
// union groups. Immutable after loading.
//
// TSV layout, one entry per line, '#' comments:
//   key <TAB> template <TAB> answer_side <TAB> kind [<TAB> flags]
// kind is single|cvt|union|restriction; flags is a ';' separated list of
// name=value pairs (wh=..., body=...). Restriction rows carry their
// mini-template in the template column.
class TemplateCorpus {
 public:
  static TemplateCorpus load(const std::string& path);
  static TemplateCorpus parse(std::string_view tsv, const std::string& source = "<memory>");

  void add(TemplateEntry entry);

  const TemplateEntry* find(std::string_view key) const;
  const MiniTemplate* restriction(std::string_view predicate) const;
  bool is_cvt_pair(std::string_view first, std::string_view second) const;
  // Union group whose sorted predicate multiset equals `signature`.
  const TemplateEntry* union_group(const std::vector<std::string>& signature) const;

  const std::map<std::string, TemplateEntry>& entries() const { return entries_; }
  const std::map<std::string, MiniTemplate>& minis() const { return minis_; }

  // Parsed union body (the union block plus any filters) with <IN> as
  // #entity1# and <OUT> as ?out.
  std::vector<Statement> union_body(const TemplateEntry& entry) const;

  // Groups of entry keys sharing identical template text.
  std::vector<std::vector<std::string>> lint() const;

  int version() const { return version_; }

 private:
  std::map<std::string, TemplateEntry> entries_;
  std::map<std::string, MiniTemplate> minis_;
  std::set<std::pair<std::string, std::string>> cvt_pairs_;
  std::map<std::vector<std::string>, std::string> union_groups_;
  std::map<std::string, std::vector<Statement>> union_bodies_;
  int version_ = 1;
};

std::vector<std::string> predicate_signature(const std::vector<Statement>& statements);

}  // namespace stepfix

#endif  // STEPFIX_CORPUS_HPP
