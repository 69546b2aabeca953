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

#ifndef STEPFIX_CORRECTOR_HPP
#define STEPFIX_CORRECTOR_HPP

#include <memory>
#include <optional>
#include <set>
#include <string>
#include <vector>

#include "stepfix/corpus.hpp"
#include "stepfix/decomposer.hpp"
#include "stepfix/kb_store.hpp"
#include "stepfix/lf.hpp"
#include "stepfix/templater.hpp"

namespace stepfix {

struct EditOp {
  enum class Kind { Replace, Delete, Insert };

  Kind kind = Kind::Insert;
  std::size_t index = 0;  // 1-based displayed number; Replace and Delete
  std::string question;   // Replace and Insert

  static EditOp replace(std::size_t index, std::string question);
  static EditOp remove(std::size_t index);
  static EditOp insert(std::string question);

  bool operator==(const EditOp&) const = default;
};

struct EditScript {
  std::vector<EditOp> ops;

  bool empty() const { return ops.empty(); }
  bool operator==(const EditScript&) const = default;
};

std::string render_op(const EditOp& op);
// Case-insensitive on the operation words. Throws UnrecognizedOperation or BadIndex.
EditOp parse_feedback(std::string_view utterance);

struct Step {
  Component component;
  std::string templated_q;
  std::optional<std::string> natural_q;
  std::optional<AnswerSet> answers;
  bool resolved_by_model = false;  // component came from a CorrectionModel
};

struct DialogueState {
  std::string complex_question;
  QType qtype = QType::Composition;
  QType original_qtype = QType::Composition;
  Header header = Header::H1;
  std::vector<Step> steps;
  std::optional<SortClause> sort;
  EntityMap entities;
  std::vector<std::string> history_q;   // utterances, in order
  std::vector<std::string> history_lf;  // compiled form after each utterance
  std::set<std::string> rejected;       // component keys excluded from resolution
  int attempts_used = 0;

  std::size_t displayed_steps() const { return steps.size() + (sort ? 1 : 0); }
};

Decomposition as_decomposition(const DialogueState& state);

DialogueState make_state(std::string complex_question, const LogicalForm& lf, EntityMap entities,
                         const TemplateCorpus& corpus);

// Re-renders every step's templated question from the current components.
void refresh_questions(DialogueState& state, const TemplateCorpus& corpus);
// Fills step answers from the store (empty sets are kept).
void refresh_answers(DialogueState& state, const TripleStore& store);

// Where a question would be placed and what it may refer to.
struct ResolveRequest {
  std::string question;
  InvertContext context;
};

class CorrectionModel {
 public:
  virtual ~CorrectionModel() = default;
  // Ranked candidates, best first; NoTemplateMatch when nothing fits.
  virtual std::vector<Candidate> resolve(const ResolveRequest& request,
                                         const DialogueState& state) const = 0;
};

// Inverts templated questions with the corpus.
class TemplateInverseModel : public CorrectionModel {
 public:
  explicit TemplateInverseModel(const TemplateCorpus& corpus) : corpus_(corpus) {}
  std::vector<Candidate> resolve(const ResolveRequest& request, const DialogueState& state) const override;

 private:
  const TemplateCorpus& corpus_;
};

// Knows the gold decomposition: each gold step's rendering resolves to that
// gold component, with its entities re-indexed into the dialogue's map.
class OracleModel : public CorrectionModel {
 public:
  OracleModel(const Decomposition& gold, const EntityMap& gold_entities, const TemplateCorpus& corpus);
  std::vector<Candidate> resolve(const ResolveRequest& request, const DialogueState& state) const override;

 private:
  std::vector<std::pair<std::string, Component>> table_;
  EntityMap gold_entities_;
};

// Edit-distance alignment on role-normalized components; entities compare by
// identity, each side under its own map. Texts are gold renderings.
EditScript diff_components(const Decomposition& pred, const EntityMap& pred_entities,
                           const Decomposition& gold, const EntityMap& gold_entities,
                           const TemplateCorpus& corpus);

DialogueState apply_op(const DialogueState& state, const EditOp& op, const CorrectionModel& model,
                       const TemplateCorpus& corpus);

LogicalForm compile(const DialogueState& state);

// Where apply_op puts an inserted component (0-based position).
std::size_t insert_position(const std::vector<Step>& steps, const Component& component);

}  // namespace stepfix

#endif  // STEPFIX_CORRECTOR_HPP
