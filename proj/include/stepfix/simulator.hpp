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

#ifndef STEPFIX_SIMULATOR_HPP
#define STEPFIX_SIMULATOR_HPP

#include <functional>
#include <map>
#include <memory>
#include <optional>
#include <string>
#include <vector>

#include "stepfix/corpus.hpp"
#include "stepfix/corrector.hpp"
#include "stepfix/kb_store.hpp"
#include "stepfix/lf.hpp"

namespace stepfix {

class FeedbackGenerator {
 public:
  virtual ~FeedbackGenerator() = default;
  // Utterances for one attempt (1-based); empty when nothing is left to fix.
  virtual std::vector<std::string> next_ops(const DialogueState& state, const Decomposition& gold,
                                            const EntityMap& gold_entities, int attempt) const = 0;
};

// Renders the component diff between the current state and the gold form.
class OracleFeedback : public FeedbackGenerator {
 public:
  explicit OracleFeedback(const TemplateCorpus& corpus) : corpus_(corpus) {}
  std::vector<std::string> next_ops(const DialogueState& state, const Decomposition& gold,
                                    const EntityMap& gold_entities, int attempt) const override;

 private:
  const TemplateCorpus& corpus_;
};

// One line of a prediction or gold JSONL file.
struct SuiteRecord {
  std::string id;
  std::string lf;
  std::string question;
  EntityMap entities;
  std::vector<Value> answers;
};

std::vector<SuiteRecord> parse_records(std::string_view jsonl, const std::string& source = "<memory>");
std::vector<SuiteRecord> load_records(const std::string& path);
std::string record_json(const SuiteRecord& record);

struct TurnResult {
  std::string utterance;
  std::string lf;        // compiled after this turn; empty when it did not compile
  bool correct = false;  // the remaining edit distance to gold went down
};

struct DialogueOutcome {
  std::string id;
  bool em_pre = false;
  bool em_post = false;
  int attempts_used = 0;
  std::vector<TurnResult> turns;
  std::string final_lf;  // byte-identical to the prediction when no turn happened
  std::optional<std::string> error;
  std::optional<double> f1_pre;
  std::optional<double> f1_post;
};

struct DialogueInput {
  std::string id;
  std::string question;
  std::string pred_lf;
  EntityMap pred_entities;
  std::string gold_lf;
  EntityMap gold_entities;
  std::vector<Value> gold_answers;  // evaluated from the gold form when empty
};

using ModelFactory =
    std::function<std::unique_ptr<CorrectionModel>(const Decomposition& gold, const EntityMap& gold_entities)>;

ModelFactory oracle_model_factory(const TemplateCorpus& corpus);
ModelFactory template_inverse_factory(const TemplateCorpus& corpus);

struct SimulationConfig {
  const TemplateCorpus* corpus = nullptr;
  const TripleStore* store = nullptr;  // F1 only when set
  const FeedbackGenerator* feedback = nullptr;
  ModelFactory model;
  int max_attempts = 3;
};

// Errors inside the dialogue are recorded in the outcome, never thrown.
DialogueOutcome simulate_dialogue(const DialogueInput& input, const SimulationConfig& config,
                                  DialogueState* final_state = nullptr);

struct TurnStat {
  std::size_t turn = 0;  // 1-based
  std::size_t correct = 0;
  std::size_t count = 0;
};

struct SimulationReport {
  std::size_t n_dialogues = 0;
  std::size_t n_failed = 0;
  int max_attempts = 0;
  double em_pre = 0;
  double em_post = 0;
  std::optional<double> f1_pre;
  std::optional<double> f1_post;
  std::vector<TurnStat> per_turn;
  std::map<int, std::size_t> attempts_histogram;
  std::string retry_strategy = "candidate-rank advancement";
  std::vector<DialogueOutcome> dialogues;
};

SimulationReport summarize(std::vector<DialogueOutcome> outcomes, int max_attempts, bool with_f1);

// Pairs predictions with gold records by id. MissingId when either side lacks one.
SimulationReport run_suite(const std::vector<SuiteRecord>& predictions, const std::vector<SuiteRecord>& gold,
                           const SimulationConfig& config);
SimulationReport run_suite(const std::string& pred_path, const std::string& gold_path,
                           const SimulationConfig& config);

std::string report_json(const SimulationReport& report, bool include_dialogues = false);
std::string report_table(const SimulationReport& report);

}  // namespace stepfix

#endif  // STEPFIX_SIMULATOR_HPP
