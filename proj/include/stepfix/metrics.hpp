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

#ifndef STEPFIX_METRICS_HPP
#define STEPFIX_METRICS_HPP

#include <cstdint>
#include <map>
#include <memory>
#include <optional>
#include <set>
#include <string>
#include <vector>

#include "stepfix/kb_store.hpp"
#include "stepfix/lf.hpp"

namespace stepfix {

// 1 when both forms have the same canonical text. With two maps, entities
// compare by identity across them.
bool exact_match(const LogicalForm& a, const LogicalForm& b, const EntityMap* entities = nullptr);
bool exact_match(const LogicalForm& a, const EntityMap& a_entities, const LogicalForm& b,
                 const EntityMap& b_entities);

// Fraction of true flags; 0 for an empty list.
double ratio(const std::vector<bool>& flags);

double answer_f1(const std::set<Value>& pred, const std::set<Value>& gold);

// Lowercase, detach ?.,!;:()" and split on whitespace. "#entity#" stays whole.
std::vector<std::string> tokenize(std::string_view text);

// Uniform weights up to max_n, brevity penalty, zero counts floored at kBleuEpsilon.
inline constexpr double kBleuEpsilon = 1e-9;
double corpus_bleu(const std::vector<std::string>& candidates, const std::vector<std::string>& references,
                   int max_n = 4);

// Replaces #entityN# tokens and the given surfaces (longest first) by #entity#.
std::string mask_entities(std::string_view text, const std::vector<std::string>& surfaces = {});

// N-gram overlap F-measure.
double rouge_n(std::string_view candidate, std::string_view reference, int n, bool mask = false,
               const std::vector<std::string>& surfaces = {});

struct NgramStats {
  int n = 1;
  std::size_t total = 0;
  std::size_t vocab_size = 0;
  double distinct_ratio = 0;
  std::size_t unique_count = 0;
  double entropy_bits = 0;
  std::optional<double> conditional_entropy_bits;  // n >= 2
};

struct DiversityReport {
  std::vector<NgramStats> per_n;  // n = 1, 2, 3
  double avg_length_words = 0;
};

// Whitespace tokens, lowercased.
DiversityReport diversity_report(const std::vector<std::string>& sentences);

std::size_t levenshtein(std::string_view a, std::string_view b);

class Scorer {
 public:
  virtual ~Scorer() = default;
  // log p(y_i | y_<i, x), one value per target token, each <= 0.
  virtual std::vector<double> token_logprobs(const std::vector<std::string>& target,
                                             std::string_view source) const = 0;
};

// Add-one unigram model over a training corpus; ignores the source.
class UnigramScorer : public Scorer {
 public:
  explicit UnigramScorer(const std::vector<std::string>& corpus);
  std::vector<double> token_logprobs(const std::vector<std::string>& target, std::string_view source) const override;

 private:
  std::map<std::string, std::size_t> counts_;
  std::size_t total_ = 0;
};

struct CleaningItem {
  std::string id;
  std::string source;
  std::string target;                  // annotated meaning representation
  std::vector<std::string> generated;  // model outputs; the lowest-scoring one is used
  std::optional<bool> inaccurate;      // manual label, when known
};

struct RankedItem {
  std::string id;
  double d_score = 0;
  std::size_t edit_distance = 0;
  std::optional<bool> inaccurate;
};

// Sum of negative log-likelihoods under the scorer.
double sequence_score(const Scorer& scorer, const std::string& text, std::string_view source,
                      const std::string& id = "");

// D-descending and edit-distance-descending rankings, interleaved.
std::vector<RankedItem> cleaning_rank(const std::vector<CleaningItem>& items, const Scorer& scorer);

// Alternates between the lists, skipping ids already taken.
std::vector<std::string> interleave(const std::vector<std::string>& a, const std::vector<std::string>& b);

double precision_at_k(const std::vector<RankedItem>& ranked, std::size_t k);

// Mean ROUGE-n of each text against its own context and against the context
// of a different item chosen by a seeded shuffle.
struct ContextAwareness {
  double actual_mean = 0;
  double random_mean = 0;
  std::size_t items = 0;
};

struct ContextPair {
  std::string context;
  std::string text;
  std::vector<std::string> surfaces;
};

ContextAwareness context_awareness(const std::vector<ContextPair>& pairs, int n, bool mask,
                                   std::uint64_t seed = 1);

// Aligned-column table with a header rule.
std::string format_table(const std::vector<std::string>& header,
                         const std::vector<std::vector<std::string>>& rows);

std::string diversity_table(const DiversityReport& report);
std::string diversity_json(const DiversityReport& report);

}  // namespace stepfix

#endif  // STEPFIX_METRICS_HPP
