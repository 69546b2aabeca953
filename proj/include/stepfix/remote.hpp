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

#ifndef STEPFIX_REMOTE_HPP
#define STEPFIX_REMOTE_HPP

#include <string>

#include "stepfix/corrector.hpp"
#include "stepfix/json_io.hpp"
#include "stepfix/metrics.hpp"
#include "stepfix/simulator.hpp"

namespace stepfix {

// Every remote model answers one POST of {"inputs": {...}} with
// {"outputs": [...]}, best first. Transport and shape problems raise RemoteError.
Json post_json(const std::string& url, const Json& body, int timeout_seconds = 30);

// outputs: [{"statements": "<sub-LF text>", "new_entities": {...}}]
class RemoteCorrectionModel : public CorrectionModel {
 public:
  RemoteCorrectionModel(std::string url, const TemplateCorpus& corpus) : url_(std::move(url)), corpus_(corpus) {}
  std::vector<Candidate> resolve(const ResolveRequest& request, const DialogueState& state) const override;

 private:
  std::string url_;
  const TemplateCorpus& corpus_;
};

// outputs: ["replace question #2 with ...", ...]
class RemoteFeedback : public FeedbackGenerator {
 public:
  RemoteFeedback(std::string url, const TemplateCorpus& corpus) : url_(std::move(url)), corpus_(corpus) {}
  std::vector<std::string> next_ops(const DialogueState& state, const Decomposition& gold,
                                    const EntityMap& gold_entities, int attempt) const override;

 private:
  std::string url_;
  const TemplateCorpus& corpus_;
};

// outputs: [log p(y_1), log p(y_2), ...]
class RemoteScorer : public Scorer {
 public:
  explicit RemoteScorer(std::string url) : url_(std::move(url)) {}
  std::vector<double> token_logprobs(const std::vector<std::string>& target, std::string_view source) const override;

 private:
  std::string url_;
};

}  // namespace stepfix

#endif  // STEPFIX_REMOTE_HPP
