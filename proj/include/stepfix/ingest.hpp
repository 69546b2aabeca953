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

#ifndef STEPFIX_INGEST_HPP
#define STEPFIX_INGEST_HPP

#include <optional>
#include <string>
#include <vector>

#include "stepfix/corpus.hpp"
#include "stepfix/decomposer.hpp"
#include "stepfix/json_io.hpp"
#include "stepfix/simulator.hpp"

namespace stepfix {

struct IngestReject {
  std::string id;
  std::string reason;
};

struct IngestResult {
  std::vector<SuiteRecord> gold;
  std::vector<IngestReject> rejects;
};

// Turns a raw SELECT query (or text already in LF form) into LF text with
// kb ids left in place. The header follows the question type: H1 for
// composition, H2 otherwise. Unsupported clauses raise ParseError.
std::string normalize_sparql(std::string_view sparql, std::optional<QType> qtype = std::nullopt);

// Items: {id|ID, question|machine_question, sparql|Sparql, answers,
// compositionality_type, entities: [{surface, kb_id}]}. Never throws per item.
IngestResult ingest_items(const Json& items, const TemplateCorpus& corpus);
IngestResult ingest_cwq(const std::string& path, const TemplateCorpus& corpus);

// The prediction file starts as a copy of the gold file.
void write_ingest(const IngestResult& result, const std::string& pred_path, const std::string& gold_path,
                  const std::string& rejects_path);

}  // namespace stepfix

#endif  // STEPFIX_INGEST_HPP
