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

#ifndef STEPFIX_JSON_IO_HPP
#define STEPFIX_JSON_IO_HPP

#include "json.hpp"
#include "stepfix/kb_store.hpp"
#include "stepfix/lf.hpp"

namespace stepfix {

using Json = nlohmann::json;

// {"1": {"surface": ..., "kb_id": ...}}; a bare string value is a surface.
Json entities_json(const EntityMap& entities);
EntityMap entities_from_json(const Json& j);

Json value_json(const Value& v);
Value value_from_json(const Json& j);

// Sorted list of values.
Json answers_json(const AnswerSet& answers);

// Parses text as JSON, raising ParseError with the source name.
Json parse_json(std::string_view text, const std::string& source = "<memory>");

}  // namespace stepfix

#endif  // STEPFIX_JSON_IO_HPP
