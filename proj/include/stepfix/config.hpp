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

#ifndef STEPFIX_CONFIG_HPP
#define STEPFIX_CONFIG_HPP

#include <functional>
#include <optional>
#include <string>

namespace stepfix {

// Runtime settings. Precedence, lowest first: defaults, config file,
// STEPFIX_* environment variables, command-line flags.
struct Config {
  std::string corpus_path = "data/corpus.tsv";
  std::string store_path;             // empty: no store, no answers
  std::string model = "template-inverse";  // oracle | template-inverse | remote:URL
  std::string feedback = "oracle";         // oracle | remote:URL
  int max_attempts = 3;
  std::string host = "127.0.0.1";
  int port = 8080;
  std::string records_path = "dialogues.jsonl";
};

// Keys: corpus, store, model, feedback, attempts, host, port, records.
void set_option(Config& config, const std::string& key, const std::string& value);

// key = value lines; '#' starts a comment; values may be double-quoted.
void apply_config_text(Config& config, std::string_view text, const std::string& source = "<memory>");
void apply_config_file(Config& config, const std::string& path);

// STEPFIX_CORPUS, STEPFIX_STORE, STEPFIX_MODEL, STEPFIX_FEEDBACK,
// STEPFIX_ATTEMPTS, STEPFIX_HOST, STEPFIX_PORT, STEPFIX_RECORDS.
using EnvLookup = std::function<std::optional<std::string>(const std::string&)>;
void apply_env(Config& config, const EnvLookup& lookup);
std::optional<std::string> process_env(const std::string& name);

}  // namespace stepfix

#endif  // STEPFIX_CONFIG_HPP
