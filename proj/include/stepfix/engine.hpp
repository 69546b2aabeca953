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

#ifndef STEPFIX_ENGINE_HPP
#define STEPFIX_ENGINE_HPP

#include <memory>
#include <string>

#include "stepfix/config.hpp"
#include "stepfix/json_io.hpp"

namespace stepfix {

class TemplateCorpus;
class TripleStore;

// JSON command front end shared by the C API, the CLI and the server.
// Commands: decompose, render, diff, apply, compile, exec, simulate,
// metrics, clean-rank, ingest.
class Engine {
 public:
  explicit Engine(Config config);
  ~Engine();

  Json call(const std::string& command, const Json& request);
  // Blocks serving the session API on config().host:port.
  void serve();

  const Config& config() const { return config_; }
  const TemplateCorpus& corpus();
  const TripleStore* store();

 private:
  Config config_;
  std::unique_ptr<TemplateCorpus> corpus_;
  std::unique_ptr<TripleStore> store_;
  bool store_loaded_ = false;
};

}  // namespace stepfix

#endif  // STEPFIX_ENGINE_HPP
