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

#include "stepfix/stepfix.h"

#include <cstdlib>
#include <cstring>
#include <string>

#include "stepfix/config.hpp"
#include "stepfix/engine.hpp"
#include "stepfix/error.hpp"
#include "stepfix/json_io.hpp"

struct sfx_engine {
  stepfix::Engine engine;
};

namespace {

thread_local std::string g_last_error;

char* dup(const std::string& s) {
  char* out = static_cast<char*>(std::malloc(s.size() + 1));
  if (out) std::memcpy(out, s.c_str(), s.size() + 1);
  return out;
}

sfx_status status_of(stepfix::ErrorKind kind) { return static_cast<sfx_status>(static_cast<int>(kind) + 1); }

sfx_status record(sfx_status status, const std::string& kind, const std::string& message, char** out) {
  g_last_error = message;
  if (out) *out = dup(stepfix::Json{{"error", {{"kind", kind}, {"message", message}}}}.dump());
  return status;
}

template <class F>
sfx_status guarded(char** out, F&& body) {
  try {
    body();
    g_last_error.clear();
    return SFX_OK;
  } catch (const stepfix::Error& e) {
    return record(status_of(e.kind()), std::string(stepfix::to_string(e.kind())), e.what(), out);
  } catch (const std::exception& e) {
    return record(SFX_INTERNAL, "Internal", e.what(), out);
  } catch (...) {
    return record(SFX_INTERNAL, "Internal", "unknown failure", out);
  }
}

}  // namespace

extern "C" {

const char* sfx_version(void) { return "0.1.0"; }

const char* sfx_status_name(sfx_status status) {
  if (status == SFX_OK) return "Ok";
  if (status == SFX_NULL_ARGUMENT) return "NullArgument";
  if (status == SFX_INTERNAL) return "Internal";
  int k = static_cast<int>(status) - 1;
  if (k < 0 || k > static_cast<int>(stepfix::ErrorKind::Conflict)) return "Unknown";
  return stepfix::to_string(static_cast<stepfix::ErrorKind>(k)).data();
}

int sfx_is_validation_error(sfx_status status) {
  switch (status) {
    case SFX_OK:
    case SFX_IO_ERROR:
    case SFX_REMOTE_ERROR:
    case SFX_SCORER_FAILURE:
    case SFX_INTERNAL:
      return 0;
    default:
      return 1;
  }
}

sfx_status sfx_engine_create(const char* config_json, sfx_engine** out) {
  if (!out) return record(SFX_NULL_ARGUMENT, "NullArgument", "out is null", nullptr);
  *out = nullptr;
  return guarded(nullptr, [&] {
    stepfix::Config config;
    if (config_json && *config_json) {
      auto j = stepfix::parse_json(config_json);
      if (!j.is_object()) stepfix::fail(stepfix::ErrorKind::InvalidArgument, "config must be a JSON object");
      if (j.contains("config_file")) stepfix::apply_config_file(config, j["config_file"].get<std::string>());
      if (j.value("env", false)) stepfix::apply_env(config, stepfix::process_env);
      for (const auto& [key, value] : j.items()) {
        if (key == "config_file" || key == "env") continue;
        stepfix::set_option(config, key, value.is_string() ? value.get<std::string>() : value.dump());
      }
    }
    *out = new sfx_engine{stepfix::Engine(std::move(config))};
  });
}

void sfx_engine_destroy(sfx_engine* engine) { delete engine; }

sfx_status sfx_call(sfx_engine* engine, const char* command, const char* request_json, char** response_json) {
  if (!response_json) return record(SFX_NULL_ARGUMENT, "NullArgument", "response_json is null", nullptr);
  *response_json = nullptr;
  if (!engine || !command)
    return record(SFX_NULL_ARGUMENT, "NullArgument", "engine and command are required", response_json);
  return guarded(response_json, [&] {
    stepfix::Json request = request_json && *request_json ? stepfix::parse_json(request_json) : stepfix::Json::object();
    *response_json = dup(engine->engine.call(command, request).dump());
  });
}

sfx_status sfx_serve(sfx_engine* engine) {
  if (!engine) return record(SFX_NULL_ARGUMENT, "NullArgument", "engine is null", nullptr);
  return guarded(nullptr, [&] { engine->engine.serve(); });
}

const char* sfx_last_error(void) { return g_last_error.c_str(); }

void sfx_string_free(char* s) { std::free(s); }

}  // extern "C"
