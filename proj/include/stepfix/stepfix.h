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

#ifndef STEPFIX_STEPFIX_H
#define STEPFIX_STEPFIX_H

#ifdef __cplusplus
extern "C" {
#endif

#if defined(__GNUC__)
#define SFX_API __attribute__((visibility("default")))
#else
#define SFX_API
#endif

/* Status codes. Values 1..25 mirror the library's error kinds. */
typedef enum sfx_status {
  SFX_OK = 0,
  SFX_SYNTAX_ERROR = 1,
  SFX_UNBOUND_VARIABLE,
  SFX_ENTITY_NOT_FOUND,
  SFX_MISSING_ENTITY,
  SFX_UNKNOWN_PREDICATE,
  SFX_AMBIGUOUS_GROUPING,
  SFX_UNCLASSIFIABLE_FORM,
  SFX_NO_TEMPLATE_MATCH,
  SFX_UNRECOGNIZED_OPERATION,
  SFX_BAD_INDEX,
  SFX_INDEX_OUT_OF_RANGE,
  SFX_RESOLUTION_FAILED,
  SFX_DISCONNECTED_COMPONENTS,
  SFX_MULTIPLE_ANSWER_VARS,
  SFX_PARSE_ERROR,
  SFX_TYPE_MISMATCH,
  SFX_SCORER_FAILURE,
  SFX_UNLABELED_ITEM,
  SFX_LENGTH_MISMATCH,
  SFX_MISSING_ID,
  SFX_INVALID_ARGUMENT,
  SFX_IO_ERROR,
  SFX_REMOTE_ERROR,
  SFX_NOT_FOUND,
  SFX_CONFLICT,
  SFX_NULL_ARGUMENT = 100,
  SFX_INTERNAL = 101
} sfx_status;

typedef struct sfx_engine sfx_engine;

/* Library version, e.g. "0.1.0". Static storage. */
SFX_API const char* sfx_version(void);

/* Stable name of a status, e.g. "SyntaxError". Static storage. */
SFX_API const char* sfx_status_name(sfx_status status);

/* Non-zero when the status reports bad input rather than an environment fault. */
SFX_API int sfx_is_validation_error(sfx_status status);

/*
 * Creates an engine. `config_json` is an object with any of: corpus, store,
 * model, feedback, attempts, host, port, records. "config_file" names a
 * key = value file read first; "env": true then applies STEPFIX_* variables;
 * the remaining keys win over both. NULL or "" keeps defaults.
 */
SFX_API sfx_status sfx_engine_create(const char* config_json, sfx_engine** out);
SFX_API void sfx_engine_destroy(sfx_engine* engine);

/*
 * Runs one command with a JSON request. On success *response_json holds a
 * JSON document to be released with sfx_string_free. On failure it holds
 * {"error":{"kind":...,"message":...}} and the status names the kind.
 */
SFX_API sfx_status sfx_call(sfx_engine* engine, const char* command, const char* request_json,
                            char** response_json);

/* Serves the HTTP gateway until the process is stopped. */
SFX_API sfx_status sfx_serve(sfx_engine* engine);

/* Message of the last failure on this thread; "" when none. */
SFX_API const char* sfx_last_error(void);

SFX_API void sfx_string_free(char* s);

#ifdef __cplusplus
}
#endif

#endif /* STEPFIX_STEPFIX_H */
