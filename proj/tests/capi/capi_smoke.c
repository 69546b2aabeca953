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

/* Plain C consumer: the header must compile as C and the library must link. */
#include <stdio.h>
#include <string.h>

#include "stepfix/stepfix.h"

int main(int argc, char** argv) {
  if (argc < 2) {
    fprintf(stderr, "usage: capi_smoke CORPUS\n");
    return 1;
  }
  char config[1024];
  snprintf(config, sizeof config, "{\"corpus\": \"%s\"}", argv[1]);
  sfx_engine* engine = NULL;
  if (sfx_engine_create(config, &engine) != SFX_OK) {
    fprintf(stderr, "create: %s\n", sfx_last_error());
    return 1;
  }
  char* out = NULL;
  sfx_status st = sfx_call(engine, "render",
                           "{\"lf\": \"<sparql-header-1> ?c ns:location.country.administrative_divisions "
                           "#entity1# . ?c ns:location.country.official_language ?x .\", "
                           "\"entities\": {\"1\": \"Al Sharqia Governorate\"}}",
                           &out);
  int ok = st == SFX_OK && out && strstr(out, "whose official language is what?") != NULL;
  sfx_string_free(out);
  st = sfx_call(engine, "decompose", "{\"lf\": \"nonsense\"}", &out);
  ok = ok && st == SFX_SYNTAX_ERROR && sfx_is_validation_error(st) && strcmp(sfx_status_name(st), "SyntaxError") == 0;
  ok = ok && out && strstr(out, "\"kind\":\"SyntaxError\"") != NULL;
  sfx_string_free(out);
  sfx_engine_destroy(engine);
  printf("%s\n", ok ? "capi smoke ok" : "capi smoke FAILED");
  return ok ? 0 : 1;
}
