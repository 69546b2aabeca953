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

// Links only the shared C library; no core headers.
#include <gtest/gtest.h>

#include <string>

#include "json.hpp"
#include "stepfix/stepfix.h"

using nlohmann::json;

namespace {

std::string data(const std::string& rel) { return std::string(STEPFIX_DATA_DIR) + "/" + rel; }

const char* kCwqLf =
    "<sparql-header-1> ?c ns:location.country.administrative_divisions #entity1# . "
    "?c ns:location.country.official_language ?x .";
const char* kCapitalLf =
    "<sparql-header-1> ?c ns:location.country.administrative_divisions #entity1# . "
    "?c ns:location.country.capital ?x .";

class CApi : public ::testing::Test {
 protected:
  void SetUp() override {
    json config{{"corpus", data("corpus.tsv")}, {"store", data("store/examples.tsv")}};
    ASSERT_EQ(sfx_engine_create(config.dump().c_str(), &engine_), SFX_OK) << sfx_last_error();
  }
  void TearDown() override { sfx_engine_destroy(engine_); }

  std::pair<sfx_status, json> call(const std::string& command, const json& request) {
    char* out = nullptr;
    sfx_status st = sfx_call(engine_, command.c_str(), request.dump().c_str(), &out);
    json body = out ? json::parse(out) : json();
    sfx_string_free(out);
    return {st, body};
  }

  sfx_engine* engine_ = nullptr;
};

json sharqia() { return json{{"1", {{"surface", "Al Sharqia Governorate"}, {"kb_id", "m.02r9w1"}}}}; }

}  // namespace

TEST_F(CApi, RenderAndExec) {
  auto [st, r] = call("render", {{"lf", kCwqLf}, {"entities", sharqia()}});
  ASSERT_EQ(st, SFX_OK) << r.dump();
  EXPECT_EQ(r["questions"][0], "What is/are the country/countries that contain(s) Al Sharqia Governorate?");
  auto [st2, e] = call("exec", {{"lf", kCwqLf}, {"entities", sharqia()}});
  ASSERT_EQ(st2, SFX_OK) << e.dump();
  EXPECT_EQ(e["steps"][0]["answers"], json::array({"Egypt"}));
  EXPECT_EQ(e["answers"], json::array({"Modern Standard Arabic"}));
}

TEST_F(CApi, DiffApplyCompile) {
  auto [st, d] = call("diff", {{"pred_lf", kCapitalLf}, {"gold_lf", kCwqLf}, {"pred_entities", sharqia()}});
  ASSERT_EQ(st, SFX_OK) << d.dump();
  ASSERT_EQ(d["utterances"].size(), 1u);
  EXPECT_EQ(d["utterances"][0],
            "replace question #2 with That entity is/are the country/countries whose official language is what?");
  auto [st2, a] = call("apply", {{"lf", kCapitalLf}, {"entities", sharqia()}, {"utterances", d["utterances"]}});
  ASSERT_EQ(st2, SFX_OK) << a.dump();
  EXPECT_EQ(a["compiled_lf"], kCwqLf);
  EXPECT_EQ(a["final_answers"], json::array({"Modern Standard Arabic"}));
  auto [st3, c] = call("compile", {{"lf", kCwqLf}});
  EXPECT_EQ(st3, SFX_OK);
  EXPECT_TRUE(c["em_equal"].get<bool>());
}

TEST_F(CApi, DecomposeReportsComponents) {
  auto [st, d] = call("decompose", {{"lf", kCwqLf}, {"entities", sharqia()}});
  ASSERT_EQ(st, SFX_OK);
  EXPECT_EQ(d["qtype"], "composition");
  EXPECT_EQ(d["step_count"], 2);
  EXPECT_EQ(d["components"][1]["key"], "location.country.official_language");
  EXPECT_EQ(d["questions"].size(), 2u);
}

TEST_F(CApi, MetricsAndCleaning) {
  auto [s1, div] = call("metrics", {{"metric", "diversity"}, {"sentences", {"a b", "a c"}}});
  ASSERT_EQ(s1, SFX_OK);
  EXPECT_NEAR(div["per_n"][0]["entropy_bits"].get<double>(), 1.5, 1e-9);
  auto [s2, f1] = call("metrics", {{"metric", "f1"}, {"pred", {"a", "b"}}, {"gold", {"b", "c"}}});
  EXPECT_EQ(s2, SFX_OK);
  EXPECT_EQ(f1["f1"], 0.5);
  auto [s3, lev] = call("metrics", {{"metric", "levenshtein"}, {"a", "kitten"}, {"b", "sitting"}});
  EXPECT_EQ(lev["distance"], 3);
  auto [s4, rank] = call("clean-rank", {{"items",
                                         {{{"id", "a"}, {"target", "x y"}, {"generated", {"x y"}}, {"label", 0}},
                                          {{"id", "b"}, {"target", "x y"}, {"generated", {"z w"}}, {"label", 1}}}},
                                        {"k", 1}});
  ASSERT_EQ(s4, SFX_OK) << rank.dump();
  EXPECT_EQ(rank["ranked"][0]["id"], "b");
  EXPECT_EQ(rank["precision_at_k"], 1.0);
}

TEST_F(CApi, SimulateSuite) {
  auto [st, r] = call("simulate", {{"pred_path", data("suite/pred50.jsonl")},
                                   {"gold_path", data("suite/gold50.jsonl")},
                                   {"model", "oracle"}});
  ASSERT_EQ(st, SFX_OK) << r.dump();
  EXPECT_EQ(r["n_dialogues"], 50);
  EXPECT_DOUBLE_EQ(r["em_post"].get<double>(), 1.0);
}

TEST_F(CApi, ErrorsMapToStatuses) {
  auto [s1, b1] = call("decompose", {{"lf", "nonsense"}});
  EXPECT_EQ(s1, SFX_SYNTAX_ERROR);
  EXPECT_EQ(b1["error"]["kind"], "SyntaxError");
  EXPECT_STRNE(sfx_last_error(), "");
  auto [s2, b2] = call("no-such-command", json::object());
  EXPECT_EQ(s2, SFX_INVALID_ARGUMENT);
  auto [s3, b3] = call("decompose", {{"lf", "<sparql-header-1> ?x ns:no.such.pred #entity1# ."}});
  EXPECT_EQ(s3, SFX_UNKNOWN_PREDICATE);
  auto [s4, b4] = call("simulate", {{"pred_path", "/nonexistent.jsonl"}, {"gold_path", "/nonexistent.jsonl"}});
  EXPECT_EQ(s4, SFX_IO_ERROR);
  EXPECT_FALSE(sfx_is_validation_error(s4));
  EXPECT_TRUE(sfx_is_validation_error(s1));

  char* out = nullptr;
  EXPECT_EQ(sfx_call(engine_, "decompose", "{broken", &out), SFX_PARSE_ERROR);
  sfx_string_free(out);
  EXPECT_EQ(sfx_call(nullptr, "decompose", "{}", &out), SFX_NULL_ARGUMENT);
  sfx_string_free(out);
  EXPECT_EQ(sfx_call(engine_, "decompose", "{}", nullptr), SFX_NULL_ARGUMENT);
}

TEST(CApiStatic, NamesAndCreateFailures) {
  EXPECT_STREQ(sfx_status_name(SFX_OK), "Ok");
  EXPECT_STREQ(sfx_status_name(SFX_CONFLICT), "Conflict");
  EXPECT_STREQ(sfx_status_name(SFX_NULL_ARGUMENT), "NullArgument");
  EXPECT_STREQ(sfx_status_name(static_cast<sfx_status>(77)), "Unknown");
  EXPECT_STREQ(sfx_version(), "0.1.0");
  sfx_engine* e = nullptr;
  EXPECT_EQ(sfx_engine_create("{\"attempts\": 0}", &e), SFX_INVALID_ARGUMENT);
  EXPECT_EQ(e, nullptr);
  EXPECT_EQ(sfx_engine_create("[1]", &e), SFX_INVALID_ARGUMENT);
  EXPECT_EQ(sfx_engine_create(nullptr, nullptr), SFX_NULL_ARGUMENT);
  ASSERT_EQ(sfx_engine_create(nullptr, &e), SFX_OK);
  sfx_engine_destroy(e);
  // Missing corpus surfaces lazily, on the first command that needs it.
  ASSERT_EQ(sfx_engine_create("{\"corpus\": \"/nonexistent/corpus.tsv\"}", &e), SFX_OK);
  char* out = nullptr;
  EXPECT_EQ(sfx_call(e, "decompose", "{\"lf\": \"<sparql-header-1> ?x ns:a.b #entity1# .\"}", &out), SFX_IO_ERROR);
  sfx_string_free(out);
  sfx_engine_destroy(e);
}
