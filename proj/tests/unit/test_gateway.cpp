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

#include <gtest/gtest.h>

#include <filesystem>
#include <thread>

#include "fixtures.hpp"
#include "httplib.h"
#include "stepfix/error.hpp"
#include "stepfix/gateway.hpp"
#include "stepfix/json_io.hpp"
#include "stepfix/kb_store.hpp"

using namespace stepfix;
using stepfix::testing::data_path;
using stepfix::testing::printed_examples;
using stepfix::testing::starter_corpus;

namespace {

const char* kCapitalLf =
    "<sparql-header-1> ?c ns:location.country.administrative_divisions #entity1# . "
    "?c ns:location.country.capital ?x .";

std::string temp_records(const std::string& tag) {
  auto p = std::filesystem::temp_directory_path() / ("stepfix_gw_" + tag + "_" + std::to_string(::getpid()) + ".jsonl");
  std::filesystem::remove(p);
  return p.string();
}

const TripleStore& example_store() {
  static const TripleStore store = load_store(data_path("store/examples.tsv"));
  return store;
}

Json cwq_request(const std::string& lf) {
  return Json{{"question", "What language is spoken in the country that contains Al Sharqia Governorate?"},
              {"predicted_lf", lf},
              {"entities", {{"1", {{"surface", "Al Sharqia Governorate"}, {"kb_id", "m.02r9w1"}}}}}};
}

// A live server on a free port, torn down with the fixture.
class Live : public ::testing::Test {
 protected:
  void SetUp() override {
    records_path_ = temp_records(::testing::UnitTest::GetInstance()->current_test_info()->name());
    records_ = std::make_unique<RecordStore>(records_path_);
    start();
  }
  void TearDown() override {
    halt();
    std::filesystem::remove(records_path_);
  }
  void start() {
    GatewayOptions opts;
    opts.corpus = &starter_corpus();
    opts.store = &example_store();
    opts.records = records_.get();
    manager_ = std::make_unique<SessionManager>(opts);
    server_ = std::make_unique<GatewayServer>(*manager_);
    port_ = server_->bind("127.0.0.1", 0);
    thread_ = std::thread([this] { server_->listen(); });
    client_ = std::make_unique<httplib::Client>("127.0.0.1", port_);
    for (int i = 0; i < 200 && !client_->Get("/health"); ++i) std::this_thread::sleep_for(std::chrono::milliseconds(5));
  }
  void halt() {
    server_->stop();
    if (thread_.joinable()) thread_.join();
    server_.reset();
    manager_.reset();
  }

  std::pair<int, Json> post(const std::string& path, const Json& body) {
    auto res = client_->Post(path, body.dump(), "application/json");
    EXPECT_TRUE(res) << path;
    return {res ? res->status : 0, res ? Json::parse(res->body) : Json()};
  }
  std::pair<int, Json> post_raw(const std::string& path, const std::string& body) {
    auto res = client_->Post(path, body, "application/json");
    EXPECT_TRUE(res) << path;
    return {res ? res->status : 0, res ? Json::parse(res->body) : Json()};
  }
  std::pair<int, Json> get(const std::string& path) {
    auto res = client_->Get(path);
    EXPECT_TRUE(res) << path;
    return {res ? res->status : 0, res ? Json::parse(res->body) : Json()};
  }

  std::string records_path_;
  std::unique_ptr<RecordStore> records_;
  std::unique_ptr<SessionManager> manager_;
  std::unique_ptr<GatewayServer> server_;
  std::unique_ptr<httplib::Client> client_;
  std::thread thread_;
  int port_ = 0;
};

std::string kind_of(const Json& body) { return body["error"]["kind"].get<std::string>(); }

}  // namespace

TEST_F(Live, HealthAndCors) {
  auto res = client_->Get("/health");
  ASSERT_TRUE(res);
  EXPECT_EQ(res->status, 200);
  EXPECT_EQ(res->get_header_value("Access-Control-Allow-Origin"), "*");
  auto opt = client_->Options("/sessions");
  ASSERT_TRUE(opt);
  EXPECT_EQ(opt->status, 204);
}

TEST_F(Live, CreateRendersPrintedQuestionsWithAnswers) {
  const auto& ex = printed_examples()[0];
  auto [status, view] = post("/sessions", cwq_request(ex.lf));
  ASSERT_EQ(status, 201) << view.dump();
  EXPECT_EQ(view["id"], "s-000001");
  EXPECT_EQ(view["qtype"], "composition");
  EXPECT_EQ(view["status"], "open");
  ASSERT_EQ(view["steps"].size(), 2u);
  EXPECT_EQ(view["steps"][0]["templated_q"], ex.questions[0]);
  EXPECT_EQ(view["steps"][1]["templated_q"], ex.questions[1]);
  EXPECT_EQ(view["steps"][0]["answers"], Json::array({"Egypt"}));
  EXPECT_EQ(view["steps"][1]["answers"], Json::array({"Modern Standard Arabic"}));
  EXPECT_TRUE(em_equal(parse_lf(view["compiled_lf"].get<std::string>()), parse_lf(ex.lf)));
}

TEST_F(Live, CreateErrorsCarryKinds) {
  auto [s1, b1] = post("/sessions", cwq_request("?x ns:a.b #entity1# ."));
  EXPECT_EQ(s1, 400);
  EXPECT_EQ(kind_of(b1), "SyntaxError");
  auto [s2, b2] = post("/sessions", cwq_request("<sparql-header-1> ?x ns:no.such.predicate #entity1# ."));
  EXPECT_EQ(s2, 400);
  EXPECT_EQ(kind_of(b2), "UnknownPredicate");
  auto [s3, b3] = post_raw("/sessions", "{not json");
  EXPECT_EQ(s3, 400);
  EXPECT_EQ(kind_of(b3), "ParseError");
  auto [s4, b4] = post("/sessions", Json{{"question", "q"}});
  EXPECT_EQ(s4, 400);
  EXPECT_EQ(kind_of(b4), "InvalidArgument");
  EXPECT_TRUE(b4["error"]["message"].is_string());
}

TEST_F(Live, DeleteFirstQuestionLeavesOneStep) {
  auto [_, view] = post("/sessions", cwq_request(printed_examples()[0].lf));
  std::string id = view["id"];
  auto [status, after] = post("/sessions/" + id + "/feedback", Json{{"utterance", "delete question #1"}});
  ASSERT_EQ(status, 200) << after.dump();
  EXPECT_EQ(after["steps"].size(), 1u);
  EXPECT_EQ(after["history"], Json::array({"delete question #1"}));
}

TEST_F(Live, ReplaceWithGoldQuestionReachesGold) {
  const auto& ex = printed_examples()[0];
  auto [_, view] = post("/sessions", cwq_request(kCapitalLf));
  std::string id = view["id"];
  EXPECT_FALSE(em_equal(parse_lf(view["compiled_lf"].get<std::string>()), parse_lf(ex.lf)));
  auto [status, after] =
      post("/sessions/" + id + "/feedback", Json{{"utterance", "replace question #2 with " + ex.questions[1]}});
  ASSERT_EQ(status, 200) << after.dump();
  EXPECT_TRUE(em_equal(parse_lf(after["compiled_lf"].get<std::string>()), parse_lf(ex.lf)));
  EXPECT_EQ(after["steps"][1]["templated_q"], ex.questions[1]);
  EXPECT_EQ(after["final_answers"], Json::array({"Modern Standard Arabic"}));
}

TEST_F(Live, FeedbackErrors) {
  auto [_, view] = post("/sessions", cwq_request(printed_examples()[0].lf));
  std::string id = view["id"];
  auto [s1, b1] = post("/sessions/" + id + "/feedback", Json{{"utterance", "swap question #1 and #2"}});
  EXPECT_EQ(s1, 422);
  EXPECT_EQ(kind_of(b1), "UnrecognizedOperation");
  auto [s2, b2] = post("/sessions/" + id + "/feedback", Json{{"utterance", "replace question #1 with gibberish?"}});
  EXPECT_EQ(s2, 422);
  EXPECT_EQ(kind_of(b2), "ResolutionFailed");
  auto [s3, b3] = post("/sessions/" + id + "/feedback", Json{{"utterance", "delete question #7"}});
  EXPECT_EQ(s3, 422);
  EXPECT_EQ(kind_of(b3), "IndexOutOfRange");
  auto [s4, b4] = post("/sessions/s-999999/feedback", Json{{"utterance", "delete question #1"}});
  EXPECT_EQ(s4, 404);
  EXPECT_EQ(kind_of(b4), "NotFound");
  auto [s5, b5] = post("/sessions/" + id + "/feedback", Json::object());
  EXPECT_EQ(s5, 422);
  // Failed feedback leaves the session untouched.
  auto [s6, now] = get("/sessions/" + id);
  EXPECT_EQ(s6, 200);
  EXPECT_EQ(now["steps"], view["steps"]);
  EXPECT_TRUE(now["history"].empty());
}

TEST_F(Live, ConfirmPersistsAndLocks) {
  auto [_, view] = post("/sessions", cwq_request(kCapitalLf));
  std::string id = view["id"];
  post("/sessions/" + id + "/feedback",
       Json{{"utterance", "replace question #2 with " + printed_examples()[0].questions[1]}});
  auto [s1, rec1] = post("/sessions/" + id + "/confirm", Json::object());
  ASSERT_EQ(s1, 200) << rec1.dump();
  auto [s2, rec2] = post("/sessions/" + id + "/confirm", Json::object());
  EXPECT_EQ(s2, 200);
  EXPECT_EQ(rec1, rec2);
  EXPECT_EQ(records_->load_all().size(), 1u);

  auto [s3, shown] = get("/sessions/" + id);
  EXPECT_EQ(s3, 200);
  EXPECT_EQ(shown["status"], "confirmed");
  auto [s4, b4] = post("/sessions/" + id + "/feedback", Json{{"utterance", "delete question #1"}});
  EXPECT_EQ(s4, 409);
  EXPECT_EQ(kind_of(b4), "Conflict");

  auto record = record_from_json(rec1);
  ASSERT_EQ(record.turns.size(), 3u);
  EXPECT_EQ(record.turns[0].speaker, "agent");
  EXPECT_EQ(record.turns[1].speaker, "user");
  EXPECT_EQ(record.turns[2].speaker, "agent");
  for (const auto& t : record.turns) EXPECT_NO_THROW(parse_lf(t.lf_snapshot));
  EXPECT_EQ(records_->find(id), record);
}

TEST_F(Live, UnknownSessionIs404) {
  auto [s1, b1] = get("/sessions/s-424242");
  EXPECT_EQ(s1, 404);
  EXPECT_EQ(kind_of(b1), "NotFound");
  auto [s2, b2] = post("/sessions/s-424242/confirm", Json::object());
  EXPECT_EQ(s2, 404);
}

TEST_F(Live, RestartKeepsConfirmedRecords) {
  auto [_, view] = post("/sessions", cwq_request(printed_examples()[0].lf));
  std::string id = view["id"];
  auto [s1, rec] = post("/sessions/" + id + "/confirm", Json::object());
  ASSERT_EQ(s1, 200);
  halt();
  start();
  auto [s2, shown] = get("/sessions/" + id);
  EXPECT_EQ(s2, 200);
  EXPECT_EQ(shown["status"], "confirmed");
  EXPECT_EQ(shown["record"], rec);
  auto [s3, again] = post("/sessions/" + id + "/confirm", Json::object());
  EXPECT_EQ(s3, 200);
  EXPECT_EQ(again, rec);
  auto [s4, b4] = post("/sessions/" + id + "/feedback", Json{{"utterance", "delete question #1"}});
  EXPECT_EQ(s4, 409);
  auto [s5, fresh] = post("/sessions", cwq_request(printed_examples()[0].lf));
  EXPECT_EQ(s5, 201);
  EXPECT_NE(fresh["id"], id);
  EXPECT_EQ(records_->load_all().size(), 1u);
}

TEST_F(Live, PerSessionStore) {
  Json req = cwq_request(printed_examples()[0].lf);
  req["store"] = "m.0aaaa\tlocation.country.administrative_divisions\tm.02r9w1\n"
                 "m.0aaaa\tlocation.country.official_language\tKlingon\n";
  auto [status, view] = post("/sessions", req);
  ASSERT_EQ(status, 201) << view.dump();
  EXPECT_EQ(view["final_answers"], Json::array({"Klingon"}));
}

TEST_F(Live, ConcurrentSessionsStayIndependent) {
  constexpr int kSessions = 8;
  std::vector<std::string> ids;
  for (int i = 0; i < kSessions; ++i) ids.push_back(post("/sessions", cwq_request(kCapitalLf)).second["id"]);
  std::vector<std::thread> workers;
  std::vector<int> codes(kSessions);
  for (int i = 0; i < kSessions; ++i)
    workers.emplace_back([&, i] {
      httplib::Client c("127.0.0.1", port_);
      Json body{{"utterance", "replace question #2 with " + printed_examples()[0].questions[1]}};
      auto res = c.Post("/sessions/" + ids[i] + "/feedback", body.dump(), "application/json");
      codes[i] = res ? res->status : 0;
    });
  for (auto& w : workers) w.join();
  for (int i = 0; i < kSessions; ++i) {
    EXPECT_EQ(codes[i], 200);
    auto [_, v] = get("/sessions/" + ids[i]);
    EXPECT_EQ(v["history"].size(), 1u);
    EXPECT_TRUE(em_equal(parse_lf(v["compiled_lf"].get<std::string>()), parse_lf(printed_examples()[0].lf)));
  }
}

TEST(Gateway, DeterministicAcrossManagers) {
  auto run = [] {
    GatewayOptions opts;
    opts.corpus = &starter_corpus();
    opts.store = &example_store();
    SessionManager m(opts);
    std::vector<std::string> trace;
    for (const auto& ex : printed_examples()) {
      Json req{{"question", ex.name}, {"predicted_lf", ex.lf}, {"entities", entities_json(ex.entities)}};
      auto v = m.create(session_request_from_json(req));
      trace.push_back(v["id"].get<std::string>() + " " + v["compiled_lf"].dump());
      for (const auto& s : v["steps"]) trace.push_back(s["templated_q"]);
      auto after = m.feedback(v["id"], "delete question #" + std::to_string(v["steps"].size()));
      trace.push_back(after["compiled_lf"].dump());
      for (const auto& s : after["steps"]) trace.push_back(s["templated_q"]);
    }
    return trace;
  };
  EXPECT_EQ(run(), run());
}

TEST(Gateway, OracleModelNeedsGold) {
  GatewayOptions opts;
  opts.corpus = &starter_corpus();
  opts.model = "oracle";
  SessionManager m(opts);
  Json req = cwq_request(kCapitalLf);
  try {
    m.create(session_request_from_json(req));
    FAIL() << "expected InvalidArgument";
  } catch (const Error& e) {
    EXPECT_EQ(e.kind(), ErrorKind::InvalidArgument);
  }
  req["gold_lf"] = printed_examples()[0].lf;
  auto v = m.create(session_request_from_json(req));
  auto after = m.feedback(v["id"], "replace question #2 with " + printed_examples()[0].questions[1]);
  EXPECT_TRUE(em_equal(parse_lf(after["compiled_lf"].get<std::string>()), parse_lf(printed_examples()[0].lf)));
}

TEST(Gateway, StatusTable) {
  EXPECT_EQ(http_status(ErrorKind::NotFound, "view"), 404);
  EXPECT_EQ(http_status(ErrorKind::Conflict, "feedback"), 409);
  EXPECT_EQ(http_status(ErrorKind::IoError, "confirm"), 500);
  EXPECT_EQ(http_status(ErrorKind::SyntaxError, "create"), 400);
  EXPECT_EQ(http_status(ErrorKind::ResolutionFailed, "feedback"), 422);
  auto body = error_body(ErrorKind::SyntaxError, "bad");
  EXPECT_EQ(body["error"]["kind"], "SyntaxError");
  EXPECT_EQ(body["error"]["message"], "bad");
}

TEST(Records, RoundTripAndIdempotentAppend) {
  std::string path = temp_records("roundtrip");
  RecordStore store(path);
  DialogueRecord r{"s-000007", "q?", printed_examples()[0].lf, printed_examples()[0].lf,
                   {{"agent", "1. a\n2. b", std::nullopt, printed_examples()[0].lf},
                    {"user", "delete question #1", "delete question #1", kCapitalLf}}};
  store.append(r);
  store.append(r);
  auto all = store.load_all();
  ASSERT_EQ(all.size(), 1u);
  EXPECT_EQ(all[0], r);
  EXPECT_EQ(record_from_json(record_to_json(r)), r);
  EXPECT_FALSE(store.find("s-000008"));
  std::filesystem::remove(path);
}

TEST(Records, UnwritablePathIsIoError) {
  RecordStore store("/nonexistent-dir/x/records.jsonl");
  try {
    store.append(DialogueRecord{"s-000001", "q", "lf", std::nullopt, {}});
    FAIL() << "expected IoError";
  } catch (const Error& e) {
    EXPECT_EQ(e.kind(), ErrorKind::IoError);
  }
}
