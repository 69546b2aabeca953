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

#include "stepfix/engine.hpp"

#include <cstdio>
#include <fstream>
#include <regex>
#include <sstream>

#include "stepfix/corrector.hpp"
#include "stepfix/error.hpp"
#include "stepfix/gateway.hpp"
#include "stepfix/ingest.hpp"
#include "stepfix/metrics.hpp"
#include "stepfix/remote.hpp"
#include "stepfix/simulator.hpp"

namespace stepfix {
namespace {

const Json& need(const Json& req, const char* key) {
  if (!req.is_object() || !req.contains(key) || req[key].is_null())
    fail(ErrorKind::InvalidArgument, std::string("missing field '") + key + "'");
  return req[key];
}

std::string need_string(const Json& req, const char* key) {
  const Json& v = need(req, key);
  if (!v.is_string()) fail(ErrorKind::InvalidArgument, std::string("field '") + key + "' must be a string");
  return v.get<std::string>();
}

std::vector<std::string> string_list(const Json& req, const char* key) {
  const Json& v = need(req, key);
  if (!v.is_array()) fail(ErrorKind::InvalidArgument, std::string("field '") + key + "' must be an array");
  std::vector<std::string> out;
  for (const auto& x : v) {
    if (!x.is_string()) fail(ErrorKind::InvalidArgument, std::string("field '") + key + "' must hold strings");
    out.push_back(x.get<std::string>());
  }
  return out;
}

EntityMap entities_field(const Json& req, const char* key) {
  if (!req.is_object() || !req.contains(key)) return {};
  return entities_from_json(req[key]);
}

// Stand-in surfaces so forms without an entity map can still be rendered.
EntityMap placeholder_entities(const std::string& a, const std::string& b) {
  static const std::regex token(R"(#entity(\d+)#)");
  EntityMap out;
  for (const auto* text : {&a, &b})
    for (std::sregex_iterator it(text->begin(), text->end(), token), end; it != end; ++it) {
      int index = std::stoi((*it)[1].str());
      out[index] = Entity{it->str(), ""};
    }
  return out;
}

Json term_json(const Term& t) { return t.str(); }

Json decomposition_json(const Decomposition& d, const EntityMap* entities, const TemplateCorpus& corpus) {
  Json comps = Json::array();
  for (std::size_t i = 0; i < d.components.size(); ++i) {
    const auto& c = d.components[i];
    Json e{{"index", i + 1},
           {"kind", std::string(to_string(c.kind))},
           {"key", c.key},
           {"input", term_json(c.input)},
           {"output", term_json(c.output)},
           {"statements", serialize(component_statements(c))}};
    if (c.value_var) e["value_var"] = term_json(*c.value_var);
    comps.push_back(e);
  }
  Json j{{"qtype", std::string(to_string(d.qtype))},
         {"header", std::string(header_token(d.header))},
         {"components", comps},
         {"step_count", step_count(d)}};
  if (d.sort)
    j["sort"] = {{"var", d.sort->var.text},
                 {"direction", d.sort->direction == SortClause::Direction::Ascending ? "asc" : "desc"},
                 {"limit", d.sort->limit}};
  if (entities) {
    Json qs = Json::array();
    for (const auto& q : render_all(d, *entities, corpus)) qs.push_back(q.text);
    j["questions"] = qs;
  }
  return j;
}

Json state_json(const DialogueState& s, const TripleStore* store) {
  auto d = as_decomposition(s);
  std::optional<Evaluation> ev;
  if (store) ev = eval_decomposition(*store, d, s.entities);
  Json steps = Json::array();
  for (std::size_t i = 0; i < s.steps.size(); ++i) {
    Json e{{"index", i + 1}, {"templated_q", s.steps[i].templated_q}, {"key", s.steps[i].component.key}};
    if (ev) e["answers"] = answers_json(ev->steps[i]);
    steps.push_back(e);
  }
  Json j{{"qtype", std::string(to_string(s.qtype))},
         {"steps", steps},
         {"history", s.history_q},
         {"lf_history", s.history_lf},
         {"entities", entities_json(s.entities)}};
  if (s.sort) j["sort"] = true;
  try {
    j["compiled_lf"] = serialize(compile(s));
  } catch (const Error& e) {
    j["compiled_lf"] = nullptr;
    j["compile_error"] = std::string(to_string(e.kind())) + ": " + e.what();
  }
  if (ev) j["final_answers"] = answers_json(ev->final);
  return j;
}

std::set<Value> value_set(const Json& req, const char* key) {
  const Json& v = need(req, key);
  if (!v.is_array()) fail(ErrorKind::InvalidArgument, std::string("field '") + key + "' must be an array");
  std::set<Value> out;
  for (const auto& x : v) out.insert(value_from_json(x));
  return out;
}

Json ranked_json(const RankedItem& r) {
  Json j{{"id", r.id}, {"d_score", r.d_score}, {"edit_distance", r.edit_distance}};
  j["label"] = r.inaccurate ? Json(*r.inaccurate ? "inaccurate" : "accurate") : Json(nullptr);
  return j;
}

std::optional<bool> parse_label(const Json& item) {
  if (!item.contains("label") || item["label"].is_null()) return std::nullopt;
  const Json& l = item["label"];
  if (l.is_boolean()) return l.get<bool>();
  if (l.is_number()) return l.get<double>() != 0;
  if (l.is_string()) {
    auto s = l.get<std::string>();
    if (s == "inaccurate" || s == "1") return true;
    if (s == "accurate" || s == "0") return false;
  }
  fail(ErrorKind::InvalidArgument, "label must be accurate, inaccurate, 0 or 1");
}

}  // namespace

Engine::Engine(Config config) : config_(std::move(config)) {}
Engine::~Engine() = default;

const TemplateCorpus& Engine::corpus() {
  if (!corpus_) corpus_ = std::make_unique<TemplateCorpus>(TemplateCorpus::load(config_.corpus_path));
  return *corpus_;
}

const TripleStore* Engine::store() {
  if (!store_loaded_) {
    store_loaded_ = true;
    if (!config_.store_path.empty()) store_ = std::make_unique<TripleStore>(load_store(config_.store_path));
  }
  return store_.get();
}

Json Engine::call(const std::string& command, const Json& req) {
  if (command == "decompose") {
    auto lf = parse_lf(need_string(req, "lf"));
    EntityMap entities = entities_field(req, "entities");
    bool with_questions = req.contains("entities");
    return decomposition_json(decompose(lf, corpus()), with_questions ? &entities : nullptr, corpus());
  }
  if (command == "render") {
    auto d = decompose(parse_lf(need_string(req, "lf")), corpus());
    Json qs = Json::array();
    std::string text;
    for (const auto& q : render_all(d, entities_field(req, "entities"), corpus())) {
      qs.push_back(q.text);
      text += std::to_string(q.step_index) + ". " + q.text + "\n";
    }
    return Json{{"questions", qs}, {"text", text}};
  }
  if (command == "diff") {
    std::string pred_text = need_string(req, "pred_lf"), gold_text = need_string(req, "gold_lf");
    auto pred = decompose(parse_lf(pred_text), corpus());
    auto gold = decompose(parse_lf(gold_text), corpus());
    EntityMap pe = req.contains("pred_entities") ? entities_field(req, "pred_entities")
                                                 : placeholder_entities(pred_text, gold_text);
    EntityMap ge = req.contains("gold_entities") ? entities_field(req, "gold_entities") : pe;
    Json ops = Json::array();
    std::string text;
    for (const auto& op : diff_components(pred, pe, gold, ge, corpus()).ops) {
      ops.push_back(render_op(op));
      text += render_op(op) + "\n";
    }
    return Json{{"utterances", ops}, {"text", text}};
  }
  if (command == "apply") {
    EntityMap entities = entities_field(req, "entities");
    auto state = make_state(req.value("question", ""), parse_lf(need_string(req, "lf")), entities, corpus());
    std::string model_name = req.value("model", config_.model);
    std::unique_ptr<CorrectionModel> model;
    if (model_name == "oracle") {
      auto gold = decompose(parse_lf(need_string(req, "gold_lf")), corpus());
      model = std::make_unique<OracleModel>(
          gold, req.contains("gold_entities") ? entities_field(req, "gold_entities") : entities, corpus());
    } else if (model_name == "template-inverse") {
      model = std::make_unique<TemplateInverseModel>(corpus());
    } else if (model_name.rfind("remote:", 0) == 0) {
      model = std::make_unique<RemoteCorrectionModel>(model_name.substr(7), corpus());
    } else {
      fail(ErrorKind::InvalidArgument, "unknown model '" + model_name + "'");
    }
    for (const auto& u : string_list(req, "utterances")) state = apply_op(state, parse_feedback(u), *model, corpus());
    return state_json(state, store());
  }
  if (command == "compile") {
    auto lf = parse_lf(need_string(req, "lf"));
    auto state = make_state("", lf, entities_field(req, "entities"), corpus());
    auto out = compile(state);
    return Json{{"lf", serialize(out)}, {"em_equal", em_equal(out, lf)}};
  }
  if (command == "exec") {
    auto d = decompose(parse_lf(need_string(req, "lf")), corpus());
    EntityMap entities = entities_field(req, "entities");
    std::unique_ptr<TripleStore> own;
    const TripleStore* st = store();
    if (req.contains("store_path")) {
      own = std::make_unique<TripleStore>(load_store(need_string(req, "store_path")));
      st = own.get();
    }
    if (!st) fail(ErrorKind::InvalidArgument, "exec needs a store (--store)");
    auto ev = eval_decomposition(*st, d, entities);
    auto qs = render_all(d, entities, corpus());
    Json steps = Json::array();
    std::string text;
    for (std::size_t i = 0; i < ev.steps.size(); ++i) {
      steps.push_back({{"index", i + 1},
                       {"templated_q", qs[i].text},
                       {"answers", answers_json(ev.steps[i])},
                       {"answers_text", display_answers(ev.steps[i])}});
      text += std::to_string(i + 1) + ". " + qs[i].text + "\n   " + display_answers(ev.steps[i]) + "\n";
    }
    return Json{{"steps", steps}, {"answers", answers_json(ev.final)}, {"text", text}};
  }
  if (command == "simulate") {
    SimulationConfig cfg;
    cfg.corpus = &corpus();
    cfg.store = store();
    cfg.max_attempts = req.value("attempts", config_.max_attempts);
    std::string model_name = req.value("model", std::string("oracle"));
    if (model_name == "oracle") {
      cfg.model = oracle_model_factory(corpus());
    } else if (model_name == "template-inverse") {
      cfg.model = template_inverse_factory(corpus());
    } else if (model_name.rfind("remote:", 0) == 0) {
      std::string url = model_name.substr(7);
      const TemplateCorpus* c = &corpus();
      cfg.model = [url, c](const Decomposition&, const EntityMap&) -> std::unique_ptr<CorrectionModel> {
        return std::make_unique<RemoteCorrectionModel>(url, *c);
      };
    } else {
      fail(ErrorKind::InvalidArgument, "unknown model '" + model_name + "'");
    }
    std::string feedback_name = req.value("feedback", config_.feedback);
    std::unique_ptr<FeedbackGenerator> feedback;
    if (feedback_name == "oracle")
      feedback = std::make_unique<OracleFeedback>(corpus());
    else if (feedback_name.rfind("remote:", 0) == 0)
      feedback = std::make_unique<RemoteFeedback>(feedback_name.substr(7), corpus());
    else
      fail(ErrorKind::InvalidArgument, "unknown feedback generator '" + feedback_name + "'");
    cfg.feedback = feedback.get();
    auto report = run_suite(need_string(req, "pred_path"), need_string(req, "gold_path"), cfg);
    Json j = parse_json(report_json(report, req.value("include_dialogues", false)));
    j["text"] = report_table(report);
    return j;
  }
  if (command == "metrics") {
    std::string metric = need_string(req, "metric");
    if (metric == "diversity") {
      auto r = diversity_report(string_list(req, "sentences"));
      Json j = parse_json(diversity_json(r));
      j["text"] = diversity_table(r);
      return j;
    }
    if (metric == "bleu")
      return Json{{"bleu", corpus_bleu(string_list(req, "candidates"), string_list(req, "references"),
                                       req.value("n", 4))}};
    if (metric == "rouge") {
      std::vector<std::string> surfaces = req.contains("surfaces") ? string_list(req, "surfaces") : std::vector<std::string>{};
      return Json{{"rouge", rouge_n(need_string(req, "candidate"), need_string(req, "reference"), req.value("n", 1),
                                    req.value("mask", false), surfaces)}};
    }
    if (metric == "levenshtein") return Json{{"distance", levenshtein(need_string(req, "a"), need_string(req, "b"))}};
    if (metric == "f1") return Json{{"f1", answer_f1(value_set(req, "pred"), value_set(req, "gold"))}};
    if (metric == "em") {
      auto a = parse_lf(need_string(req, "a"));
      auto b = parse_lf(need_string(req, "b"));
      bool em = req.contains("a_entities")
                    ? exact_match(a, entities_field(req, "a_entities"), b,
                                  req.contains("b_entities") ? entities_field(req, "b_entities")
                                                             : entities_field(req, "a_entities"))
                    : exact_match(a, b);
      return Json{{"em", em ? 1 : 0}};
    }
    if (metric == "context") {
      std::vector<ContextPair> pairs;
      for (const auto& p : need(req, "pairs")) {
        ContextPair cp{need_string(p, "context"), need_string(p, "text"), {}};
        if (p.contains("surfaces")) cp.surfaces = string_list(p, "surfaces");
        pairs.push_back(std::move(cp));
      }
      auto r = context_awareness(pairs, req.value("n", 1), req.value("mask", true), req.value("seed", 1u));
      return Json{{"actual_mean", r.actual_mean}, {"random_mean", r.random_mean}, {"items", r.items}};
    }
    fail(ErrorKind::InvalidArgument, "unknown metric '" + metric + "'");
  }
  if (command == "clean-rank") {
    std::vector<CleaningItem> items;
    std::vector<std::string> training;
    for (const auto& it : need(req, "items")) {
      CleaningItem c;
      c.id = need_string(it, "id");
      c.source = it.value("source", "");
      c.target = need_string(it, "target");
      const Json& g = need(it, "generated");
      if (g.is_string())
        c.generated.push_back(g.get<std::string>());
      else
        c.generated = string_list(it, "generated");
      c.inaccurate = parse_label(it);
      training.push_back(c.target);
      training.insert(training.end(), c.generated.begin(), c.generated.end());
      items.push_back(std::move(c));
    }
    if (req.contains("train")) training = string_list(req, "train");
    std::string scorer_name = req.value("scorer", std::string("unigram"));
    std::unique_ptr<Scorer> scorer;
    if (scorer_name == "unigram")
      scorer = std::make_unique<UnigramScorer>(training);
    else if (scorer_name.rfind("remote:", 0) == 0)
      scorer = std::make_unique<RemoteScorer>(scorer_name.substr(7));
    else
      fail(ErrorKind::InvalidArgument, "unknown scorer '" + scorer_name + "'");
    auto ranked = cleaning_rank(items, *scorer);
    Json list = Json::array();
    std::vector<std::vector<std::string>> rows;
    for (std::size_t i = 0; i < ranked.size(); ++i) {
      list.push_back(ranked_json(ranked[i]));
      char d[32];
      std::snprintf(d, sizeof d, "%.4f", ranked[i].d_score);
      rows.push_back({std::to_string(i + 1), ranked[i].id, d, std::to_string(ranked[i].edit_distance),
                      ranked[i].inaccurate ? (*ranked[i].inaccurate ? "inaccurate" : "accurate") : "-"});
    }
    Json j{{"ranked", list}, {"text", format_table({"rank", "id", "D", "edit", "label"}, rows)}};
    if (req.contains("k")) j["precision_at_k"] = precision_at_k(ranked, req["k"].get<std::size_t>());
    return j;
  }
  if (command == "ingest") {
    auto result = ingest_cwq(need_string(req, "input"), corpus());
    write_ingest(result, need_string(req, "pred_out"), need_string(req, "gold_out"), need_string(req, "rejects_out"));
    Json rejects = Json::array();
    for (const auto& r : result.rejects) rejects.push_back({{"id", r.id}, {"reason", r.reason}});
    return Json{{"accepted", result.gold.size()}, {"rejected", result.rejects.size()}, {"rejects", rejects}};
  }
  fail(ErrorKind::InvalidArgument, "unknown command '" + command + "'");
}

void Engine::serve() {
  RecordStore records(config_.records_path);
  GatewayOptions opts;
  opts.corpus = &corpus();
  opts.store = store();
  opts.model = config_.model;
  opts.records = &records;
  SessionManager sessions(opts);
  GatewayServer server(sessions);
  int port = server.bind(config_.host, config_.port);
  std::fprintf(stderr, "stepfix: serving on http://%s:%d\n", config_.host.c_str(), port);
  server.listen();
}

}  // namespace stepfix
