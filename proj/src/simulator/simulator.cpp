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

#include "stepfix/simulator.hpp"

#include <fstream>
#include <sstream>

#include "stepfix/error.hpp"
#include "stepfix/json_io.hpp"
#include "stepfix/metrics.hpp"

namespace stepfix {
namespace {

std::size_t remaining(const DialogueState& s, const Decomposition& gold, const EntityMap& ge,
                      const TemplateCorpus& corpus) {
  return diff_components(as_decomposition(s), s.entities, gold, ge, corpus).ops.size();
}

std::set<Value> evaluate(const TripleStore& store, const Decomposition& d, const EntityMap& entities) {
  return eval_decomposition(store, d, entities).final.values;
}

}  // namespace

std::vector<std::string> OracleFeedback::next_ops(const DialogueState& state, const Decomposition& gold,
                                                  const EntityMap& gold_entities, int) const {
  std::vector<std::string> out;
  for (const auto& op : diff_components(as_decomposition(state), state.entities, gold, gold_entities, corpus_).ops)
    out.push_back(render_op(op));
  return out;
}

ModelFactory oracle_model_factory(const TemplateCorpus& corpus) {
  return [&corpus](const Decomposition& gold, const EntityMap& ge) -> std::unique_ptr<CorrectionModel> {
    return std::make_unique<OracleModel>(gold, ge, corpus);
  };
}

ModelFactory template_inverse_factory(const TemplateCorpus& corpus) {
  return [&corpus](const Decomposition&, const EntityMap&) -> std::unique_ptr<CorrectionModel> {
    return std::make_unique<TemplateInverseModel>(corpus);
  };
}

DialogueOutcome simulate_dialogue(const DialogueInput& in, const SimulationConfig& cfg, DialogueState* final_state) {
  if (!cfg.corpus || !cfg.feedback || !cfg.model)
    fail(ErrorKind::InvalidArgument, "simulation needs a corpus, a feedback generator and a model");
  if (cfg.max_attempts < 1) fail(ErrorKind::InvalidArgument, "max_attempts must be at least 1");
  const TemplateCorpus& corpus = *cfg.corpus;

  DialogueOutcome out;
  out.id = in.id;
  out.final_lf = in.pred_lf;
  try {
    const LogicalForm gold_lf = parse_lf(in.gold_lf);
    const Decomposition gold = decompose(gold_lf, corpus);
    const LogicalForm pred_lf = parse_lf(in.pred_lf);
    DialogueState state = make_state(in.question, pred_lf, in.pred_entities, corpus);

    std::set<Value> gold_answers(in.gold_answers.begin(), in.gold_answers.end());
    if (cfg.store && gold_answers.empty()) gold_answers = evaluate(*cfg.store, gold, in.gold_entities);
    if (cfg.store) out.f1_pre = answer_f1(evaluate(*cfg.store, as_decomposition(state), state.entities), gold_answers);

    out.em_pre = exact_match(pred_lf, in.pred_entities, gold_lf, in.gold_entities);
    out.em_post = out.em_pre;
    auto model = cfg.model(gold, in.gold_entities);

    try {
      for (int attempt = 1; attempt <= cfg.max_attempts && !out.em_post; ++attempt) {
        auto utterances = cfg.feedback->next_ops(state, gold, in.gold_entities, attempt);
        if (utterances.empty()) break;
        out.attempts_used = attempt;
        state.attempts_used = attempt;
        for (const auto& u : utterances) {
          std::size_t before = remaining(state, gold, in.gold_entities, corpus);
          state = apply_op(state, parse_feedback(u), *model, corpus);
          std::size_t after = remaining(state, gold, in.gold_entities, corpus);
          out.turns.push_back(TurnResult{u, state.history_lf.back(), after < before});
        }
        LogicalForm compiled = compile(state);
        out.final_lf = serialize(compiled);
        out.em_post = exact_match(compiled, state.entities, gold_lf, in.gold_entities);
      }
    } catch (const Error& e) {
      out.error = std::string(to_string(e.kind())) + ": " + e.what();
      out.em_post = false;
    }
    if (cfg.store) {
      try {
        out.f1_post = answer_f1(evaluate(*cfg.store, as_decomposition(state), state.entities), gold_answers);
      } catch (const Error&) {
        out.f1_post = 0.0;
      }
    }
    if (final_state) *final_state = std::move(state);
  } catch (const Error& e) {
    out.error = std::string(to_string(e.kind())) + ": " + e.what();
    out.em_post = false;
    if (cfg.store) {
      if (!out.f1_pre) out.f1_pre = 0.0;
      out.f1_post = 0.0;
    }
  }
  return out;
}

SimulationReport summarize(std::vector<DialogueOutcome> outcomes, int max_attempts, bool with_f1) {
  SimulationReport r;
  r.max_attempts = max_attempts;
  r.n_dialogues = outcomes.size();
  std::vector<bool> pre, post;
  double f1_pre = 0, f1_post = 0;
  for (const auto& o : outcomes) {
    pre.push_back(o.em_pre);
    post.push_back(o.em_post);
    if (o.error) ++r.n_failed;
    ++r.attempts_histogram[o.attempts_used];
    for (std::size_t t = 0; t < o.turns.size(); ++t) {
      if (r.per_turn.size() <= t) r.per_turn.push_back(TurnStat{t + 1, 0, 0});
      ++r.per_turn[t].count;
      if (o.turns[t].correct) ++r.per_turn[t].correct;
    }
    f1_pre += o.f1_pre.value_or(0);
    f1_post += o.f1_post.value_or(0);
  }
  r.em_pre = ratio(pre);
  r.em_post = ratio(post);
  if (with_f1 && !outcomes.empty()) {
    r.f1_pre = f1_pre / static_cast<double>(outcomes.size());
    r.f1_post = f1_post / static_cast<double>(outcomes.size());
  }
  r.dialogues = std::move(outcomes);
  return r;
}

SimulationReport run_suite(const std::vector<SuiteRecord>& predictions, const std::vector<SuiteRecord>& gold,
                           const SimulationConfig& config) {
  std::map<std::string, const SuiteRecord*> gold_by_id;
  for (const auto& g : gold) {
    if (g.id.empty()) fail(ErrorKind::MissingId, "gold record without an id");
    gold_by_id[g.id] = &g;
  }
  std::set<std::string> seen;
  std::vector<DialogueOutcome> outcomes;
  for (const auto& p : predictions) {
    if (p.id.empty()) fail(ErrorKind::MissingId, "prediction record without an id");
    auto it = gold_by_id.find(p.id);
    if (it == gold_by_id.end()) fail(ErrorKind::MissingId, "no gold record for id '" + p.id + "'");
    seen.insert(p.id);
    const SuiteRecord& g = *it->second;
    DialogueInput in{p.id, p.question.empty() ? g.question : p.question, p.lf, p.entities, g.lf, g.entities,
                     g.answers};
    outcomes.push_back(simulate_dialogue(in, config));
  }
  for (const auto& [id, g] : gold_by_id)
    if (!seen.count(id)) fail(ErrorKind::MissingId, "no prediction for gold id '" + id + "'");
  return summarize(std::move(outcomes), config.max_attempts, config.store != nullptr);
}

std::vector<SuiteRecord> parse_records(std::string_view jsonl, const std::string& source) {
  std::vector<SuiteRecord> out;
  std::size_t line_no = 0;
  std::size_t start = 0;
  while (start <= jsonl.size()) {
    std::size_t end = jsonl.find('\n', start);
    if (end == std::string_view::npos) end = jsonl.size();
    std::string_view line = jsonl.substr(start, end - start);
    ++line_no;
    start = end + 1;
    if (line.find_first_not_of(" \t\r") == std::string_view::npos) {
      if (end == jsonl.size()) break;
      continue;
    }
    const std::string where = source + ":" + std::to_string(line_no);
    Json j = parse_json(line, where);
    if (!j.is_object()) fail(ErrorKind::ParseError, where + ": expected an object");
    SuiteRecord r;
    if (!j.contains("id") || !j["id"].is_string() || j["id"].get<std::string>().empty())
      fail(ErrorKind::MissingId, where + ": record has no id");
    r.id = j["id"].get<std::string>();
    if (!j.contains("lf") || !j["lf"].is_string()) fail(ErrorKind::ParseError, where + ": record has no lf");
    r.lf = j["lf"].get<std::string>();
    r.question = j.value("question", "");
    try {
      r.entities = entities_from_json(j.value("entities", Json::object()));
    } catch (const Error& e) {
      fail(ErrorKind::ParseError, where + ": " + e.what());
    }
    if (j.contains("answers") && j["answers"].is_array())
      for (const auto& a : j["answers"]) r.answers.push_back(value_from_json(a));
    out.push_back(std::move(r));
    if (end == jsonl.size()) break;
  }
  return out;
}

std::vector<SuiteRecord> load_records(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) fail(ErrorKind::IoError, "cannot open " + path);
  std::stringstream ss;
  ss << in.rdbuf();
  return parse_records(ss.str(), path);
}

std::string record_json(const SuiteRecord& r) {
  Json answers = Json::array();
  for (const auto& v : r.answers) answers.push_back(value_json(v));
  return Json{{"id", r.id}, {"lf", r.lf}, {"question", r.question}, {"entities", entities_json(r.entities)},
              {"answers", answers}}
      .dump();
}

SimulationReport run_suite(const std::string& pred_path, const std::string& gold_path,
                           const SimulationConfig& config) {
  return run_suite(load_records(pred_path), load_records(gold_path), config);
}

std::string report_json(const SimulationReport& r, bool include_dialogues) {
  Json j{{"n_dialogues", r.n_dialogues}, {"n_failed", r.n_failed},   {"max_attempts", r.max_attempts},
         {"em_pre", r.em_pre},           {"em_post", r.em_post},     {"retry_strategy", r.retry_strategy}};
  j["f1_pre"] = r.f1_pre ? Json(*r.f1_pre) : Json(nullptr);
  j["f1_post"] = r.f1_post ? Json(*r.f1_post) : Json(nullptr);
  j["per_turn"] = Json::array();
  for (const auto& t : r.per_turn)
    j["per_turn"].push_back({{"turn", t.turn},
                             {"correct", t.correct},
                             {"count", t.count},
                             {"ratio", t.count ? static_cast<double>(t.correct) / static_cast<double>(t.count) : 0.0}});
  j["attempts_histogram"] = Json::object();
  for (const auto& [a, n] : r.attempts_histogram) j["attempts_histogram"][std::to_string(a)] = n;
  if (include_dialogues) {
    j["dialogues"] = Json::array();
    for (const auto& d : r.dialogues) {
      Json turns = Json::array();
      for (const auto& t : d.turns) turns.push_back({{"utterance", t.utterance}, {"lf", t.lf}, {"correct", t.correct}});
      Json e{{"id", d.id},
             {"em_pre", d.em_pre},
             {"em_post", d.em_post},
             {"attempts_used", d.attempts_used},
             {"final_lf", d.final_lf},
             {"turns", turns}};
      if (d.error) e["error"] = *d.error;
      if (d.f1_pre) e["f1_pre"] = *d.f1_pre;
      if (d.f1_post) e["f1_post"] = *d.f1_post;
      j["dialogues"].push_back(e);
    }
  }
  return j.dump(2);
}

std::string report_table(const SimulationReport& r) {
  auto pct = [](double v) {
    std::ostringstream os;
    os.setf(std::ios::fixed);
    os.precision(1);
    os << v * 100;
    return os.str();
  };
  std::ostringstream os;
  os << format_table({"dialogues", "failed", "EM", "EM*", "F1", "F1*", "attempts"},
                     {{std::to_string(r.n_dialogues), std::to_string(r.n_failed), pct(r.em_pre), pct(r.em_post),
                       r.f1_pre ? pct(*r.f1_pre) : "-", r.f1_post ? pct(*r.f1_post) : "-",
                       std::to_string(r.max_attempts)}});
  std::vector<std::string> head = {"turn"};
  std::vector<std::string> acc = {"accuracy"}, cnt = {"count"};
  for (const auto& t : r.per_turn) {
    head.push_back("Turn-" + std::to_string(t.turn));
    acc.push_back(pct(t.count ? static_cast<double>(t.correct) / static_cast<double>(t.count) : 0.0));
    cnt.push_back(std::to_string(t.count));
  }
  if (!r.per_turn.empty()) os << '\n' << format_table(head, {acc, cnt});
  std::vector<std::vector<std::string>> hist;
  for (const auto& [a, n] : r.attempts_histogram) hist.push_back({std::to_string(a), std::to_string(n)});
  os << '\n' << format_table({"attempts_used", "dialogues"}, hist);
  os << "retry: " << r.retry_strategy << '\n';
  return os.str();
}

}  // namespace stepfix
