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

// Command-line front end. Talks to the library only through stepfix.h.

#include <cstdio>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <memory>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "json.hpp"
#include "stepfix/stepfix.h"

using nlohmann::json;

namespace {

constexpr int kExitIo = 1;
constexpr int kExitInvalid = 2;

struct Failure {
  int code;
  std::string message;
};

std::string slurp(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw Failure{kExitIo, "cannot read " + path};
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

// Inline JSON when it starts with '{' or '[', else a file path.
json json_arg(const std::string& arg) {
  std::string text = !arg.empty() && (arg[0] == '{' || arg[0] == '[') ? arg : slurp(arg);
  try {
    return json::parse(text);
  } catch (const json::exception& e) {
    throw Failure{kExitInvalid, "invalid JSON in " + (text == arg ? std::string("argument") : arg) + ": " + e.what()};
  }
}

// A form given inline, as "@path", or as a path. Files hold either the bare
// text or a JSON object with "lf" and optional "entities".
struct FormArg {
  std::string lf;
  std::optional<json> entities;
};

std::string trim_newlines(std::string s) {
  while (!s.empty() && (s.back() == '\n' || s.back() == '\r' || s.back() == ' ')) s.pop_back();
  return s;
}

FormArg form_arg(const std::string& arg) {
  std::string path;
  if (!arg.empty() && arg[0] == '@')
    path = arg.substr(1);
  else if (!arg.empty() && arg[0] != '<' && std::filesystem::is_regular_file(arg))
    path = arg;
  if (path.empty()) return {arg, std::nullopt};
  std::string text = trim_newlines(slurp(path));
  std::size_t start = text.find_first_not_of(" \t\r\n");
  if (start != std::string::npos && text[start] == '{') {
    json j;
    try {
      j = json::parse(text);
    } catch (const json::exception& e) {
      throw Failure{kExitInvalid, "invalid JSON in " + path + ": " + e.what()};
    }
    if (!j.contains("lf") || !j["lf"].is_string()) throw Failure{kExitInvalid, path + ": missing \"lf\""};
    FormArg out{j["lf"].get<std::string>(), std::nullopt};
    if (j.contains("entities")) out.entities = j["entities"];
    return out;
  }
  return {text, std::nullopt};
}

std::string text_arg(const std::string& arg) { return form_arg(arg).lf; }

std::vector<std::string> lines_of(const std::string& path) {
  std::istringstream in(slurp(path));
  std::vector<std::string> out;
  for (std::string line; std::getline(in, line);) {
    if (!line.empty() && line.back() == '\r') line.pop_back();
    if (!line.empty()) out.push_back(line);
  }
  return out;
}

std::vector<json> jsonl_of(const std::string& path) {
  std::vector<json> out;
  std::size_t n = 0;
  for (const auto& line : lines_of(path)) {
    ++n;
    try {
      out.push_back(json::parse(line));
    } catch (const json::exception& e) {
      throw Failure{kExitInvalid, path + ":" + std::to_string(n) + ": " + e.what()};
    }
  }
  return out;
}

struct EngineDeleter {
  void operator()(sfx_engine* e) const { sfx_engine_destroy(e); }
};

int exit_for(sfx_status st) { return sfx_is_validation_error(st) ? kExitInvalid : kExitIo; }

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Step-by-step correction of logical forms through templated questions."};
  app.set_version_flag("--version", std::string(sfx_version()));
  app.require_subcommand(1);
  app.fallthrough();

  std::string config_file, corpus, store, model, host, records, format = "text";
  int attempts = 0, port = -1;
  app.add_option("--config", config_file, "key = value settings file")->check(CLI::ExistingFile);
  app.add_option("--corpus", corpus, "template corpus TSV");
  app.add_option("--store", store, "triple store TSV");
  app.add_option("--model", model, "oracle | template-inverse | remote:URL");
  app.add_option("--attempts", attempts, "attempts per dialogue")->check(CLI::PositiveNumber);
  app.add_option("--host", host, "gateway bind address");
  app.add_option("--port", port, "gateway port")->check(CLI::Range(0, 65535));
  app.add_option("--records", records, "dialogue record JSONL");
  app.add_option("--format", format, "output format")->check(CLI::IsMember({"json", "text"}));

  json request = json::object();
  std::string command;
  std::string lf, entities, pred, gold, pred_entities, gold_entities;
  std::vector<std::string> utterances;
  std::string pred_path, gold_path, input, pred_out, gold_out, rejects_out;
  bool with_dialogues = false;

  auto* decompose = app.add_subcommand("decompose", "split a form into components");
  decompose->add_option("--lf", lf, "logical form (or @file)")->required();
  decompose->add_option("--entities", entities, "entity map JSON (inline or file)");

  auto* render = app.add_subcommand("render", "templated question per step");
  render->add_option("--lf", lf, "logical form (or @file)")->required();
  render->add_option("--entities", entities, "entity map JSON");

  auto* diff = app.add_subcommand("diff", "edit operations turning a prediction into gold");
  diff->add_option("--pred", pred, "predicted form (or @file)")->required();
  diff->add_option("--gold", gold, "gold form (or @file)")->required();
  diff->add_option("--pred-entities", pred_entities, "entity map of the prediction");
  diff->add_option("--gold-entities", gold_entities, "entity map of the gold form");

  auto* apply = app.add_subcommand("apply", "apply feedback utterances to a form");
  apply->add_option("--lf", lf, "logical form (or @file)")->required();
  apply->add_option("--entities", entities, "entity map JSON");
  apply->add_option("-u,--utterance", utterances, "feedback, in order")->required();
  apply->add_option("--gold", gold, "gold form for the oracle model");
  apply->add_option("--gold-entities", gold_entities, "entity map of the gold form");

  auto* compile = app.add_subcommand("compile", "decompose and recompile a form");
  compile->add_option("--lf", lf, "logical form (or @file)")->required();
  compile->add_option("--entities", entities, "entity map JSON");

  auto* exec = app.add_subcommand("exec", "answer each step against the store");
  exec->add_option("--lf", lf, "logical form (or @file)")->required();
  exec->add_option("--entities", entities, "entity map JSON");

  auto* simulate = app.add_subcommand("simulate", "run simulated correction dialogues");
  simulate->add_option("--pred", pred_path, "predicted records JSONL")->required()->check(CLI::ExistingFile);
  simulate->add_option("--gold", gold_path, "gold records JSONL")->required()->check(CLI::ExistingFile);
  simulate->add_flag("--dialogues", with_dialogues, "include per-dialogue outcomes");

  std::string metric, sentences, candidates, references, a, b, req_file;
  int n = 0;
  bool mask = false;
  auto* metrics = app.add_subcommand("metrics", "text and answer metrics");
  metrics->add_option("metric", metric, "diversity | bleu | rouge | levenshtein | f1 | em | context")
      ->required()
      ->check(CLI::IsMember({"diversity", "bleu", "rouge", "levenshtein", "f1", "em", "context"}));
  std::vector<std::string> metric_files;
  metrics->add_option("files", metric_files, "diversity: sentence file; bleu: candidate and reference files");
  metrics->add_option("--sentences", sentences, "one sentence per line (diversity)");
  metrics->add_option("--candidates", candidates, "one candidate per line (bleu)");
  metrics->add_option("--references", references, "one reference per line (bleu)");
  metrics->add_option("-a", a, "first text or form (rouge candidate)");
  metrics->add_option("-b", b, "second text or form (rouge reference)");
  metrics->add_option("-n", n, "n-gram order");
  metrics->add_flag("--mask", mask, "mask entity surfaces (rouge, context)");
  metrics->add_option("--request", req_file, "full request JSON; overrides other flags");

  std::string items, scorer;
  int k = 0;
  auto* clean = app.add_subcommand("clean-rank", "rank generated questions for cleaning");
  clean->add_option("--items", items, "JSONL with id, source, target, generated, label")
      ->required()
      ->check(CLI::ExistingFile);
  clean->add_option("--scorer", scorer, "unigram | remote:URL");
  clean->add_option("--train", input, "training sentences, one per line");
  clean->add_option("-k", k, "report precision at k")->check(CLI::PositiveNumber);

  auto* ingest = app.add_subcommand("ingest", "convert a CWQ-style JSON file into suite records");
  ingest->add_option("--input", input, "source JSON")->required()->check(CLI::ExistingFile);
  ingest->add_option("--pred-out", pred_out, "predicted records JSONL")->required();
  ingest->add_option("--gold-out", gold_out, "gold records JSONL")->required();
  ingest->add_option("--rejects-out", rejects_out, "rejected items JSONL")->required();

  auto* serve = app.add_subcommand("serve", "run the HTTP gateway");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    return app.exit(e) == 0 ? 0 : kExitInvalid;
  }

  try {
    json config = json::object();
    if (!config_file.empty()) config["config_file"] = config_file;
    config["env"] = true;
    if (!corpus.empty()) config["corpus"] = corpus;
    if (!store.empty()) config["store"] = store;
    if (!model.empty()) config["model"] = model;
    if (attempts > 0) config["attempts"] = std::to_string(attempts);
    if (!host.empty()) config["host"] = host;
    if (port >= 0) config["port"] = std::to_string(port);
    if (!records.empty()) config["records"] = records;

    sfx_engine* raw = nullptr;
    if (sfx_status st = sfx_engine_create(config.dump().c_str(), &raw); st != SFX_OK)
      throw Failure{exit_for(st), std::string(sfx_status_name(st)) + ": " + sfx_last_error()};
    std::unique_ptr<sfx_engine, EngineDeleter> engine(raw);

    auto* sub = app.get_subcommands().front();
    command = sub->get_name();
    if (sub == serve) {
      sfx_status st = sfx_serve(engine.get());
      if (st != SFX_OK) throw Failure{exit_for(st), std::string(sfx_status_name(st)) + ": " + sfx_last_error()};
      return 0;
    }

    if (sub == decompose || sub == render || sub == compile || sub == exec || sub == apply) {
      FormArg form = form_arg(lf);
      request["lf"] = form.lf;
      if (!entities.empty())
        request["entities"] = json_arg(entities);
      else if (form.entities)
        request["entities"] = *form.entities;
    }
    if (sub == apply) {
      request["utterances"] = utterances;
      if (!model.empty()) request["model"] = model;
      if (!gold.empty()) request["gold_lf"] = text_arg(gold);
      if (!gold_entities.empty()) request["gold_entities"] = json_arg(gold_entities);
    } else if (sub == diff) {
      FormArg p = form_arg(pred), g = form_arg(gold);
      request["pred_lf"] = p.lf;
      request["gold_lf"] = g.lf;
      if (!pred_entities.empty())
        request["pred_entities"] = json_arg(pred_entities);
      else if (p.entities)
        request["pred_entities"] = *p.entities;
      if (!gold_entities.empty())
        request["gold_entities"] = json_arg(gold_entities);
      else if (g.entities)
        request["gold_entities"] = *g.entities;
    } else if (sub == simulate) {
      request["pred_path"] = pred_path;
      request["gold_path"] = gold_path;
      request["include_dialogues"] = with_dialogues;
      if (!model.empty()) request["model"] = model;
      if (attempts > 0) request["attempts"] = attempts;
    } else if (sub == metrics) {
      if (!req_file.empty()) {
        request = json_arg(req_file);
      } else {
        if (metric == "diversity" && sentences.empty() && !metric_files.empty()) sentences = metric_files[0];
        if (metric == "bleu" && metric_files.size() == 2) {
          candidates = metric_files[0];
          references = metric_files[1];
        }
        if (!sentences.empty()) request["sentences"] = lines_of(sentences);
        if (!candidates.empty()) request["candidates"] = lines_of(candidates);
        if (!references.empty()) request["references"] = lines_of(references);
        if (metric == "rouge") {
          request["candidate"] = text_arg(a);
          request["reference"] = text_arg(b);
        } else if (metric == "f1") {
          request["pred"] = json_arg(a);
          request["gold"] = json_arg(b);
        } else if (metric == "levenshtein" || metric == "em") {
          request["a"] = text_arg(a);
          request["b"] = text_arg(b);
        }
        if (n > 0) request["n"] = n;
        request["mask"] = mask;
      }
      request["metric"] = metric;
    } else if (sub == clean) {
      request["items"] = jsonl_of(items);
      if (!scorer.empty()) request["scorer"] = scorer;
      if (!input.empty()) request["train"] = lines_of(input);
      if (k > 0) request["k"] = k;
    } else if (sub == ingest) {
      request["input"] = input;
      request["pred_out"] = pred_out;
      request["gold_out"] = gold_out;
      request["rejects_out"] = rejects_out;
    }

    char* raw_out = nullptr;
    sfx_status st = sfx_call(engine.get(), command.c_str(), request.dump().c_str(), &raw_out);
    std::string response = raw_out ? raw_out : "";
    sfx_string_free(raw_out);
    if (st != SFX_OK) {
      if (format == "json") std::cout << response << "\n";
      throw Failure{exit_for(st), std::string(sfx_status_name(st)) + ": " + sfx_last_error()};
    }
    json out = json::parse(response);
    if (format == "text" && out.contains("text") && out["text"].is_string()) {
      std::cout << out["text"].get<std::string>();
    } else {
      if (format == "json") out.erase("text");
      std::cout << out.dump(2) << "\n";
    }
    return 0;
  } catch (const Failure& f) {
    std::cerr << "stepfix: " << f.message << "\n";
    return f.code;
  }
}
