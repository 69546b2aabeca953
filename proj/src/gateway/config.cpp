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

#include "stepfix/config.hpp"

#include <cctype>
#include <charconv>
#include <cstdlib>
#include <fstream>
#include <sstream>

#include "stepfix/error.hpp"

namespace stepfix {
namespace {

std::string trim(std::string_view s) {
  while (!s.empty() && std::isspace(static_cast<unsigned char>(s.front()))) s.remove_prefix(1);
  while (!s.empty() && std::isspace(static_cast<unsigned char>(s.back()))) s.remove_suffix(1);
  return std::string(s);
}

int parse_int(const std::string& key, const std::string& value, int lo, int hi) {
  int v = 0;
  auto [p, ec] = std::from_chars(value.data(), value.data() + value.size(), v);
  if (ec != std::errc() || p != value.data() + value.size() || v < lo || v > hi)
    fail(ErrorKind::InvalidArgument,
         key + " must be an integer in " + std::to_string(lo) + ".." + std::to_string(hi) + ", got '" + value + "'");
  return v;
}

void check_model(const std::string& key, const std::string& value, bool allow_template) {
  if (value == "oracle" || (allow_template && value == "template-inverse")) return;
  if (value.rfind("remote:", 0) == 0 && value.size() > 7) return;
  fail(ErrorKind::InvalidArgument, "unknown " + key + " '" + value + "'");
}

}  // namespace

void set_option(Config& c, const std::string& key, const std::string& value) {
  if (key == "corpus") {
    c.corpus_path = value;
  } else if (key == "store") {
    c.store_path = value;
  } else if (key == "model") {
    check_model(key, value, true);
    c.model = value;
  } else if (key == "feedback") {
    check_model(key, value, false);
    c.feedback = value;
  } else if (key == "attempts") {
    c.max_attempts = parse_int(key, value, 1, 100);
  } else if (key == "host") {
    c.host = value;
  } else if (key == "port") {
    c.port = parse_int(key, value, 0, 65535);
  } else if (key == "records") {
    c.records_path = value;
  } else {
    fail(ErrorKind::InvalidArgument, "unknown option '" + key + "'");
  }
}

void apply_config_text(Config& c, std::string_view text, const std::string& source) {
  std::istringstream in{std::string(text)};
  std::string line;
  int n = 0;
  while (std::getline(in, line)) {
    ++n;
    std::string body = line;
    bool quoted = false;
    for (std::size_t i = 0; i < body.size(); ++i) {
      if (body[i] == '"') quoted = !quoted;
      if (body[i] == '#' && !quoted) {
        body.resize(i);
        break;
      }
    }
    body = trim(body);
    if (body.empty()) continue;
    auto eq = body.find('=');
    if (eq == std::string::npos) fail(ErrorKind::ParseError, source + ":" + std::to_string(n) + ": expected key = value");
    std::string key = trim(body.substr(0, eq));
    std::string value = trim(body.substr(eq + 1));
    if (value.size() >= 2 && value.front() == '"' && value.back() == '"') value = value.substr(1, value.size() - 2);
    try {
      set_option(c, key, value);
    } catch (const Error& e) {
      fail(ErrorKind::InvalidArgument, source + ":" + std::to_string(n) + ": " + e.what());
    }
  }
}

void apply_config_file(Config& c, const std::string& path) {
  std::ifstream in(path);
  if (!in) fail(ErrorKind::IoError, "cannot open config " + path);
  std::stringstream ss;
  ss << in.rdbuf();
  apply_config_text(c, ss.str(), path);
}

void apply_env(Config& c, const EnvLookup& lookup) {
  for (const char* key : {"corpus", "store", "model", "feedback", "attempts", "host", "port", "records"}) {
    std::string name = "STEPFIX_";
    for (const char* p = key; *p; ++p) name += static_cast<char>(std::toupper(static_cast<unsigned char>(*p)));
    if (auto v = lookup(name)) set_option(c, key, *v);
  }
}

std::optional<std::string> process_env(const std::string& name) {
  if (const char* v = std::getenv(name.c_str())) return std::string(v);
  return std::nullopt;
}

}  // namespace stepfix
