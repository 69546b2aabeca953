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

#include <cctype>
#include <charconv>

#include "stepfix/error.hpp"
#include "stepfix/lf.hpp"

namespace stepfix {
namespace {

bool boundary(char c) {
  return std::isspace(static_cast<unsigned char>(c)) || c == '(' || c == ')' || c == '{' ||
         c == '}' || c == '.' || c == ',';
}

std::string strip_ns(std::string id) {
  if (id.rfind("ns:", 0) == 0) id.erase(0, 3);
  return id;
}

}  // namespace

std::pair<std::string, EntityMap> delexicalize(std::string_view text,
                                               const std::vector<Entity>& entities) {
  std::vector<std::string> ids;
  for (const auto& e : entities) ids.push_back("ns:" + strip_ns(e.kb_id));

  std::string out;
  EntityMap map;
  std::vector<bool> found(entities.size(), false);
  std::size_t i = 0;
  while (i < text.size()) {
    bool at_start = i == 0 || boundary(text[i - 1]);
    std::size_t hit = entities.size();
    if (at_start) {
      for (std::size_t k = 0; k < ids.size(); ++k) {
        const auto& id = ids[k];
        if (text.compare(i, id.size(), id) != 0) continue;
        std::size_t end = i + id.size();
        // a trailing '.' right before whitespace is a statement separator
        if (end == text.size() || boundary(text[end])) {
          hit = k;
          break;
        }
      }
    }
    if (hit == entities.size()) {
      out += text[i++];
      continue;
    }
    int index = static_cast<int>(map.size()) + 1;
    map[index] = Entity{entities[hit].surface, strip_ns(entities[hit].kb_id)};
    found[hit] = true;
    out += "#entity" + std::to_string(index) + "#";
    i += ids[hit].size();
  }
  for (std::size_t k = 0; k < entities.size(); ++k)
    if (!found[k]) fail(ErrorKind::EntityNotFound, strip_ns(entities[k].kb_id));
  return {out, map};
}

std::string relexicalize(std::string_view text, const EntityMap& entities, RelexMode mode) {
  std::string out;
  std::size_t i = 0;
  constexpr std::string_view prefix = "#entity";
  while (i < text.size()) {
    if (text.compare(i, prefix.size(), prefix) == 0) {
      std::size_t j = i + prefix.size();
      std::size_t digits = j;
      while (j < text.size() && std::isdigit(static_cast<unsigned char>(text[j]))) ++j;
      if (j > digits && j < text.size() && text[j] == '#') {
        int index = 0;
        std::from_chars(text.data() + digits, text.data() + j, index);
        auto it = entities.find(index);
        if (it == entities.end())
          fail(ErrorKind::MissingEntity, "no entity for #entity" + std::to_string(index) + "#");
        out += mode == RelexMode::Surface ? it->second.surface : "ns:" + it->second.kb_id;
        i = j + 1;
        continue;
      }
    }
    out += text[i++];
  }
  return out;
}

std::optional<int> find_entity(const EntityMap& entities, std::string_view surface) {
  for (const auto& [index, e] : entities)
    if (e.surface == surface) return index;
  return std::nullopt;
}

}  // namespace stepfix
