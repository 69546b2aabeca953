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

#include "stepfix/corrector.hpp"
#include "stepfix/error.hpp"

namespace stepfix {
namespace {

constexpr std::string_view kReplace = "replace question #";
constexpr std::string_view kWith = " with ";
constexpr std::string_view kDelete = "delete question #";
constexpr std::string_view kInsert = "insert question ";

bool starts_with_ci(std::string_view text, std::string_view prefix) {
  if (text.size() < prefix.size()) return false;
  for (std::size_t i = 0; i < prefix.size(); ++i)
    if (std::tolower(static_cast<unsigned char>(text[i])) != prefix[i]) return false;
  return true;
}

std::size_t find_ci(std::string_view text, std::string_view needle) {
  for (std::size_t i = 0; i + needle.size() <= text.size(); ++i)
    if (starts_with_ci(text.substr(i), needle)) return i;
  return std::string_view::npos;
}

std::size_t parse_index(std::string_view digits) {
  std::size_t value = 0;
  auto [p, ec] = std::from_chars(digits.data(), digits.data() + digits.size(), value);
  if (digits.empty() || ec != std::errc() || p != digits.data() + digits.size())
    fail(ErrorKind::BadIndex, "question index '" + std::string(digits) + "' is not a number");
  if (value == 0) fail(ErrorKind::BadIndex, "question indices start at 1");
  return value;
}

std::string_view trim(std::string_view s) {
  while (!s.empty() && std::isspace(static_cast<unsigned char>(s.front()))) s.remove_prefix(1);
  while (!s.empty() && std::isspace(static_cast<unsigned char>(s.back()))) s.remove_suffix(1);
  return s;
}

}  // namespace

EditOp EditOp::replace(std::size_t index, std::string question) {
  return EditOp{Kind::Replace, index, std::move(question)};
}

EditOp EditOp::remove(std::size_t index) { return EditOp{Kind::Delete, index, {}}; }

EditOp EditOp::insert(std::string question) { return EditOp{Kind::Insert, 0, std::move(question)}; }

std::string render_op(const EditOp& op) {
  switch (op.kind) {
    case EditOp::Kind::Replace:
      return std::string(kReplace) + std::to_string(op.index) + std::string(kWith) + op.question;
    case EditOp::Kind::Delete: return std::string(kDelete) + std::to_string(op.index);
    case EditOp::Kind::Insert: return std::string(kInsert) + op.question;
  }
  return {};
}

EditOp parse_feedback(std::string_view utterance) {
  auto text = trim(utterance);
  if (starts_with_ci(text, kReplace)) {
    auto rest = text.substr(kReplace.size());
    auto with = find_ci(rest, kWith);
    if (with == std::string_view::npos)
      fail(ErrorKind::UnrecognizedOperation, "expected 'replace question #X with Y'");
    auto index = parse_index(rest.substr(0, with));
    auto question = rest.substr(with + kWith.size());
    if (trim(question).empty()) fail(ErrorKind::UnrecognizedOperation, "replacement question is empty");
    return EditOp::replace(index, std::string(question));
  }
  if (starts_with_ci(text, kDelete)) return EditOp::remove(parse_index(text.substr(kDelete.size())));
  if (starts_with_ci(text, kInsert)) {
    auto question = text.substr(kInsert.size());
    if (trim(question).empty()) fail(ErrorKind::UnrecognizedOperation, "inserted question is empty");
    return EditOp::insert(std::string(question));
  }
  fail(ErrorKind::UnrecognizedOperation, "unrecognized operation: " + std::string(text));
}

}  // namespace stepfix
