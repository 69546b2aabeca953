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

#ifndef STEPFIX_ERROR_HPP
#define STEPFIX_ERROR_HPP

#include <stdexcept>
#include <string>
#include <string_view>

namespace stepfix {

// Every failure surfaced by the library carries one of these kinds. The names
// are stable: they appear verbatim in HTTP error bodies and CLI output.
enum class ErrorKind {
  SyntaxError,
  UnboundVariable,
  EntityNotFound,
  MissingEntity,
  UnknownPredicate,
  AmbiguousGrouping,
  UnclassifiableForm,
  NoTemplateMatch,
  UnrecognizedOperation,
  BadIndex,
  IndexOutOfRange,
  ResolutionFailed,
  DisconnectedComponents,
  MultipleAnswerVars,
  ParseError,
  TypeMismatch,
  ScorerFailure,
  UnlabeledItem,
  LengthMismatch,
  MissingId,
  InvalidArgument,
  IoError,
  RemoteError,
  NotFound,
  Conflict,
};

std::string_view to_string(ErrorKind kind);

class Error : public std::runtime_error {
 public:
  Error(ErrorKind kind, const std::string& message)
      : std::runtime_error(message), kind_(kind) {}

  ErrorKind kind() const noexcept { return kind_; }

 private:
  ErrorKind kind_;
};

// SyntaxError with the byte offset into the input and what was expected there.
class SyntaxError : public Error {
 public:
  SyntaxError(std::size_t position, std::string expected);

  std::size_t position() const noexcept { return position_; }
  const std::string& expected() const noexcept { return expected_; }

 private:
  std::size_t position_;
  std::string expected_;
};

[[noreturn]] void fail(ErrorKind kind, const std::string& message);

}  // namespace stepfix

#endif  // STEPFIX_ERROR_HPP
