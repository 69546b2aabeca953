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

#include "stepfix/error.hpp"

namespace stepfix {

std::string_view to_string(ErrorKind kind) {
  switch (kind) {
    case ErrorKind::SyntaxError: return "SyntaxError";
    case ErrorKind::UnboundVariable: return "UnboundVariable";
    case ErrorKind::EntityNotFound: return "EntityNotFound";
    case ErrorKind::MissingEntity: return "MissingEntity";
    case ErrorKind::UnknownPredicate: return "UnknownPredicate";
    case ErrorKind::AmbiguousGrouping: return "AmbiguousGrouping";
    case ErrorKind::UnclassifiableForm: return "UnclassifiableForm";
    case ErrorKind::NoTemplateMatch: return "NoTemplateMatch";
    case ErrorKind::UnrecognizedOperation: return "UnrecognizedOperation";
    case ErrorKind::BadIndex: return "BadIndex";
    case ErrorKind::IndexOutOfRange: return "IndexOutOfRange";
    case ErrorKind::ResolutionFailed: return "ResolutionFailed";
    case ErrorKind::DisconnectedComponents: return "DisconnectedComponents";
    case ErrorKind::MultipleAnswerVars: return "MultipleAnswerVars";
    case ErrorKind::ParseError: return "ParseError";
    case ErrorKind::TypeMismatch: return "TypeMismatch";
    case ErrorKind::ScorerFailure: return "ScorerFailure";
    case ErrorKind::UnlabeledItem: return "UnlabeledItem";
    case ErrorKind::LengthMismatch: return "LengthMismatch";
    case ErrorKind::MissingId: return "MissingId";
    case ErrorKind::InvalidArgument: return "InvalidArgument";
    case ErrorKind::IoError: return "IoError";
    case ErrorKind::RemoteError: return "RemoteError";
    case ErrorKind::NotFound: return "NotFound";
    case ErrorKind::Conflict: return "Conflict";
  }
  return "Unknown";
}

SyntaxError::SyntaxError(std::size_t position, std::string expected)
    : Error(ErrorKind::SyntaxError,
            "syntax error at offset " + std::to_string(position) +
                ": expected " + expected),
      position_(position),
      expected_(std::move(expected)) {}

void fail(ErrorKind kind, const std::string& message) {
  throw Error(kind, message);
}

}  // namespace stepfix
