#pragma once

#include <stdexcept>
#include <string>

#include "funk/ast.hpp"

namespace funk {

struct ParseError : std::runtime_error {
  ParseError(Span span, const std::string& message)
      : std::runtime_error(message), span(span) {}
  Span span;
};

enum class ErrorKind {
  UnboundVar,
  EffectViolation,
  NotInEffect,
  Arity,
  Mismatch,
  UpwardFunarg,
  TailCallOverlap,
  MalformedType,
  MalformedEffect,
};

std::string to_string(ErrorKind kind);

struct TypeError : std::runtime_error {
  TypeError(ErrorKind kind, Span span, const std::string& message)
      : std::runtime_error(message), kind(kind), span(span) {}

  ErrorKind kind;
  Span span;
};

}  // namespace funk
