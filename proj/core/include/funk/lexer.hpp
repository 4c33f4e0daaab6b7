#pragma once

#include <string>
#include <vector>

#include "funk/ast.hpp"
#include "funk/errors.hpp"

namespace funk {

enum class Tok {
  Ident,
  Number,
  KwVar,
  KwFun,
  KwFunc,
  KwProc,
  KwFix,
  KwLet,
  KwIn,
  KwReturn,
  KwIf,
  KwElse,
  KwInt,
  KwList,
  KwNil,
  KwTop,
  PrimOp,  // iszero dec inc cons length head tail
  LParen,
  RParen,
  LBrace,
  RBrace,
  LBracket,
  RBracket,
  Less,
  Greater,
  Semi,
  Colon,
  Comma,
  Assign,
  Dot,
  Plus,
  Minus,
  Star,
  End,
};

struct Token {
  Tok kind;
  std::string text;
  long long number = 0;
  Span span;
};

std::vector<Token> tokenize(const std::string& source);

}  // namespace funk
