#include "funk/lexer.hpp"

#include <cctype>
#include <map>

namespace funk {

namespace {

const std::map<std::string, Tok>& keywords() {
  static const std::map<std::string, Tok> kw = {
      {"var", Tok::KwVar},       {"fun", Tok::KwFun},
      {"func", Tok::KwFunc},     {"proc", Tok::KwProc},
      {"fix", Tok::KwFix},       {"let", Tok::KwLet},
      {"in", Tok::KwIn},         {"return", Tok::KwReturn},
      {"if", Tok::KwIf},         {"else", Tok::KwElse},
      {"int", Tok::KwInt},       {"list", Tok::KwList},
      {"nil", Tok::KwNil},       {"top", Tok::KwTop},
      {"iszero", Tok::PrimOp},   {"dec", Tok::PrimOp},
      {"inc", Tok::PrimOp},      {"cons", Tok::PrimOp},
      {"length", Tok::PrimOp},   {"head", Tok::PrimOp},
      {"tail", Tok::PrimOp},
  };
  return kw;
}

}  // namespace

std::vector<Token> tokenize(const std::string& source) {
  std::vector<Token> out;
  std::size_t i = 0;
  int line = 1, col = 1;

  auto advance = [&](std::size_t n) {
    for (std::size_t k = 0; k < n; ++k) {
      if (source[i] == '\n') {
        ++line;
        col = 1;
      } else {
        ++col;
      }
      ++i;
    }
  };

  while (i < source.size()) {
    char c = source[i];
    Span here{line, col};
    if (std::isspace(static_cast<unsigned char>(c))) {
      advance(1);
      continue;
    }
    if (c == '/' && i + 1 < source.size() && source[i + 1] == '/') {
      while (i < source.size() && source[i] != '\n') advance(1);
      continue;
    }
    if (c == '/' && i + 1 < source.size() && source[i + 1] == '*') {
      advance(2);
      while (i + 1 < source.size() &&
             !(source[i] == '*' && source[i + 1] == '/'))
        advance(1);
      if (i + 1 >= source.size())
        throw ParseError(here, "unterminated block comment");
      advance(2);
      continue;
    }
    if (std::isdigit(static_cast<unsigned char>(c))) {
      std::string text;
      while (i < source.size() &&
             std::isdigit(static_cast<unsigned char>(source[i]))) {
        text += source[i];
        advance(1);
      }
      Token t{Tok::Number, text, std::stoll(text), here};
      out.push_back(std::move(t));
      continue;
    }
    if (std::isalpha(static_cast<unsigned char>(c)) || c == '_') {
      std::string text;
      while (i < source.size() &&
             (std::isalnum(static_cast<unsigned char>(source[i])) ||
              source[i] == '_' || source[i] == '$')) {
        text += source[i];
        advance(1);
      }
      auto it = keywords().find(text);
      Tok kind = it == keywords().end() ? Tok::Ident : it->second;
      out.push_back(Token{kind, std::move(text), 0, here});
      continue;
    }
    Tok kind;
    switch (c) {
      case '(': kind = Tok::LParen; break;
      case ')': kind = Tok::RParen; break;
      case '{': kind = Tok::LBrace; break;
      case '}': kind = Tok::RBrace; break;
      case '[': kind = Tok::LBracket; break;
      case ']': kind = Tok::RBracket; break;
      case '<': kind = Tok::Less; break;
      case '>': kind = Tok::Greater; break;
      case ';': kind = Tok::Semi; break;
      case ':': kind = Tok::Colon; break;
      case ',': kind = Tok::Comma; break;
      case '=': kind = Tok::Assign; break;
      case '.': kind = Tok::Dot; break;
      case '+': kind = Tok::Plus; break;
      case '-': kind = Tok::Minus; break;
      case '*': kind = Tok::Star; break;
      default:
        throw ParseError(here, std::string("unexpected character '") + c + "'");
    }
    out.push_back(Token{kind, std::string(1, c), 0, here});
    advance(1);
  }
  out.push_back(Token{Tok::End, "", 0, Span{line, col}});
  return out;
}

}  // namespace funk
