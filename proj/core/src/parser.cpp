#include "funk/parser.hpp"

namespace funk {

namespace {

class Parser {
 public:
  explicit Parser(const std::string& source) : toks_(tokenize(source)) {}

  Program parse_program() {
    StmtPtr body = parse_stmt();
    expect(Tok::End, "end of input");
    return Program{std::move(body)};
  }

  TypePtr parse_type_only() {
    TypePtr t = parse_type();
    expect(Tok::End, "end of input");
    return t;
  }

 private:
  std::vector<Token> toks_;
  std::size_t pos_ = 0;
  int depth_ = 0;

  // Caps recursive-descent depth so pathological nesting cannot blow the
  // native stack.
  struct Nesting {
    explicit Nesting(Parser& p) : parser(p) {
      if (++parser.depth_ > 2000)
        throw ParseError(parser.cur().span, "nesting too deep");
    }
    ~Nesting() { --parser.depth_; }
    Parser& parser;
  };

  const Token& cur() const { return toks_[pos_]; }
  const Token& peek(std::size_t k = 1) const {
    return toks_[std::min(pos_ + k, toks_.size() - 1)];
  }

  Token advance() { return toks_[pos_++]; }

  bool at(Tok k) const { return cur().kind == k; }

  bool accept(Tok k) {
    if (!at(k)) return false;
    ++pos_;
    return true;
  }

  Token expect(Tok k, const std::string& what) {
    if (!at(k))
      throw ParseError(cur().span, "expected " + what + " but found '" +
                                       (cur().kind == Tok::End ? "<eof>"
                                                               : cur().text) +
                                       "'");
    return advance();
  }

  [[noreturn]] void fail(const std::string& message) {
    throw ParseError(cur().span, message);
  }

  std::string expect_ident() { return expect(Tok::Ident, "identifier").text; }

  // ---- types ----

  TypePtr parse_type() {
    Nesting guard(*this);
    TypePtr base = parse_type_atom();
    while (accept(Tok::KwList)) {
      if (base->kind() != Type::Kind::Int)
        fail("only 'int list' is supported");
      base = Type::int_list();
    }
    return base;
  }

  TypePtr parse_type_atom() {
    if (accept(Tok::KwInt)) return Type::integer();
    if (accept(Tok::KwTop)) return Type::top();
    if (at(Tok::KwFunc)) {
      advance();
      expect(Tok::LParen, "'('");
      std::vector<TypePtr> parts;
      while (!at(Tok::LBracket)) {
        parts.push_back(parse_type());
        expect(Tok::Comma, "','");
      }
      if (parts.empty()) fail("function type needs a return type");
      Effect eff = parse_effect_brackets();
      expect(Tok::RParen, "')'");
      TypePtr ret = parts.back();
      parts.pop_back();
      return Type::func(std::move(parts), std::move(ret), std::move(eff));
    }
    if (at(Tok::Less)) {
      std::vector<std::string> binders = parse_binders();
      TypePtr body = parse_type();
      for (auto it = binders.rbegin(); it != binders.rend(); ++it)
        body = Type::eff_all(*it, std::move(body));
      return body;
    }
    fail("expected a type");
  }

  std::vector<std::string> parse_binders() {
    expect(Tok::Less, "'<'");
    std::vector<std::string> names;
    names.push_back(expect_ident());
    while (accept(Tok::Comma)) names.push_back(expect_ident());
    expect(Tok::Greater, "'>'");
    return names;
  }

  Effect parse_effect_brackets() {
    expect(Tok::LBracket, "'['");
    std::vector<EffectAtom> atoms;
    if (!at(Tok::RBracket)) {
      atoms.push_back(EffectAtom::var(expect_ident()));
      while (accept(Tok::Comma))
        atoms.push_back(EffectAtom::var(expect_ident()));
    }
    expect(Tok::RBracket, "']'");
    return Effect(std::move(atoms));
  }

  // ---- expressions ----

  std::vector<ExprPtr> parse_args() {
    expect(Tok::LParen, "'('");
    std::vector<ExprPtr> args;
    if (!at(Tok::RParen)) {
      args.push_back(parse_expr());
      while (accept(Tok::Comma)) args.push_back(parse_expr());
    }
    expect(Tok::RParen, "')'");
    return args;
  }

  ExprPtr parse_expr() {
    Nesting guard(*this);
    Span span = cur().span;
    ExprPtr lhs = parse_mul();
    while (at(Tok::Plus) || at(Tok::Minus)) {
      std::string op = advance().text;
      ExprPtr rhs = parse_mul();
      lhs = make_expr(PrimExpr{op, {std::move(lhs), std::move(rhs)}}, span);
    }
    return lhs;
  }

  ExprPtr parse_mul() {
    Span span = cur().span;
    ExprPtr lhs = parse_postfix();
    while (at(Tok::Star)) {
      advance();
      ExprPtr rhs = parse_postfix();
      lhs = make_expr(PrimExpr{"*", {std::move(lhs), std::move(rhs)}}, span);
    }
    return lhs;
  }

  ExprPtr parse_postfix() {
    ExprPtr e = parse_primary();
    while (at(Tok::Less)) {
      Span span = cur().span;
      advance();
      std::vector<std::string> args;
      args.push_back(expect_ident());
      while (accept(Tok::Comma)) args.push_back(expect_ident());
      expect(Tok::Greater, "'>'");
      for (auto& a : args)
        e = make_expr(EffAppExpr{std::move(e), EffectAtom::var(a)}, span);
    }
    return e;
  }

  ExprPtr parse_primary() {
    Span span = cur().span;
    switch (cur().kind) {
      case Tok::Number:
        return make_expr(NumExpr{advance().number}, span);
      case Tok::KwNil:
        advance();
        return make_expr(ListExpr{}, span);
      case Tok::Ident:
        return make_expr(VarExpr{advance().text}, span);
      case Tok::PrimOp: {
        std::string op = advance().text;
        std::vector<ExprPtr> args = parse_args();
        return make_expr(PrimExpr{std::move(op), std::move(args)}, span);
      }
      case Tok::KwFun:
        return parse_fun();
      case Tok::Less: {
        std::vector<std::string> binders = parse_binders();
        ExprPtr body = parse_primary();
        if (!body->is_abstraction())
          throw ParseError(span,
                           "effect abstraction body must be an abstraction");
        for (auto it = binders.rbegin(); it != binders.rend(); ++it)
          body = make_expr(EffAbsExpr{*it, std::move(body)}, span);
        return body;
      }
      case Tok::LParen: {
        advance();
        ExprPtr e = parse_expr();
        expect(Tok::RParen, "')'");
        return e;
      }
      case Tok::KwLet: {
        advance();
        std::string name = expect_ident();
        expect(Tok::Assign, "'='");
        ExprPtr rhs = parse_expr();
        expect(Tok::KwIn, "'in'");
        ExprPtr body = parse_expr();
        return make_expr(LetExpr{std::move(name), std::move(rhs),
                                 std::move(body)},
                         span);
      }
      case Tok::KwFix: {
        advance();
        std::string name = expect_ident();
        expect(Tok::Colon, "':'");
        TypePtr annot = parse_type();
        expect(Tok::Dot, "'.'");
        ExprPtr body = parse_expr();
        if (!body->is_abstraction())
          throw ParseError(span, "fix body must be an abstraction");
        return make_expr(FixExpr{std::move(name), std::move(annot),
                                 std::move(body)},
                         span);
      }
      default:
        fail("expected an expression");
    }
  }

  // fun(params; captures) [: T] [eff] { s }
  ExprPtr parse_fun() {
    Span span = cur().span;
    expect(Tok::KwFun, "'fun'");
    auto [params, captures] = parse_param_list();
    TypePtr ret;
    if (accept(Tok::Colon)) ret = parse_type();
    Effect eff;
    if (at(Tok::LBracket)) eff = parse_effect_brackets();
    expect(Tok::LBrace, "'{'");
    StmtPtr body = parse_stmt();
    expect(Tok::RBrace, "'}'");
    return make_expr(FunExpr{std::move(params), std::move(captures),
                             std::move(eff), std::move(ret), std::move(body)},
                     span);
  }

  std::pair<std::vector<Param>, std::vector<std::string>> parse_param_list() {
    expect(Tok::LParen, "'('");
    std::vector<Param> params;
    std::vector<std::string> captures;
    if (at(Tok::Ident)) {
      params.push_back(parse_param());
      while (accept(Tok::Comma)) params.push_back(parse_param());
    }
    if (accept(Tok::Semi)) {
      captures.push_back(expect_ident());
      while (accept(Tok::Comma)) captures.push_back(expect_ident());
    }
    expect(Tok::RParen, "')'");
    return {std::move(params), std::move(captures)};
  }

  Param parse_param() {
    std::string name = expect_ident();
    expect(Tok::Colon, "':'");
    return Param{std::move(name), parse_type()};
  }

  // ---- statements ----

  StmtPtr parse_stmt() {
    Nesting guard(*this);
    Span span = cur().span;
    switch (cur().kind) {
      case Tok::KwVar: {
        advance();
        std::string name = expect_ident();
        TypePtr annot;
        if (accept(Tok::Colon)) annot = parse_type();
        expect(Tok::Assign, "'='");
        ExprPtr rhs = parse_expr();
        if (at(Tok::LParen)) {
          if (annot)
            fail("a call binding does not take a type annotation");
          std::vector<ExprPtr> args = parse_args();
          expect(Tok::Semi, "';'");
          StmtPtr rest = parse_stmt();
          return make_stmt(LetCallStmt{std::move(name), std::move(rhs),
                                       std::move(args), std::move(rest)},
                           span);
        }
        expect(Tok::Semi, "';'");
        StmtPtr rest = parse_stmt();
        return make_stmt(VarInitStmt{std::move(name), std::move(annot),
                                     std::move(rhs), std::move(rest)},
                         span);
      }
      case Tok::KwReturn: {
        advance();
        ExprPtr e = parse_expr();
        if (at(Tok::LParen)) {
          std::vector<ExprPtr> args = parse_args();
          expect(Tok::Semi, "';'");
          return make_stmt(TailCallStmt{std::move(e), std::move(args)}, span);
        }
        expect(Tok::Semi, "';'");
        return make_stmt(ReturnStmt{std::move(e)}, span);
      }
      case Tok::KwIf: {
        advance();
        expect(Tok::LParen, "'('");
        ExprPtr cond = parse_expr();
        expect(Tok::RParen, "')'");
        StmtPtr then_branch = parse_branch();
        expect(Tok::KwElse, "'else'");
        StmtPtr else_branch = parse_branch();
        return make_stmt(IfStmt{std::move(cond), std::move(then_branch),
                                std::move(else_branch)},
                         span);
      }
      case Tok::KwProc:
        return parse_proc();
      case Tok::End:
        fail("expected a statement (every path must end in a return)");
      default:
        fail("expected a statement");
    }
  }

  StmtPtr parse_branch() {
    if (accept(Tok::LBrace)) {
      StmtPtr s = parse_stmt();
      expect(Tok::RBrace, "'}'");
      return s;
    }
    return parse_stmt();
  }

  // proc <z,...> f(params; captures): T [eff] { s } rest
  StmtPtr parse_proc() {
    Span span = cur().span;
    expect(Tok::KwProc, "'proc'");
    std::vector<std::string> binders;
    if (at(Tok::Less)) binders = parse_binders();
    std::string name = expect_ident();
    auto [params, captures] = parse_param_list();
    expect(Tok::Colon, "':'");
    TypePtr ret = parse_type();
    Effect eff;
    if (at(Tok::LBracket)) eff = parse_effect_brackets();
    expect(Tok::LBrace, "'{'");
    StmtPtr body = parse_stmt();
    expect(Tok::RBrace, "'}'");
    StmtPtr rest = parse_stmt();
    return make_stmt(ProcStmt{std::move(binders), std::move(name),
                              std::move(params), std::move(captures),
                              std::move(ret), std::move(eff), std::move(body),
                              std::move(rest)},
                     span);
  }
};

}  // namespace

Program parse(const std::string& source) {
  return Parser(source).parse_program();
}

TypePtr parse_type(const std::string& source) {
  return Parser(source).parse_type_only();
}

}  // namespace funk
