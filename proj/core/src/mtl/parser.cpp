// Copyright 2026 The mtperf Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//     http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#include "mtperf/mtl/parser.hpp"

#include <initializer_list>
#include <unordered_set>

#include "mtperf/canonical_json.hpp"

namespace mtperf::mtl {

const MappingRule* Transformation::find_mapping(std::string_view rule) const {
  for (const auto& m : mappings) {
    if (m.name == rule) return &m;
  }
  return nullptr;
}

namespace {

class Parser {
 public:
  explicit Parser(std::vector<Token> tokens) : toks_(std::move(tokens)) {}

  Transformation program() {
    Transformation t;
    t.pos = peek().pos;
    expect(TokenKind::KwTransformation);
    t.name = expect_ident();
    expect(TokenKind::LParen);
    expect(TokenKind::KwIn);
    t.in_param = expect_ident();
    expect(TokenKind::Colon);
    t.in_meta = expect_ident();
    expect(TokenKind::Comma);
    expect(TokenKind::KwOut);
    t.out_param = expect_ident();
    expect(TokenKind::Colon);
    t.out_meta = expect_ident();
    expect(TokenKind::RParen);
    expect(TokenKind::Semicolon);

    std::unordered_set<std::string> names;
    while (at(TokenKind::KwMapping)) {
      const SourcePos pos = peek().pos;
      MappingRule rule = mapping();
      if (!names.insert(rule.name).second) {
        throw MtlParseError(pos, "duplicate mapping '" + rule.name + "'");
      }
      t.mappings.push_back(std::move(rule));
    }
    if (!at(TokenKind::KwMain)) fail({TokenKind::KwMapping, TokenKind::KwMain});
    t.main_pos = peek().pos;
    advance();
    expect(TokenKind::LParen);
    expect(TokenKind::RParen);
    expect(TokenKind::LBrace);
    while (!at(TokenKind::RBrace)) {
      if (!at(TokenKind::Ident)) fail({TokenKind::Ident, TokenKind::RBrace});
      t.main.push_back(statement(t.in_param));
    }
    advance();
    if (!at(TokenKind::End)) {
      if (at(TokenKind::KwMain)) throw MtlParseError(peek().pos, "more than one main block");
      fail({TokenKind::End});
    }
    return t;
  }

 private:
  const Token& peek(std::size_t ahead = 0) const {
    const std::size_t i = pos_ + ahead;
    return i < toks_.size() ? toks_[i] : toks_.back();
  }
  bool at(TokenKind k) const { return peek().kind == k; }
  const Token& advance() {
    const Token& t = toks_[pos_];
    if (pos_ + 1 < toks_.size()) ++pos_;
    return t;
  }

  [[noreturn]] void fail(std::initializer_list<TokenKind> expected) const {
    std::vector<std::string> names;
    for (auto k : expected) names.emplace_back(describe(k));
    fail_names(std::move(names));
  }

  [[noreturn]] void fail_names(std::vector<std::string> expected) const {
    const Token& t = peek();
    std::string found = t.kind == TokenKind::Ident ? "identifier '" + t.text + "'"
                        : t.kind == TokenKind::Int ? "integer " + t.text
                                                   : std::string(describe(t.kind));
    throw MtlParseError(t.pos, "unexpected " + found, std::move(expected));
  }

  const Token& expect(TokenKind k) {
    if (!at(k)) fail({k});
    return advance();
  }

  std::string expect_ident() { return expect(TokenKind::Ident).text; }

  void expect_word(std::string_view word) {
    if (!at(TokenKind::Ident) || peek().text != word) {
      fail_names({"'" + std::string(word) + "'"});
    }
    advance();
  }

  MappingRule mapping() {
    MappingRule r;
    r.pos = expect(TokenKind::KwMapping).pos;
    r.source_class = expect_ident();
    expect(TokenKind::ColonColon);
    r.name = expect_ident();
    expect(TokenKind::LParen);
    expect(TokenKind::RParen);
    expect(TokenKind::Colon);
    r.target_class = expect_ident();
    if (at(TokenKind::KwWhen)) {
      advance();
      expect(TokenKind::LBrace);
      r.guard = expr();
      expect(TokenKind::RBrace);
    } else if (!at(TokenKind::LBrace)) {
      fail({TokenKind::KwWhen, TokenKind::LBrace});
    }
    expect(TokenKind::LBrace);
    while (!at(TokenKind::RBrace)) {
      if (!at(TokenKind::Ident)) fail({TokenKind::Ident, TokenKind::RBrace});
      Assignment a;
      a.pos = peek().pos;
      a.lhs = advance().text;
      expect(TokenKind::Assign);
      a.rhs = expr();
      expect(TokenKind::Semicolon);
      r.body.push_back(std::move(a));
    }
    advance();
    return r;
  }

  MainStatement statement(const std::string& in_param) {
    MainStatement s;
    s.pos = peek().pos;
    if (peek().text != in_param) {
      fail_names({"input parameter '" + in_param + "'"});
    }
    advance();
    expect(TokenKind::Dot);
    expect_word("objectsOfType");
    expect(TokenKind::LParen);
    s.class_name = expect_ident();
    expect(TokenKind::RParen);
    expect(TokenKind::Arrow);
    expect_word("map");
    s.rule_name = expect_ident();
    expect(TokenKind::LParen);
    expect(TokenKind::RParen);
    expect(TokenKind::Semicolon);
    return s;
  }

  // Precedence climbing over the binary operator table.
  static std::optional<BinaryOp> binary_op(TokenKind k) {
    switch (k) {
      case TokenKind::KwOr: return BinaryOp::Or;
      case TokenKind::KwAnd: return BinaryOp::And;
      case TokenKind::EqEq: return BinaryOp::Eq;
      case TokenKind::NotEq: return BinaryOp::Ne;
      case TokenKind::Less: return BinaryOp::Lt;
      case TokenKind::LessEq: return BinaryOp::Le;
      case TokenKind::Greater: return BinaryOp::Gt;
      case TokenKind::GreaterEq: return BinaryOp::Ge;
      case TokenKind::Plus: return BinaryOp::Add;
      case TokenKind::Minus: return BinaryOp::Sub;
      case TokenKind::Star: return BinaryOp::Mul;
      case TokenKind::Slash: return BinaryOp::Div;
      default: return std::nullopt;
    }
  }

  ExprPtr expr(int min_prec = 1) {
    ExprPtr lhs = unary();
    for (;;) {
      auto op = binary_op(peek().kind);
      if (!op || precedence(*op) < min_prec) return lhs;
      const SourcePos pos = advance().pos;
      ExprPtr rhs = expr(precedence(*op) + 1);
      lhs = make_expr(pos, Binary{*op, std::move(lhs), std::move(rhs)});
    }
  }

  ExprPtr unary() {
    if (at(TokenKind::Minus)) {
      const SourcePos pos = advance().pos;
      return make_expr(pos, Negate{unary()});
    }
    return primary();
  }

  ExprPtr primary() {
    const Token& t = peek();
    switch (t.kind) {
      case TokenKind::Int: advance(); return make_expr(t.pos, Literal{Value{t.int_value}});
      case TokenKind::String: advance(); return make_expr(t.pos, Literal{Value{t.text}});
      case TokenKind::KwTrue: advance(); return make_expr(t.pos, Literal{Value{true}});
      case TokenKind::KwFalse: advance(); return make_expr(t.pos, Literal{Value{false}});
      case TokenKind::LParen: {
        advance();
        ExprPtr inner = expr();
        expect(TokenKind::RParen);
        return inner;
      }
      case TokenKind::KwSelf: return postfix();
      default:
        fail({TokenKind::Int, TokenKind::String, TokenKind::KwTrue, TokenKind::KwFalse,
              TokenKind::KwSelf, TokenKind::LParen, TokenKind::Minus});
    }
  }

  ExprPtr postfix() {
    const SourcePos pos = expect(TokenKind::KwSelf).pos;
    Navigation nav;
    while (at(TokenKind::Dot)) {
      advance();
      nav.path.push_back(expect_ident());
    }
    if (!at(TokenKind::Arrow)) return make_expr(pos, std::move(nav));
    advance();
    if (at(TokenKind::Ident) && peek().text == "map") {
      advance();
      std::string rule = expect_ident();
      expect(TokenKind::LParen);
      expect(TokenKind::RParen);
      return make_expr(pos, MapCall{std::move(nav), std::move(rule)});
    }
    if (at(TokenKind::Ident) && peek().text == "size") {
      advance();
      expect(TokenKind::LParen);
      expect(TokenKind::RParen);
      return make_expr(pos, SizeOf{std::move(nav)});
    }
    fail_names({"'map'", "'size'"});
  }

  std::vector<Token> toks_;
  std::size_t pos_ = 0;
};

}  // namespace

std::string_view spelling(BinaryOp op) {
  switch (op) {
    case BinaryOp::Or: return "or";
    case BinaryOp::And: return "and";
    case BinaryOp::Eq: return "==";
    case BinaryOp::Ne: return "!=";
    case BinaryOp::Lt: return "<";
    case BinaryOp::Le: return "<=";
    case BinaryOp::Gt: return ">";
    case BinaryOp::Ge: return ">=";
    case BinaryOp::Add: return "+";
    case BinaryOp::Sub: return "-";
    case BinaryOp::Mul: return "*";
    case BinaryOp::Div: return "/";
  }
  return "?";
}

int precedence(BinaryOp op) {
  switch (op) {
    case BinaryOp::Or: return 1;
    case BinaryOp::And: return 2;
    case BinaryOp::Eq:
    case BinaryOp::Ne:
    case BinaryOp::Lt:
    case BinaryOp::Le:
    case BinaryOp::Gt:
    case BinaryOp::Ge: return 3;
    case BinaryOp::Add:
    case BinaryOp::Sub: return 4;
    case BinaryOp::Mul:
    case BinaryOp::Div: return 5;
  }
  return 0;
}

Transformation parse(std::string_view source) {
  Transformation t = Parser(lex(source)).program();
  t.source_hash = content_hash(source);
  return t;
}

Transformation load_transformation(const std::filesystem::path& path) {
  return parse(read_text_file(path));
}

}  // namespace mtperf::mtl
