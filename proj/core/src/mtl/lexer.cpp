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

#include "mtperf/mtl/lexer.hpp"

#include <cctype>
#include <limits>
#include <unordered_map>

namespace mtperf::mtl {

std::string to_string(SourcePos pos) {
  return std::to_string(pos.line) + ":" + std::to_string(pos.column);
}

std::string_view describe(TokenKind kind) {
  switch (kind) {
    case TokenKind::Ident: return "identifier";
    case TokenKind::Int: return "integer literal";
    case TokenKind::String: return "string literal";
    case TokenKind::KwTransformation: return "'transformation'";
    case TokenKind::KwIn: return "'in'";
    case TokenKind::KwOut: return "'out'";
    case TokenKind::KwMapping: return "'mapping'";
    case TokenKind::KwWhen: return "'when'";
    case TokenKind::KwMain: return "'main'";
    case TokenKind::KwSelf: return "'self'";
    case TokenKind::KwTrue: return "'true'";
    case TokenKind::KwFalse: return "'false'";
    case TokenKind::KwAnd: return "'and'";
    case TokenKind::KwOr: return "'or'";
    case TokenKind::LParen: return "'('";
    case TokenKind::RParen: return "')'";
    case TokenKind::LBrace: return "'{'";
    case TokenKind::RBrace: return "'}'";
    case TokenKind::Semicolon: return "';'";
    case TokenKind::Colon: return "':'";
    case TokenKind::ColonColon: return "'::'";
    case TokenKind::Comma: return "','";
    case TokenKind::Dot: return "'.'";
    case TokenKind::Arrow: return "'->'";
    case TokenKind::Assign: return "':='";
    case TokenKind::Plus: return "'+'";
    case TokenKind::Minus: return "'-'";
    case TokenKind::Star: return "'*'";
    case TokenKind::Slash: return "'/'";
    case TokenKind::EqEq: return "'=='";
    case TokenKind::NotEq: return "'!='";
    case TokenKind::Less: return "'<'";
    case TokenKind::LessEq: return "'<='";
    case TokenKind::Greater: return "'>'";
    case TokenKind::GreaterEq: return "'>='";
    case TokenKind::End: return "end of input";
  }
  return "?";
}

namespace {

std::string compose(SourcePos pos, const std::string& message,
                    const std::vector<std::string>& expected) {
  std::string out = to_string(pos) + ": " + message;
  if (!expected.empty()) {
    out += " (expected ";
    for (std::size_t i = 0; i < expected.size(); ++i) {
      if (i) out += i + 1 == expected.size() ? " or " : ", ";
      out += expected[i];
    }
    out += ")";
  }
  return out;
}

const std::unordered_map<std::string_view, TokenKind>& keywords() {
  static const std::unordered_map<std::string_view, TokenKind> kw = {
      {"transformation", TokenKind::KwTransformation},
      {"in", TokenKind::KwIn},
      {"out", TokenKind::KwOut},
      {"mapping", TokenKind::KwMapping},
      {"when", TokenKind::KwWhen},
      {"main", TokenKind::KwMain},
      {"self", TokenKind::KwSelf},
      {"true", TokenKind::KwTrue},
      {"false", TokenKind::KwFalse},
      {"and", TokenKind::KwAnd},
      {"or", TokenKind::KwOr},
  };
  return kw;
}

class Lexer {
 public:
  explicit Lexer(std::string_view src) : src_(src) {}

  std::vector<Token> run() {
    std::vector<Token> out;
    for (;;) {
      skip_trivia();
      Token t;
      t.pos = pos_;
      if (at_end()) {
        t.kind = TokenKind::End;
        out.push_back(std::move(t));
        return out;
      }
      const char c = peek();
      if (std::isalpha(static_cast<unsigned char>(c)) || c == '_') {
        lex_word(t);
      } else if (std::isdigit(static_cast<unsigned char>(c))) {
        lex_int(t);
      } else if (c == '"') {
        lex_string(t);
      } else {
        lex_punct(t);
      }
      out.push_back(std::move(t));
    }
  }

 private:
  bool at_end() const { return i_ >= src_.size(); }
  char peek(std::size_t ahead = 0) const {
    return i_ + ahead < src_.size() ? src_[i_ + ahead] : '\0';
  }
  char advance() {
    const char c = src_[i_++];
    if (c == '\n') {
      ++pos_.line;
      pos_.column = 1;
    } else {
      ++pos_.column;
    }
    return c;
  }

  void skip_trivia() {
    while (!at_end()) {
      const char c = peek();
      if (c == ' ' || c == '\t' || c == '\r' || c == '\n') {
        advance();
      } else if (c == '/' && peek(1) == '/') {
        while (!at_end() && peek() != '\n') advance();
      } else if (c == '/' && peek(1) == '*') {
        const SourcePos start = pos_;
        advance();
        advance();
        while (!(peek() == '*' && peek(1) == '/')) {
          if (at_end()) throw LexError(start, "unterminated block comment");
          advance();
        }
        advance();
        advance();
      } else {
        return;
      }
    }
  }

  void lex_word(Token& t) {
    const std::size_t start = i_;
    while (!at_end() && (std::isalnum(static_cast<unsigned char>(peek())) || peek() == '_')) {
      advance();
    }
    t.text = std::string(src_.substr(start, i_ - start));
    auto it = keywords().find(t.text);
    t.kind = it == keywords().end() ? TokenKind::Ident : it->second;
  }

  void lex_int(Token& t) {
    const std::size_t start = i_;
    std::int64_t v = 0;
    while (!at_end() && std::isdigit(static_cast<unsigned char>(peek()))) {
      const int d = advance() - '0';
      if (v > (std::numeric_limits<std::int64_t>::max() - d) / 10) {
        throw LexError(t.pos, "integer literal out of range");
      }
      v = v * 10 + d;
    }
    if (!at_end() && (std::isalpha(static_cast<unsigned char>(peek())) || peek() == '_')) {
      throw LexError(t.pos, "malformed number");
    }
    t.kind = TokenKind::Int;
    t.int_value = v;
    t.text = std::string(src_.substr(start, i_ - start));
  }

  void lex_string(Token& t) {
    advance();  // opening quote
    std::string value;
    for (;;) {
      if (at_end() || peek() == '\n') throw LexError(t.pos, "unterminated string literal");
      const char c = advance();
      if (c == '"') break;
      if (c != '\\') {
        value.push_back(c);
        continue;
      }
      if (at_end()) throw LexError(t.pos, "unterminated string literal");
      const SourcePos esc = pos_;
      switch (advance()) {
        case '"': value.push_back('"'); break;
        case '\\': value.push_back('\\'); break;
        case 'n': value.push_back('\n'); break;
        case 't': value.push_back('\t'); break;
        default: throw LexError(esc, "unknown escape sequence");
      }
    }
    t.kind = TokenKind::String;
    t.text = std::move(value);
  }

  void lex_punct(Token& t) {
    const char c = advance();
    auto two = [&](char next, TokenKind yes, TokenKind no) {
      if (peek() == next) {
        advance();
        return yes;
      }
      return no;
    };
    switch (c) {
      case '(': t.kind = TokenKind::LParen; break;
      case ')': t.kind = TokenKind::RParen; break;
      case '{': t.kind = TokenKind::LBrace; break;
      case '}': t.kind = TokenKind::RBrace; break;
      case ';': t.kind = TokenKind::Semicolon; break;
      case ',': t.kind = TokenKind::Comma; break;
      case '.': t.kind = TokenKind::Dot; break;
      case '+': t.kind = TokenKind::Plus; break;
      case '*': t.kind = TokenKind::Star; break;
      case '/': t.kind = TokenKind::Slash; break;
      case '-': t.kind = two('>', TokenKind::Arrow, TokenKind::Minus); break;
      case '<': t.kind = two('=', TokenKind::LessEq, TokenKind::Less); break;
      case '>': t.kind = two('=', TokenKind::GreaterEq, TokenKind::Greater); break;
      case ':':
        if (peek() == ':') {
          advance();
          t.kind = TokenKind::ColonColon;
        } else {
          t.kind = two('=', TokenKind::Assign, TokenKind::Colon);
        }
        break;
      case '=':
        if (peek() != '=') throw LexError(t.pos, "unexpected '='", {"'=='", "':='"});
        advance();
        t.kind = TokenKind::EqEq;
        break;
      case '!':
        if (peek() != '=') throw LexError(t.pos, "unexpected '!'", {"'!='"});
        advance();
        t.kind = TokenKind::NotEq;
        break;
      default: {
        std::string shown = (static_cast<unsigned char>(c) < 0x20 || static_cast<unsigned char>(c) >= 0x7f)
                                ? "byte " + std::to_string(static_cast<unsigned char>(c))
                                : std::string("'") + c + "'";
        throw LexError(t.pos, "unexpected character " + shown);
      }
    }
    t.text = std::string(describe(t.kind));
  }

  std::string_view src_;
  std::size_t i_ = 0;
  SourcePos pos_;
};

}  // namespace

SyntaxError::SyntaxError(SourcePos pos, std::string message, std::vector<std::string> expected)
    : ParseError(compose(pos, message, expected)),
      pos_(pos),
      detail_(std::move(message)),
      expected_(std::move(expected)) {}

std::vector<Token> lex(std::string_view source) { return Lexer(source).run(); }

}  // namespace mtperf::mtl
