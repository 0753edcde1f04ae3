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

#pragma once

#include <cstdint>
#include <string>
#include <string_view>
#include <vector>

#include "mtperf/error.hpp"
#include "mtperf/mtl/ast.hpp"

namespace mtperf::mtl {

enum class TokenKind {
  Ident,
  Int,
  String,
  // keywords
  KwTransformation,
  KwIn,
  KwOut,
  KwMapping,
  KwWhen,
  KwMain,
  KwSelf,
  KwTrue,
  KwFalse,
  KwAnd,
  KwOr,
  // punctuation
  LParen,
  RParen,
  LBrace,
  RBrace,
  Semicolon,
  Colon,
  ColonColon,
  Comma,
  Dot,
  Arrow,
  Assign,
  Plus,
  Minus,
  Star,
  Slash,
  EqEq,
  NotEq,
  Less,
  LessEq,
  Greater,
  GreaterEq,
  End,
};

/// Human-readable token description used in "expected ..." messages.
std::string_view describe(TokenKind kind);

struct Token {
  TokenKind kind = TokenKind::End;
  std::string text;   // identifier name, decoded string literal, or lexeme
  std::int64_t int_value = 0;
  SourcePos pos;
};

/// Lexical or syntactic failure with the offending position.
class SyntaxError : public ParseError {
 public:
  SyntaxError(SourcePos pos, std::string message, std::vector<std::string> expected = {});
  SourcePos pos() const { return pos_; }
  const std::vector<std::string>& expected() const { return expected_; }
  const std::string& detail() const { return detail_; }

 private:
  SourcePos pos_;
  std::string detail_;
  std::vector<std::string> expected_;
};

class LexError : public SyntaxError {
 public:
  using SyntaxError::SyntaxError;
};

class MtlParseError : public SyntaxError {
 public:
  using SyntaxError::SyntaxError;
};

/// Tokenizes `source`; `//` line comments and `/* */` block comments are
/// skipped. The last token is always End.
std::vector<Token> lex(std::string_view source);

}  // namespace mtperf::mtl
