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
#include <memory>
#include <optional>
#include <string>
#include <variant>
#include <vector>

#include "mtperf/model.hpp"

namespace mtperf::mtl {

struct SourcePos {
  int line = 1;
  int column = 1;

  bool operator==(const SourcePos&) const = default;
};

std::string to_string(SourcePos pos);

enum class BinaryOp { Or, And, Eq, Ne, Lt, Le, Gt, Ge, Add, Sub, Mul, Div };

std::string_view spelling(BinaryOp op);
/// Binding strength; larger binds tighter.
int precedence(BinaryOp op);

struct Expr;
using ExprPtr = std::shared_ptr<const Expr>;

struct Literal {
  Value value;
};

/// `self.a.b...`; an empty path denotes `self` itself.
struct Navigation {
  std::vector<std::string> path;
};

/// `<navigation>->size()`
struct SizeOf {
  Navigation nav;
};

/// `<navigation>->map rule()`
struct MapCall {
  Navigation nav;
  std::string rule;
};

struct Negate {
  ExprPtr operand;
};

struct Binary {
  BinaryOp op;
  ExprPtr lhs;
  ExprPtr rhs;
};

struct Expr {
  SourcePos pos;
  std::variant<Literal, Navigation, SizeOf, MapCall, Negate, Binary> node;
};

template <class Node>
ExprPtr make_expr(SourcePos pos, Node node) {
  return std::make_shared<const Expr>(Expr{pos, std::move(node)});
}

struct Assignment {
  SourcePos pos;
  std::string lhs;
  ExprPtr rhs;
};

struct MappingRule {
  SourcePos pos;
  std::string name;
  std::string source_class;
  std::string target_class;
  ExprPtr guard;  // null when the rule has no `when` clause
  std::vector<Assignment> body;
};

/// `<in>.objectsOfType(Class)->map rule();`
struct MainStatement {
  SourcePos pos;
  std::string class_name;
  std::string rule_name;
};

struct Transformation {
  SourcePos pos;
  std::string name;
  std::string in_param;
  std::string in_meta;
  std::string out_param;
  std::string out_meta;
  std::vector<MappingRule> mappings;
  SourcePos main_pos;
  std::vector<MainStatement> main;
  std::string source_hash;

  const MappingRule* find_mapping(std::string_view rule) const;
};

/// Equality of the abstract syntax only: positions and source hashes are
/// ignored, so a pretty-printed program compares equal to its origin.
bool structurally_equal(const Expr& a, const Expr& b);
bool structurally_equal(const Transformation& a, const Transformation& b);

}  // namespace mtperf::mtl
