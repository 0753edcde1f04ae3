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

#include "mtperf/mtl/ast.hpp"

namespace mtperf::mtl {

namespace {

bool same_guard(const ExprPtr& a, const ExprPtr& b) {
  if (!a || !b) return !a && !b;
  return structurally_equal(*a, *b);
}


}  // namespace

bool structurally_equal(const Expr& a, const Expr& b) {
  if (a.node.index() != b.node.index()) return false;
  return std::visit(
      [&](const auto& x) -> bool {
        using T = std::decay_t<decltype(x)>;
        const auto& y = std::get<T>(b.node);
        if constexpr (std::is_same_v<T, Literal>) {
          return x.value == y.value;
        } else if constexpr (std::is_same_v<T, Navigation>) {
          return x.path == y.path;
        } else if constexpr (std::is_same_v<T, SizeOf>) {
          return x.nav.path == y.nav.path;
        } else if constexpr (std::is_same_v<T, MapCall>) {
          return x.nav.path == y.nav.path && x.rule == y.rule;
        } else if constexpr (std::is_same_v<T, Negate>) {
          return structurally_equal(*x.operand, *y.operand);
        } else {
          return x.op == y.op && structurally_equal(*x.lhs, *y.lhs) &&
                 structurally_equal(*x.rhs, *y.rhs);
        }
      },
      a.node);
}

bool structurally_equal(const Transformation& a, const Transformation& b) {
  if (a.name != b.name || a.in_param != b.in_param || a.in_meta != b.in_meta ||
      a.out_param != b.out_param || a.out_meta != b.out_meta ||
      a.mappings.size() != b.mappings.size() || a.main.size() != b.main.size()) {
    return false;
  }
  for (std::size_t i = 0; i < a.mappings.size(); ++i) {
    const auto& x = a.mappings[i];
    const auto& y = b.mappings[i];
    if (x.name != y.name || x.source_class != y.source_class || x.target_class != y.target_class ||
        !same_guard(x.guard, y.guard) || x.body.size() != y.body.size()) {
      return false;
    }
    for (std::size_t j = 0; j < x.body.size(); ++j) {
      if (x.body[j].lhs != y.body[j].lhs || !structurally_equal(*x.body[j].rhs, *y.body[j].rhs)) {
        return false;
      }
    }
  }
  for (std::size_t i = 0; i < a.main.size(); ++i) {
    if (a.main[i].class_name != b.main[i].class_name || a.main[i].rule_name != b.main[i].rule_name) {
      return false;
    }
  }
  return true;
}

}  // namespace mtperf::mtl
