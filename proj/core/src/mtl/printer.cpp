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

#include "mtperf/mtl/printer.hpp"

#include <sstream>

namespace mtperf::mtl {

namespace {

void print_nav(std::ostringstream& out, const Navigation& nav) {
  out << "self";
  for (const auto& step : nav.path) out << '.' << step;
}

std::string quote(const std::string& s) {
  std::string out = "\"";
  for (char c : s) {
    switch (c) {
      case '"': out += "\\\""; break;
      case '\\': out += "\\\\"; break;
      case '\n': out += "\\n"; break;
      case '\t': out += "\\t"; break;
      default: out.push_back(c);
    }
  }
  out.push_back('"');
  return out;
}

// Binary children need parentheses when they bind looser than the parent;
// on the right-hand side equal precedence also needs them (left associativity).
void print_expr(std::ostringstream& out, const Expr& e);

void print_operand(std::ostringstream& out, const Expr& child, int parent_prec, bool right) {
  const auto* bin = std::get_if<Binary>(&child.node);
  const bool parens =
      bin && (precedence(bin->op) < parent_prec || (right && precedence(bin->op) == parent_prec));
  if (parens) out << '(';
  print_expr(out, child);
  if (parens) out << ')';
}

void print_expr(std::ostringstream& out, const Expr& e) {
  std::visit(
      [&](const auto& n) {
        using T = std::decay_t<decltype(n)>;
        if constexpr (std::is_same_v<T, Literal>) {
          if (auto* i = std::get_if<std::int64_t>(&n.value)) {
            out << *i;
          } else if (auto* b = std::get_if<bool>(&n.value)) {
            out << (*b ? "true" : "false");
          } else {
            out << quote(std::get<std::string>(n.value));
          }
        } else if constexpr (std::is_same_v<T, Navigation>) {
          print_nav(out, n);
        } else if constexpr (std::is_same_v<T, SizeOf>) {
          print_nav(out, n.nav);
          out << "->size()";
        } else if constexpr (std::is_same_v<T, MapCall>) {
          print_nav(out, n.nav);
          out << "->map " << n.rule << "()";
        } else if constexpr (std::is_same_v<T, Negate>) {
          out << '-';
          const bool parens = std::holds_alternative<Binary>(n.operand->node);
          if (parens) out << '(';
          print_expr(out, *n.operand);
          if (parens) out << ')';
        } else {
          const int prec = precedence(n.op);
          print_operand(out, *n.lhs, prec, false);
          out << ' ' << spelling(n.op) << ' ';
          print_operand(out, *n.rhs, prec, true);
        }
      },
      e.node);
}

}  // namespace

std::string pretty_print(const Expr& e) {
  std::ostringstream out;
  print_expr(out, e);
  return out.str();
}

std::string pretty_print(const Transformation& t) {
  std::ostringstream out;
  out << "transformation " << t.name << "(in " << t.in_param << ':' << t.in_meta << ", out "
      << t.out_param << ':' << t.out_meta << ");\n";
  for (const auto& m : t.mappings) {
    out << "\nmapping " << m.source_class << "::" << m.name << "() : " << m.target_class;
    if (m.guard) {
      out << " when { ";
      print_expr(out, *m.guard);
      out << " }";
    }
    if (m.body.empty()) {
      out << " { }\n";
      continue;
    }
    out << " {\n";
    for (const auto& a : m.body) {
      out << "  " << a.lhs << " := ";
      print_expr(out, *a.rhs);
      out << ";\n";
    }
    out << "}\n";
  }
  if (!t.mappings.empty()) out << '\n';
  if (t.main.empty()) {
    out << "main() { }\n";
  } else {
    out << "main() {\n";
    for (const auto& s : t.main) {
      out << "  " << t.in_param << ".objectsOfType(" << s.class_name << ")->map " << s.rule_name
          << "();\n";
    }
    out << "}\n";
  }
  return out.str();
}

}  // namespace mtperf::mtl
