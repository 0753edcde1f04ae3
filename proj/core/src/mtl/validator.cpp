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

#include "mtperf/mtl/validator.hpp"

namespace mtperf::mtl {

std::string_view to_string(DiagnosticKind kind) {
  switch (kind) {
    case DiagnosticKind::MetamodelMismatch: return "metamodel_mismatch";
    case DiagnosticKind::UnknownClass: return "unknown_class";
    case DiagnosticKind::UnknownFeature: return "unknown_feature";
    case DiagnosticKind::TypeMismatch: return "type_mismatch";
    case DiagnosticKind::UnknownRule: return "unknown_rule";
    case DiagnosticKind::RuleClassMismatch: return "rule_class_mismatch";
    case DiagnosticKind::InvalidNavigation: return "invalid_navigation";
  }
  return "?";
}

std::string format(const Diagnostic& d) {
  return to_string(d.pos) + ": " + std::string(to_string(d.kind)) + ": " + d.message;
}

namespace {

struct Type {
  enum Kind { Int, String, Bool, Objects, Invalid } kind = Invalid;
  std::string cls;  // element class of Objects

  static Type of(AttrType t) {
    switch (t) {
      case AttrType::Int: return {Int, {}};
      case AttrType::String: return {String, {}};
      case AttrType::Bool: return {Bool, {}};
    }
    return {};
  }
};

std::string describe(const Type& t) {
  switch (t.kind) {
    case Type::Int: return "int";
    case Type::String: return "string";
    case Type::Bool: return "bool";
    case Type::Objects: return "collection of " + t.cls;
    case Type::Invalid: return "<invalid>";
  }
  return "?";
}

class Checker {
 public:
  Checker(const Transformation& t, const MetaModel& in, const MetaModel& out)
      : t_(t), in_(in), out_(out) {}

  std::vector<Diagnostic> run() {
    if (t_.in_meta != in_.name()) {
      report(DiagnosticKind::MetamodelMismatch, t_.pos,
             "input metamodel is '" + in_.name() + "', transformation expects '" + t_.in_meta + "'");
    }
    if (t_.out_meta != out_.name()) {
      report(DiagnosticKind::MetamodelMismatch, t_.pos,
             "output metamodel is '" + out_.name() + "', transformation expects '" + t_.out_meta +
                 "'");
    }
    for (const auto& m : t_.mappings) rule(m);
    for (const auto& s : t_.main) statement(s);
    return std::move(diags_);
  }

 private:
  void report(DiagnosticKind kind, SourcePos pos, std::string message) {
    diags_.push_back({kind, pos, std::move(message)});
  }

  void rule(const MappingRule& m) {
    const bool src_ok = in_.has_class(m.source_class);
    const bool tgt_ok = out_.has_class(m.target_class);
    if (!src_ok) {
      report(DiagnosticKind::UnknownClass, m.pos,
             "source class '" + m.source_class + "' not in metamodel '" + in_.name() + "'");
    }
    if (!tgt_ok) {
      report(DiagnosticKind::UnknownClass, m.pos,
             "target class '" + m.target_class + "' not in metamodel '" + out_.name() + "'");
    }
    if (!src_ok) return;
    if (m.guard) {
      Type g = type(*m.guard, m.source_class);
      if (g.kind != Type::Invalid && g.kind != Type::Bool) {
        report(DiagnosticKind::TypeMismatch, m.guard->pos,
               "guard of '" + m.name + "' must be bool, found " + describe(g));
      }
    }
    for (const auto& a : m.body) {
      Type rhs = type(*a.rhs, m.source_class);
      if (!tgt_ok) continue;
      if (const AttrDef* attr = out_.find_attr(m.target_class, a.lhs)) {
        if (rhs.kind != Type::Invalid && rhs.kind != Type::of(attr->type).kind) {
          report(DiagnosticKind::TypeMismatch, a.pos,
                 "cannot assign " + describe(rhs) + " to attribute '" + a.lhs + "' of type " +
                     std::string(to_string(attr->type)));
        }
      } else if (const RefDef* ref = out_.find_ref(m.target_class, a.lhs)) {
        const auto* call = std::get_if<MapCall>(&a.rhs->node);
        if (!call) {
          report(DiagnosticKind::TypeMismatch, a.pos,
                 "reference '" + a.lhs + "' can only be assigned a map expression");
        } else if (const MappingRule* callee = t_.find_mapping(call->rule);
                   callee && out_.has_class(callee->target_class) &&
                   !out_.is_subclass_of(callee->target_class, ref->target)) {
          report(DiagnosticKind::TypeMismatch, a.pos,
                 "rule '" + call->rule + "' produces '" + callee->target_class +
                     "', reference '" + a.lhs + "' needs '" + ref->target + "'");
        }
      } else {
        report(DiagnosticKind::UnknownFeature, a.pos,
               "class '" + m.target_class + "' has no attribute or reference '" + a.lhs + "'");
      }
    }
  }

  void statement(const MainStatement& s) {
    const bool cls_ok = in_.has_class(s.class_name);
    if (!cls_ok) {
      report(DiagnosticKind::UnknownClass, s.pos,
             "class '" + s.class_name + "' not in metamodel '" + in_.name() + "'");
    }
    const MappingRule* r = t_.find_mapping(s.rule_name);
    if (!r) {
      report(DiagnosticKind::UnknownRule, s.pos, "no mapping named '" + s.rule_name + "'");
      return;
    }
    if (cls_ok && in_.has_class(r->source_class) && !in_.is_subclass_of(s.class_name, r->source_class)) {
      report(DiagnosticKind::RuleClassMismatch, s.pos,
             "mapping '" + r->name + "' applies to '" + r->source_class + "', not to '" +
                 s.class_name + "'");
    }
  }

  Type navigation(const Navigation& nav, const std::string& self_cls, SourcePos pos) {
    std::string cls = self_cls;
    bool single = true;
    for (std::size_t i = 0; i < nav.path.size(); ++i) {
      const std::string& step = nav.path[i];
      const bool last = i + 1 == nav.path.size();
      if (const AttrDef* attr = in_.find_attr(cls, step)) {
        if (!last) {
          report(DiagnosticKind::InvalidNavigation, pos,
                 "cannot navigate through attribute '" + step + "'");
          return {};
        }
        if (!single) {
          report(DiagnosticKind::InvalidNavigation, pos,
                 "attribute '" + step + "' reached through a multi-valued reference");
          return {};
        }
        return Type::of(attr->type);
      }
      const RefDef* ref = in_.find_ref(cls, step);
      if (!ref) {
        report(DiagnosticKind::UnknownFeature, pos,
               "class '" + cls + "' has no attribute or reference '" + step + "'");
        return {};
      }
      single = single && ref->upper == 1;
      cls = ref->target;
    }
    return {Type::Objects, cls};
  }

  Type type(const Expr& e, const std::string& self_cls) {
    return std::visit(
        [&](const auto& n) -> Type {
          using T = std::decay_t<decltype(n)>;
          if constexpr (std::is_same_v<T, Literal>) {
            return Type::of(type_of(n.value));
          } else if constexpr (std::is_same_v<T, Navigation>) {
            return navigation(n, self_cls, e.pos);
          } else if constexpr (std::is_same_v<T, SizeOf>) {
            Type nav = navigation(n.nav, self_cls, e.pos);
            if (nav.kind == Type::Invalid) return {};
            if (nav.kind != Type::Objects) {
              report(DiagnosticKind::InvalidNavigation, e.pos, "->size() needs a reference navigation");
              return {};
            }
            return {Type::Int, {}};
          } else if constexpr (std::is_same_v<T, MapCall>) {
            Type nav = navigation(n.nav, self_cls, e.pos);
            const MappingRule* callee = t_.find_mapping(n.rule);
            if (!callee) {
              report(DiagnosticKind::UnknownRule, e.pos, "no mapping named '" + n.rule + "'");
              return {};
            }
            if (nav.kind == Type::Invalid) return {};
            if (nav.kind != Type::Objects) {
              report(DiagnosticKind::InvalidNavigation, e.pos, "->map needs a reference navigation");
              return {};
            }
            if (in_.has_class(callee->source_class) && !in_.is_subclass_of(nav.cls, callee->source_class)) {
              report(DiagnosticKind::RuleClassMismatch, e.pos,
                     "mapping '" + n.rule + "' applies to '" + callee->source_class +
                         "', navigation yields '" + nav.cls + "'");
              return {};
            }
            return {Type::Objects, callee->target_class};
          } else if constexpr (std::is_same_v<T, Negate>) {
            Type t = type(*n.operand, self_cls);
            if (t.kind == Type::Invalid) return {};
            if (t.kind != Type::Int) {
              report(DiagnosticKind::TypeMismatch, e.pos, "unary '-' needs int, found " + describe(t));
              return {};
            }
            return t;
          } else {
            return binary(n, e.pos, self_cls);
          }
        },
        e.node);
  }

  Type binary(const Binary& b, SourcePos pos, const std::string& self_cls) {
    Type l = type(*b.lhs, self_cls);
    Type r = type(*b.rhs, self_cls);
    if (l.kind == Type::Invalid || r.kind == Type::Invalid) return {};
    auto mismatch = [&](const char* need) -> Type {
      report(DiagnosticKind::TypeMismatch, pos,
             "operator '" + std::string(spelling(b.op)) + "' needs " + need + ", found " +
                 describe(l) + " and " + describe(r));
      return {};
    };
    switch (b.op) {
      case BinaryOp::Or:
      case BinaryOp::And:
        if (l.kind != Type::Bool || r.kind != Type::Bool) return mismatch("bool operands");
        return {Type::Bool, {}};
      case BinaryOp::Eq:
      case BinaryOp::Ne:
        if (l.kind != r.kind || l.kind == Type::Objects) return mismatch("operands of one scalar type");
        return {Type::Bool, {}};
      case BinaryOp::Lt:
      case BinaryOp::Le:
      case BinaryOp::Gt:
      case BinaryOp::Ge:
        if (l.kind != Type::Int || r.kind != Type::Int) return mismatch("int operands");
        return {Type::Bool, {}};
      case BinaryOp::Add:
        if (l.kind == Type::String && r.kind == Type::String) return {Type::String, {}};
        if (l.kind != Type::Int || r.kind != Type::Int) return mismatch("int or string operands");
        return {Type::Int, {}};
      case BinaryOp::Sub:
      case BinaryOp::Mul:
      case BinaryOp::Div:
        if (l.kind != Type::Int || r.kind != Type::Int) return mismatch("int operands");
        return {Type::Int, {}};
    }
    return {};
  }

  const Transformation& t_;
  const MetaModel& in_;
  const MetaModel& out_;
  std::vector<Diagnostic> diags_;
};

}  // namespace

std::vector<Diagnostic> validate(const Transformation& t, const MetaModel& in_meta,
                                 const MetaModel& out_meta) {
  return Checker(t, in_meta, out_meta).run();
}

}  // namespace mtperf::mtl
