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

#include "mtperf/engine.hpp"

#include <set>
#include <unordered_map>

#include "mtperf/canonical_json.hpp"

namespace mtperf {

RuntimeError::RuntimeError(std::string rule, std::string object_id, const std::string& message)
    : Error("runtime error in rule '" + rule + "' on object '" + object_id + "': " + message),
      rule_(std::move(rule)),
      object_id_(std::move(object_id)) {}

void TraceTable::enter(std::size_t object, std::size_t rule, std::int64_t target) {
  auto& slot = slots_[object * rules_ + rule];
  if (slot != kUnvisited) throw Error("trace entry entered twice");
  slot = target;
  ++entries_;
}

namespace {

struct ObjList {
  std::vector<std::size_t> items;
  bool operator==(const ObjList&) const = default;
};

using EvalValue = std::variant<std::int64_t, std::string, bool, ObjList>;

class Interpreter {
 public:
  Interpreter(const mtl::Transformation& t, const Model& input, const MetaModel& in_meta,
              const MetaModel& out_meta, RunMonitor* monitor)
      : t_(t),
        input_(input),
        in_meta_(in_meta),
        out_meta_(out_meta),
        monitor_(monitor),
        trace_(input.size(), t.mappings.size()) {
    for (std::size_t i = 0; i < t.mappings.size(); ++i) rule_index_.emplace(t.mappings[i].name, i);
    std::unordered_map<std::string, std::uint32_t> ids;
    class_of_.reserve(input.size());
    for (const auto& o : input.objects()) {
      auto [it, fresh] = ids.emplace(o.cls, static_cast<std::uint32_t>(ids.size()));
      class_of_.push_back(it->second);
    }
  }

  ExecutionResult run() {
    const std::int64_t start = MonotonicClock::now_ns();
    for (const auto& m : t_.mappings) counts_[m.name];
    for (const auto& stmt : t_.main) {
      const std::size_t rule = rule_index_.at(stmt.rule_name);
      for (std::size_t i = 0; i < input_.size(); ++i) {
        if (is_instance(input_.objects()[i].cls, stmt.class_name)) invoke(rule, i);
      }
    }
    ExecutionResult result;
    result.output = Model(out_meta_.name());
    result.output.reserve(created_.size());
    for (auto& o : created_) result.output.add(std::move(o));
    result.summary.objects_created = static_cast<std::int64_t>(result.output.size());
    result.summary.invocations_by_rule = std::move(counts_);
    result.summary.total_duration_ns = MonotonicClock::now_ns() - start;
    return result;
  }

 private:
  bool is_instance(const std::string& cls, const std::string& of) {
    if (cls == of) return true;
    auto key = cls + '\0' + of;
    auto it = subclass_cache_.find(key);
    if (it == subclass_cache_.end()) {
      it = subclass_cache_.emplace(std::move(key), in_meta_.is_subclass_of(cls, of)).first;
    }
    return it->second;
  }

  [[noreturn]] void fail(const std::string& message) const {
    throw RuntimeError(current_rule_ ? current_rule_->name : "", current_object_ ? current_object_->id : "",
                       message);
  }

  std::optional<std::size_t> invoke(std::size_t rule_idx, std::size_t obj_idx) {
    const mtl::MappingRule& rule = t_.mappings[rule_idx];
    const ModelObject& obj = input_.objects()[obj_idx];
    InvocationCounts& counts = counts_[rule.name];

    const std::int64_t memo = trace_.lookup(obj_idx, rule_idx);
    if (memo != TraceTable::kUnvisited) {
      ++counts.trace_hit;
      if (monitor_) {
        const std::int64_t now = MonotonicClock::now_ns();
        monitor_->emit(RecordKind::TraceHit, rule.name, obj.id, now, now);
      }
      if (memo == TraceTable::kGuardRejected) return std::nullopt;
      return static_cast<std::size_t>(memo);
    }

    const auto* saved_rule = current_rule_;
    const auto* saved_object = current_object_;
    current_rule_ = &rule;
    current_object_ = &obj;
    RunMonitor::Token token = 0;
    if (monitor_) token = monitor_->begin(RecordKind::Executed, rule.name, obj.id);

    if (rule.guard) {
      EvalValue g = eval(*rule.guard, obj_idx);
      if (!std::get<bool>(g)) {
        trace_.enter(obj_idx, rule_idx, TraceTable::kGuardRejected);
        ++counts.guard_rejected;
        if (monitor_) {
          monitor_->set_kind(token, RecordKind::GuardRejected);
          monitor_->finish(token);
        }
        current_rule_ = saved_rule;
        current_object_ = saved_object;
        return std::nullopt;
      }
    }

    const std::size_t target = created_.size();
    created_.push_back(ModelObject{"t" + std::to_string(target + 1), rule.target_class, {}, {}});
    trace_.enter(obj_idx, rule_idx, static_cast<std::int64_t>(target));

    for (const auto& a : rule.body) {
      EvalValue v = eval(*a.rhs, obj_idx);
      if (auto* list = std::get_if<ObjList>(&v)) {
        std::vector<std::string> ids;
        ids.reserve(list->items.size());
        for (std::size_t i : list->items) ids.push_back(created_[i].id);
        created_[target].refs[a.lhs] = std::move(ids);
      } else {
        Value scalar = std::visit(
            [](auto&& x) -> Value {
              using T = std::decay_t<decltype(x)>;
              if constexpr (std::is_same_v<T, ObjList>) {
                return Value{};
              } else {
                return Value{std::move(x)};
              }
            },
            std::move(v));
        created_[target].attrs[a.lhs] = std::move(scalar);
      }
    }
    ++counts.executed;
    if (monitor_) monitor_->finish(token);
    current_rule_ = saved_rule;
    current_object_ = saved_object;
    return target;
  }

  // Resolves `self.path`; the result is either a scalar attribute value or
  // the objects reached through references, in link order.
  EvalValue navigate(const mtl::Navigation& nav, std::size_t self) {
    if (nav.path.size() == 1) {
      const ModelObject& o = input_.objects()[self];
      if (is_attr(self, nav.path[0])) return attribute(o, nav.path[0]);
    }
    std::vector<std::size_t> current{self};
    for (std::size_t step = 0; step < nav.path.size(); ++step) {
      const std::string& name = nav.path[step];
      if (current.empty()) {
        fail("navigation 'self." + join(nav.path, step + 1) + "' reached no object");
      }
      const ModelObject& head = input_.objects()[current.front()];
      if (is_attr(current.front(), name)) return attribute(head, name);
      std::vector<std::size_t> next;
      for (std::size_t idx : current) {
        const ModelObject& o = input_.objects()[idx];
        auto it = o.refs.find(name);
        if (it == o.refs.end()) continue;
        for (const auto& id : it->second) {
          auto target = input_.index_of(id);
          if (!target) fail("dangling link to '" + id + "'");
          next.push_back(*target);
        }
      }
      current = std::move(next);
    }
    return ObjList{std::move(current)};
  }

  // Keyed by the path step's address, which is stable for the AST's lifetime.
  bool is_attr(std::size_t obj, const std::string& step) {
    const AttrKey key{&step, class_of_[obj]};
    auto it = attr_cache_.find(key);
    if (it == attr_cache_.end()) {
      it = attr_cache_.emplace(key, in_meta_.find_attr(input_.objects()[obj].cls, step) != nullptr).first;
    }
    return it->second;
  }

  EvalValue attribute(const ModelObject& o, const std::string& name) {
    auto it = o.attrs.find(name);
    if (it == o.attrs.end()) fail("object '" + o.id + "' has no value for attribute '" + name + "'");
    return std::visit([](const auto& x) -> EvalValue { return x; }, it->second);
  }

  static std::string join(const std::vector<std::string>& path, std::size_t n) {
    std::string out;
    for (std::size_t i = 0; i < n; ++i) out += (i ? "." : "") + path[i];
    return out;
  }

  std::int64_t as_int(const EvalValue& v) { return std::get<std::int64_t>(v); }

  EvalValue eval(const mtl::Expr& e, std::size_t self) {
    return std::visit(
        [&](const auto& n) -> EvalValue {
          using T = std::decay_t<decltype(n)>;
          if constexpr (std::is_same_v<T, mtl::Literal>) {
            return std::visit([](const auto& x) -> EvalValue { return x; }, n.value);
          } else if constexpr (std::is_same_v<T, mtl::Navigation>) {
            return navigate(n, self);
          } else if constexpr (std::is_same_v<T, mtl::SizeOf>) {
            EvalValue v = navigate(n.nav, self);
            return static_cast<std::int64_t>(std::get<ObjList>(v).items.size());
          } else if constexpr (std::is_same_v<T, mtl::MapCall>) {
            EvalValue v = navigate(n.nav, self);
            const std::size_t rule = rule_index_.at(n.rule);
            ObjList out;
            for (std::size_t src : std::get<ObjList>(v).items) {
              if (auto r = invoke(rule, src)) out.items.push_back(*r);
            }
            return out;
          } else if constexpr (std::is_same_v<T, mtl::Negate>) {
            const std::int64_t x = as_int(eval(*n.operand, self));
            std::int64_t r = 0;
            if (__builtin_sub_overflow(std::int64_t{0}, x, &r)) fail("integer overflow");
            return r;
          } else {
            return binary(n, self);
          }
        },
        e.node);
  }

  EvalValue binary(const mtl::Binary& b, std::size_t self) {
    using mtl::BinaryOp;
    // Strict: both operands are evaluated, left to right.
    EvalValue l = eval(*b.lhs, self);
    EvalValue r = eval(*b.rhs, self);
    std::int64_t out = 0;
    switch (b.op) {
      case BinaryOp::Or: return std::get<bool>(l) || std::get<bool>(r);
      case BinaryOp::And: return std::get<bool>(l) && std::get<bool>(r);
      case BinaryOp::Eq: return l == r;
      case BinaryOp::Ne: return l != r;
      case BinaryOp::Lt: return as_int(l) < as_int(r);
      case BinaryOp::Le: return as_int(l) <= as_int(r);
      case BinaryOp::Gt: return as_int(l) > as_int(r);
      case BinaryOp::Ge: return as_int(l) >= as_int(r);
      case BinaryOp::Add:
        if (auto* s = std::get_if<std::string>(&l)) return *s + std::get<std::string>(r);
        if (__builtin_add_overflow(as_int(l), as_int(r), &out)) fail("integer overflow");
        return out;
      case BinaryOp::Sub:
        if (__builtin_sub_overflow(as_int(l), as_int(r), &out)) fail("integer overflow");
        return out;
      case BinaryOp::Mul:
        if (__builtin_mul_overflow(as_int(l), as_int(r), &out)) fail("integer overflow");
        return out;
      case BinaryOp::Div: {
        const std::int64_t d = as_int(r);
        if (d == 0) fail("division by zero");
        if (d == -1 && as_int(l) == INT64_MIN) fail("integer overflow");
        return as_int(l) / d;  // truncates toward zero
      }
    }
    fail("unknown operator");
  }

  const mtl::Transformation& t_;
  const Model& input_;
  const MetaModel& in_meta_;
  const MetaModel& out_meta_;
  RunMonitor* monitor_;
  TraceTable trace_;
  std::unordered_map<std::string, std::size_t> rule_index_;
  std::unordered_map<std::string, bool> subclass_cache_;
  using AttrKey = std::pair<const std::string*, std::uint32_t>;
  struct AttrKeyHash {
    std::size_t operator()(const AttrKey& k) const {
      return std::hash<const void*>{}(k.first) ^ (static_cast<std::size_t>(k.second) * 0x9e3779b97f4a7c15ULL);
    }
  };
  std::unordered_map<AttrKey, bool, AttrKeyHash> attr_cache_;
  std::vector<std::uint32_t> class_of_;
  std::map<std::string, InvocationCounts> counts_;
  std::vector<ModelObject> created_;
  const mtl::MappingRule* current_rule_ = nullptr;
  const ModelObject* current_object_ = nullptr;
};

std::string summarize(const std::vector<Violation>& violations) {
  std::string out = std::to_string(violations.size()) + " conformance violation(s)";
  for (std::size_t i = 0; i < violations.size() && i < 5; ++i) {
    const auto& v = violations[i];
    out += "\n  " + (v.object_id.empty() ? std::string("<model>") : v.object_id) + ": " + v.message;
  }
  return out;
}

}  // namespace

ExecutionResult execute(const mtl::Transformation& t, const Model& input, const MetaModel& in_meta,
                        const MetaModel& out_meta, RunMonitor* monitor) {
  return Interpreter(t, input, in_meta, out_meta, monitor).run();
}

ExecutionResult execute(const mtl::Transformation& t, const Model& input, const MetaModel& in_meta,
                        const MetaModel& out_meta) {
  Collector collector;
  RunMonitor monitor(collector);
  ExecutionResult result = execute(t, input, in_meta, out_meta, &monitor);
  result.records = collector.drain();
  return result;
}

ProfiledRun run_profiled(const mtl::Transformation& t, const std::filesystem::path& input_path,
                         const MetaModel& in_meta, const MetaModel& out_meta,
                         const std::filesystem::path& output_path) {
  Collector collector;
  const std::int64_t run_start = MonotonicClock::now_ns();
  RunMonitor monitor(collector, run_start);

  const std::int64_t load_start = MonotonicClock::now_ns();
  Model input = load_model(input_path);
  auto violations = check_conformance(input, in_meta);
  const std::int64_t load_end = MonotonicClock::now_ns();
  if (!violations.empty()) {
    throw ValidationError(input_path.string() + ": " + summarize(violations));
  }
  monitor.emit(RecordKind::Load, "", "", load_start, load_end);

  ExecutionResult result = execute(t, input, in_meta, out_meta, &monitor);

  const std::int64_t save_start = MonotonicClock::now_ns();
  std::string text = canonical_model_text(result.output);
  if (!output_path.empty()) write_text_file(output_path, text);
  const std::int64_t save_end = MonotonicClock::now_ns();
  monitor.emit(RecordKind::Save, "", "", save_start, save_end);

  const std::int64_t run_end = MonotonicClock::now_ns();
  result.summary.total_duration_ns = run_end - run_start;
  result.summary.load_duration_ns = load_end - load_start;
  result.summary.save_duration_ns = save_end - save_start;
  result.records = collector.drain();

  ProfiledRun out;
  out.input = std::move(input);
  out.result = std::move(result);
  out.monitor_overhead_ns = collector.overhead_ns();
  return out;
}

std::vector<std::string> check_accounting(const std::vector<MonitoringRecord>& records,
                                          const RunSummary& summary) {
  std::vector<std::string> problems;
  std::int64_t executed_ns = 0;
  std::map<std::string, InvocationCounts> counted;
  std::set<std::pair<std::string, std::string>> executed_pairs;
  std::int64_t executed_total = 0;
  for (std::size_t i = 0; i < records.size(); ++i) {
    const auto& r = records[i];
    if (r.seq != i) problems.push_back("record " + std::to_string(i) + " has seq " + std::to_string(r.seq));
    if (r.duration_ns < 0) problems.push_back("record " + std::to_string(i) + " has negative duration");
    if (i > 0 && r.start_ns < records[i - 1].start_ns) {
      problems.push_back("record " + std::to_string(i) + " starts before its predecessor");
    }
    switch (r.kind) {
      case RecordKind::Executed:
        executed_ns += r.duration_ns;
        ++counted[r.rule].executed;
        ++executed_total;
        if (!executed_pairs.emplace(r.source_id, r.rule).second) {
          problems.push_back("rule '" + r.rule + "' executed twice on '" + r.source_id + "'");
        }
        break;
      case RecordKind::GuardRejected: ++counted[r.rule].guard_rejected; break;
      case RecordKind::TraceHit: ++counted[r.rule].trace_hit; break;
      case RecordKind::Load:
      case RecordKind::Save: break;
    }
  }
  if (summary.load_duration_ns + summary.save_duration_ns + executed_ns > summary.total_duration_ns) {
    problems.push_back("load + save + executed durations exceed the run total");
  }
  for (const auto& [rule, c] : summary.invocations_by_rule) {
    const InvocationCounts seen = counted.contains(rule) ? counted.at(rule) : InvocationCounts{};
    if (!(seen == c)) problems.push_back("summary counts for rule '" + rule + "' disagree with records");
  }
  for (const auto& [rule, _] : counted) {
    if (!summary.invocations_by_rule.contains(rule)) {
      problems.push_back("records mention rule '" + rule + "' absent from the summary");
    }
  }
  if (summary.objects_created != executed_total) {
    problems.push_back("objectsCreated differs from the number of executed records");
  }
  return problems;
}

}  // namespace mtperf
