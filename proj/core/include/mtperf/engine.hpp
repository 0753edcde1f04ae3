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
#include <filesystem>
#include <map>
#include <optional>
#include <string>
#include <vector>

#include "mtperf/metamodel.hpp"
#include "mtperf/model.hpp"
#include "mtperf/monitor.hpp"
#include "mtperf/mtl/ast.hpp"

namespace mtperf {

struct InvocationCounts {
  std::int64_t executed = 0;
  std::int64_t guard_rejected = 0;
  std::int64_t trace_hit = 0;

  bool operator==(const InvocationCounts&) const = default;
};

struct RunSummary {
  std::int64_t total_duration_ns = 0;
  std::int64_t load_duration_ns = 0;
  std::int64_t save_duration_ns = 0;
  std::int64_t objects_created = 0;
  std::map<std::string, InvocationCounts> invocations_by_rule;

  bool operator==(const RunSummary&) const = default;
};

struct ExecutionResult {
  Model output;
  std::vector<MonitoringRecord> records;
  RunSummary summary;
};

/// Raised when evaluation fails (division by zero, missing attribute, ...).
/// Maps to CLI exit code 2.
class RuntimeError : public Error {
 public:
  RuntimeError(std::string rule, std::string object_id, const std::string& message);
  const std::string& rule() const { return rule_; }
  const std::string& object_id() const { return object_id_; }

 private:
  std::string rule_;
  std::string object_id_;
};

/// Memo of (source object, rule) pairs. Dense over object index x rule index.
class TraceTable {
 public:
  static constexpr std::int64_t kUnvisited = -2;
  static constexpr std::int64_t kGuardRejected = -1;

  TraceTable(std::size_t objects, std::size_t rules)
      : rules_(rules), slots_(objects * rules, kUnvisited) {}

  /// Target object index, kGuardRejected, or kUnvisited.
  std::int64_t lookup(std::size_t object, std::size_t rule) const {
    return slots_[object * rules_ + rule];
  }
  /// Throws Error when the pair was already entered.
  void enter(std::size_t object, std::size_t rule, std::int64_t target);
  std::size_t entries() const { return entries_; }

 private:
  std::size_t rules_;
  std::vector<std::int64_t> slots_;
  std::size_t entries_ = 0;
};

/// Runs `t` over `input`. With a monitor every rule invocation is recorded
/// through it; with nullptr the run is uninstrumented (counts are still
/// kept). The summary's total covers this call only; I/O fields stay 0.
///
/// Preconditions (not rechecked): validate(t, in_meta, out_meta) and
/// check_conformance(input, in_meta) are both empty.
ExecutionResult execute(const mtl::Transformation& t, const Model& input, const MetaModel& in_meta,
                        const MetaModel& out_meta, RunMonitor* monitor);

/// Convenience overload: collects records into the result.
ExecutionResult execute(const mtl::Transformation& t, const Model& input, const MetaModel& in_meta,
                        const MetaModel& out_meta);

/// A full instrumented run from an input file: timed load (parse plus
/// conformance check), transformation, and timed save of the output.
struct ProfiledRun {
  Model input;
  ExecutionResult result;
  std::int64_t monitor_overhead_ns = 0;
};

/// Throws ValidationError if the input does not conform. When `output_path`
/// is empty the save phase serializes to memory only.
ProfiledRun run_profiled(const mtl::Transformation& t, const std::filesystem::path& input_path,
                         const MetaModel& in_meta, const MetaModel& out_meta,
                         const std::filesystem::path& output_path);

/// Checks the record/summary accounting invariants; returns the violations.
std::vector<std::string> check_accounting(const std::vector<MonitoringRecord>& records,
                                          const RunSummary& summary);

}  // namespace mtperf
