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

#include <chrono>
#include <cstdint>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "mtperf/error.hpp"

namespace mtperf {

enum class RecordKind { Executed, GuardRejected, TraceHit, Load, Save };

std::string_view to_string(RecordKind kind);
std::optional<RecordKind> record_kind_from_string(std::string_view name);

/// One timed event: a rule invocation or a model I/O phase.
struct MonitoringRecord {
  std::uint64_t seq = 0;
  RecordKind kind = RecordKind::Executed;
  std::string rule;       // empty for I/O kinds
  std::string source_id;  // empty for I/O kinds
  std::int64_t start_ns = 0;     // relative to the start of the run
  std::int64_t duration_ns = 0;  // self time, never negative

  bool operator==(const MonitoringRecord&) const = default;
};

/// The one clock every instrumented region is measured with.
struct MonotonicClock {
  using clock = std::chrono::steady_clock;
  static std::int64_t now_ns() {
    return std::chrono::duration_cast<std::chrono::nanoseconds>(
               clock::now().time_since_epoch())
        .count();
  }
};

class SequenceError : public Error {
 public:
  using Error::Error;
};

/// Receiver of monitoring records. Called from the run thread only.
class RecordSink {
 public:
  virtual ~RecordSink() = default;
  virtual void record(MonitoringRecord r) = 0;
};

/// In-memory buffer of one run's records. Nothing is written until drain().
class Collector final : public RecordSink {
 public:
  Collector() = default;
  explicit Collector(std::size_t expected) { records_.reserve(expected); }

  /// Throws SequenceError unless r.seq is the next expected number.
  void record(MonitoringRecord r) override;

  /// All buffered records in emission order; the collector is empty afterwards.
  std::vector<MonitoringRecord> drain();

  std::size_t size() const { return records_.size(); }
  std::uint64_t next_seq() const { return next_seq_; }
  /// Accumulated time spent inside record().
  std::int64_t overhead_ns() const { return overhead_ns_; }

 private:
  std::vector<MonitoringRecord> records_;
  std::uint64_t next_seq_ = 0;
  std::int64_t overhead_ns_ = 0;
};

/// Assigns sequence numbers and run-relative timestamps for one run.
///
/// Invocations nest (a rule body may map other rules), but records must
/// reach the sink in start order. begin() reserves the next sequence
/// number; finish() completes it. Completed records are held back until
/// every earlier invocation has finished, then forwarded in seq order.
/// Durations are self time: a nested invocation's elapsed time is removed
/// from the enclosing one, so durations of a run never double count.
class RunMonitor {
 public:
  using Token = std::size_t;

  explicit RunMonitor(RecordSink& sink, std::int64_t run_start_ns = MonotonicClock::now_ns());

  std::int64_t run_start_ns() const { return run_start_ns_; }

  Token begin(RecordKind kind, std::string_view rule, std::string_view source_id);
  /// Changes the kind of a pending record (e.g. a guard rejection is only
  /// known after the guard has been evaluated).
  void set_kind(Token token, RecordKind kind);
  void finish(Token token);

  /// Emits a complete record for a region timed by the caller.
  void emit(RecordKind kind, std::string_view rule, std::string_view source_id,
            std::int64_t start_abs_ns, std::int64_t end_abs_ns);

  std::uint64_t emitted() const { return next_seq_; }
  bool idle() const { return open_.empty() && pending_.empty(); }

 private:
  struct Pending {
    MonitoringRecord record;
    std::int64_t start_abs = 0;
    std::int64_t child_ns = 0;
    bool done = false;
  };

  void flush();

  RecordSink& sink_;
  std::int64_t run_start_ns_;
  std::uint64_t next_seq_ = 0;
  std::uint64_t flushed_seq_ = 0;
  std::vector<Pending> pending_;  // pending_[i].record.seq == flushed_seq_ + i
  std::vector<Token> open_;       // stack of unfinished invocations
};

}  // namespace mtperf
