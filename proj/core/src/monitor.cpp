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

#include "mtperf/monitor.hpp"

#include <cassert>

namespace mtperf {

std::string_view to_string(RecordKind kind) {
  switch (kind) {
    case RecordKind::Executed: return "executed";
    case RecordKind::GuardRejected: return "guard_rejected";
    case RecordKind::TraceHit: return "trace_hit";
    case RecordKind::Load: return "load";
    case RecordKind::Save: return "save";
  }
  return "?";
}

std::optional<RecordKind> record_kind_from_string(std::string_view name) {
  if (name == "executed") return RecordKind::Executed;
  if (name == "guard_rejected") return RecordKind::GuardRejected;
  if (name == "trace_hit") return RecordKind::TraceHit;
  if (name == "load") return RecordKind::Load;
  if (name == "save") return RecordKind::Save;
  return std::nullopt;
}

void Collector::record(MonitoringRecord r) {
  const std::int64_t t0 = MonotonicClock::now_ns();
  if (r.seq != next_seq_) {
    throw SequenceError("record seq " + std::to_string(r.seq) + " out of order, expected " +
                        std::to_string(next_seq_));
  }
  records_.push_back(std::move(r));
  ++next_seq_;
  overhead_ns_ += MonotonicClock::now_ns() - t0;
}

std::vector<MonitoringRecord> Collector::drain() {
  std::vector<MonitoringRecord> out;
  out.swap(records_);
  return out;
}

RunMonitor::RunMonitor(RecordSink& sink, std::int64_t run_start_ns)
    : sink_(sink), run_start_ns_(run_start_ns) {}

RunMonitor::Token RunMonitor::begin(RecordKind kind, std::string_view rule,
                                    std::string_view source_id) {
  Pending p;
  p.record.seq = next_seq_++;
  p.record.kind = kind;
  p.record.rule = rule;
  p.record.source_id = source_id;
  p.start_abs = MonotonicClock::now_ns();
  p.record.start_ns = p.start_abs - run_start_ns_;
  const Token token = p.record.seq;
  pending_.push_back(std::move(p));
  open_.push_back(token);
  return token;
}

void RunMonitor::set_kind(Token token, RecordKind kind) {
  pending_[token - flushed_seq_].record.kind = kind;
}

void RunMonitor::finish(Token token) {
  const std::int64_t end = MonotonicClock::now_ns();
  assert(!open_.empty() && open_.back() == token);
  open_.pop_back();
  Pending& p = pending_[token - flushed_seq_];
  const std::int64_t elapsed = end - p.start_abs;
  p.record.duration_ns = std::max<std::int64_t>(0, elapsed - p.child_ns);
  p.done = true;
  if (!open_.empty()) {
    pending_[open_.back() - flushed_seq_].child_ns += elapsed;
  } else {
    flush();
  }
}

void RunMonitor::emit(RecordKind kind, std::string_view rule, std::string_view source_id,
                      std::int64_t start_abs_ns, std::int64_t end_abs_ns) {
  Pending p;
  p.record.seq = next_seq_++;
  p.record.kind = kind;
  p.record.rule = rule;
  p.record.source_id = source_id;
  p.record.start_ns = start_abs_ns - run_start_ns_;
  p.record.duration_ns = std::max<std::int64_t>(0, end_abs_ns - start_abs_ns);
  p.done = true;
  pending_.push_back(std::move(p));
  if (open_.empty()) flush();
}

void RunMonitor::flush() {
  std::size_t n = 0;
  while (n < pending_.size() && pending_[n].done) {
    sink_.record(std::move(pending_[n].record));
    ++n;
  }
  flushed_seq_ += n;
  pending_.erase(pending_.begin(), pending_.begin() + static_cast<std::ptrdiff_t>(n));
}

}  // namespace mtperf
