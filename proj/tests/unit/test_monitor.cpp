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

#include <doctest.h>

#include <thread>

#include "mtperf/monitor.hpp"

using namespace mtperf;

namespace {

MonitoringRecord rec(std::uint64_t seq, RecordKind kind = RecordKind::Executed) {
  return MonitoringRecord{seq, kind, "r", "o1", static_cast<std::int64_t>(seq) * 10, 5};
}

void spin_ns(std::int64_t ns) {
  const std::int64_t until = MonotonicClock::now_ns() + ns;
  while (MonotonicClock::now_ns() < until) {
  }
}

}  // namespace

TEST_CASE("records come back in order") {
  Collector c;
  c.record(rec(0));
  c.record(rec(1));
  auto out = c.drain();
  REQUIRE(out.size() == 2);
  CHECK(out[0] == rec(0));
  CHECK(out[1] == rec(1));
}

TEST_CASE("repeated sequence number is rejected") {
  Collector c;
  c.record(rec(0));
  CHECK_THROWS_AS(c.record(rec(0)), SequenceError);
  CHECK_THROWS_AS(c.record(rec(2)), SequenceError);
  CHECK(c.size() == 1);
  CHECK(c.next_seq() == 1);
  CHECK_NOTHROW(c.record(rec(1)));
}

TEST_CASE("first record must be seq 0") {
  Collector c;
  CHECK_THROWS_AS(c.record(rec(1)), SequenceError);
}

TEST_CASE("one million records drain exactly once, in order") {
  Collector c(1'000'000);
  for (std::uint64_t i = 0; i < 1'000'000; ++i) c.record(MonitoringRecord{i, RecordKind::TraceHit, "rule", "o", 0, 0});
  auto out = c.drain();
  REQUIRE(out.size() == 1'000'000);
  bool ordered = true;
  for (std::uint64_t i = 0; i < out.size(); ++i) ordered = ordered && out[i].seq == i;
  CHECK(ordered);
  CHECK(c.drain().empty());
  CHECK(c.overhead_ns() >= 0);
}

TEST_CASE("drain contracts") {
  Collector c;
  CHECK(c.drain().empty());
  for (std::uint64_t i = 0; i < 3; ++i) c.record(rec(i));
  auto out = c.drain();
  REQUIRE(out.size() == 3);
  CHECK(out[0].seq == 0);
  CHECK(out[1].seq == 1);
  CHECK(out[2].seq == 2);
  CHECK(c.drain().empty());
  CHECK(c.size() == 0);
  // Sequence numbering continues after a drain.
  CHECK_NOTHROW(c.record(rec(3)));
}

TEST_CASE("record kind names") {
  for (auto k : {RecordKind::Executed, RecordKind::GuardRejected, RecordKind::TraceHit, RecordKind::Load, RecordKind::Save}) {
    CHECK(record_kind_from_string(to_string(k)) == k);
  }
  CHECK(to_string(RecordKind::GuardRejected) == "guard_rejected");
  CHECK(to_string(RecordKind::TraceHit) == "trace_hit");
  CHECK_FALSE(record_kind_from_string("bogus").has_value());
}

TEST_CASE("clock is monotonic") {
  std::int64_t prev = MonotonicClock::now_ns();
  for (int i = 0; i < 10000; ++i) {
    const std::int64_t now = MonotonicClock::now_ns();
    CHECK(now >= prev);
    prev = now;
  }
}

TEST_CASE("nested invocations flush in start order with self time") {
  Collector c;
  const std::int64_t start = MonotonicClock::now_ns();
  RunMonitor mon(c, start);
  auto outer = mon.begin(RecordKind::Executed, "outer", "a");
  spin_ns(200'000);
  auto inner = mon.begin(RecordKind::Executed, "inner", "b");
  spin_ns(2'000'000);
  mon.finish(inner);
  CHECK(c.size() == 0);  // held back until the outer invocation is done
  auto hit = mon.begin(RecordKind::Executed, "inner", "b");
  mon.set_kind(hit, RecordKind::TraceHit);
  mon.finish(hit);
  mon.finish(outer);
  CHECK(mon.idle());
  const std::int64_t end = MonotonicClock::now_ns();

  auto out = c.drain();
  REQUIRE(out.size() == 3);
  CHECK(out[0].rule == "outer");
  CHECK(out[1].rule == "inner");
  CHECK(out[2].kind == RecordKind::TraceHit);
  CHECK(out[2].duration_ns >= 0);
  for (std::size_t i = 1; i < out.size(); ++i) CHECK(out[i].start_ns >= out[i - 1].start_ns);
  CHECK(out[0].start_ns >= 0);
  // The outer record excludes the inner 2 ms.
  CHECK(out[1].duration_ns >= 2'000'000);
  CHECK(out[0].duration_ns < out[1].duration_ns);
  CHECK(out[0].duration_ns + out[1].duration_ns <= end - start);
}

TEST_CASE("emit forwards complete records") {
  Collector c;
  RunMonitor mon(c, 1000);
  mon.emit(RecordKind::Load, "", "", 1500, 1800);
  auto t = mon.begin(RecordKind::Executed, "r", "x");
  mon.finish(t);
  mon.emit(RecordKind::Save, "", "", MonotonicClock::now_ns(), MonotonicClock::now_ns() + 10);
  auto out = c.drain();
  REQUIRE(out.size() == 3);
  CHECK(out[0].kind == RecordKind::Load);
  CHECK(out[0].start_ns == 500);
  CHECK(out[0].duration_ns == 300);
  CHECK(mon.emitted() == 3);
}

TEST_CASE("sink failures propagate") {
  struct Failing final : RecordSink {
    void record(MonitoringRecord) override { throw IoError("sink full"); }
  } sink;
  RunMonitor mon(sink);
  auto t = mon.begin(RecordKind::Executed, "r", "x");
  CHECK_THROWS_AS(mon.finish(t), IoError);
}
