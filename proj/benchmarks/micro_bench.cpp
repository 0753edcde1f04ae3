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

#include <benchmark/benchmark.h>

#include "mtperf/engine.hpp"
#include "mtperf/genmodel.hpp"
#include "mtperf/monitor.hpp"
#include "mtperf/mtl/parser.hpp"

namespace {

using namespace mtperf;

constexpr std::string_view kMeta = R"({"name": "ECUs", "classes": [
  {"name": "ECU", "superclass": null, "attrs": [{"name": "label", "type": "string"}, {"name": "speed", "type": "int"}],
   "refs": [{"name": "ports", "target": "Port", "lower": 0, "upper": -1}]},
  {"name": "Port", "superclass": null, "attrs": [{"name": "name", "type": "string"}, {"name": "width", "type": "int"}],
   "refs": []}]})";

constexpr std::string_view kTargetMeta = R"({"name": "Net", "classes": [
  {"name": "Node", "superclass": null, "attrs": [{"name": "name", "type": "string"}, {"name": "speed", "type": "int"},
   {"name": "fanout", "type": "int"}], "refs": [{"name": "endpoints", "target": "Endpoint", "lower": 0, "upper": -1}]},
  {"name": "Endpoint", "superclass": null, "attrs": [{"name": "name", "type": "string"}, {"name": "width", "type": "int"}],
   "refs": []}]})";

constexpr std::string_view kProgram = R"(transformation T(in src:ECUs, out tgt:Net);
mapping ECU::node() : Node when { self.speed > 3 } {
  name := self.label;
  speed := self.speed * 2 + 1;
  fanout := self.ports->size();
  endpoints := self.ports->map ep();
}
mapping Port::ep() : Endpoint { name := self.name; width := self.width * 8; }
main() {
  src.objectsOfType(ECU)->map node();
  src.objectsOfType(Port)->map ep();
}
)";

struct Fixture {
  MetaModel in = parse_metamodel(kMeta);
  MetaModel out = parse_metamodel(kTargetMeta);
  mtl::Transformation t = mtl::parse(kProgram);
  Model model;

  explicit Fixture(std::int64_t ecus) {
    const GenSpec spec = gen_spec_from_json(Json::parse(
        R"({"classes":{"ECU":{"baseCount":)" + std::to_string(ecus) + R"(,"attrs":{"speed":{"intRange":{"lo":0,"hi":9}}}},
            "Port":{"baseCount":)" + std::to_string(ecus * 3) + R"(}},
           "refs":{"ECU.ports":{"mode":"roundRobin","linksPerObject":3}}})"));
    model = generate(in, spec, Scale::parse("1"), 7);
  }
};

void BM_CollectorRecord(benchmark::State& state) {
  const auto batch = static_cast<std::size_t>(state.range(0));
  for (auto _ : state) {
    state.PauseTiming();
    Collector c(batch);
    state.ResumeTiming();
    for (std::size_t i = 0; i < batch; ++i) {
      c.record(MonitoringRecord{i, RecordKind::Executed, "toNode", "e42", static_cast<std::int64_t>(i), 10});
    }
    benchmark::DoNotOptimize(c.size());
  }
  state.SetItemsProcessed(state.iterations() * state.range(0));
}
BENCHMARK(BM_CollectorRecord)->Arg(1 << 10)->Arg(1 << 16);

void BM_MonitorBeginFinish(benchmark::State& state) {
  Collector c;
  RunMonitor mon(c);
  for (auto _ : state) {
    auto token = mon.begin(RecordKind::Executed, "toNode", "e42");
    mon.finish(token);
  }
  benchmark::DoNotOptimize(c.size());
  state.SetItemsProcessed(state.iterations());
}
BENCHMARK(BM_MonitorBeginFinish);

void BM_ClockRead(benchmark::State& state) {
  for (auto _ : state) benchmark::DoNotOptimize(MonotonicClock::now_ns());
}
BENCHMARK(BM_ClockRead);

void BM_ExecuteUninstrumented(benchmark::State& state) {
  Fixture f(state.range(0));
  for (auto _ : state) {
    auto r = execute(f.t, f.model, f.in, f.out, nullptr);
    benchmark::DoNotOptimize(r.output.size());
  }
  state.SetItemsProcessed(state.iterations() * static_cast<std::int64_t>(f.model.size()));
}
BENCHMARK(BM_ExecuteUninstrumented)->Arg(1000)->Arg(10000)->Unit(benchmark::kMillisecond);

void BM_ExecuteInstrumented(benchmark::State& state) {
  Fixture f(state.range(0));
  for (auto _ : state) {
    Collector c(f.model.size() * 2);
    RunMonitor mon(c);
    auto r = execute(f.t, f.model, f.in, f.out, &mon);
    benchmark::DoNotOptimize(r.output.size());
  }
  state.SetItemsProcessed(state.iterations() * static_cast<std::int64_t>(f.model.size()));
}
BENCHMARK(BM_ExecuteInstrumented)->Arg(1000)->Arg(10000)->Unit(benchmark::kMillisecond);

}  // namespace

BENCHMARK_MAIN();
