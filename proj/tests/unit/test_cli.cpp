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

#include <regex>
#include <sstream>

#include "cli.hpp"
#include "mtperf/profiledb.hpp"
#include "support/fixtures.hpp"

using namespace mtperf;
using namespace mtperf::testing;

namespace {

struct Outcome {
  int code;
  std::string out;
  std::string err;
};

Outcome invoke(std::vector<std::string> args) {
  args.insert(args.begin(), "mtperf");
  std::vector<const char*> argv;
  for (const auto& a : args) argv.push_back(a.c_str());
  std::ostringstream out, err;
  const int code = cli::run(static_cast<int>(argv.size()), argv.data(), out, err);
  return {code, out.str(), err.str()};
}

std::vector<std::string> lines(const std::string& text) {
  std::vector<std::string> out;
  std::stringstream ss(text);
  for (std::string l; std::getline(ss, l);) out.push_back(l);
  return out;
}

const char* kSpec = R"({"classes":{
  "ECU":{"baseCount":40,"attrs":{"speed":{"intRange":{"lo":0,"hi":40}}}},
  "Port":{"baseCount":60},
  "Signal":{"baseCount":10}},
 "refs":{"ECU.ports":{"mode":"roundRobin","linksPerObject":2}}})";

/// Workspace with both metamodels, a generation spec, a toy program and an input model.
struct Workspace {
  TempDir dir;
  std::string mm_in = (dir / "ecus.json").string();
  std::string mm_out = (dir / "net.json").string();
  std::string spec = (dir / "spec.json").string();
  std::string trafo = (dir / "t.mtl").string();
  std::string input = (dir / "in.json").string();
  std::string store = (dir / "store").string();

  Workspace() {
    write_text_file(mm_in, kEcuMetaJson);
    write_text_file(mm_out, kNetMetaJson);
    write_text_file(spec, kSpec);
    write_text_file(trafo, data_text("mtl/p04_refs.mtl"));
    REQUIRE(invoke({"generate", "--meta", mm_in, "--spec", spec, "--seed", "1", "--out", input}).code == 0);
  }

  Outcome transform(std::vector<std::string> extra = {}, std::string program = "") {
    std::vector<std::string> args{"--store", store, "transform", program.empty() ? trafo : program, "--in", input,
                                  "--meta-in", mm_in, "--meta-out", mm_out, "--out", (dir / "out.json").string()};
    args.insert(args.end(), extra.begin(), extra.end());
    return invoke(args);
  }
};

}  // namespace

TEST_CASE("transform writes the output model") {
  Workspace ws;
  auto r = ws.transform();
  CHECK(r.code == 0);
  CHECK(r.out.empty());
  Model out = load_model(ws.dir / "out.json");
  CHECK(out.size() > 0);
  CHECK(check_conformance(out, net_meta()).empty());
  CHECK_FALSE(fs::exists(ws.store));
}

TEST_CASE("malformed program exits 1 with a position") {
  Workspace ws;
  write_text_file(ws.dir / "bad.mtl", "transformation T(in src:ECUs, out tgt:Net);\nmapping ECU::r() : Node {\n");
  auto r = ws.transform({}, (ws.dir / "bad.mtl").string());
  CHECK(r.code == 1);
  CHECK(std::regex_search(r.err, std::regex(R"(\d+:\d+)")));
}

TEST_CASE("validation and conformance failures exit 1") {
  Workspace ws;
  write_text_file(ws.dir / "v.mtl", "transformation T(in src:ECUs, out tgt:Net);\nmapping ECU::r() : Node { name := self.speed; }\nmain() { }\n");
  auto r = ws.transform({}, (ws.dir / "v.mtl").string());
  CHECK(r.code == 1);
  CHECK(r.err.find("2:") != std::string::npos);
  CHECK(r.err.find("type_mismatch") != std::string::npos);

  write_text_file(ws.input, R"({"metamodel":"ECUs","objects":[{"id":"p","class":"Port","attrs":{},"refs":{}}]})");
  CHECK(ws.transform().code == 1);
  CHECK(ws.transform({"--profile"}).code == 1);
}

TEST_CASE("runtime errors exit 2") {
  Workspace ws;
  write_text_file(ws.dir / "z.mtl", "transformation T(in src:ECUs, out tgt:Net);\nmapping ECU::r() : Node { speed := 1 / (self.speed - self.speed); }\n"
                                    "main() { src.objectsOfType(ECU)->map r(); }\n");
  auto r = ws.transform({}, (ws.dir / "z.mtl").string());
  CHECK(r.code == 2);
  CHECK(r.err.find("r") != std::string::npos);
  CHECK(ws.transform({"--profile"}, (ws.dir / "z.mtl").string()).code == 2);
  CHECK(RunStore(ws.store).run_ids().empty());
}

TEST_CASE("profiled transform stores exactly one run") {
  Workspace ws;
  auto r = ws.transform({"--profile", "--label", "first"});
  REQUIRE(r.code == 0);
  const auto out = lines(r.out);
  REQUIRE(out.size() == 1);
  RunStore store(ws.store);
  REQUIRE(store.run_ids() == std::vector<std::string>{out[0]});
  auto [meta, records] = store.load_run(out[0]);
  CHECK(meta.label == std::optional<std::string>("first"));
  // Reference execution: rule records plus one load and one save record.
  auto t = mtl::parse(data_text("mtl/p04_refs.mtl"));
  auto ref = execute(t, load_model(ws.input), ecu_meta(), net_meta());
  CHECK(records.size() == ref.records.size() + 2);
  CHECK(meta.summary.invocations_by_rule == ref.summary.invocations_by_rule);

  auto rep = ws.transform({"--profile", "--repeat", "2"});
  CHECK(lines(rep.out).size() == 2);
  CHECK(RunStore(ws.store).run_ids().size() == 3);
}

TEST_CASE("report formats") {
  Workspace ws;
  const std::string id = lines(ws.transform({"--profile"}).out).at(0);
  auto text = invoke({"--store", ws.store, "report", id, "--top", "1"});
  CHECK(text.code == 0);
  CHECK(lines(text.out).size() <= 1 + 2);  // header and separator at most
  auto plot = invoke({"--store", ws.store, "--format", "plotdata", "report", id});
  CHECK(plot.code == 0);
  auto pl = lines(plot.out);
  REQUIRE(pl.size() == 3);
  CHECK(pl[0] == "rule,total_ns,executed,median_ns,share");
  auto json = invoke({"--store", ws.store, "report", id, "--format", "json"});
  CHECK(json.code == 0);
  CHECK(Json::parse(json.out).size() == 2);
  CHECK(invoke({"--store", ws.store, "report", "missing"}).code == 1);
  CHECK(invoke({"--store", ws.store, "--format", "xml", "report", id}).code == 1);
}

TEST_CASE("diff exit codes") {
  Workspace ws;
  const std::string id = lines(ws.transform({"--profile"}).out).at(0);
  auto self = invoke({"--store", ws.store, "diff", id, id});
  CHECK(self.code == 0);
  CHECK(self.out.find("REGRESSED") == std::string::npos);
  CHECK(invoke({"--store", ws.store, "diff", "missing", id}).code == 1);
  CHECK(invoke({"--store", ws.store, "diff", id, "missing"}).code == 1);
}

TEST_CASE("injected regression exits 3 and names the rule") {
  Workspace ws;
  REQUIRE(invoke({"generate", "--meta", ws.mm_in, "--spec", ws.spec, "--scale", "8", "--seed", "3", "--out", ws.input}).code == 0);
  auto program = [](int terms) {
    std::string e = "self.speed";
    for (int i = 1; i < terms; ++i) e += " + self.speed * " + std::to_string(i % 7);
    return "transformation T(in src:ECUs, out tgt:Net);\n"
           "mapping ECU::heavy() : Node { speed := " + e + "; }\n"
           "mapping Port::light() : Endpoint { width := self.width; }\n"
           "main() { src.objectsOfType(ECU)->map heavy(); src.objectsOfType(Port)->map light(); }\n";
  };
  write_text_file(ws.dir / "base.mtl", program(5));
  write_text_file(ws.dir / "slow.mtl", program(400));
  ws.transform({"--profile"}, (ws.dir / "base.mtl").string());  // warm-up
  const std::string base = lines(ws.transform({"--profile"}, (ws.dir / "base.mtl").string()).out).at(0);
  const std::string slow = lines(ws.transform({"--profile"}, (ws.dir / "slow.mtl").string()).out).at(0);
  auto r = invoke({"--store", ws.store, "diff", base, slow});
  CHECK(r.code == 3);
  bool named = false;
  for (const auto& l : lines(r.out))
    if (l.find("REGRESSED") != std::string::npos && l.find("heavy") != std::string::npos) named = true;
  CHECK(named);
  CHECK(r.out.find("transformation_change") != std::string::npos);
  auto js = invoke({"--store", ws.store, "--format", "json", "diff", base, slow});
  CHECK(js.code == 3);
  CHECK(Json::parse(js.out).at("causes").at(0).at("kind") == "transformation_change");
}

TEST_CASE("generate is reproducible") {
  Workspace ws;
  const std::string a = (ws.dir / "a.json").string(), b = (ws.dir / "b.json").string();
  CHECK(invoke({"generate", "--meta", ws.mm_in, "--spec", ws.spec, "--seed", "77", "--scale", "3/2", "--out", a}).code == 0);
  CHECK(invoke({"generate", "--meta", ws.mm_in, "--spec", ws.spec, "--seed", "77", "--scale", "3/2", "--out", b}).code == 0);
  CHECK(read_text_file(a) == read_text_file(b));
  CHECK(invoke({"generate", "--meta", ws.mm_in, "--spec", ws.spec, "--scale", "0", "--out", a}).code == 1);
  write_text_file(ws.dir / "bad.json", R"({"classes":{"Ghost":{"baseCount":1}}})");
  CHECK(invoke({"generate", "--meta", ws.mm_in, "--spec", (ws.dir / "bad.json").string(), "--out", a}).code == 1);
}

TEST_CASE("fit on an empty store fails") {
  Workspace ws;
  auto r = invoke({"--store", ws.store, "fit", "--transformation", ws.trafo, "--out", (ws.dir / "cm.json").string()});
  CHECK(r.code == 1);
  CHECK_FALSE(r.err.empty());
  CHECK(invoke({"--store", ws.store, "fit", "--out", (ws.dir / "cm.json").string()}).code == 1);
}

TEST_CASE("bench, fit and predict end to end") {
  Workspace ws;
  auto b = invoke({"--store", ws.store, "bench", ws.trafo, "--meta-in", ws.mm_in, "--meta-out", ws.mm_out, "--spec", ws.spec,
                   "--scales", "1,2", "--seed", "5", "--work-dir", (ws.dir / "work").string()});
  REQUIRE(b.code == 0);
  CHECK(RunStore(ws.store).run_ids().size() == 2);
  auto table = lines(b.out);
  REQUIRE(table.size() == 3);
  CHECK(table[0].find("median_total_ns") != std::string::npos);

  auto b3 = invoke({"--store", ws.store, "--repeat", "3", "bench", ws.trafo, "--meta-in", ws.mm_in, "--meta-out", ws.mm_out,
                    "--spec", ws.spec, "--scales", "4", "--label", "r3"});
  REQUIRE(b3.code == 0);
  RunStore store(ws.store);
  std::vector<RunMeta> scale4;
  for (const auto& m : store.query_runs())
    if (m.label && m.label->rfind("r3", 0) == 0) scale4.push_back(m);
  REQUIRE(scale4.size() == 3);
  CHECK(scale4[0].features == scale4[1].features);
  CHECK(scale4[1].features == scale4[2].features);

  const std::string cm = (ws.dir / "cm.json").string();
  auto f = invoke({"--store", ws.store, "fit", "--transformation", ws.trafo, "--out", cm});
  REQUIRE(f.code == 0);
  CHECK(fs::exists(cm));
  const std::string fresh = (ws.dir / "fresh.json").string();
  REQUIRE(invoke({"generate", "--meta", ws.mm_in, "--spec", ws.spec, "--scale", "3", "--seed", "9", "--out", fresh}).code == 0);
  auto p = invoke({"predict", "--cost", cm, "--in", fresh, "--meta-in", ws.mm_in});
  REQUIRE(p.code == 0);
  std::smatch m;
  REQUIRE(std::regex_search(p.out, m, std::regex(R"(totalNs (-?\d+))")));
  CHECK(std::stoll(m[1]) >= 0);
  CHECK(p.out.find("uncertaintyNs") != std::string::npos);
  CHECK(p.out.find("rule toNode") != std::string::npos);
  CHECK(p.out.find("rule toEndpoint") != std::string::npos);
  auto pj = invoke({"--format", "json", "predict", "--cost", cm, "--in", fresh, "--meta-in", ws.mm_in});
  CHECK(pj.code == 0);
  CHECK(Json::parse(pj.out).at("totalNs").get<std::int64_t>() >= 0);

  const auto ids = store.run_ids();
  auto ev = invoke({"--store", ws.store, "evaluate", "--cost", cm, ids.front()});
  CHECK(ev.code == 0);
  CHECK(ev.out.find("mape") != std::string::npos);
}

TEST_CASE("global option checks") {
  CHECK(invoke({}).code == 1);
  CHECK(invoke({"--help"}).code == 0);
  CHECK(invoke({"bogus"}).code == 1);
  Workspace ws;
  CHECK(ws.transform({"--ratio", "1"}).code == 1);
  CHECK(ws.transform({"--repeat", "0"}).code == 1);
  CHECK(invoke({"transform", ws.trafo}).code == 1);
  CHECK(invoke({"--store", ws.store, "fit", "--hash", "x", "--transformation", ws.trafo, "--out", "cm.json"}).code == 1);
}
