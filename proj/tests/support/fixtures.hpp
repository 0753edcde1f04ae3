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

#include <atomic>
#include <chrono>
#include <filesystem>
#include <random>
#include <string>
#include <string_view>
#include <vector>

#include "mtperf/canonical_json.hpp"
#include "mtperf/metamodel.hpp"
#include "mtperf/model.hpp"
#include "mtperf/mtl/parser.hpp"

namespace mtperf::testing {

namespace fs = std::filesystem;

/// Scratch directory removed on destruction.
class TempDir {
 public:
  TempDir() {
    static std::atomic<unsigned> counter{0};
    std::random_device rd;
    path_ = fs::temp_directory_path() /
            ("mtperf-test-" + std::to_string(rd()) + "-" + std::to_string(counter++));
    fs::create_directories(path_);
  }
  ~TempDir() {
    std::error_code ec;
    fs::remove_all(path_, ec);
  }
  TempDir(const TempDir&) = delete;
  TempDir& operator=(const TempDir&) = delete;

  const fs::path& path() const { return path_; }
  fs::path operator/(std::string_view name) const { return path_ / name; }

 private:
  fs::path path_;
};

inline fs::path data_dir() { return fs::path(MTPERF_TEST_DATA_DIR); }

// ECU -> Port -> Signal with a SpecialPort subclass.
inline constexpr std::string_view kEcuMetaJson = R"({
  "name": "ECUs",
  "classes": [
    {"name": "ECU", "superclass": null,
     "attrs": [{"name": "label", "type": "string"}, {"name": "speed", "type": "int"}],
     "refs": [{"name": "ports", "target": "Port", "lower": 0, "upper": -1}]},
    {"name": "Port", "superclass": null,
     "attrs": [{"name": "name", "type": "string"}, {"name": "width", "type": "int"}],
     "refs": [{"name": "signals", "target": "Signal", "lower": 1, "upper": 1}]},
    {"name": "SpecialPort", "superclass": "Port",
     "attrs": [{"name": "prio", "type": "int"}], "refs": []},
    {"name": "Signal", "superclass": null,
     "attrs": [{"name": "name", "type": "string"}, {"name": "active", "type": "bool"}],
     "refs": []}
  ]
})";

inline constexpr std::string_view kNetMetaJson = R"({
  "name": "Net",
  "classes": [
    {"name": "Node", "superclass": null,
     "attrs": [{"name": "name", "type": "string"}, {"name": "speed", "type": "int"},
               {"name": "fanout", "type": "int"}, {"name": "fast", "type": "bool"}],
     "refs": [{"name": "endpoints", "target": "Endpoint", "lower": 0, "upper": -1}]},
    {"name": "Endpoint", "superclass": null,
     "attrs": [{"name": "name", "type": "string"}, {"name": "width", "type": "int"}],
     "refs": [{"name": "channel", "target": "Channel", "lower": 0, "upper": -1}]},
    {"name": "Channel", "superclass": null,
     "attrs": [{"name": "name", "type": "string"}], "refs": []}
  ]
})";

inline MetaModel ecu_meta() { return parse_metamodel(kEcuMetaJson); }
inline MetaModel net_meta() { return parse_metamodel(kNetMetaJson); }

inline ModelObject obj(std::string id, std::string cls, std::map<std::string, Value> attrs = {},
                       std::map<std::string, std::vector<std::string>> refs = {}) {
  return ModelObject{std::move(id), std::move(cls), std::move(attrs), std::move(refs)};
}

inline Value I(std::int64_t v) { return Value{v}; }
inline Value S(std::string v) { return Value{std::move(v)}; }
inline Value B(bool v) { return Value{v}; }

/// Reads a source file below tests/data.
inline std::string data_text(std::string_view rel) { return read_text_file(data_dir() / rel); }

/// Wall-clock milliseconds elapsed since `start`.
inline double elapsed_ms(std::chrono::steady_clock::time_point start) {
  return std::chrono::duration<double, std::milli>(std::chrono::steady_clock::now() - start).count();
}

}  // namespace mtperf::testing
