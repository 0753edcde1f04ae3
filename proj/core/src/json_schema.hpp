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

// Small helpers for strict JSON document decoding. Every failure is a
// SchemaError naming the JSON context.

#include <cstdint>
#include <initializer_list>
#include <string>
#include <string_view>

#include "mtperf/canonical_json.hpp"
#include "mtperf/error.hpp"

namespace mtperf::detail {

inline void require_object(const Json& j, std::string_view ctx) {
  if (!j.is_object()) throw SchemaError(std::string(ctx) + ": expected an object");
}

inline void require_array(const Json& j, std::string_view ctx) {
  if (!j.is_array()) throw SchemaError(std::string(ctx) + ": expected an array");
}

inline void check_keys(const Json& j, std::initializer_list<std::string_view> allowed,
                       std::string_view ctx) {
  for (const auto& [key, _] : j.items()) {
    bool ok = false;
    for (auto a : allowed) ok = ok || key == a;
    if (!ok) throw SchemaError(std::string(ctx) + ": unknown field '" + key + "'");
  }
}

inline const Json& require_field(const Json& j, std::string_view key, std::string_view ctx) {
  auto it = j.find(key);
  if (it == j.end()) {
    throw SchemaError(std::string(ctx) + ": missing field '" + std::string(key) + "'");
  }
  return *it;
}

inline std::string get_string(const Json& j, std::string_view key, std::string_view ctx) {
  const Json& v = require_field(j, key, ctx);
  if (!v.is_string()) {
    throw SchemaError(std::string(ctx) + ": field '" + std::string(key) + "' must be a string");
  }
  return v.get<std::string>();
}

inline std::int64_t as_int(const Json& v, std::string_view ctx) {
  if (!v.is_number_integer()) throw SchemaError(std::string(ctx) + ": expected an integer");
  if (v.is_number_unsigned() && v.get<std::uint64_t>() > INT64_MAX) {
    throw SchemaError(std::string(ctx) + ": integer out of range");
  }
  return v.get<std::int64_t>();
}

inline std::int64_t get_int(const Json& j, std::string_view key, std::string_view ctx) {
  return as_int(require_field(j, key, ctx), std::string(ctx) + "." + std::string(key));
}

inline double get_number(const Json& j, std::string_view key, std::string_view ctx) {
  const Json& v = require_field(j, key, ctx);
  if (!v.is_number()) {
    throw SchemaError(std::string(ctx) + ": field '" + std::string(key) + "' must be a number");
  }
  return v.get<double>();
}

}  // namespace mtperf::detail
