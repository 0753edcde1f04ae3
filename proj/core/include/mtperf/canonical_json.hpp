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

#include <filesystem>
#include <string>
#include <string_view>

#include <json.hpp>

namespace mtperf {

using Json = nlohmann::json;

/// Canonical serialization: object keys sorted, arrays in document order,
/// no insignificant whitespace, UTF-8 passed through unescaped.
std::string canonical_dump(const Json& value);

/// Parses `text`; throws ParseError carrying `what` on malformed input.
Json parse_json(std::string_view text, std::string_view what);

std::string read_text_file(const std::filesystem::path& path);

/// Writes `text` to `path` through a sibling temporary file and a rename.
void write_text_file(const std::filesystem::path& path, std::string_view text);

/// Canonical form followed by a single LF, the on-disk format.
void write_canonical_file(const std::filesystem::path& path, const Json& value);

}  // namespace mtperf
