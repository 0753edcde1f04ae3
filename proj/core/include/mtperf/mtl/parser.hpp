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

#include <string_view>

#include "mtperf/mtl/ast.hpp"
#include "mtperf/mtl/lexer.hpp"

namespace mtperf::mtl {

/// Parses a complete `.mtl` program. Throws LexError or MtlParseError with
/// line:column and the set of tokens that would have been accepted.
Transformation parse(std::string_view source);

Transformation load_transformation(const std::filesystem::path& path);

}  // namespace mtperf::mtl
