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
#include <map>
#include <string>

#include "mtperf/metamodel.hpp"
#include "mtperf/model.hpp"

namespace mtperf {

/// Workload description of an input model. A class count includes the
/// instances of every subclass; every class of the metamodel is present.
struct FeatureVector {
  std::map<std::string, std::int64_t> counts_by_class;
  std::int64_t total_objects = 0;
  std::int64_t total_links = 0;

  bool operator==(const FeatureVector&) const = default;
};

FeatureVector extract_features(const Model& m, const MetaModel& mm);

}  // namespace mtperf
