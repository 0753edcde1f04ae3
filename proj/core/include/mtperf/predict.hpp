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
#include <span>
#include <string>
#include <vector>

#include "mtperf/canonical_json.hpp"
#include "mtperf/error.hpp"
#include "mtperf/features.hpp"
#include "mtperf/profiledb.hpp"

namespace mtperf {

class NoTrainingData : public Error {
 public:
  using Error::Error;
};

/// The model's metamodel lacks a class the cost model depends on.
class FeatureMissing : public Error {
 public:
  using Error::Error;
};

struct Observation {
  double x = 0.0;
  double y = 0.0;
};

enum class FitKind { Linear, Constant };

/// y = a + b * x with the residual standard error of the fit.
struct LinearFit {
  double a = 0.0;
  double b = 0.0;
  double residual_se = 0.0;
  std::int64_t n_obs = 0;
  FitKind kind = FitKind::Constant;

  double at(double x) const { return a + b * x; }
  bool operator==(const LinearFit&) const = default;
};

/// Ordinary least squares on centered sums. Fewer than two distinct x
/// values yield a constant fit (a = mean y, b = 0). Residual SE uses n - 2
/// degrees of freedom for linear fits (0 when n = 2) and n - 1 for
/// constant fits (0 when n = 1). Throws NoTrainingData on empty input.
LinearFit fit_ols(std::span<const Observation> obs);

struct RuleCost {
  std::string source_class;
  LinearFit fit;

  bool operator==(const RuleCost&) const = default;
};

struct CostModel {
  std::string transformation_hash;
  std::map<std::string, RuleCost> per_rule;
  LinearFit load;  // against totalObjects
  LinearFit save;  // against objectsCreated
  std::string fitted_at_utc;
  std::vector<std::string> warnings;

  bool operator==(const CostModel&) const = default;
};

Json to_json(const CostModel& cm);
CostModel cost_model_from_json(const Json& j);
CostModel load_cost_model(const std::filesystem::path& path);
void save_cost_model(const std::filesystem::path& path, const CostModel& cm);

struct FitOptions {
  /// Collapse runs with identical feature values to the median of their
  /// observations before fitting, so warm-up outliers among repeats do not
  /// pull the line.
  bool median_of_repeats = true;
};

/// Per-rule observation for one run: x = count of the rule's source class,
/// y = summed self time of every record of that rule.
CostModel fit(const std::vector<RunMeta>& runs,
              const std::map<std::string, std::vector<MonitoringRecord>>& records_by_run,
              const std::string& transformation_hash, const FitOptions& options = {});

/// Throws NoTrainingData when the store has no run for the hash.
CostModel fit(const RunStore& store, const std::string& transformation_hash, const FitOptions& options = {});

struct Prediction {
  std::int64_t total_ns = 0;
  std::map<std::string, std::int64_t> per_rule_ns;
  std::int64_t load_ns = 0;
  std::int64_t save_ns = 0;
  std::int64_t uncertainty_ns = 0;
  FeatureVector features;
};

Prediction predict_from_features(const CostModel& cm, const FeatureVector& features);
/// Throws FeatureMissing when `mm` lacks a source class named by `cm`.
Prediction predict_time(const CostModel& cm, const Model& m, const MetaModel& mm);

Json to_json(const Prediction& p);

struct Evaluation {
  double mape = 0.0;
  std::vector<std::pair<std::int64_t, std::int64_t>> per_run;  // (predicted, actual)
};

/// Mean |predicted - actual| / actual over the held-out runs.
Evaluation evaluate(const CostModel& cm, const RunStore& store, const std::vector<std::string>& held_out);

}  // namespace mtperf
