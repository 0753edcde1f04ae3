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
#include <optional>
#include <string>
#include <vector>

#include "mtperf/canonical_json.hpp"
#include "mtperf/engine.hpp"
#include "mtperf/monitor.hpp"
#include "mtperf/profiledb.hpp"

namespace mtperf {

/// Per-rule statistics. Duration statistics cover `executed` records only.
struct RuleStats {
  std::string rule;
  std::int64_t executed = 0;
  std::int64_t guard_rejected = 0;
  std::int64_t trace_hits = 0;
  std::int64_t total_ns = 0;
  std::int64_t mean_ns = 0;
  std::int64_t median_ns = 0;
  std::int64_t p95_ns = 0;
  std::int64_t max_ns = 0;
  double share_of_run = 0.0;

  bool operator==(const RuleStats&) const = default;
};

/// Nearest-rank percentile of an ascending sequence: element at
/// rank ceil(p/100 * n), 1-based. Returns 0 for an empty input.
std::int64_t nearest_rank(const std::vector<std::int64_t>& sorted, int percent);

/// One RuleStats per rule appearing in `records`, ordered by rule name.
std::vector<RuleStats> aggregate(const std::vector<MonitoringRecord>& records,
                                 const RunSummary& summary);

/// Top `k` by totalNs descending, ties by rule name ascending.
std::vector<RuleStats> rank_hotspots(std::vector<RuleStats> stats, std::size_t k);

enum class Verdict { Regressed, Improved, Unchanged, InsufficientData };
enum class CauseKind { TransformationChange, MetamodelChange, OperationalProfileChange, EnvironmentOrUnknown };

std::string_view to_string(Verdict v);
std::string_view to_string(CauseKind c);

struct RegressionEntry {
  std::string rule;
  std::int64_t baseline_executed = 0;
  std::int64_t current_executed = 0;
  std::int64_t baseline_median_ns = 0;
  std::int64_t current_median_ns = 0;
  /// current / baseline median; empty when the baseline median is 0.
  std::optional<double> ratio;
  std::int64_t delta_total_ns = 0;
  Verdict verdict = Verdict::Unchanged;
};

struct Cause {
  CauseKind kind;
  std::string evidence;
};

struct RegressionReport {
  std::string baseline_run_id;
  std::string current_run_id;
  std::vector<RegressionEntry> entries;  // deltaTotalNs descending
  std::vector<Cause> causes;             // most specific evidence first

  bool any_regressed() const;
};

struct DiffThresholds {
  double ratio = 1.20;
  std::int64_t min_samples = 30;
};

/// Compares two loaded runs. Verdicts use medians of executed durations;
/// causes come from the stored hashes and feature vectors only.
RegressionReport diff_runs(const RunMeta& baseline, const std::vector<MonitoringRecord>& baseline_records,
                           const RunMeta& current, const std::vector<MonitoringRecord>& current_records,
                           const DiffThresholds& thresholds = {});

/// Throws NotFound when either run is missing.
RegressionReport diff_runs(const RunStore& store, const std::string& baseline_id,
                           const std::string& current_id, const DiffThresholds& thresholds = {});

enum class ReportFormat { Text, Json, PlotData };

std::optional<ReportFormat> report_format_from_string(std::string_view name);

Json to_json(const RuleStats& s);
Json to_json(const RegressionReport& r);

/// `text`: aligned table; `json`: canonical JSON; `plotdata`: CSV with
/// header `rule,total_ns,executed,median_ns,share`.
std::string render_report(const std::vector<RuleStats>& stats, ReportFormat format);
/// `plotdata` for a regression report uses the header
/// `rule,baseline_median_ns,current_median_ns,ratio,delta_total_ns,verdict`.
std::string render_report(const RegressionReport& report, ReportFormat format);

}  // namespace mtperf
