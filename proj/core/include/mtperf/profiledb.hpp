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
#include <filesystem>
#include <functional>
#include <map>
#include <optional>
#include <string>
#include <vector>

#include "mtperf/canonical_json.hpp"
#include "mtperf/engine.hpp"
#include "mtperf/features.hpp"
#include "mtperf/monitor.hpp"

namespace mtperf {

struct RunMeta {
  std::string run_id;
  std::string transformation_hash;
  std::string in_meta_hash;
  std::string out_meta_hash;
  std::string input_model_hash;
  FeatureVector features;
  RunSummary summary;
  /// Rule name to source class, captured so cost models can be fitted
  /// without the transformation source.
  std::map<std::string, std::string> rule_source_classes;
  std::optional<std::string> label;
  std::string created_at_utc;
  std::map<std::string, std::string> environment;
  std::int64_t monitor_overhead_ns = 0;

  bool operator==(const RunMeta&) const = default;
};

class DuplicateRun : public Error {
 public:
  using Error::Error;
};

class CorruptRun : public Error {
 public:
  CorruptRun(const std::string& message, std::size_t line) : Error(message), line_(line) {}
  /// 1-based line in records.jsonl, 0 when meta.json is at fault.
  std::size_t line() const { return line_; }

 private:
  std::size_t line_;
};

Json to_json(const FeatureVector& f);
FeatureVector feature_vector_from_json(const Json& j);
Json to_json(const RunSummary& s);
RunSummary run_summary_from_json(const Json& j);
Json to_json(const RunMeta& m);
RunMeta run_meta_from_json(const Json& j);

/// One records.jsonl line, fields in the fixed order
/// seq,kind,rule,sourceId,startNs,durationNs (no trailing newline).
std::string record_to_jsonl(const MonitoringRecord& r);
/// Throws SchemaError / ParseError on malformed lines.
MonitoringRecord record_from_jsonl(std::string_view line);

/// `<UTC yyyymmddThhmmssZ>-<4 hex>`, e.g. 20240101T120000Z-a1b2.
std::string make_run_id();
/// ISO-8601 UTC with microseconds, e.g. 2024-01-01T12:00:00.123456Z.
std::string utc_now_iso8601();
std::map<std::string, std::string> current_environment();

struct RunFilter {
  std::optional<std::string> transformation_hash;
  std::optional<std::string> in_meta_hash;
  /// When set, fewer matches than this yield an empty result.
  std::optional<std::size_t> min_runs;
};

/// Directory-backed run store: `<root>/runs/<runId>/{meta.json,records.jsonl}`.
/// The index is rebuilt from the filesystem on open; directories whose
/// name starts with '.' are in-flight writes and are ignored.
class RunStore {
 public:
  explicit RunStore(std::filesystem::path root);

  const std::filesystem::path& root() const { return root_; }

  /// Test hook invoked after the temporary run directory is complete and
  /// before it is renamed into place.
  using BeforeCommit = std::function<void(const std::filesystem::path& tmp_dir)>;

  std::string write_run(const RunMeta& meta, const std::vector<MonitoringRecord>& records,
                        const BeforeCommit& before_commit = {});

  std::pair<RunMeta, std::vector<MonitoringRecord>> load_run(const std::string& run_id) const;
  RunMeta load_meta(const std::string& run_id) const;

  bool contains(const std::string& run_id) const;
  /// A fresh make_run_id() value not yet present in this store.
  std::string unique_run_id() const;
  std::vector<std::string> run_ids() const;
  /// Matching runs sorted by createdAtUtc, then runId.
  std::vector<RunMeta> query_runs(const RunFilter& filter = {}) const;

  /// Re-reads the index from disk.
  void refresh();

 private:
  std::filesystem::path run_dir(const std::string& run_id) const;

  std::filesystem::path root_;
  std::map<std::string, RunMeta> index_;
};

/// Builds the metadata for a finished profiled run.
RunMeta make_run_meta(const mtl::Transformation& t, const MetaModel& in_meta,
                      const MetaModel& out_meta, const ProfiledRun& run,
                      std::optional<std::string> label = std::nullopt);

}  // namespace mtperf
