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

#include "mtperf/profiledb.hpp"

#include <sys/utsname.h>

#include <algorithm>
#include <chrono>
#include <ctime>
#include <fstream>
#include <random>

#include "json_schema.hpp"
#include "mtperf/error.hpp"

namespace fs = std::filesystem;

namespace mtperf {

using detail::check_keys;
using detail::get_int;
using detail::get_string;
using detail::require_field;
using detail::require_object;

Json to_json(const FeatureVector& f) {
  return {{"countsByClass", f.counts_by_class},
          {"totalObjects", f.total_objects},
          {"totalLinks", f.total_links}};
}

FeatureVector feature_vector_from_json(const Json& j) {
  require_object(j, "features");
  check_keys(j, {"countsByClass", "totalObjects", "totalLinks"}, "features");
  FeatureVector f;
  const Json& counts = require_field(j, "countsByClass", "features");
  require_object(counts, "features.countsByClass");
  for (const auto& [cls, n] : counts.items()) {
    f.counts_by_class[cls] = detail::as_int(n, "features.countsByClass." + cls);
  }
  f.total_objects = get_int(j, "totalObjects", "features");
  f.total_links = get_int(j, "totalLinks", "features");
  return f;
}

Json to_json(const RunSummary& s) {
  Json by_rule = Json::object();
  for (const auto& [rule, c] : s.invocations_by_rule) {
    by_rule[rule] = {{"executed", c.executed},
                     {"guard_rejected", c.guard_rejected},
                     {"trace_hit", c.trace_hit}};
  }
  return {{"totalDurationNs", s.total_duration_ns},
          {"loadDurationNs", s.load_duration_ns},
          {"saveDurationNs", s.save_duration_ns},
          {"objectsCreated", s.objects_created},
          {"invocationsByRule", std::move(by_rule)}};
}

RunSummary run_summary_from_json(const Json& j) {
  const char* ctx = "summary";
  require_object(j, ctx);
  check_keys(j, {"totalDurationNs", "loadDurationNs", "saveDurationNs", "objectsCreated",
                 "invocationsByRule"},
             ctx);
  RunSummary s;
  s.total_duration_ns = get_int(j, "totalDurationNs", ctx);
  s.load_duration_ns = get_int(j, "loadDurationNs", ctx);
  s.save_duration_ns = get_int(j, "saveDurationNs", ctx);
  s.objects_created = get_int(j, "objectsCreated", ctx);
  const Json& by_rule = require_field(j, "invocationsByRule", ctx);
  require_object(by_rule, "summary.invocationsByRule");
  for (const auto& [rule, c] : by_rule.items()) {
    const std::string rctx = "summary.invocationsByRule." + rule;
    require_object(c, rctx);
    check_keys(c, {"executed", "guard_rejected", "trace_hit"}, rctx);
    s.invocations_by_rule[rule] = {get_int(c, "executed", rctx), get_int(c, "guard_rejected", rctx),
                                   get_int(c, "trace_hit", rctx)};
  }
  return s;
}

Json to_json(const RunMeta& m) {
  return {{"runId", m.run_id},
          {"transformationHash", m.transformation_hash},
          {"inMetaHash", m.in_meta_hash},
          {"outMetaHash", m.out_meta_hash},
          {"inputModelHash", m.input_model_hash},
          {"features", to_json(m.features)},
          {"summary", to_json(m.summary)},
          {"ruleSourceClasses", m.rule_source_classes},
          {"label", m.label ? Json(*m.label) : Json(nullptr)},
          {"createdAtUtc", m.created_at_utc},
          {"environment", m.environment},
          {"monitorOverheadNs", m.monitor_overhead_ns}};
}

RunMeta run_meta_from_json(const Json& j) {
  const char* ctx = "meta";
  require_object(j, ctx);
  check_keys(j, {"runId", "transformationHash", "inMetaHash", "outMetaHash", "inputModelHash",
                 "features", "summary", "ruleSourceClasses", "label", "createdAtUtc",
                 "environment", "monitorOverheadNs"},
             ctx);
  RunMeta m;
  m.run_id = get_string(j, "runId", ctx);
  m.transformation_hash = get_string(j, "transformationHash", ctx);
  m.in_meta_hash = get_string(j, "inMetaHash", ctx);
  m.out_meta_hash = get_string(j, "outMetaHash", ctx);
  m.input_model_hash = get_string(j, "inputModelHash", ctx);
  m.features = feature_vector_from_json(require_field(j, "features", ctx));
  m.summary = run_summary_from_json(require_field(j, "summary", ctx));
  auto string_map = [&](const char* key) {
    std::map<std::string, std::string> out;
    const Json& obj = require_field(j, key, ctx);
    require_object(obj, key);
    for (const auto& [k, v] : obj.items()) {
      if (!v.is_string()) throw SchemaError(std::string(key) + "." + k + ": expected a string");
      out[k] = v.get<std::string>();
    }
    return out;
  };
  m.rule_source_classes = string_map("ruleSourceClasses");
  const Json& label = require_field(j, "label", ctx);
  if (label.is_string()) {
    m.label = label.get<std::string>();
  } else if (!label.is_null()) {
    throw SchemaError("meta.label must be a string or null");
  }
  m.created_at_utc = get_string(j, "createdAtUtc", ctx);
  m.environment = string_map("environment");
  m.monitor_overhead_ns = get_int(j, "monitorOverheadNs", ctx);
  return m;
}

std::string record_to_jsonl(const MonitoringRecord& r) {
  std::string out;
  out.reserve(96 + r.rule.size() + r.source_id.size());
  out += "{\"seq\":";
  out += std::to_string(r.seq);
  out += ",\"kind\":\"";
  out += to_string(r.kind);
  out += "\",\"rule\":";
  out += Json(r.rule).dump();
  out += ",\"sourceId\":";
  out += Json(r.source_id).dump();
  out += ",\"startNs\":";
  out += std::to_string(r.start_ns);
  out += ",\"durationNs\":";
  out += std::to_string(r.duration_ns);
  out += '}';
  return out;
}

MonitoringRecord record_from_jsonl(std::string_view line) {
  const Json j = parse_json(line, "record");
  const char* ctx = "record";
  require_object(j, ctx);
  check_keys(j, {"seq", "kind", "rule", "sourceId", "startNs", "durationNs"}, ctx);
  MonitoringRecord r;
  const std::int64_t seq = get_int(j, "seq", ctx);
  if (seq < 0) throw SchemaError("record.seq must be non-negative");
  r.seq = static_cast<std::uint64_t>(seq);
  const std::string kind = get_string(j, "kind", ctx);
  auto k = record_kind_from_string(kind);
  if (!k) throw SchemaError("record.kind: unknown kind '" + kind + "'");
  r.kind = *k;
  r.rule = get_string(j, "rule", ctx);
  r.source_id = get_string(j, "sourceId", ctx);
  r.start_ns = get_int(j, "startNs", ctx);
  r.duration_ns = get_int(j, "durationNs", ctx);
  if (r.duration_ns < 0) throw SchemaError("record.durationNs must be non-negative");
  return r;
}

namespace {

std::mt19937_64& rng() {
  thread_local std::mt19937_64 gen{std::random_device{}()};
  return gen;
}

std::tm utc_tm(std::time_t t) {
  std::tm tm{};
  gmtime_r(&t, &tm);
  return tm;
}

}  // namespace

std::string make_run_id() {
  const std::tm tm = utc_tm(std::chrono::system_clock::to_time_t(std::chrono::system_clock::now()));
  char buf[32];
  std::strftime(buf, sizeof buf, "%Y%m%dT%H%M%SZ", &tm);
  char suffix[8];
  std::snprintf(suffix, sizeof suffix, "-%04x", static_cast<unsigned>(rng()() & 0xffff));
  return std::string(buf) + suffix;
}

std::string utc_now_iso8601() {
  const auto now = std::chrono::system_clock::now();
  const auto micros =
      std::chrono::duration_cast<std::chrono::microseconds>(now.time_since_epoch()).count() % 1000000;
  const std::tm tm = utc_tm(std::chrono::system_clock::to_time_t(now));
  char buf[40];
  std::strftime(buf, sizeof buf, "%Y-%m-%dT%H:%M:%S", &tm);
  char frac[16];
  std::snprintf(frac, sizeof frac, ".%06lldZ", static_cast<long long>(micros));
  return std::string(buf) + frac;
}

std::map<std::string, std::string> current_environment() {
  std::map<std::string, std::string> env;
  utsname u{};
  if (uname(&u) == 0) {
    env["hostname"] = u.nodename;
    env["os"] = std::string(u.sysname) + " " + u.release;
    env["arch"] = u.machine;
  }
#if defined(__clang__)
  env["compiler"] = "clang " __clang_version__;
#elif defined(__GNUC__)
  env["compiler"] = "gcc " __VERSION__;
#endif
#ifdef NDEBUG
  env["build"] = "release";
#else
  env["build"] = "debug";
#endif
  return env;
}

RunStore::RunStore(fs::path root) : root_(std::move(root)) { refresh(); }

fs::path RunStore::run_dir(const std::string& run_id) const { return root_ / "runs" / run_id; }

void RunStore::refresh() {
  index_.clear();
  const fs::path runs = root_ / "runs";
  std::error_code ec;
  if (!fs::is_directory(runs, ec)) return;
  for (const auto& entry : fs::directory_iterator(runs)) {
    const std::string name = entry.path().filename().string();
    if (name.empty() || name.front() == '.' || !entry.is_directory()) continue;
    index_.emplace(name, load_meta(name));
  }
}

bool RunStore::contains(const std::string& run_id) const { return index_.contains(run_id); }

std::string RunStore::unique_run_id() const {
  std::error_code ec;
  for (;;) {
    std::string id = make_run_id();
    if (!contains(id) && !fs::exists(run_dir(id), ec)) return id;
  }
}

std::vector<std::string> RunStore::run_ids() const {
  std::vector<std::string> out;
  for (const auto& [id, _] : index_) out.push_back(id);
  return out;
}

std::string RunStore::write_run(const RunMeta& meta, const std::vector<MonitoringRecord>& records,
                                const BeforeCommit& before_commit) {
  if (meta.run_id.empty() || meta.run_id.front() == '.' ||
      meta.run_id.find_first_of("/\\") != std::string::npos) {
    throw ValidationError("invalid run id '" + meta.run_id + "'");
  }
  const fs::path final_dir = run_dir(meta.run_id);
  std::error_code ec;
  if (contains(meta.run_id) || fs::exists(final_dir, ec)) {
    throw DuplicateRun("run '" + meta.run_id + "' already exists in " + root_.string());
  }
  fs::create_directories(root_ / "runs", ec);
  if (ec) throw IoError("cannot create " + (root_ / "runs").string() + ": " + ec.message());

  char suffix[16];
  std::snprintf(suffix, sizeof suffix, "%08llx", static_cast<unsigned long long>(rng()() & 0xffffffff));
  const fs::path tmp = root_ / "runs" / (".tmp-" + meta.run_id + "-" + suffix);
  try {
    fs::create_directory(tmp);
    write_canonical_file(tmp / "meta.json", to_json(meta));
    {
      std::ofstream out(tmp / "records.jsonl", std::ios::binary | std::ios::trunc);
      if (!out) throw IoError("cannot create " + (tmp / "records.jsonl").string());
      std::string line;
      for (const auto& r : records) {
        line = record_to_jsonl(r);
        line.push_back('\n');
        out.write(line.data(), static_cast<std::streamsize>(line.size()));
      }
      out.flush();
      if (!out) throw IoError("write failed: " + (tmp / "records.jsonl").string());
    }
    if (before_commit) before_commit(tmp);
    fs::rename(tmp, final_dir, ec);
    if (ec) {
      if (fs::exists(final_dir)) throw DuplicateRun("run '" + meta.run_id + "' already exists");
      throw IoError("cannot commit run '" + meta.run_id + "': " + ec.message());
    }
  } catch (...) {
    std::error_code ignore;
    fs::remove_all(tmp, ignore);
    throw;
  }
  index_.emplace(meta.run_id, meta);
  return meta.run_id;
}

RunMeta RunStore::load_meta(const std::string& run_id) const {
  const fs::path dir = run_dir(run_id);
  std::error_code ec;
  if (!fs::is_directory(dir, ec)) throw NotFound("run '" + run_id + "' not found in " + root_.string());
  try {
    RunMeta meta = run_meta_from_json(parse_json(read_text_file(dir / "meta.json"), "meta.json"));
    if (meta.run_id != run_id) throw SchemaError("runId field does not match directory name");
    return meta;
  } catch (const ParseError& e) {
    throw CorruptRun("run '" + run_id + "' meta.json: " + e.what(), 0);
  } catch (const SchemaError& e) {
    throw CorruptRun("run '" + run_id + "' meta.json: " + e.what(), 0);
  } catch (const IoError& e) {
    throw CorruptRun("run '" + run_id + "': " + e.what(), 0);
  }
}

std::pair<RunMeta, std::vector<MonitoringRecord>> RunStore::load_run(const std::string& run_id) const {
  RunMeta meta = load_meta(run_id);
  const fs::path path = run_dir(run_id) / "records.jsonl";
  std::ifstream in(path, std::ios::binary);
  if (!in) throw CorruptRun("run '" + run_id + "': records.jsonl missing", 0);
  std::vector<MonitoringRecord> records;
  std::string line;
  std::size_t line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    try {
      MonitoringRecord r = record_from_jsonl(line);
      if (r.seq != records.size()) {
        throw SchemaError("seq " + std::to_string(r.seq) + " out of order");
      }
      records.push_back(std::move(r));
    } catch (const Error& e) {
      throw CorruptRun("run '" + run_id + "' records.jsonl line " + std::to_string(line_no) + ": " +
                           e.what(),
                       line_no);
    }
  }
  return {std::move(meta), std::move(records)};
}

std::vector<RunMeta> RunStore::query_runs(const RunFilter& filter) const {
  std::vector<RunMeta> out;
  for (const auto& [_, meta] : index_) {
    if (filter.transformation_hash && meta.transformation_hash != *filter.transformation_hash) continue;
    if (filter.in_meta_hash && meta.in_meta_hash != *filter.in_meta_hash) continue;
    out.push_back(meta);
  }
  if (filter.min_runs && out.size() < *filter.min_runs) return {};
  std::sort(out.begin(), out.end(), [](const RunMeta& a, const RunMeta& b) {
    return std::tie(a.created_at_utc, a.run_id) < std::tie(b.created_at_utc, b.run_id);
  });
  return out;
}

RunMeta make_run_meta(const mtl::Transformation& t, const MetaModel& in_meta, const MetaModel& out_meta,
                      const ProfiledRun& run, std::optional<std::string> label) {
  RunMeta meta;
  meta.run_id = make_run_id();
  meta.transformation_hash = t.source_hash;
  meta.in_meta_hash = content_hash(in_meta);
  meta.out_meta_hash = content_hash(out_meta);
  meta.input_model_hash = content_hash(run.input);
  meta.features = extract_features(run.input, in_meta);
  meta.summary = run.result.summary;
  for (const auto& m : t.mappings) meta.rule_source_classes[m.name] = m.source_class;
  meta.label = std::move(label);
  meta.created_at_utc = utc_now_iso8601();
  meta.environment = current_environment();
  meta.monitor_overhead_ns = run.monitor_overhead_ns;
  return meta;
}

}  // namespace mtperf
