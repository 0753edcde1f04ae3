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

#include "mtperf/profiler.hpp"

#include <algorithm>
#include <cmath>
#include <iomanip>
#include <map>
#include <set>
#include <sstream>

namespace mtperf {

std::int64_t nearest_rank(const std::vector<std::int64_t>& sorted, int percent) {
  if (sorted.empty()) return 0;
  const std::size_t n = sorted.size();
  std::size_t rank = (static_cast<std::size_t>(percent) * n + 99) / 100;  // ceil(p*n/100)
  rank = std::clamp<std::size_t>(rank, 1, n);
  return sorted[rank - 1];
}

namespace {

struct RuleSamples {
  std::vector<std::int64_t> durations;
  std::int64_t guard_rejected = 0;
  std::int64_t trace_hits = 0;
};

std::map<std::string, RuleSamples> collect(const std::vector<MonitoringRecord>& records) {
  std::map<std::string, RuleSamples> by_rule;
  for (const auto& r : records) {
    switch (r.kind) {
      case RecordKind::Executed: by_rule[r.rule].durations.push_back(r.duration_ns); break;
      case RecordKind::GuardRejected: ++by_rule[r.rule].guard_rejected; break;
      case RecordKind::TraceHit: ++by_rule[r.rule].trace_hits; break;
      case RecordKind::Load:
      case RecordKind::Save: break;
    }
  }
  return by_rule;
}

std::int64_t median_of(std::vector<std::int64_t> v) {
  std::sort(v.begin(), v.end());
  return nearest_rank(v, 50);
}

}  // namespace

std::vector<RuleStats> aggregate(const std::vector<MonitoringRecord>& records,
                                 const RunSummary& summary) {
  std::vector<RuleStats> out;
  for (auto& [rule, samples] : collect(records)) {
    RuleStats s;
    s.rule = rule;
    auto& d = samples.durations;
    std::sort(d.begin(), d.end());
    s.executed = static_cast<std::int64_t>(d.size());
    s.guard_rejected = samples.guard_rejected;
    s.trace_hits = samples.trace_hits;
    for (auto x : d) s.total_ns += x;
    if (!d.empty()) {
      s.mean_ns = s.total_ns / s.executed;
      s.median_ns = nearest_rank(d, 50);
      s.p95_ns = nearest_rank(d, 95);
      s.max_ns = d.back();
    }
    if (summary.total_duration_ns > 0) {
      s.share_of_run = std::clamp(static_cast<double>(s.total_ns) /
                                      static_cast<double>(summary.total_duration_ns),
                                  0.0, 1.0);
    }
    out.push_back(std::move(s));
  }
  return out;
}

std::vector<RuleStats> rank_hotspots(std::vector<RuleStats> stats, std::size_t k) {
  std::sort(stats.begin(), stats.end(), [](const RuleStats& a, const RuleStats& b) {
    if (a.total_ns != b.total_ns) return a.total_ns > b.total_ns;
    return a.rule < b.rule;
  });
  if (stats.size() > k) stats.resize(k);
  return stats;
}

std::string_view to_string(Verdict v) {
  switch (v) {
    case Verdict::Regressed: return "regressed";
    case Verdict::Improved: return "improved";
    case Verdict::Unchanged: return "unchanged";
    case Verdict::InsufficientData: return "insufficient_data";
  }
  return "?";
}

std::string_view to_string(CauseKind c) {
  switch (c) {
    case CauseKind::TransformationChange: return "transformation_change";
    case CauseKind::MetamodelChange: return "metamodel_change";
    case CauseKind::OperationalProfileChange: return "operational_profile_change";
    case CauseKind::EnvironmentOrUnknown: return "environment_or_unknown";
  }
  return "?";
}

bool RegressionReport::any_regressed() const {
  return std::any_of(entries.begin(), entries.end(),
                     [](const RegressionEntry& e) { return e.verdict == Verdict::Regressed; });
}

namespace {

std::string feature_delta(const FeatureVector& a, const FeatureVector& b) {
  std::set<std::string> classes;
  for (const auto& [c, _] : a.counts_by_class) classes.insert(c);
  for (const auto& [c, _] : b.counts_by_class) classes.insert(c);
  std::vector<std::string> parts;
  for (const auto& c : classes) {
    auto ia = a.counts_by_class.find(c);
    auto ib = b.counts_by_class.find(c);
    const std::int64_t na = ia == a.counts_by_class.end() ? 0 : ia->second;
    const std::int64_t nb = ib == b.counts_by_class.end() ? 0 : ib->second;
    const bool present_a = ia != a.counts_by_class.end();
    const bool present_b = ib != b.counts_by_class.end();
    if (na != nb || present_a != present_b) {
      parts.push_back(c + " " + std::to_string(na) + " -> " + std::to_string(nb));
    }
  }
  if (a.total_links != b.total_links) {
    parts.push_back("links " + std::to_string(a.total_links) + " -> " + std::to_string(b.total_links));
  }
  std::string out;
  for (std::size_t i = 0; i < parts.size() && i < 6; ++i) out += (i ? ", " : "") + parts[i];
  if (parts.size() > 6) out += ", ...";
  return out;
}

}  // namespace

RegressionReport diff_runs(const RunMeta& baseline, const std::vector<MonitoringRecord>& baseline_records,
                           const RunMeta& current, const std::vector<MonitoringRecord>& current_records,
                           const DiffThresholds& th) {
  RegressionReport report;
  report.baseline_run_id = baseline.run_id;
  report.current_run_id = current.run_id;

  const auto base = collect(baseline_records);
  const auto cur = collect(current_records);
  std::set<std::string> rules;
  for (const auto& [r, _] : base) rules.insert(r);
  for (const auto& [r, _] : cur) rules.insert(r);
  for (const auto& [r, _] : baseline.summary.invocations_by_rule) rules.insert(r);
  for (const auto& [r, _] : current.summary.invocations_by_rule) rules.insert(r);

  static const RuleSamples kEmpty;
  for (const auto& rule : rules) {
    const RuleSamples& b = base.contains(rule) ? base.at(rule) : kEmpty;
    const RuleSamples& c = cur.contains(rule) ? cur.at(rule) : kEmpty;
    RegressionEntry e;
    e.rule = rule;
    e.baseline_executed = static_cast<std::int64_t>(b.durations.size());
    e.current_executed = static_cast<std::int64_t>(c.durations.size());
    e.baseline_median_ns = median_of(b.durations);
    e.current_median_ns = median_of(c.durations);
    std::int64_t bt = 0, ct = 0;
    for (auto x : b.durations) bt += x;
    for (auto x : c.durations) ct += x;
    e.delta_total_ns = ct - bt;
    if (e.baseline_median_ns > 0) {
      e.ratio = static_cast<double>(e.current_median_ns) / static_cast<double>(e.baseline_median_ns);
    } else if (e.current_median_ns == 0) {
      e.ratio = 1.0;
    }
    if (e.baseline_executed < th.min_samples || e.current_executed < th.min_samples) {
      e.verdict = Verdict::InsufficientData;
    } else if (!e.ratio || *e.ratio > th.ratio) {
      e.verdict = Verdict::Regressed;
    } else if (*e.ratio < 1.0 / th.ratio) {
      e.verdict = Verdict::Improved;
    } else {
      e.verdict = Verdict::Unchanged;
    }
    report.entries.push_back(std::move(e));
  }
  std::stable_sort(report.entries.begin(), report.entries.end(),
                   [](const RegressionEntry& a, const RegressionEntry& b) {
                     if (a.delta_total_ns != b.delta_total_ns) return a.delta_total_ns > b.delta_total_ns;
                     return a.rule < b.rule;
                   });

  if (baseline.transformation_hash != current.transformation_hash) {
    report.causes.push_back({CauseKind::TransformationChange,
                             "transformationHash " + baseline.transformation_hash + " -> " +
                                 current.transformation_hash});
  }
  if (baseline.in_meta_hash != current.in_meta_hash || baseline.out_meta_hash != current.out_meta_hash) {
    std::string evidence;
    if (baseline.in_meta_hash != current.in_meta_hash) {
      evidence += "inMetaHash " + baseline.in_meta_hash + " -> " + current.in_meta_hash;
    }
    if (baseline.out_meta_hash != current.out_meta_hash) {
      if (!evidence.empty()) evidence += "; ";
      evidence += "outMetaHash " + baseline.out_meta_hash + " -> " + current.out_meta_hash;
    }
    report.causes.push_back({CauseKind::MetamodelChange, evidence});
  }
  if (!(baseline.features == current.features)) {
    report.causes.push_back({CauseKind::OperationalProfileChange,
                             "feature vector changed: " + feature_delta(baseline.features, current.features)});
  }
  if (report.causes.empty() && report.any_regressed()) {
    std::string evidence = "hashes and features identical";
    auto env_get = [](const RunMeta& m, const char* key) {
      auto it = m.environment.find(key);
      return it == m.environment.end() ? std::string("?") : it->second;
    };
    if (baseline.environment != current.environment) {
      evidence += "; environment differs (host " + env_get(baseline, "hostname") + " -> " +
                  env_get(current, "hostname") + ")";
    }
    report.causes.push_back({CauseKind::EnvironmentOrUnknown, evidence});
  }
  return report;
}

RegressionReport diff_runs(const RunStore& store, const std::string& baseline_id,
                           const std::string& current_id, const DiffThresholds& thresholds) {
  auto [bm, br] = store.load_run(baseline_id);
  auto [cm, cr] = store.load_run(current_id);
  return diff_runs(bm, br, cm, cr, thresholds);
}

std::optional<ReportFormat> report_format_from_string(std::string_view name) {
  if (name == "text") return ReportFormat::Text;
  if (name == "json") return ReportFormat::Json;
  if (name == "plotdata") return ReportFormat::PlotData;
  return std::nullopt;
}

Json to_json(const RuleStats& s) {
  return {{"rule", s.rule},         {"executed", s.executed}, {"guardRejected", s.guard_rejected},
          {"traceHits", s.trace_hits}, {"totalNs", s.total_ns}, {"meanNs", s.mean_ns},
          {"medianNs", s.median_ns}, {"p95Ns", s.p95_ns},     {"maxNs", s.max_ns},
          {"shareOfRun", s.share_of_run}};
}

Json to_json(const RegressionReport& r) {
  Json entries = Json::array();
  for (const auto& e : r.entries) {
    entries.push_back({{"rule", e.rule},
                       {"baselineExecuted", e.baseline_executed},
                       {"currentExecuted", e.current_executed},
                       {"baselineMedianNs", e.baseline_median_ns},
                       {"currentMedianNs", e.current_median_ns},
                       {"ratio", e.ratio ? Json(*e.ratio) : Json(nullptr)},
                       {"deltaTotalNs", e.delta_total_ns},
                       {"verdict", to_string(e.verdict)}});
  }
  Json causes = Json::array();
  for (const auto& c : r.causes) causes.push_back({{"kind", to_string(c.kind)}, {"evidence", c.evidence}});
  return {{"baselineRunId", r.baseline_run_id},
          {"currentRunId", r.current_run_id},
          {"entries", std::move(entries)},
          {"causes", std::move(causes)}};
}

namespace {

std::string fixed(double v, int digits) {
  std::ostringstream out;
  out << std::fixed << std::setprecision(digits) << v;
  return out.str();
}

std::string csv_field(const std::string& s) {
  if (s.find_first_of(",\"\n") == std::string::npos) return s;
  std::string out = "\"";
  for (char c : s) {
    if (c == '"') out += "\"\"";
    else out.push_back(c);
  }
  return out + "\"";
}

// First column left aligned, the rest right aligned.
std::string table(const std::vector<std::vector<std::string>>& rows) {
  std::vector<std::size_t> width;
  for (const auto& row : rows) {
    width.resize(std::max(width.size(), row.size()), 0);
    for (std::size_t i = 0; i < row.size(); ++i) width[i] = std::max(width[i], row[i].size());
  }
  std::ostringstream out;
  for (const auto& row : rows) {
    std::string line;
    for (std::size_t i = 0; i < row.size(); ++i) {
      if (i) line += "  ";
      const std::string pad(width[i] - row[i].size(), ' ');
      line += i == 0 ? row[i] + pad : pad + row[i];
    }
    while (!line.empty() && line.back() == ' ') line.pop_back();
    out << line << '\n';
  }
  return out.str();
}

}  // namespace

std::string render_report(const std::vector<RuleStats>& stats, ReportFormat format) {
  switch (format) {
    case ReportFormat::Json: {
      Json arr = Json::array();
      for (const auto& s : stats) arr.push_back(to_json(s));
      return canonical_dump(arr);
    }
    case ReportFormat::PlotData: {
      std::string out = "rule,total_ns,executed,median_ns,share\n";
      for (const auto& s : stats) {
        out += csv_field(s.rule) + "," + std::to_string(s.total_ns) + "," + std::to_string(s.executed) +
               "," + std::to_string(s.median_ns) + "," + fixed(s.share_of_run, 6) + "\n";
      }
      return out;
    }
    case ReportFormat::Text: {
      std::vector<std::vector<std::string>> rows{{"rule", "executed", "rejected", "trace_hits", "total_ns",
                                                  "mean_ns", "median_ns", "p95_ns", "max_ns", "share"}};
      for (const auto& s : stats) {
        rows.push_back({s.rule, std::to_string(s.executed), std::to_string(s.guard_rejected),
                        std::to_string(s.trace_hits), std::to_string(s.total_ns), std::to_string(s.mean_ns),
                        std::to_string(s.median_ns), std::to_string(s.p95_ns), std::to_string(s.max_ns),
                        fixed(100.0 * s.share_of_run, 1) + "%"});
      }
      return table(rows);
    }
  }
  return {};
}

std::string render_report(const RegressionReport& report, ReportFormat format) {
  switch (format) {
    case ReportFormat::Json: return canonical_dump(to_json(report));
    case ReportFormat::PlotData: {
      std::string out = "rule,baseline_median_ns,current_median_ns,ratio,delta_total_ns,verdict\n";
      for (const auto& e : report.entries) {
        out += csv_field(e.rule) + "," + std::to_string(e.baseline_median_ns) + "," +
               std::to_string(e.current_median_ns) + "," + (e.ratio ? fixed(*e.ratio, 4) : "") + "," +
               std::to_string(e.delta_total_ns) + "," + std::string(to_string(e.verdict)) + "\n";
      }
      return out;
    }
    case ReportFormat::Text: {
      std::string out = "baseline " + report.baseline_run_id + "  current " + report.current_run_id + "\n";
      std::vector<std::vector<std::string>> rows{
          {"rule", "n_base", "n_cur", "base_median_ns", "cur_median_ns", "ratio", "delta_total_ns", "verdict"}};
      for (const auto& e : report.entries) {
        std::string verdict(to_string(e.verdict));
        std::transform(verdict.begin(), verdict.end(), verdict.begin(),
                       [](unsigned char c) { return static_cast<char>(std::toupper(c)); });
        rows.push_back({e.rule, std::to_string(e.baseline_executed), std::to_string(e.current_executed),
                        std::to_string(e.baseline_median_ns), std::to_string(e.current_median_ns),
                        e.ratio ? fixed(*e.ratio, 3) : "inf", std::to_string(e.delta_total_ns), verdict});
      }
      out += table(rows);
      if (report.causes.empty()) {
        out += "causes: none\n";
      } else {
        out += "causes:\n";
        for (std::size_t i = 0; i < report.causes.size(); ++i) {
          out += "  " + std::to_string(i + 1) + ". " + std::string(to_string(report.causes[i].kind)) + ": " +
                 report.causes[i].evidence + "\n";
        }
      }
      return out;
    }
  }
  return {};
}

}  // namespace mtperf
