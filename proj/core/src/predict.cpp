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

#include "mtperf/predict.hpp"

#include <algorithm>
#include <cmath>

#include "json_schema.hpp"

namespace mtperf {

FeatureVector extract_features(const Model& m, const MetaModel& mm) {
  FeatureVector f;
  for (const auto& c : mm.classes()) f.counts_by_class[c.name] = 0;
  std::map<std::string, std::vector<std::string>> lineage_cache;
  for (const auto& o : m.objects()) {
    auto it = lineage_cache.find(o.cls);
    if (it == lineage_cache.end()) it = lineage_cache.emplace(o.cls, mm.lineage(o.cls)).first;
    for (const auto& cls : it->second) ++f.counts_by_class[cls];
    for (const auto& [_, links] : o.refs) f.total_links += static_cast<std::int64_t>(links.size());
  }
  f.total_objects = static_cast<std::int64_t>(m.size());
  return f;
}

LinearFit fit_ols(std::span<const Observation> obs) {
  if (obs.empty()) throw NoTrainingData("no observations to fit");
  const double n = static_cast<double>(obs.size());
  double mx = 0.0, my = 0.0;
  for (const auto& o : obs) {
    mx += o.x;
    my += o.y;
  }
  mx /= n;
  my /= n;
  double sxx = 0.0, sxy = 0.0;
  for (const auto& o : obs) {
    sxx += (o.x - mx) * (o.x - mx);
    sxy += (o.x - mx) * (o.y - my);
  }
  const bool distinct = std::any_of(obs.begin(), obs.end(), [&](const Observation& o) { return o.x != obs[0].x; });

  LinearFit fit;
  fit.n_obs = static_cast<std::int64_t>(obs.size());
  double ssr = 0.0;
  if (distinct && sxx > 0.0) {
    fit.kind = FitKind::Linear;
    fit.b = sxy / sxx;
    fit.a = my - fit.b * mx;
    for (const auto& o : obs) {
      const double r = o.y - fit.at(o.x);
      ssr += r * r;
    }
    fit.residual_se = obs.size() > 2 ? std::sqrt(ssr / (n - 2.0)) : 0.0;
  } else {
    fit.kind = FitKind::Constant;
    fit.a = my;
    fit.b = 0.0;
    for (const auto& o : obs) ssr += (o.y - my) * (o.y - my);
    fit.residual_se = obs.size() > 1 ? std::sqrt(ssr / (n - 1.0)) : 0.0;
  }
  return fit;
}

namespace {

Json to_json(const LinearFit& f) {
  return {{"a", f.a},
          {"b", f.b},
          {"residualSE", f.residual_se},
          {"nObs", f.n_obs},
          {"kind", f.kind == FitKind::Linear ? "linear" : "constant"}};
}

LinearFit linear_fit_from_json(const Json& j, const std::string& ctx) {
  using namespace detail;
  require_object(j, ctx);
  check_keys(j, {"a", "b", "residualSE", "nObs", "kind"}, ctx);
  LinearFit f;
  f.a = get_number(j, "a", ctx);
  f.b = get_number(j, "b", ctx);
  f.residual_se = get_number(j, "residualSE", ctx);
  f.n_obs = get_int(j, "nObs", ctx);
  const std::string kind = get_string(j, "kind", ctx);
  if (kind == "linear") f.kind = FitKind::Linear;
  else if (kind == "constant") f.kind = FitKind::Constant;
  else throw SchemaError(ctx + ".kind: expected 'linear' or 'constant'");
  if (f.n_obs < 1) throw SchemaError(ctx + ".nObs must be >= 1");
  return f;
}

double median(std::vector<double> v) {
  std::sort(v.begin(), v.end());
  const std::size_t n = v.size();
  return n % 2 ? v[n / 2] : 0.5 * (v[n / 2 - 1] + v[n / 2]);
}

LinearFit fit_series(std::vector<Observation> obs, const FitOptions& options) {
  const auto raw = static_cast<std::int64_t>(obs.size());
  if (options.median_of_repeats) {
    std::map<double, std::vector<double>> groups;
    for (const auto& o : obs) groups[o.x].push_back(o.y);
    if (groups.size() < obs.size()) {
      obs.clear();
      for (auto& [x, ys] : groups) obs.push_back({x, median(std::move(ys))});
    }
  }
  LinearFit f = fit_ols(obs);
  f.n_obs = raw;
  return f;
}

std::int64_t clamp_ns(double v) {
  if (!(v > 0.0)) return 0;
  return static_cast<std::int64_t>(std::llround(v));
}

}  // namespace

Json to_json(const CostModel& cm) {
  Json rules = Json::object();
  for (const auto& [rule, rc] : cm.per_rule) {
    Json j = to_json(rc.fit);
    j["sourceClass"] = rc.source_class;
    rules[rule] = std::move(j);
  }
  return {{"transformationHash", cm.transformation_hash},
          {"perRule", std::move(rules)},
          {"io", {{"load", to_json(cm.load)}, {"save", to_json(cm.save)}}},
          {"fittedAtUtc", cm.fitted_at_utc},
          {"warnings", cm.warnings}};
}

CostModel cost_model_from_json(const Json& j) {
  using namespace detail;
  const char* ctx = "costmodel";
  require_object(j, ctx);
  check_keys(j, {"transformationHash", "perRule", "io", "fittedAtUtc", "warnings"}, ctx);
  CostModel cm;
  cm.transformation_hash = get_string(j, "transformationHash", ctx);
  const Json& rules = require_field(j, "perRule", ctx);
  require_object(rules, "costmodel.perRule");
  for (const auto& [rule, rj] : rules.items()) {
    const std::string rctx = "costmodel.perRule." + rule;
    require_object(rj, rctx);
    RuleCost rc;
    rc.source_class = get_string(rj, "sourceClass", rctx);
    Json rest = rj;
    rest.erase("sourceClass");
    rc.fit = linear_fit_from_json(rest, rctx);
    cm.per_rule.emplace(rule, std::move(rc));
  }
  const Json& io = require_field(j, "io", ctx);
  require_object(io, "costmodel.io");
  check_keys(io, {"load", "save"}, "costmodel.io");
  cm.load = linear_fit_from_json(require_field(io, "load", "costmodel.io"), "costmodel.io.load");
  cm.save = linear_fit_from_json(require_field(io, "save", "costmodel.io"), "costmodel.io.save");
  cm.fitted_at_utc = get_string(j, "fittedAtUtc", ctx);
  if (auto w = j.find("warnings"); w != j.end()) {
    require_array(*w, "costmodel.warnings");
    for (const auto& s : *w) {
      if (!s.is_string()) throw SchemaError("costmodel.warnings: expected strings");
      cm.warnings.push_back(s.get<std::string>());
    }
  }
  return cm;
}

CostModel load_cost_model(const std::filesystem::path& path) {
  return cost_model_from_json(parse_json(read_text_file(path), path.string()));
}

void save_cost_model(const std::filesystem::path& path, const CostModel& cm) {
  write_canonical_file(path, to_json(cm));
}

CostModel fit(const std::vector<RunMeta>& runs,
              const std::map<std::string, std::vector<MonitoringRecord>>& records_by_run,
              const std::string& transformation_hash, const FitOptions& options) {
  std::vector<const RunMeta*> training;
  for (const auto& r : runs) {
    if (r.transformation_hash == transformation_hash) training.push_back(&r);
  }
  if (training.empty()) {
    throw NoTrainingData("no runs recorded for transformation " + transformation_hash);
  }

  std::map<std::string, std::string> source_class;
  for (const auto* r : training) {
    for (const auto& [rule, cls] : r->rule_source_classes) source_class.emplace(rule, cls);
  }

  std::map<std::string, std::vector<Observation>> per_rule;
  std::vector<Observation> load, save;
  for (const auto* r : training) {
    auto rec = records_by_run.find(r->run_id);
    if (rec == records_by_run.end()) throw NotFound("records of run '" + r->run_id + "' not supplied");
    std::map<std::string, std::int64_t> rule_ns;
    for (const auto& [rule, _] : r->summary.invocations_by_rule) rule_ns[rule] = 0;
    for (const auto& m : rec->second) {
      if (!m.rule.empty()) rule_ns[m.rule] += m.duration_ns;
    }
    for (const auto& [rule, ns] : rule_ns) {
      auto cls = source_class.find(rule);
      if (cls == source_class.end()) continue;
      auto count = r->features.counts_by_class.find(cls->second);
      const double x = count == r->features.counts_by_class.end() ? 0.0 : static_cast<double>(count->second);
      per_rule[rule].push_back({x, static_cast<double>(ns)});
    }
    load.push_back({static_cast<double>(r->features.total_objects), static_cast<double>(r->summary.load_duration_ns)});
    save.push_back({static_cast<double>(r->summary.objects_created), static_cast<double>(r->summary.save_duration_ns)});
  }

  CostModel cm;
  cm.transformation_hash = transformation_hash;
  for (auto& [rule, obs] : per_rule) {
    RuleCost rc{source_class.at(rule), fit_series(std::move(obs), options)};
    if (rc.fit.b < 0.0) {
      cm.warnings.push_back("rule '" + rule + "' has a negative fitted slope; training data may be confounded");
    }
    cm.per_rule.emplace(rule, std::move(rc));
  }
  cm.load = fit_series(std::move(load), options);
  cm.save = fit_series(std::move(save), options);
  if (cm.load.b < 0.0) cm.warnings.push_back("load phase has a negative fitted slope");
  if (cm.save.b < 0.0) cm.warnings.push_back("save phase has a negative fitted slope");
  cm.fitted_at_utc = utc_now_iso8601();
  return cm;
}

CostModel fit(const RunStore& store, const std::string& transformation_hash, const FitOptions& options) {
  RunFilter filter;
  filter.transformation_hash = transformation_hash;
  std::vector<RunMeta> runs = store.query_runs(filter);
  if (runs.empty()) throw NoTrainingData("no runs recorded for transformation " + transformation_hash);
  std::map<std::string, std::vector<MonitoringRecord>> records;
  for (const auto& r : runs) records.emplace(r.run_id, store.load_run(r.run_id).second);
  return fit(runs, records, transformation_hash, options);
}

Prediction predict_from_features(const CostModel& cm, const FeatureVector& features) {
  Prediction p;
  p.features = features;
  double var = 0.0;
  double created = 0.0;
  for (const auto& [rule, rc] : cm.per_rule) {
    auto it = features.counts_by_class.find(rc.source_class);
    if (it == features.counts_by_class.end()) {
      throw FeatureMissing("cost model rule '" + rule + "' depends on class '" + rc.source_class +
                           "' which the input metamodel lacks");
    }
    const double x = static_cast<double>(it->second);
    p.per_rule_ns[rule] = clamp_ns(rc.fit.at(x));
    created += x;
    var += rc.fit.residual_se * rc.fit.residual_se;
  }
  p.load_ns = clamp_ns(cm.load.at(static_cast<double>(features.total_objects)));
  p.save_ns = clamp_ns(cm.save.at(created));
  var += cm.load.residual_se * cm.load.residual_se + cm.save.residual_se * cm.save.residual_se;
  p.total_ns = p.load_ns + p.save_ns;
  for (const auto& [_, ns] : p.per_rule_ns) p.total_ns += ns;
  p.uncertainty_ns = clamp_ns(2.0 * std::sqrt(var));
  return p;
}

Prediction predict_time(const CostModel& cm, const Model& m, const MetaModel& mm) {
  for (const auto& [rule, rc] : cm.per_rule) {
    if (!mm.has_class(rc.source_class)) {
      throw FeatureMissing("metamodel '" + mm.name() + "' lacks class '" + rc.source_class +
                           "' required by rule '" + rule + "'");
    }
  }
  return predict_from_features(cm, extract_features(m, mm));
}

Json to_json(const Prediction& p) {
  return {{"totalNs", p.total_ns},
          {"perRuleNs", p.per_rule_ns},
          {"loadNs", p.load_ns},
          {"saveNs", p.save_ns},
          {"uncertaintyNs", p.uncertainty_ns},
          {"features", to_json(p.features)}};
}

Evaluation evaluate(const CostModel& cm, const RunStore& store, const std::vector<std::string>& held_out) {
  Evaluation ev;
  double sum = 0.0;
  for (const auto& id : held_out) {
    const RunMeta meta = store.load_meta(id);
    if (meta.transformation_hash != cm.transformation_hash) {
      throw ValidationError("run '" + id + "' belongs to a different transformation");
    }
    const std::int64_t actual = meta.summary.total_duration_ns;
    if (actual <= 0) throw ValidationError("run '" + id + "' has no measured duration");
    const std::int64_t predicted = predict_from_features(cm, meta.features).total_ns;
    ev.per_run.emplace_back(predicted, actual);
    sum += std::abs(static_cast<double>(predicted - actual)) / static_cast<double>(actual);
  }
  ev.mape = held_out.empty() ? 0.0 : sum / static_cast<double>(held_out.size());
  return ev;
}

}  // namespace mtperf
