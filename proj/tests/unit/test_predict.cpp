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

#include <doctest.h>

#include <cmath>
#include <random>

#include "mtperf/predict.hpp"
#include "support/fixtures.hpp"

using namespace mtperf;
using namespace mtperf::testing;

namespace {

// Normal equations [n Σx; Σx Σx²] [a b]ᵀ = [Σy Σxy]ᵀ solved by Cramer's
// rule in extended precision.
std::pair<long double, long double> normal_equations(const std::vector<Observation>& obs) {
  long double n = 0, sx = 0, sxx = 0, sy = 0, sxy = 0;
  for (const auto& o : obs) {
    const long double x = o.x, y = o.y;
    n += 1;
    sx += x;
    sxx += x * x;
    sy += y;
    sxy += x * y;
  }
  const long double det = n * sxx - sx * sx;
  return {(sy * sxx - sx * sxy) / det, (n * sxy - sx * sy) / det};
}

double rel_err(double got, long double want) {
  if (want == 0) return std::fabs(got);
  return static_cast<double>(std::fabs((static_cast<long double>(got) - want) / want));
}

RunMeta run_meta(const std::string& id, std::int64_t count_a, std::int64_t rule_ns, std::int64_t load_ns = 0,
                 std::int64_t save_ns = 0) {
  RunMeta m;
  m.run_id = id;
  m.transformation_hash = "th";
  m.features.counts_by_class = {{"A", count_a}, {"B", 0}};
  m.features.total_objects = count_a;
  m.summary.load_duration_ns = load_ns;
  m.summary.save_duration_ns = save_ns;
  m.summary.objects_created = count_a;
  m.summary.total_duration_ns = rule_ns + load_ns + save_ns;
  m.summary.invocations_by_rule = {{"R", {1, 0, 0}}};
  m.rule_source_classes = {{"R", "A"}};
  m.created_at_utc = "2024-01-01T00:00:00.0000" + id.substr(id.size() - 2) + "Z";
  return m;
}

std::vector<MonitoringRecord> rule_records(std::int64_t rule_ns) {
  // Split across two records so the fit has to sum them.
  return {{0, RecordKind::Executed, "R", "o1", 0, rule_ns / 2}, {1, RecordKind::TraceHit, "R", "o2", 0, rule_ns - rule_ns / 2}};
}

CostModel single_rule_model(double a, double b) {
  CostModel cm;
  cm.transformation_hash = "th";
  cm.per_rule["R"] = RuleCost{"A", LinearFit{a, b, 0.0, 2, FitKind::Linear}};
  return cm;
}

}  // namespace

TEST_CASE("features of an empty model") {
  FeatureVector f = extract_features(Model("ECUs"), ecu_meta());
  CHECK(f.total_objects == 0);
  CHECK(f.total_links == 0);
  CHECK(f.counts_by_class.size() == 4);
  for (const auto& [cls, n] : f.counts_by_class) CHECK(n == 0);
}

TEST_CASE("subclass instances count for the superclass") {
  Model m("ECUs");
  m.add(obj("s", "Signal", {{"name", S("a")}, {"active", B(true)}}));
  m.add(obj("q1", "SpecialPort", {{"name", S("a")}, {"width", I(1)}, {"prio", I(1)}}, {{"signals", {"s"}}}));
  m.add(obj("q2", "SpecialPort", {{"name", S("a")}, {"width", I(1)}, {"prio", I(1)}}, {{"signals", {"s"}}}));
  FeatureVector f = extract_features(m, ecu_meta());
  CHECK(f.counts_by_class.at("SpecialPort") == 2);
  CHECK(f.counts_by_class.at("Port") == 2);
  CHECK(f.counts_by_class.at("ECU") == 0);
}

TEST_CASE("object and link totals") {
  Model m("ECUs");
  m.add(obj("s", "Signal", {{"name", S("a")}, {"active", B(true)}}));
  m.add(obj("p", "Port", {{"name", S("a")}, {"width", I(1)}}, {{"signals", {"s"}}}));
  m.add(obj("e", "ECU", {{"label", S("a")}, {"speed", I(1)}}, {{"ports", {"p", "p", "p"}}}));
  FeatureVector f = extract_features(m, ecu_meta());
  CHECK(f.total_objects == 3);
  CHECK(f.total_links == 4);
}

TEST_CASE("two points give the exact line") {
  std::vector<Observation> obs{{10, 1000}, {20, 2000}};
  LinearFit f = fit_ols(obs);
  CHECK(f.kind == FitKind::Linear);
  CHECK(f.a == 0.0);
  CHECK(f.b == 100.0);
  CHECK(f.residual_se == 0.0);
  CHECK(f.n_obs == 2);
}

TEST_CASE("single observation is a constant fit") {
  std::vector<Observation> obs{{10, 1234}};
  LinearFit f = fit_ols(obs);
  CHECK(f.kind == FitKind::Constant);
  CHECK(f.a == 1234.0);
  CHECK(f.b == 0.0);
  std::vector<Observation> same_x{{3, 10}, {3, 20}, {3, 30}};
  LinearFit g = fit_ols(same_x);
  CHECK(g.kind == FitKind::Constant);
  CHECK(g.a == doctest::Approx(20.0));
  CHECK(g.residual_se == doctest::Approx(10.0));
  CHECK_THROWS_AS(fit_ols(std::vector<Observation>{}), NoTrainingData);
}

TEST_CASE("constant data") {
  std::vector<Observation> obs{{0, 5}, {1, 5}, {2, 5}};
  LinearFit f = fit_ols(obs);
  CHECK(f.a == doctest::Approx(5.0));
  CHECK(f.b == doctest::Approx(0.0));
  CHECK(f.residual_se == doctest::Approx(0.0));
}

TEST_CASE("least squares matches the normal-equations oracle") {
  std::mt19937_64 rng(17);
  std::uniform_real_distribution<double> coef(-1e4, 1e4);
  for (int trial = 0; trial < 200; ++trial) {
    const double a = coef(rng), b = coef(rng) / 10.0;
    std::vector<Observation> obs;
    const int n = 2 + static_cast<int>(rng() % 20);
    for (int i = 0; i < n; ++i) {
      const double x = static_cast<double>(rng() % 100000);
      obs.push_back({x, a + b * x});
    }
    if (std::all_of(obs.begin(), obs.end(), [&](auto& o) { return o.x == obs[0].x; })) continue;
    const auto [oa, ob] = normal_equations(obs);
    LinearFit f = fit_ols(obs);
    CAPTURE(trial);
    CHECK(rel_err(f.a, oa) <= 1e-9);
    CHECK(rel_err(f.b, ob) <= 1e-9);
    CHECK(rel_err(f.b, b) <= 1e-9);
  }
}

TEST_CASE("residual standard error on noisy data") {
  std::vector<Observation> obs{{1, 2}, {2, 4.5}, {3, 5.5}, {4, 8.5}};
  LinearFit f = fit_ols(obs);
  const auto [oa, ob] = normal_equations(obs);
  CHECK(rel_err(f.a, oa) <= 1e-12);
  CHECK(rel_err(f.b, ob) <= 1e-12);
  long double rss = 0;
  for (const auto& o : obs) {
    const long double r = o.y - (oa + ob * o.x);
    rss += r * r;
  }
  CHECK(f.residual_se == doctest::Approx(static_cast<double>(std::sqrt(rss / 2))));
}

TEST_CASE("fit from stored runs") {
  TempDir dir;
  RunStore store(dir.path());
  CHECK_THROWS_AS(fit(store, "th"), NoTrainingData);
  store.write_run(run_meta("r01", 10, 1000, 55, 7), rule_records(1000));
  CostModel one = fit(store, "th");
  REQUIRE(one.per_rule.count("R") == 1);
  CHECK(one.per_rule.at("R").fit.kind == FitKind::Constant);
  CHECK(one.per_rule.at("R").fit.a == 1000.0);
  CHECK(one.per_rule.at("R").source_class == "A");
  CHECK(one.load.a == 55.0);
  CHECK(one.save.a == 7.0);

  store.write_run(run_meta("r02", 20, 2000, 105, 7), rule_records(2000));
  CostModel two = fit(store, "th");
  CHECK(two.per_rule.at("R").fit.kind == FitKind::Linear);
  CHECK(two.per_rule.at("R").fit.a == doctest::Approx(0.0));
  CHECK(two.per_rule.at("R").fit.b == doctest::Approx(100.0));
  CHECK(two.load.b == doctest::Approx(5.0));
  CHECK(two.transformation_hash == "th");
  CHECK_THROWS_AS(fit(store, "other"), NoTrainingData);
}

TEST_CASE("repeats collapse to their median") {
  std::vector<RunMeta> runs{run_meta("r01", 10, 1000), run_meta("r02", 10, 9000), run_meta("r03", 10, 1100),
                            run_meta("r04", 20, 2000)};
  std::map<std::string, std::vector<MonitoringRecord>> recs{
      {"r01", rule_records(1000)}, {"r02", rule_records(9000)}, {"r03", rule_records(1100)}, {"r04", rule_records(2000)}};
  CostModel med = fit(runs, recs, "th");
  CHECK(med.per_rule.at("R").fit.at(10) == doctest::Approx(1100.0));
  CHECK(med.per_rule.at("R").fit.n_obs == 4);
  CostModel raw = fit(runs, recs, "th", FitOptions{false});
  CHECK(raw.per_rule.at("R").fit.n_obs == 4);
  CHECK(raw.per_rule.at("R").fit.at(10) == doctest::Approx(3700.0));
}

TEST_CASE("negative slopes are reported") {
  std::vector<RunMeta> runs{run_meta("r01", 10, 2000), run_meta("r02", 20, 1000)};
  std::map<std::string, std::vector<MonitoringRecord>> recs{{"r01", rule_records(2000)}, {"r02", rule_records(1000)}};
  CHECK_FALSE(fit(runs, recs, "th").warnings.empty());
}

TEST_CASE("prediction arithmetic") {
  CostModel cm = single_rule_model(0, 100);
  Model m("AB");
  for (int i = 0; i < 15; ++i) m.add(obj("a" + std::to_string(i), "A"));
  const MetaModel mm = parse_metamodel(
      R"({"name":"AB","classes":[{"name":"A","superclass":null,"attrs":[],"refs":[]},{"name":"B","superclass":null,"attrs":[],"refs":[]}]})");
  Prediction p = predict_time(cm, m, mm);
  CHECK(p.per_rule_ns.at("R") == 1500);
  CHECK(p.total_ns == 1500);
  CHECK(p.features.counts_by_class.at("A") == 15);
}

TEST_CASE("empty model predicts clamped intercepts") {
  CostModel cm = single_rule_model(-50, 10);
  cm.per_rule["Q"] = RuleCost{"B", LinearFit{300, 2, 0, 3, FitKind::Linear}};
  cm.load = LinearFit{40, 1, 3, 3, FitKind::Linear};
  cm.save = LinearFit{-5, 1, 4, 3, FitKind::Linear};
  FeatureVector f;
  f.counts_by_class = {{"A", 0}, {"B", 0}};
  Prediction p = predict_from_features(cm, f);
  CHECK(p.per_rule_ns.at("R") == 0);
  CHECK(p.per_rule_ns.at("Q") == 300);
  CHECK(p.load_ns == 40);
  CHECK(p.save_ns == 0);
  CHECK(p.total_ns == 340);
  CHECK(p.uncertainty_ns == 10);  // 2 * sqrt(0 + 0 + 9 + 16)
}

TEST_CASE("metamodel drift is detected") {
  CostModel cm = single_rule_model(0, 1);
  CHECK_THROWS_AS(predict_time(cm, Model("ECUs"), ecu_meta()), FeatureMissing);
}

TEST_CASE("monotone in class counts when slopes are non-negative") {
  CostModel cm = single_rule_model(10, 3);
  cm.per_rule["Q"] = RuleCost{"B", LinearFit{-100, 7, 0, 3, FitKind::Linear}};
  cm.load = LinearFit{5, 0.5, 0, 3, FitKind::Linear};
  cm.save = LinearFit{1, 0.25, 0, 3, FitKind::Linear};
  std::mt19937 rng(1);
  for (int trial = 0; trial < 200; ++trial) {
    FeatureVector f;
    f.counts_by_class = {{"A", static_cast<std::int64_t>(rng() % 100)}, {"B", static_cast<std::int64_t>(rng() % 100)}};
    f.total_objects = f.counts_by_class["A"] + f.counts_by_class["B"];
    FeatureVector g = f;
    g.counts_by_class[rng() % 2 ? "A" : "B"] += 1 + static_cast<std::int64_t>(rng() % 5);
    g.total_objects = g.counts_by_class["A"] + g.counts_by_class["B"];
    const Prediction pf = predict_from_features(cm, f), pg = predict_from_features(cm, g);
    CHECK(pg.total_ns >= pf.total_ns);
    for (const auto& [r, ns] : pf.per_rule_ns) CHECK(ns >= 0);
    CHECK(pf.total_ns == pf.per_rule_ns.at("R") + pf.per_rule_ns.at("Q") + pf.load_ns + pf.save_ns);
  }
}

TEST_CASE("evaluation") {
  TempDir dir;
  RunStore store(dir.path());
  // Exactly linear data: y = 50 + 7x.
  for (int i = 1; i <= 4; ++i) {
    const std::int64_t x = 10 * i;
    store.write_run(run_meta("r0" + std::to_string(i), x, 50 + 7 * x), rule_records(50 + 7 * x));
  }
  std::vector<RunMeta> train;
  std::map<std::string, std::vector<MonitoringRecord>> recs;
  for (const auto& id : {"r01", "r02", "r03"}) {
    auto [m, r] = store.load_run(id);
    train.push_back(m);
    recs[id] = r;
  }
  CostModel cm = fit(train, recs, "th");
  CHECK(evaluate(cm, store, {"r04"}).mape == doctest::Approx(0.0));
  Evaluation same = evaluate(cm, store, {"r01"});
  REQUIRE(same.per_run.size() == 1);
  CHECK(same.per_run[0].first == same.per_run[0].second);

  // Constant prediction of 110 against an actual 100.
  TempDir dir2;
  RunStore s2(dir2.path());
  s2.write_run(run_meta("r01", 1, 100), rule_records(100));
  CostModel c110;
  c110.transformation_hash = "th";
  c110.per_rule["R"] = RuleCost{"A", LinearFit{110, 0, 0, 1, FitKind::Constant}};
  Evaluation e = evaluate(c110, s2, {"r01"});
  CHECK(e.mape == doctest::Approx(0.10));
  CHECK(e.per_run[0] == std::pair<std::int64_t, std::int64_t>{110, 100});
  CHECK_THROWS_AS(evaluate(c110, s2, {"missing"}), NotFound);
}

TEST_CASE("cost model file round trip and determinism") {
  TempDir dir;
  RunStore store(dir.path());
  for (int i = 1; i <= 3; ++i) store.write_run(run_meta("r0" + std::to_string(i), 10 * i, 1000 * i + i * i, 3 * i, i), rule_records(1000 * i + i * i));
  CostModel a = fit(store, "th");
  CostModel b = fit(store, "th");
  b.fitted_at_utc = a.fitted_at_utc;
  CHECK(a == b);
  save_cost_model(dir / "cm.json", a);
  CHECK(load_cost_model(dir / "cm.json") == a);
  CHECK(cost_model_from_json(to_json(a)) == a);
  CHECK_THROWS(cost_model_from_json(Json::parse(R"({"perRule":{}})")));
}
