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

#include "cli.hpp"

#include <CLI11.hpp>

#include <algorithm>
#include <filesystem>
#include <functional>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include "mtperf/engine.hpp"
#include "mtperf/genmodel.hpp"
#include "mtperf/metamodel.hpp"
#include "mtperf/model.hpp"
#include "mtperf/mtl/parser.hpp"
#include "mtperf/mtl/validator.hpp"
#include "mtperf/predict.hpp"
#include "mtperf/profiledb.hpp"
#include "mtperf/profiler.hpp"

namespace fs = std::filesystem;

namespace mtperf::cli {

namespace {

struct CliConfig {
  std::string store_root = "./perf-store";
  double ratio = 1.20;
  std::int64_t min_samples = 30;
  int repeat = 1;
  std::string format = "text";
};

struct TransformArgs {
  std::string trafo, input, meta_in, meta_out, output, label;
  bool profile = false;
};

struct ReportArgs {
  std::string run_id;
  std::size_t top = 10;
};

struct DiffArgs {
  std::string baseline, current;
};

struct GenerateArgs {
  std::string meta, spec, scale = "1", output;
  std::uint64_t seed = 0;
};

struct FitArgs {
  std::string trafo, hash, output;
};

struct PredictArgs {
  std::string cost, input, meta_in;
};

struct EvaluateArgs {
  std::string cost;
  std::vector<std::string> runs;
};

struct BenchArgs {
  std::string trafo, meta_in, meta_out, spec, scales = "1", label, work_dir;
  std::uint64_t seed = 0;
};

void print_block(std::ostream& out, const std::string& text) {
  out << text;
  if (!text.empty() && text.back() != '\n') out << '\n';
}

ReportFormat parse_format(const std::string& name) {
  auto f = report_format_from_string(name);
  if (!f) throw ValidationError("unknown --format '" + name + "' (expected text, json or plotdata)");
  return *f;
}

struct Loaded {
  mtl::Transformation trafo;
  MetaModel in_meta;
  MetaModel out_meta;
};

// Parses and validates the transformation against both metamodels; every
// diagnostic is written to `err` before failing.
Loaded load_checked(const std::string& trafo, const std::string& meta_in, const std::string& meta_out,
                    std::ostream& err) {
  mtl::Transformation t = mtl::load_transformation(trafo);
  MetaModel in = load_metamodel(meta_in);
  MetaModel out = load_metamodel(meta_out);
  auto diags = mtl::validate(t, in, out);
  if (!diags.empty()) {
    for (const auto& d : diags) err << trafo << ":" << mtl::format(d) << "\n";
    throw ValidationError(std::to_string(diags.size()) + " validation error(s) in " + trafo);
  }
  return {std::move(t), std::move(in), std::move(out)};
}

int cmd_transform(const CliConfig& cfg, const TransformArgs& a, std::ostream& out, std::ostream& err) {
  Loaded l = load_checked(a.trafo, a.meta_in, a.meta_out, err);
  if (!a.profile) {
    Model input = load_model(a.input);
    auto violations = check_conformance(input, l.in_meta);
    if (!violations.empty()) {
      for (const auto& v : violations) err << a.input << ": " << v.object_id << ": " << v.message << "\n";
      throw ValidationError("input model does not conform to '" + l.in_meta.name() + "'");
    }
    ExecutionResult r = execute(l.trafo, input, l.in_meta, l.out_meta, nullptr);
    save_model(a.output, r.output);
    return kOk;
  }
  RunStore store(cfg.store_root);
  for (int i = 0; i < cfg.repeat; ++i) {
    ProfiledRun run = run_profiled(l.trafo, a.input, l.in_meta, l.out_meta, a.output);
    RunMeta meta = make_run_meta(l.trafo, l.in_meta, l.out_meta, run,
                                 a.label.empty() ? std::nullopt : std::optional<std::string>(a.label));
    meta.run_id = store.unique_run_id();
    store.write_run(meta, run.result.records);
    out << meta.run_id << "\n";
  }
  return kOk;
}

int cmd_report(const CliConfig& cfg, const ReportArgs& a, std::ostream& out) {
  if (a.top < 1) throw ValidationError("--top must be >= 1");
  const ReportFormat format = parse_format(cfg.format);
  RunStore store(cfg.store_root);
  auto [meta, records] = store.load_run(a.run_id);
  auto hot = rank_hotspots(aggregate(records, meta.summary), a.top);
  print_block(out, render_report(hot, format));
  return kOk;
}

int cmd_diff(const CliConfig& cfg, const DiffArgs& a, std::ostream& out) {
  const ReportFormat format = parse_format(cfg.format);
  RunStore store(cfg.store_root);
  DiffThresholds th{cfg.ratio, cfg.min_samples};
  RegressionReport report = diff_runs(store, a.baseline, a.current, th);
  print_block(out, render_report(report, format));
  return report.any_regressed() ? kRegression : kOk;
}

int cmd_generate(const GenerateArgs& a) {
  MetaModel mm = load_metamodel(a.meta);
  GenSpec spec = load_gen_spec(a.spec);
  Model m = generate(mm, spec, Scale::parse(a.scale), a.seed);
  save_model(a.output, m);
  return kOk;
}

int cmd_fit(const CliConfig& cfg, const FitArgs& a, std::ostream& out) {
  std::string hash = a.hash;
  if (!a.trafo.empty()) hash = mtl::load_transformation(a.trafo).source_hash;
  if (hash.empty()) throw ValidationError("fit needs --transformation or --hash");
  RunStore store(cfg.store_root);
  CostModel cm = fit(store, hash);
  save_cost_model(a.output, cm);
  out << "fitted " << cm.per_rule.size() << " rule(s) for " << hash << "\n";
  return kOk;
}

void print_prediction(const Prediction& p, const std::string& format, std::ostream& out) {
  if (format == "json") {
    out << canonical_dump(to_json(p)) << "\n";
    return;
  }
  if (format != "text") throw ValidationError("predict supports --format text or json");
  out << "totalNs " << p.total_ns << "\n";
  out << "uncertaintyNs " << p.uncertainty_ns << "\n";
  out << "loadNs " << p.load_ns << "\n";
  out << "saveNs " << p.save_ns << "\n";
  for (const auto& [rule, ns] : p.per_rule_ns) out << "rule " << rule << " " << ns << "\n";
}

int cmd_predict(const CliConfig& cfg, const PredictArgs& a, std::ostream& out, std::ostream& err) {
  CostModel cm = load_cost_model(a.cost);
  MetaModel mm = load_metamodel(a.meta_in);
  Model m = load_model(a.input);
  auto violations = check_conformance(m, mm);
  if (!violations.empty()) {
    for (const auto& v : violations) err << a.input << ": " << v.object_id << ": " << v.message << "\n";
    throw ValidationError("input model does not conform to '" + mm.name() + "'");
  }
  for (const auto& w : cm.warnings) err << "warning: " << w << "\n";
  print_prediction(predict_time(cm, m, mm), cfg.format, out);
  return kOk;
}

int cmd_evaluate(const CliConfig& cfg, const EvaluateArgs& a, std::ostream& out) {
  CostModel cm = load_cost_model(a.cost);
  RunStore store(cfg.store_root);
  Evaluation ev = evaluate(cm, store, a.runs);
  for (std::size_t i = 0; i < a.runs.size(); ++i) {
    out << a.runs[i] << " predicted " << ev.per_run[i].first << " actual " << ev.per_run[i].second << "\n";
  }
  out << "mape " << ev.mape << "\n";
  return kOk;
}

std::vector<Scale> parse_scales(const std::string& list) {
  std::vector<Scale> scales;
  std::stringstream in(list);
  std::string item;
  while (std::getline(in, item, ',')) {
    if (!item.empty()) scales.push_back(Scale::parse(item));
  }
  if (scales.empty()) throw ValidationError("--scales needs at least one value");
  return scales;
}

int cmd_bench(const CliConfig& cfg, const BenchArgs& a, std::ostream& out, std::ostream& err) {
  Loaded l = load_checked(a.trafo, a.meta_in, a.meta_out, err);
  GenSpec spec = load_gen_spec(a.spec);
  check_gen_spec(spec, l.in_meta);
  const std::vector<Scale> scales = parse_scales(a.scales);
  RunStore store(cfg.store_root);
  const fs::path work = a.work_dir.empty() ? fs::path(cfg.store_root) / "bench-work" : fs::path(a.work_dir);
  fs::create_directories(work);

  std::vector<fs::path> inputs, outputs;
  std::vector<std::size_t> sizes;
  for (std::size_t i = 0; i < scales.size(); ++i) {
    const Model model = generate(l.in_meta, spec, scales[i], derive_seed(a.seed, i));
    inputs.push_back(work / ("input-" + std::to_string(i) + ".json"));
    outputs.push_back(work / ("output-" + std::to_string(i) + ".json"));
    sizes.push_back(model.size());
    save_model(inputs.back(), model);
  }

  // Repeats go round-robin over the scales so drift spreads across all of them.
  std::vector<std::vector<std::int64_t>> totals(scales.size());
  for (int rep = 0; rep < cfg.repeat; ++rep) {
    for (std::size_t i = 0; i < scales.size(); ++i) {
      ProfiledRun run = run_profiled(l.trafo, inputs[i], l.in_meta, l.out_meta, outputs[i]);
      auto problems = check_accounting(run.result.records, run.result.summary);
      if (!problems.empty()) {
        for (const auto& p : problems) err << "accounting: " << p << "\n";
        throw Error("accounting invariant violated at scale " + scales[i].to_string());
      }
      std::string label = "bench scale=" + scales[i].to_string() + " repeat=" + std::to_string(rep);
      if (!a.label.empty()) label = a.label + " " + label;
      RunMeta meta = make_run_meta(l.trafo, l.in_meta, l.out_meta, run, label);
      meta.run_id = store.unique_run_id();
      store.write_run(meta, run.result.records);
      err << "run " << meta.run_id << " scale " << scales[i].to_string() << " total_ns "
          << run.result.summary.total_duration_ns << "\n";
      totals[i].push_back(run.result.summary.total_duration_ns);
    }
  }

  std::vector<std::vector<std::string>> rows{{"scale", "objects", "runs", "median_total_ns", "min_total_ns", "max_total_ns"}};
  for (std::size_t i = 0; i < scales.size(); ++i) {
    auto& t = totals[i];
    std::sort(t.begin(), t.end());
    rows.push_back({scales[i].to_string(), std::to_string(sizes[i]), std::to_string(t.size()),
                    std::to_string(nearest_rank(t, 50)), std::to_string(t.front()), std::to_string(t.back())});
  }
  std::vector<std::size_t> width(rows[0].size(), 0);
  for (const auto& r : rows) {
    for (std::size_t c = 0; c < r.size(); ++c) width[c] = std::max(width[c], r[c].size());
  }
  for (const auto& r : rows) {
    for (std::size_t c = 0; c < r.size(); ++c) {
      if (c) out << "  ";
      out << std::string(width[c] - r[c].size(), ' ') << r[c];
    }
    out << "\n";
  }
  return kOk;
}

}  // namespace

int run(int argc, const char* const* argv, std::ostream& out, std::ostream& err) {
  CLI::App app{"Performance workbench for rule-based model transformations", "mtperf"};
  app.require_subcommand(1);

  CliConfig cfg;
  app.add_option("--store", cfg.store_root, "Run store directory")->capture_default_str();
  app.add_option("--ratio", cfg.ratio, "Regression ratio threshold on medians")->capture_default_str();
  app.add_option("--min-samples", cfg.min_samples, "Minimum executed invocations per rule for a verdict")
      ->capture_default_str();
  app.add_option("--repeat", cfg.repeat, "Runs per input (profiled transform, bench)")->capture_default_str();
  app.add_option("--format", cfg.format, "Report format: text, json, plotdata")->capture_default_str();

  std::function<int()> action;

  TransformArgs ta;
  auto* transform = app.add_subcommand("transform", "Run a transformation, optionally profiled");
  transform->fallthrough();
  transform->add_option("trafo", ta.trafo, "Transformation source (.mtl)")->required();
  transform->add_option("--in", ta.input, "Input model")->required();
  transform->add_option("--meta-in", ta.meta_in, "Input metamodel")->required();
  transform->add_option("--meta-out", ta.meta_out, "Output metamodel")->required();
  transform->add_option("--out", ta.output, "Output model path")->required();
  transform->add_flag("--profile", ta.profile, "Instrument the run and store its profile");
  transform->add_option("--label", ta.label, "Free-text label stored with profiled runs");
  transform->callback([&] { action = [&] { return cmd_transform(cfg, ta, out, err); }; });

  ReportArgs ra;
  auto* report = app.add_subcommand("report", "Rank the hotspots of a stored run");
  report->fallthrough();
  report->add_option("run", ra.run_id, "Run id")->required();
  report->add_option("--top", ra.top, "Number of rules to show")->capture_default_str();
  report->callback([&] { action = [&] { return cmd_report(cfg, ra, out); }; });

  DiffArgs da;
  auto* diff = app.add_subcommand("diff", "Compare two runs; exit 3 when a rule regressed");
  diff->fallthrough();
  diff->add_option("baseline", da.baseline, "Baseline run id")->required();
  diff->add_option("current", da.current, "Current run id")->required();
  diff->callback([&] { action = [&] { return cmd_diff(cfg, da, out); }; });

  GenerateArgs ga;
  auto* gen = app.add_subcommand("generate", "Generate a conforming instance model");
  gen->fallthrough();
  gen->add_option("--meta", ga.meta, "Metamodel")->required();
  gen->add_option("--spec", ga.spec, "Generation spec (JSON)")->required();
  gen->add_option("--scale", ga.scale, "Scale factor (e.g. 2, 1.5, 3/4)")->capture_default_str();
  gen->add_option("--seed", ga.seed, "PRNG seed")->capture_default_str();
  gen->add_option("--out", ga.output, "Output model path")->required();
  gen->callback([&] { action = [&] { return cmd_generate(ga); }; });

  FitArgs fa;
  auto* fitc = app.add_subcommand("fit", "Fit a cost model from stored runs");
  fitc->fallthrough();
  auto* fit_trafo = fitc->add_option("--transformation", fa.trafo, "Transformation source whose runs to use");
  auto* fit_hash = fitc->add_option("--hash", fa.hash, "Transformation hash whose runs to use");
  fit_trafo->excludes(fit_hash);
  fitc->add_option("--out", fa.output, "Cost model output path")->required();
  fitc->callback([&] { action = [&] { return cmd_fit(cfg, fa, out); }; });

  PredictArgs pa;
  auto* pred = app.add_subcommand("predict", "Predict the execution time for an input model");
  pred->fallthrough();
  pred->add_option("--cost", pa.cost, "Cost model")->required();
  pred->add_option("--in", pa.input, "Input model")->required();
  pred->add_option("--meta-in", pa.meta_in, "Input metamodel")->required();
  pred->callback([&] { action = [&] { return cmd_predict(cfg, pa, out, err); }; });

  EvaluateArgs ea;
  auto* eval = app.add_subcommand("evaluate", "Compare cost-model predictions with stored runs");
  eval->fallthrough();
  eval->add_option("--cost", ea.cost, "Cost model")->required();
  eval->add_option("runs", ea.runs, "Held-out run ids")->required();
  eval->callback([&] { action = [&] { return cmd_evaluate(cfg, ea, out); }; });

  BenchArgs ba;
  auto* bench = app.add_subcommand("bench", "Generate, transform and profile across scales");
  bench->fallthrough();
  bench->add_option("trafo", ba.trafo, "Transformation source (.mtl)")->required();
  bench->add_option("--meta-in", ba.meta_in, "Input metamodel")->required();
  bench->add_option("--meta-out", ba.meta_out, "Output metamodel")->required();
  bench->add_option("--spec", ba.spec, "Generation spec (JSON)")->required();
  bench->add_option("--scales", ba.scales, "Comma-separated scale factors")->capture_default_str();
  bench->add_option("--seed", ba.seed, "PRNG seed")->capture_default_str();
  bench->add_option("--label", ba.label, "Label prefix for stored runs");
  bench->add_option("--work-dir", ba.work_dir, "Directory for generated inputs and outputs");
  bench->callback([&] { action = [&] { return cmd_bench(cfg, ba, out, err); }; });

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e, out, err);
    return code == 0 ? kOk : kInputError;
  }

  try {
    if (!(cfg.ratio > 1.0)) throw ValidationError("--ratio must be > 1");
    if (cfg.repeat < 1) throw ValidationError("--repeat must be >= 1");
    if (cfg.min_samples < 0) throw ValidationError("--min-samples must be >= 0");
    return action ? action() : kInputError;
  } catch (const RuntimeError& e) {
    err << "error: " << e.what() << "\n";
    return kRuntimeError;
  } catch (const Error& e) {
    err << "error: " << e.what() << "\n";
    return kInputError;
  } catch (const fs::filesystem_error& e) {
    err << "error: " << e.what() << "\n";
    return kInputError;
  }
}

}  // namespace mtperf::cli
