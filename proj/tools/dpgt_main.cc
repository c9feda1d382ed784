// Copyright 2026 The DPGT Authors.
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//     https://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

// Command-line front end for the DPGT toolkit.

#include <cstdio>
#include <filesystem>
#include <iostream>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "absl/strings/str_cat.h"
#include "absl/strings/str_format.h"
#include "dpgt/bound_oracle.h"
#include "dpgt/engine.h"
#include "dpgt/experiment.h"
#include "dpgt/graph_spectral.h"
#include "dpgt/json_io.h"
#include "dpgt/objectives.h"
#include "dpgt/privacy_accountant.h"
#include "dpgt/schemes.h"

namespace dpgt {
namespace {

constexpr int kExitError = 1;
constexpr int kExitUsage = 2;
constexpr int kExitValidation = 3;

// Failed preconditions (validation, caps, m > D) exit with 3.
int Fail(const absl::Status& s) {
  std::cerr << "error: " << s << "\n";
  return absl::IsFailedPrecondition(s) ? kExitValidation : kExitError;
}

void Print(const Json& j) { std::cout << j.dump(2) << "\n"; }

std::string DirOf(const std::string& path) {
  return std::filesystem::path(path).parent_path().string();
}

absl::StatusOr<ExperimentConfig> LoadConfig(const std::string& path) {
  auto j = ReadJsonFile(path);
  if (!j.ok()) return j.status();
  return ExperimentConfigFromJson(*j, DirOf(path));
}

int AnalyzeGraph(const std::string& file) {
  auto j = ReadJsonFile(file);
  if (!j.ok()) return Fail(j.status());
  auto gp = GraphFromJson(*j);
  if (!gp.ok()) return Fail(gp.status());
  const Assumption1Report a1 = CheckAssumption1(*gp);
  auto sc = ComputeSpectralConstants(*gp);
  if (!sc.ok()) return Fail(sc.status());
  Json out = SpectralToJson(*sc, a1);
  out["schema_version"] = kSchemaVersion;
  Print(out);
  return 0;
}

struct GenDataArgs {
  std::string kind = "quadratic";
  uint64_t seed = 1;
  int n = 4;
  int samples = 200;
  int d = 1;
  std::string out_dir = ".";
};

int GenData(const GenDataArgs& a) {
  Json spec{{"kind", a.kind}, {"n", a.n}, {"D", a.samples}, {"seed", a.seed}};
  if (a.kind != "trig") spec["d"] = a.d;
  auto obj = ObjectiveFromJson(spec);
  if (!obj.ok()) return Fail(obj.status());
  std::error_code ec;
  std::filesystem::create_directories(a.out_dir, ec);
  if (ec) return Fail(absl::PermissionDeniedError(absl::StrCat("cannot create ", a.out_dir)));
  Json full = spec;
  full.erase("D");
  full["schema_version"] = kSchemaVersion;
  if (a.kind == "quadratic") {
    const auto& q = static_cast<const QuadraticObjective&>(**obj);
    full["A"] = MatrixToJson(q.a());
    full["b"] = VectorToJson(q.b());
  }
  Json datasets = Json::array();
  for (const Dataset& ds : (*obj)->datasets()) {
    Json dj = DatasetToJson(ds);
    const std::string path = absl::StrCat(a.out_dir, "/agent_", ds.agent, ".json");
    if (auto s = WriteTextFile(path, dj.dump() + "\n"); !s.ok()) return Fail(s);
    datasets.push_back(dj);
  }
  full["datasets"] = datasets;
  const std::string path = a.out_dir + "/objective.json";
  if (auto s = WriteTextFile(path, full.dump() + "\n"); !s.ok()) return Fail(s);
  Print(Json{{"schema_version", kSchemaVersion},
             {"objective", path},
             {"agents", a.n},
             {"D", a.samples},
             {"constants", ConstantsToJson((*obj)->constants())},
             {"f_star", (*obj)->f_star() ? Num(*(*obj)->f_star()) : Json(nullptr)}});
  return 0;
}

int ValidateScheme(const std::string& graph, const std::string& scheme,
                   const std::string& objective) {
  auto g = ReadJsonFile(graph);
  if (!g.ok()) return Fail(g.status());
  auto s = ReadJsonFile(scheme);
  if (!s.ok()) return Fail(s.status());
  auto o = ReadJsonFile(objective);
  if (!o.ok()) return Fail(o.status());
  auto p = LoadProblem(*g, *s, *o);
  if (!p.ok()) return Fail(p.status());
  const ValidationReport r = ValidateForScheme(*p);
  Json out{{"schema_version", kSchemaVersion},
           {"scheme", SchemeKindName(p->params.kind)},
           {"assumption1", p->a1.satisfied()},
           {"validation", ValidationToJson(r)},
           {"finiteness", ValidationToJson(CheckBudgetFiniteness(p->params, p->gp))},
           {"constants", ConstantsToJson(p->obj->constants())}};
  if (p->params.kind == SchemeKind::kS1) {
    out["theta"] = Num(Theta(p->params));
    out["rate_exponent"] = Num(RateExponent(p->params));
  }
  Print(out);
  return r.overall && p->a1.satisfied() ? 0 : kExitValidation;
}

int RunCommand(const std::string& config_path, const std::string& out,
               bool force, bool baseline) {
  auto config = LoadConfig(config_path);
  if (!config.ok()) return Fail(config.status());
  config->force = config->force || force;
  config->baseline = config->baseline || baseline;
  std::string out_dir = config->out_dir;
  if (!out.empty()) {
    const std::string parent = DirOf(out);
    out_dir = parent.empty() ? "." : parent;
  }
  if (out_dir.empty()) out_dir = ".";
  config->out_dir = out_dir;
  auto summary = RunExperiment(*config);
  if (!summary.ok()) return Fail(summary.status());
  if (!out.empty()) {
    // The last horizon's mean trace also goes to the requested path.
    const std::string produced =
        absl::StrCat(out_dir, "/trace_K", config->horizons.back(), ".csv");
    auto text = ReadTextFile(produced);
    if (!text.ok()) return Fail(text.status());
    if (auto s = WriteTextFile(out, *text); !s.ok()) return Fail(s);
  }
  Print(*summary);
  return 0;
}

int PrivacyBudget(const std::string& graph, const std::string& scheme,
                  const std::string& c_arg, int64_t horizon,
                  const std::string& objective, const std::string& csv) {
  auto g = ReadJsonFile(graph);
  if (!g.ok()) return Fail(g.status());
  auto gp = GraphFromJson(*g);
  if (!gp.ok()) return Fail(gp.status());
  auto s = ReadJsonFile(scheme);
  if (!s.ok()) return Fail(s.status());
  auto params = SchemeFromJson(*s, gp->n);
  if (!params.ok()) return Fail(params.status());
  double c = 0.0;
  if (c_arg == "auto") {
    if (objective.empty()) {
      return Fail(absl::InvalidArgumentError("--C auto needs --objective"));
    }
    auto o = ReadJsonFile(objective);
    if (!o.ok()) return Fail(o.status());
    auto obj = ObjectiveFromJson(*o);
    if (!obj.ok()) return Fail(obj.status());
    c = DatasetAdjacencyBound(**obj);
  } else {
    try {
      size_t used = 0;
      c = std::stod(c_arg, &used);
      if (used != c_arg.size()) throw std::invalid_argument(c_arg);
    } catch (const std::exception&) {
      return Fail(absl::InvalidArgumentError("--C must be a number or 'auto'"));
    }
  }
  auto trace = ComputeSensitivityTrace(*gp, *params, c, horizon);
  if (!trace.ok()) return Fail(trace.status());
  auto budget = ComputeEpsilon(*trace, *params, *gp);
  if (!budget.ok()) return Fail(budget.status());
  if (!csv.empty()) {
    std::string text = "k,agent,increment,eps_cum\n";
    const auto cum = budget->Cumulative();
    for (size_t i = 0; i < budget->increments.size(); ++i) {
      for (size_t k = 0; k < budget->increments[i].size(); ++k) {
        absl::StrAppendFormat(&text, "%d,%d,%.17g,%.17g\n", k, i,
                              budget->increments[i][k], cum[i][k]);
      }
    }
    if (auto st = WriteTextFile(csv, text); !st.ok()) return Fail(st);
  }
  Json out = BudgetToJson(*budget);
  out["schema_version"] = kSchemaVersion;
  out["C"] = Num(c);
  Print(out);
  return 0;
}

int BoundCheck(const std::string& config_path, int runs) {
  auto config = LoadConfig(config_path);
  if (!config.ok()) return Fail(config.status());
  auto p = LoadProblem(config->graph, config->scheme, config->objective);
  if (!p.ok()) return Fail(p.status());
  if (config->baseline) p->params.noise_multiplier = 0.0;
  const int64_t horizon = config->horizons.back();
  auto model = BuildModel(p->sc, p->params, p->obj->constants(), p->obj->dim(), horizon);
  if (!model.ok()) return Fail(model.status());
  const ContractionReport contraction = ContractionCheck(*model);
  RunSpec spec;
  spec.gp = &p->gp;
  spec.sc = &p->sc;
  spec.params = p->params;
  spec.obj = p->obj.get();
  spec.horizon = horizon;
  if (config->x0_seed) spec.x0 = DefaultInitialState(p->gp.n, p->obj->dim(), *config->x0_seed);
  auto ens = RunEnsemble(spec, SeedRange(config->first_seed, runs));
  if (!ens.ok()) return Fail(ens.status());
  const int64_t total = static_cast<int64_t>(p->obj->dataset(0).samples.size());
  const bool deterministic = p->params.noise_multiplier == 0.0 && model->rates.m >= total;
  auto dom = DominanceCheck(*model, *ens, deterministic);
  if (!dom.ok()) return Fail(dom.status());
  Json out{{"schema_version", kSchemaVersion},
           {"K", horizon},
           {"rho", Num(contraction.rho)},
           {"contracts", contraction.contracts},
           {"contraction", ContractionToJson(contraction)},
           {"dominance", DominanceToJson(*dom)},
           {"dominance_pass_rate", Num(dom->pass_rate)}};
  Print(out);
  return 0;
}

int Sweep(const std::string& config_path, const std::string& out_dir,
          std::string param, std::vector<double> values, bool force) {
  auto raw = ReadJsonFile(config_path);
  if (!raw.ok()) return Fail(raw.status());
  if (param.empty() && raw->contains("sweep")) {
    param = raw->at("sweep").value("param", std::string());
    for (const Json& v : raw->at("sweep").value("values", Json::array())) {
      values.push_back(v.get<double>());
    }
  }
  if (param.empty() || values.empty()) {
    return Fail(absl::InvalidArgumentError("sweep needs --param and --values"));
  }
  auto base = LoadConfig(config_path);
  if (!base.ok()) return Fail(base.status());
  Json results = Json::array();
  for (double v : values) {
    ExperimentConfig config = *base;
    config.force = config.force || force;
    config.scheme[param] = v;
    config.out_dir = absl::StrFormat("%s/%s=%g", out_dir, param, v);
    auto summary = RunExperiment(config);
    if (!summary.ok()) return Fail(summary.status());
    const Json& last = summary->at("horizons").back();
    results.push_back({{"value", v},
                       {"out_dir", config.out_dir},
                       {"eps_max", last.at("budget").at("epsilon_max")},
                       {"final_grad_norm_sq_max", last.at("final_grad_norm_sq_max")}});
  }
  Json out{{"schema_version", kSchemaVersion}, {"param", param}, {"results", results}};
  if (auto s = WriteTextFile(out_dir + "/sweep.json", out.dump(2) + "\n"); !s.ok()) {
    return Fail(s);
  }
  Print(out);
  return 0;
}

}  // namespace
}  // namespace dpgt

int main(int argc, char** argv) {
  CLI::App app{"Differentially private gradient tracking over directed graphs"};
  app.require_subcommand(1);
  int code = 0;

  std::string graph_file;
  auto* analyze = app.add_subcommand("analyze-graph", "Spectral constants of a graph pair");
  analyze->add_option("file", graph_file, "graph JSON")->required();
  analyze->callback([&] { code = dpgt::AnalyzeGraph(graph_file); });

  dpgt::GenDataArgs gen;
  auto* gen_cmd = app.add_subcommand("gen-data", "Generate per-agent datasets");
  gen_cmd->add_option("--kind", gen.kind)
      ->check(CLI::IsMember({"quadratic", "trig", "logistic"}));
  gen_cmd->add_option("--seed", gen.seed);
  gen_cmd->add_option("--n", gen.n)->check(CLI::PositiveNumber);
  gen_cmd->add_option("--D", gen.samples)->check(CLI::PositiveNumber);
  gen_cmd->add_option("--d", gen.d)->check(CLI::PositiveNumber);
  gen_cmd->add_option("--out-dir", gen.out_dir);
  gen_cmd->callback([&] { code = dpgt::GenData(gen); });

  std::string graph, scheme, objective;
  auto* validate = app.add_subcommand("validate-scheme", "Check step-size conditions");
  validate->add_option("--graph", graph)->required();
  validate->add_option("--scheme", scheme)->required();
  validate->add_option("--objective", objective)->required();
  validate->callback([&] { code = dpgt::ValidateScheme(graph, scheme, objective); });

  std::string config, out;
  bool force = false, baseline = false;
  auto* run = app.add_subcommand("run", "Run an experiment");
  run->add_option("--config", config)->required();
  run->add_option("--out", out, "mean trace CSV of the last horizon");
  run->add_flag("--force", force, "run even if validation fails");
  run->add_flag("--baseline", baseline, "zero privacy noise");
  run->callback([&] { code = dpgt::RunCommand(config, out, force, baseline); });

  std::string c_arg, csv;
  int64_t horizon = 0;
  auto* budget = app.add_subcommand("privacy-budget", "Per-agent privacy budget");
  budget->add_option("--graph", graph)->required();
  budget->add_option("--scheme", scheme)->required();
  budget->add_option("--C", c_arg)->required();
  budget->add_option("--K", horizon)->required()->check(CLI::NonNegativeNumber);
  budget->add_option("--objective", objective);
  budget->add_option("--csv", csv);
  budget->callback(
      [&] { code = dpgt::PrivacyBudget(graph, scheme, c_arg, horizon, objective, csv); });

  int runs = 30;
  auto* bound = app.add_subcommand("bound-check", "Contraction and dominance checks");
  bound->add_option("--config", config)->required();
  bound->add_option("--runs", runs)->check(CLI::PositiveNumber);
  bound->callback([&] { code = dpgt::BoundCheck(config, runs); });

  std::string out_dir, param;
  std::vector<double> values;
  auto* sweep = app.add_subcommand("sweep", "Sweep one scheme parameter");
  sweep->add_option("--config", config)->required();
  sweep->add_option("--out-dir", out_dir)->required();
  sweep->add_option("--param", param);
  sweep->add_option("--values", values)->delimiter(',');
  sweep->add_flag("--force", force);
  sweep->callback([&] { code = dpgt::Sweep(config, out_dir, param, values, force); });

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    // --help exits 0; usage errors exit 2.
    return app.exit(e) == 0 ? 0 : dpgt::kExitUsage;
  }
  return code;
}
