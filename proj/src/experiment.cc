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

#include "dpgt/experiment.h"

#include <algorithm>
#include <cmath>
#include <filesystem>
#include <numeric>

#include "absl/strings/str_cat.h"
#include "absl/strings/str_format.h"
#include "absl/strings/str_join.h"
#include "dpgt/privacy_accountant.h"

namespace dpgt {
namespace {

std::string Fmt(double v) { return absl::StrFormat("%.17g", v); }

absl::StatusOr<Json> Resolve(const Json& field, const std::string& base_dir,
                             const char* name,
                             std::map<std::string, std::string>& hashes) {
  if (field.is_object()) {
    hashes[name] = ContentHash(field.dump());
    return field;
  }
  if (!field.is_string()) {
    return absl::InvalidArgumentError(
        absl::StrCat("'", name, "' must be an object or a file path"));
  }
  std::filesystem::path p(field.get<std::string>());
  if (p.is_relative() && !base_dir.empty()) p = std::filesystem::path(base_dir) / p;
  auto text = ReadTextFile(p.string());
  if (!text.ok()) return text.status();
  hashes[name] = ContentHash(*text);
  Json j = Json::parse(*text, nullptr, false);
  if (j.is_discarded()) return absl::InvalidArgumentError(absl::StrCat("invalid JSON in ", p.string()));
  return j;
}

Json FitToJson(const RateFit& f) {
  return Json{{"model", f.model == RateModel::kPowerLaw ? "power-law" : "exponential"},
              {"exponent", Num(f.exponent)}, {"base", Num(f.base)},
              {"slope", Num(f.slope)}, {"intercept", Num(f.intercept)},
              {"r2", Num(f.r2)}, {"window", {f.lo, f.hi}}, {"masked", f.masked}};
}

double MeanOf(const std::vector<double>& v) {
  return v.empty() ? 0.0 : std::accumulate(v.begin(), v.end(), 0.0) / v.size();
}

}  // namespace

absl::StatusOr<RateFit> FitPoints(const std::vector<double>& xs,
                                  const std::vector<double>& ys,
                                  RateModel model) {
  if (xs.size() != ys.size() || xs.size() < 2) {
    return absl::InvalidArgumentError("a fit needs at least two matched points");
  }
  std::vector<double> u, v;
  int masked = 0;
  for (size_t t = 0; t < xs.size(); ++t) {
    const bool bad_x = model == RateModel::kPowerLaw && !(xs[t] > 0.0);
    if (!(ys[t] > 0.0) || !std::isfinite(ys[t]) || bad_x) {
      ++masked;
      continue;
    }
    u.push_back(model == RateModel::kPowerLaw ? std::log(xs[t]) : xs[t]);
    v.push_back(std::log(ys[t]));
  }
  if (masked > 0.2 * xs.size()) {
    return absl::FailedPreconditionError(absl::StrCat(
        masked, " of ", xs.size(), " points are non-positive; refusing to fit"));
  }
  if (u.size() < 2) return absl::FailedPreconditionError("too few positive points");
  const double mu = MeanOf(u), mv = MeanOf(v);
  double suu = 0.0, suv = 0.0, svv = 0.0;
  for (size_t t = 0; t < u.size(); ++t) {
    suu += (u[t] - mu) * (u[t] - mu);
    suv += (u[t] - mu) * (v[t] - mv);
    svv += (v[t] - mv) * (v[t] - mv);
  }
  if (suu == 0.0) return absl::FailedPreconditionError("degenerate abscissae");
  RateFit f;
  f.model = model;
  f.slope = suv / suu;
  f.intercept = mv - f.slope * mu;
  f.r2 = svv > 0.0 ? std::clamp(suv * suv / (suu * svv), 0.0, 1.0) : 1.0;
  f.exponent = f.slope;
  f.base = std::exp(f.slope);
  f.masked = masked;
  f.lo = 0;
  f.hi = static_cast<int64_t>(xs.size()) - 1;
  return f;
}

absl::StatusOr<RateFit> FitTrace(const std::vector<double>& series,
                                 RateModel model, double drop_fraction) {
  if (series.size() < 50) {
    return absl::InvalidArgumentError("trace must have at least 50 entries");
  }
  const int64_t size = static_cast<int64_t>(series.size());
  int64_t lo = static_cast<int64_t>(std::floor(drop_fraction * size));
  if (model == RateModel::kPowerLaw) lo = std::max<int64_t>(lo, 1);
  std::vector<double> xs, ys;
  for (int64_t k = lo; k < size; ++k) {
    xs.push_back(static_cast<double>(k));
    ys.push_back(series[k]);
  }
  auto f = FitPoints(xs, ys, model);
  if (!f.ok()) return f.status();
  f->lo = lo;
  f->hi = size - 1;
  return f;
}

absl::StatusOr<SuboptimalResult> SuboptimalHorizon(
    std::vector<HorizonEstimate> estimates, double phi) {
  if (!(phi > 0.0)) return absl::InvalidArgumentError("phi must be > 0");
  std::sort(estimates.begin(), estimates.end(),
            [](const HorizonEstimate& a, const HorizonEstimate& b) {
              return a.horizon < b.horizon;
            });
  SuboptimalResult r;
  for (const HorizonEstimate& e : estimates) {
    const bool below = std::all_of(e.grad_norm_sq.begin(), e.grad_norm_sq.end(),
                                   [phi](double v) { return v < phi; });
    if (below) {
      r.reached = true;
      r.horizon = e.horizon;
      r.oracle_count = (e.horizon + 1) * e.m;
      return r;
    }
  }
  return r;
}

absl::StatusOr<ExperimentConfig> ExperimentConfigFromJson(
    const Json& j, const std::string& base_dir) {
  ExperimentConfig c;
  for (const char* key : {"graph", "scheme", "objective"}) {
    if (!j.contains(key)) return absl::InvalidArgumentError(absl::StrCat("config needs '", key, "'"));
  }
  auto g = Resolve(j.at("graph"), base_dir, "graph", c.input_hashes);
  if (!g.ok()) return g.status();
  auto s = Resolve(j.at("scheme"), base_dir, "scheme", c.input_hashes);
  if (!s.ok()) return s.status();
  auto o = Resolve(j.at("objective"), base_dir, "objective", c.input_hashes);
  if (!o.ok()) return o.status();
  c.graph = *g;
  c.scheme = *s;
  c.objective = *o;
  if (j.contains("horizons")) {
    for (const Json& k : j.at("horizons")) c.horizons.push_back(k.get<int64_t>());
  } else if (j.contains("K")) {
    c.horizons.push_back(j.at("K").get<int64_t>());
  } else {
    return absl::InvalidArgumentError("config needs 'K' or 'horizons'");
  }
  for (size_t t = 0; t < c.horizons.size(); ++t) {
    if (c.horizons[t] < 0 || (t > 0 && c.horizons[t] <= c.horizons[t - 1])) {
      return absl::InvalidArgumentError("horizons must be nonnegative and ascending");
    }
  }
  if (j.contains("seeds")) {
    const Json& sj = j.at("seeds");
    if (sj.is_object()) {
      c.first_seed = sj.value("first", uint64_t{1});
      c.runs = sj.value("count", 1);
    } else if (sj.is_array() && !sj.empty()) {
      c.first_seed = sj[0].get<uint64_t>();
      c.runs = static_cast<int>(sj.size());
    }
  }
  c.runs = j.value("runs", c.runs);
  if (c.runs < 1) return absl::InvalidArgumentError("runs must be >= 1");
  if (j.contains("phi")) c.phi = j.at("phi").get<double>();
  c.out_dir = j.value("output", std::string());
  c.baseline = j.value("baseline", false);
  c.force = j.value("force", false);
  if (j.contains("x0_seed")) c.x0_seed = j.at("x0_seed").get<uint64_t>();
  if (j.contains("C") && j.at("C").is_number()) c.c = j.at("C").get<double>();
  if (j.contains("record")) {
    const Json& r = j.at("record");
    c.flags.per_iteration = r.value("per_iteration", true);
    c.flags.grad_norms = r.value("grad_norms", true);
    c.flags.gap = r.value("gap", true);
    c.flags.v1_weighted_mean = r.value("v1_weighted_mean", true);
  }
  return c;
}

absl::StatusOr<Problem> LoadProblem(const Json& graph, const Json& scheme,
                                    const Json& objective) {
  Problem p;
  auto gp = GraphFromJson(graph);
  if (!gp.ok()) return gp.status();
  p.gp = *std::move(gp);
  p.a1 = CheckAssumption1(p.gp);
  auto sc = ComputeSpectralConstants(p.gp);
  if (!sc.ok()) return sc.status();
  p.sc = *std::move(sc);
  auto params = SchemeFromJson(scheme, p.gp.n);
  if (!params.ok()) return params.status();
  p.params = *std::move(params);
  auto obj = ObjectiveFromJson(objective);
  if (!obj.ok()) return obj.status();
  p.obj = *std::move(obj);
  if (p.obj->num_agents() != p.gp.n) {
    return absl::InvalidArgumentError(absl::StrCat(
        "objective has ", p.obj->num_agents(), " agents but the graph has ", p.gp.n));
  }
  return p;
}

ValidationReport ValidateForScheme(const Problem& p) {
  const ObjectiveConstants& c = p.obj->constants();
  return p.params.kind == SchemeKind::kS1
             ? ValidateAssumption4(p.params, p.sc, c.l1_smooth)
             : ValidateAssumption5(p.params, p.sc, c.l1_smooth, c.mu);
}

std::string TraceCsv(const Trajectory& mean, int n) {
  std::string out = "k,agent,consensus_x,consensus_y,grad_norm_sq,gap,samples_cum,eps_cum\n";
  for (const IterationRecord& r : mean.records) {
    const std::string eps =
        r.eps_cum.empty() ? "" : Fmt(*std::max_element(r.eps_cum.begin(), r.eps_cum.end()));
    absl::StrAppend(&out, r.k, ",mean,", Fmt(r.consensus_x), ",", Fmt(r.consensus_y), ",",
                    Fmt(MeanOf(r.grad_norm_sq)), ",", Fmt(r.gap), ",", r.samples_cum, ",",
                    eps, "\n");
  }
  (void)n;
  return out;
}

std::string AgentTraceCsv(const Trajectory& mean, int n) {
  std::string out = "k,agent,consensus_x,consensus_y,grad_norm_sq,gap,samples_cum,eps_cum\n";
  for (const IterationRecord& r : mean.records) {
    for (int i = 0; i < n; ++i) {
      const std::string g = r.grad_norm_sq.empty() ? "" : Fmt(r.grad_norm_sq[i]);
      const std::string eps = r.eps_cum.empty() ? "" : Fmt(r.eps_cum[i]);
      absl::StrAppend(&out, r.k, ",", i, ",", Fmt(r.consensus_x), ",", Fmt(r.consensus_y),
                      ",", g, ",", Fmt(r.gap), ",", r.samples_cum, ",", eps, "\n");
    }
  }
  return out;
}

absl::StatusOr<Json> RunExperiment(const ExperimentConfig& config) {
  auto problem = LoadProblem(config.graph, config.scheme, config.objective);
  if (!problem.ok()) return problem.status();
  Problem& p = *problem;
  if (config.baseline) p.params.noise_multiplier = 0.0;
  const ValidationReport validation = ValidateForScheme(p);
  if (!validation.overall && !config.force) {
    std::vector<std::string> failing;
    for (const InequalityCheck& e : validation.entries) {
      if (!e.satisfied) failing.push_back(e.name);
    }
    return absl::FailedPreconditionError(absl::StrCat(
        "scheme validation failed (", absl::StrJoin(failing, "; "),
        "); rerun with force to override"));
  }
  const double c = config.c.value_or(DatasetAdjacencyBound(*p.obj));
  if (!config.out_dir.empty()) {
    std::error_code ec;
    std::filesystem::create_directories(config.out_dir, ec);
    if (ec) return absl::PermissionDeniedError(absl::StrCat("cannot create ", config.out_dir));
  }
  Json summary;
  summary["schema_version"] = kSchemaVersion;
  summary["inputs"] = config.input_hashes;
  summary["runs"] = config.runs;
  summary["first_seed"] = config.first_seed;
  summary["baseline"] = config.baseline;
  summary["C"] = Num(c);
  summary["validation"] = ValidationToJson(validation);
  summary["finiteness"] = ValidationToJson(CheckBudgetFiniteness(p.params, p.gp));
  summary["constants"] = ConstantsToJson(p.obj->constants());
  if (p.params.kind == SchemeKind::kS1) {
    summary["theta"] = Num(Theta(p.params));
    summary["predicted_exponent"] = Num(-RateExponent(p.params));
  }
  Json horizons = Json::array();
  std::vector<HorizonEstimate> estimates;
  std::vector<double> fit_x, fit_y;
  for (int64_t horizon : config.horizons) {
    auto trace = ComputeSensitivityTrace(p.gp, p.params, c, horizon);
    if (!trace.ok()) return trace.status();
    auto budget = ComputeEpsilon(*trace, p.params, p.gp);
    if (!budget.ok()) return budget.status();
    const std::vector<std::vector<double>> cumulative = budget->Cumulative();
    RunSpec spec;
    spec.gp = &p.gp;
    spec.sc = &p.sc;
    spec.params = p.params;
    spec.obj = p.obj.get();
    spec.horizon = horizon;
    spec.flags = config.flags;
    if (!config.baseline) spec.eps_cumulative = &cumulative;
    if (config.x0_seed) spec.x0 = DefaultInitialState(p.gp.n, p.obj->dim(), *config.x0_seed);
    auto ens = RunEnsemble(spec, SeedRange(config.first_seed, config.runs));
    if (!ens.ok()) return ens.status();
    auto rates = RatesAt(p.params, horizon);
    if (!rates.ok()) return rates.status();
    Json h;
    h["K"] = horizon;
    h["m"] = rates->m;
    h["alpha"] = Num(rates->alpha);
    h["beta"] = Num(rates->beta);
    h["gamma"] = Num(rates->gamma);
    h["budget"] = BudgetToJson(*budget);
    Json finals = Json::array();
    for (double v : ens->mean.final_record.grad_norm_sq) finals.push_back(Num(v));
    h["final_grad_norm_sq"] = finals;
    h["final_grad_norm_sq_max"] = Num(ens->mean.final_record.MaxGradNormSq());
    h["final_gap"] = Num(ens->mean.final_record.gap);
    if (config.flags.per_iteration) {
      std::vector<double> series;
      for (const IterationRecord& r : ens->mean.records) series.push_back(r.MaxGradNormSq());
      for (RateModel model : {RateModel::kExponential, RateModel::kPowerLaw}) {
        auto fit = FitTrace(series, model);
        const char* key = model == RateModel::kExponential ? "fit_exponential" : "fit_power_law";
        h[key] = fit.ok() ? FitToJson(*fit) : Json(std::string(fit.status().message()));
      }
      if (!config.out_dir.empty()) {
        const std::string base = absl::StrCat(config.out_dir, "/trace_K", horizon);
        if (auto s = WriteTextFile(base + ".csv", TraceCsv(ens->mean, p.gp.n)); !s.ok()) return s;
        if (auto s = WriteTextFile(base + "_agents.csv", AgentTraceCsv(ens->mean, p.gp.n));
            !s.ok()) {
          return s;
        }
      }
    }
    horizons.push_back(h);
    estimates.push_back({horizon, ens->mean.final_record.grad_norm_sq, rates->m});
    fit_x.push_back(static_cast<double>(horizon) + 1.0);
    fit_y.push_back(ens->mean.final_record.MaxGradNormSq());
  }
  summary["horizons"] = horizons;
  if (fit_x.size() >= 2) {
    auto fit = FitPoints(fit_x, fit_y, RateModel::kPowerLaw);
    summary["fit_across_horizons"] =
        fit.ok() ? FitToJson(*fit) : Json(std::string(fit.status().message()));
  }
  if (config.phi) {
    auto sub = SuboptimalHorizon(estimates, *config.phi);
    if (!sub.ok()) return sub.status();
    summary["suboptimality"] = {{"phi", *config.phi},
                                {"reached", sub->reached},
                                {"N", sub->horizon},
                                {"oracle_count", sub->oracle_count}};
  }
  if (!config.out_dir.empty()) {
    if (auto s = WriteTextFile(config.out_dir + "/summary.json", summary.dump(2) + "\n");
        !s.ok()) {
      return s;
    }
  }
  return summary;
}

}  // namespace dpgt
