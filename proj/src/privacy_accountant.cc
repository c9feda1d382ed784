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

#include "dpgt/privacy_accountant.h"

#include <algorithm>
#include <cmath>
#include <limits>

#include "absl/strings/str_cat.h"
#include "absl/strings/str_format.h"
#include "dpgt/rng.h"

namespace dpgt {
namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();

double Ratio(double sensitivity, double sigma) {
  if (sensitivity == 0.0) return 0.0;
  if (sigma == 0.0) return kInf;
  return sensitivity / sigma;
}

absl::Status CheckAlt(const Objective& obj, int agent, const Dataset& alt) {
  if (agent < 0 || agent >= obj.num_agents()) {
    return absl::OutOfRangeError(absl::StrCat("agent ", agent, " out of range"));
  }
  auto idx = DifferingIndex(obj.dataset(agent), alt);
  return idx.ok() ? absl::OkStatus() : idx.status();
}

absl::StatusOr<std::unique_ptr<Objective>> AltObjective(const Objective& obj,
                                                        int agent,
                                                        const Dataset& alt) {
  std::vector<Dataset> ds = obj.datasets();
  ds[agent] = alt;
  ds[agent].agent = agent;
  return obj.WithDatasets(std::move(ds));
}

}  // namespace

absl::StatusOr<int> DifferingIndex(const Dataset& a, const Dataset& b) {
  if (a.size() != b.size() || a.r != b.r) {
    return absl::InvalidArgumentError("adjacent datasets must have equal shape");
  }
  int found = -1;
  for (int l = 0; l < a.size(); ++l) {
    if (a.samples[l] != b.samples[l]) {
      if (found >= 0) {
        return absl::InvalidArgumentError(
            "datasets differ in more than one sample; not adjacent");
      }
      found = l;
    }
  }
  if (found < 0) {
    return absl::InvalidArgumentError("datasets are identical; no differing pair");
  }
  return found;
}

absl::StatusOr<double> AdjacencyConstant(const Objective& obj, const Dataset& a,
                                         const Dataset& b) {
  auto idx = DifferingIndex(a, b);
  if (!idx.ok()) return idx.status();
  const ObjectiveConstants& k = obj.constants();
  double max_norm = 0.0;
  for (const Dataset* ds : {&a, &b}) {
    for (const Vector& xi : ds->samples) max_norm = std::max(max_norm, xi.norm());
  }
  return (std::pow(2.0, k.tau) + 1.0) * std::sqrt(static_cast<double>(obj.dim())) *
         k.l2_holder * std::pow(max_norm, k.tau);
}

double DatasetAdjacencyBound(const Objective& obj) {
  const ObjectiveConstants& k = obj.constants();
  double max_norm = 0.0;
  for (const Dataset& ds : obj.datasets()) {
    for (const Vector& xi : ds.samples) max_norm = std::max(max_norm, xi.norm());
  }
  return (std::pow(2.0, k.tau) + 1.0) * std::sqrt(static_cast<double>(obj.dim())) *
         k.l2_holder * std::pow(max_norm, k.tau);
}

absl::StatusOr<double> EmpiricalAdjacencyConstant(const Objective& obj,
                                                  const Dataset& a,
                                                  const Dataset& b,
                                                  int points, double box,
                                                  uint64_t seed) {
  auto idx = DifferingIndex(a, b);
  if (!idx.ok()) return idx.status();
  const Vector& xi = a.samples[*idx];
  const Vector& xi_alt = b.samples[*idx];
  KeyedStream rng(seed, 0, 0, Role::kMisc);
  double sup = 0.0;
  for (int t = 0; t < points; ++t) {
    Vector x(obj.dim());
    for (int j = 0; j < obj.dim(); ++j) x(j) = box * (2.0 * rng.Uniform() - 1.0);
    sup = std::max(sup, (obj.SampleGradient(x, xi) - obj.SampleGradient(x, xi_alt))
                            .lpNorm<1>());
  }
  return sup;
}

absl::StatusOr<SensitivityTrace> ComputeSensitivityTrace(
    const GraphPair& gp, const SchemeParams& params, double c,
    int64_t horizon) {
  if (!(c >= 0.0)) return absl::InvalidArgumentError("C must be >= 0");
  if (absl::Status s = ValidateSchemeParams(params, gp.n); !s.ok()) return s;
  auto rates = RatesAt(params, horizon);
  if (!rates.ok()) return rates.status();
  SensitivityTrace t;
  t.c = c;
  t.horizon = horizon;
  t.m = rates->m_real;
  const Vector rows = gp.RowSums(), cols = gp.ColSums();
  t.dx.assign(gp.n, std::vector<double>(horizon + 1));
  t.dy.assign(gp.n, std::vector<double>(horizon + 1));
  const double cm = c / t.m;
  for (int i = 0; i < gp.n; ++i) {
    const double qy = std::abs(1.0 - rates->beta * cols(i));
    const double qx = std::abs(1.0 - rates->alpha * rows(i));
    std::vector<double>& dx = t.dx[i];
    std::vector<double>& dy = t.dy[i];
    dx[0] = 0.0;
    dy[0] = cm;
    for (int64_t k = 1; k <= horizon; ++k) {
      dy[k] = qy * dy[k - 1] + 2.0 * cm;
      dx[k] = qx * dx[k - 1] + rates->gamma * dy[k - 1];
    }
  }
  return t;
}

absl::StatusOr<SensitivityTrace> DirectSensitivityTrace(
    const GraphPair& gp, const SchemeParams& params, double c,
    int64_t horizon) {
  auto rates = RatesAt(params, horizon);
  if (!rates.ok()) return rates.status();
  SensitivityTrace t;
  t.c = c;
  t.horizon = horizon;
  t.m = rates->m_real;
  const Vector rows = gp.RowSums(), cols = gp.ColSums();
  t.dx.assign(gp.n, std::vector<double>(horizon + 1, 0.0));
  t.dy.assign(gp.n, std::vector<double>(horizon + 1, 0.0));
  const double cm = c / t.m;
  for (int i = 0; i < gp.n; ++i) {
    const double qy = std::abs(1.0 - rates->beta * cols(i));
    const double qx = std::abs(1.0 - rates->alpha * rows(i));
    for (int64_t k = 0; k <= horizon; ++k) {
      double s = std::pow(qy, static_cast<double>(k)) * cm;
      for (int64_t l = 0; l < k; ++l) s += std::pow(qy, static_cast<double>(l)) * 2.0 * cm;
      t.dy[i][k] = s;
    }
    for (int64_t k = 1; k <= horizon; ++k) {
      double s = 0.0;
      for (int64_t l = 0; l < k; ++l) {
        s += std::pow(qx, static_cast<double>(k - l - 1)) * t.dy[i][l];
      }
      t.dx[i][k] = rates->gamma * s;
    }
  }
  return t;
}

std::vector<std::vector<double>> BudgetReport::Cumulative() const {
  std::vector<std::vector<double>> out = increments;
  for (auto& row : out) {
    for (size_t k = 1; k < row.size(); ++k) row[k] += row[k - 1];
  }
  return out;
}

std::string TailOrder(const SchemeParams& p) {
  if (p.kind == SchemeKind::kS1) {
    const double min_eta = *std::min_element(p.p_eta.begin(), p.p_eta.end());
    const double min_zeta = *std::min_element(p.p_zeta.begin(), p.p_zeta.end());
    const double e = std::min(
        p.p_m - p.p_beta + std::min(min_eta - 1.0, 0.0),
        p.p_m + std::min(0.0, p.p_gamma - p.p_alpha - p.p_beta) +
            std::min(min_zeta - 1.0, 0.0));
    return absl::StrFormat("O(ln K / K^%.6g)", e);
  }
  double pmin = kInf;
  for (double v : p.p_zeta) pmin = std::min(pmin, v);
  for (double v : p.p_eta) pmin = std::min(pmin, v);
  return absl::StrFormat("O(K * %.6g^K)", 1.0 / (p.p_m * pmin));
}

absl::StatusOr<BudgetReport> ComputeEpsilon(const SensitivityTrace& trace,
                                            const SchemeParams& params,
                                            const GraphPair& gp) {
  auto rates = RatesAt(params, trace.horizon);
  if (!rates.ok()) return rates.status();
  if (static_cast<int>(trace.dx.size()) != gp.n) {
    return absl::InvalidArgumentError("trace does not match the graph size");
  }
  BudgetReport rep;
  rep.horizon = trace.horizon;
  rep.eps.assign(gp.n, 0.0);
  rep.increments.assign(gp.n, std::vector<double>(trace.horizon + 1));
  for (int i = 0; i < gp.n; ++i) {
    double sum = 0.0;
    for (int64_t k = 0; k <= trace.horizon; ++k) {
      const double inc = Ratio(trace.dx[i][k], rates->SigmaZeta(i, k)) +
                         Ratio(trace.dy[i][k], rates->SigmaEta(i, k));
      rep.increments[i][k] = inc;
      sum += inc;
    }
    rep.eps[i] = sum;
  }
  rep.eps_max = *std::max_element(rep.eps.begin(), rep.eps.end());
  rep.finiteness = CheckBudgetFiniteness(params, gp);
  rep.tail_order = TailOrder(params);
  return rep;
}

absl::StatusOr<double> EpsilonAtHorizon(const GraphPair& gp,
                                        const SchemeParams& params, double c,
                                        int64_t horizon) {
  auto trace = ComputeSensitivityTrace(gp, params, c, horizon);
  if (!trace.ok()) return trace.status();
  auto rep = ComputeEpsilon(*trace, params, gp);
  if (!rep.ok()) return rep.status();
  return rep->eps_max;
}

absl::StatusOr<CoupledDifferences> CoupledPairRun(const CoupledRunSpec& spec,
                                                  uint64_t seed) {
  if (spec.gp == nullptr || spec.sc == nullptr || spec.obj == nullptr) {
    return absl::InvalidArgumentError("coupled run spec is incomplete");
  }
  if (absl::Status s = CheckAlt(*spec.obj, spec.agent, spec.alt_dataset); !s.ok()) {
    // Identical datasets are allowed here: all differences are then zero.
    if (spec.obj->dataset(spec.agent).samples != spec.alt_dataset.samples) return s;
  }
  auto alt = AltObjective(*spec.obj, spec.agent, spec.alt_dataset);
  if (!alt.ok()) return alt.status();
  auto rates = RatesAt(spec.params, spec.horizon);
  if (!rates.ok()) return rates.status();
  int excluded = -1;
  if (spec.exclude_differing) {
    auto idx = DifferingIndex(spec.obj->dataset(spec.agent), spec.alt_dataset);
    if (idx.ok()) excluded = *idx;
  }
  const Engine a(*spec.gp, *spec.sc, *rates, *spec.obj);
  const Engine b(*spec.gp, *spec.sc, *rates, **alt);
  const int n = spec.gp->n;
  // Shared initialization draws.
  const SampleSets init = a.AllSampleIndices(0, seed, spec.agent, excluded);
  auto init_state = [&](const Engine& e, const Objective& obj) {
    EngineState s;
    s.x = spec.x0;
    s.g = Matrix(n, obj.dim());
    for (int i = 0; i < n; ++i) {
      s.g.row(i) =
          obj.AveragedGradient(i, spec.x0.row(i).transpose(), init[i]).transpose();
    }
    s.y = s.g;
    (void)e;
    return s;
  };
  for (int i = 0; i < n; ++i) {
    if (rates->m > spec.obj->dataset(i).size() - (i == spec.agent && excluded >= 0)) {
      return absl::FailedPreconditionError("sampling number exceeds dataset size");
    }
  }
  EngineState sa = init_state(a, *spec.obj);
  EngineState sb = init_state(b, **alt);
  CoupledDifferences out;
  out.dx.assign(n, std::vector<double>(spec.horizon + 1));
  out.dy.assign(n, std::vector<double>(spec.horizon + 1));
  for (int64_t k = 0; k <= spec.horizon; ++k) {
    for (int i = 0; i < n; ++i) {
      out.dx[i][k] = (sa.x.row(i) - sb.x.row(i)).lpNorm<1>();
      out.dy[i][k] = (sa.y.row(i) - sb.y.row(i)).lpNorm<1>();
    }
    if (k == spec.horizon) break;
    const Broadcast obs = a.Perturb(sa, seed);
    const SampleSets samples = a.AllSampleIndices(k + 1, seed, spec.agent, excluded);
    if (absl::Status s = a.Advance(sa, obs, samples); !s.ok()) return s;
    if (absl::Status s = b.Advance(sb, obs, samples); !s.ok()) return s;
  }
  return out;
}

namespace {

struct Constraint {
  int coord;
  double lo;
  double hi;
};
using Event = std::vector<Constraint>;

bool Contains(const Event& e, const std::vector<double>& o) {
  for (const Constraint& c : e) {
    if (!(o[c.coord] > c.lo && o[c.coord] <= c.hi)) return false;
  }
  return true;
}

// Observations of one agent: (x-broadcasts, y-broadcasts) for k = 0..K.
absl::Status Observe(const Engine& engine, const Matrix& x0, int agent,
                     int64_t horizon, uint64_t seed, std::vector<double>& out) {
  auto s = engine.Initialize(x0, seed);
  if (!s.ok()) return s.status();
  const int64_t steps = horizon + 1;
  for (int64_t k = 0; k <= horizon; ++k) {
    const Broadcast b = engine.Perturb(*s, seed);
    out[k] = b.x(agent, 0);
    out[steps + k] = b.y(agent, 0);
    if (k == horizon) break;
    const SampleSets samples = engine.AllSampleIndices(k + 1, seed);
    if (absl::Status st = engine.Advance(*s, b, samples); !st.ok()) return st;
  }
  return absl::OkStatus();
}

}  // namespace

absl::StatusOr<MicroDpReport> MicroDpCheck(const MicroDpSpec& spec) {
  if (spec.gp == nullptr || spec.sc == nullptr || spec.obj == nullptr) {
    return absl::InvalidArgumentError("micro DP spec is incomplete");
  }
  if (spec.horizon > 2 || spec.obj->dim() != 1 || spec.gp->n > 4) {
    return absl::InvalidArgumentError(
        "micro DP check is limited to K <= 2, d = 1 and n <= 4");
  }
  if (absl::Status s = CheckAlt(*spec.obj, spec.agent, spec.alt_dataset); !s.ok()) {
    if (spec.obj->dataset(spec.agent).samples != spec.alt_dataset.samples) return s;
  }
  auto alt = AltObjective(*spec.obj, spec.agent, spec.alt_dataset);
  if (!alt.ok()) return alt.status();
  auto rates = RatesAt(spec.params, spec.horizon);
  if (!rates.ok()) return rates.status();
  auto trace = ComputeSensitivityTrace(*spec.gp, spec.params, spec.c, spec.horizon);
  if (!trace.ok()) return trace.status();
  auto budget = ComputeEpsilon(*trace, spec.params, *spec.gp);
  if (!budget.ok()) return budget.status();

  const Engine ea(*spec.gp, *spec.sc, *rates, *spec.obj);
  const Engine eb(*spec.gp, *spec.sc, *rates, **alt);
  const int dims = 2 * static_cast<int>(spec.horizon + 1);
  std::vector<double> obs(dims);

  // Pilot draws fix the rectangle family before counting.
  const int pilot = 20000;
  std::vector<std::vector<double>> pilot_obs(dims, std::vector<double>(pilot));
  for (int t = 0; t < pilot; ++t) {
    const uint64_t s = HashKey(spec.seed, t, 0, Role::kMisc);
    if (absl::Status st = Observe(ea, spec.x0, spec.agent, spec.horizon, s, obs);
        !st.ok()) {
      return st;
    }
    for (int j = 0; j < dims; ++j) pilot_obs[j][t] = obs[j];
  }
  const std::vector<double> levels = {0.02, 0.05, 0.1, 0.2, 0.3, 0.4, 0.5,
                                      0.6, 0.7, 0.8, 0.9, 0.95, 0.98};
  std::vector<std::vector<double>> thr(dims, std::vector<double>(levels.size()));
  for (int j = 0; j < dims; ++j) {
    std::sort(pilot_obs[j].begin(), pilot_obs[j].end());
    for (size_t q = 0; q < levels.size(); ++q) {
      thr[j][q] = pilot_obs[j][static_cast<size_t>(levels[q] * (pilot - 1))];
    }
  }
  constexpr double kLo = -std::numeric_limits<double>::infinity();
  constexpr double kHi = std::numeric_limits<double>::infinity();
  std::vector<Event> events;
  for (int j = 0; j < dims; ++j) {
    for (size_t q = 0; q < levels.size(); ++q) {
      events.push_back({{j, kLo, thr[j][q]}});
      events.push_back({{j, thr[j][q], kHi}});
      if (q + 1 < levels.size()) events.push_back({{j, thr[j][q], thr[j][q + 1]}});
    }
  }
  const size_t quad_levels[] = {3, 6, 9};  // 0.2, 0.5, 0.8
  for (int j1 = 0; j1 < dims; ++j1) {
    for (int j2 = j1 + 1; j2 < dims; ++j2) {
      for (size_t q : quad_levels) {
        const double t1 = thr[j1][q], t2 = thr[j2][q];
        events.push_back({{j1, kLo, t1}, {j2, kLo, t2}});
        events.push_back({{j1, kLo, t1}, {j2, t2, kHi}});
        events.push_back({{j1, t1, kHi}, {j2, kLo, t2}});
        events.push_back({{j1, t1, kHi}, {j2, t2, kHi}});
      }
    }
  }
  for (size_t q = 0; q < levels.size(); ++q) {
    Event low, high;
    for (int j = 0; j < dims; ++j) {
      low.push_back({j, kLo, thr[j][q]});
      high.push_back({j, thr[j][q], kHi});
    }
    events.push_back(low);
    events.push_back(high);
  }

  std::vector<int64_t> count_a(events.size(), 0), count_b(events.size(), 0);
  for (int64_t t = 0; t < spec.trials; ++t) {
    const uint64_t sa = HashKey(spec.seed, t, 1, Role::kMisc);
    const uint64_t sb = HashKey(spec.seed, t, 2, Role::kMisc);
    if (absl::Status st = Observe(ea, spec.x0, spec.agent, spec.horizon, sa, obs);
        !st.ok()) {
      return st;
    }
    for (size_t e = 0; e < events.size(); ++e) count_a[e] += Contains(events[e], obs);
    if (absl::Status st = Observe(eb, spec.x0, spec.agent, spec.horizon, sb, obs);
        !st.ok()) {
      return st;
    }
    for (size_t e = 0; e < events.size(); ++e) count_b[e] += Contains(events[e], obs);
  }

  MicroDpReport rep;
  rep.epsilon = budget->eps[spec.agent];
  rep.bound = std::exp(rep.epsilon);
  rep.trials = spec.trials;
  rep.pass = true;
  double worst_excess = -kHi;
  const double nt = static_cast<double>(spec.trials);
  for (size_t e = 0; e < events.size(); ++e) {
    const double pa = count_a[e] / nt, pb = count_b[e] / nt;
    if (std::max(pa, pb) < spec.min_probability) continue;
    ++rep.events;
    if (pa == 0.0 || pb == 0.0) {
      rep.pass = false;
      rep.worst_ratio = kHi;
      continue;
    }
    const double rse =
        std::sqrt((1.0 - pa) / (nt * pa) + (1.0 - pb) / (nt * pb));
    const double allowed = rep.bound * (1.0 + 3.0 * rse);
    const double ratio = std::max(pa / pb, pb / pa);
    if (ratio / allowed > worst_excess) {
      worst_excess = ratio / allowed;
      rep.worst_allowed = allowed;
    }
    rep.worst_ratio = std::max(rep.worst_ratio, ratio);
    if (ratio > allowed) rep.pass = false;
  }
  return rep;
}

}  // namespace dpgt
