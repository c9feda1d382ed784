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

#include "dpgt/bound_oracle.h"

#include <algorithm>
#include <cmath>

#include "absl/strings/str_cat.h"

namespace dpgt {

absl::StatusOr<RecursionModel> BuildModel(const SpectralConstants& sc,
                                          const SchemeParams& params,
                                          const ObjectiveConstants& c, int d,
                                          int64_t horizon) {
  auto rates = RatesAt(params, horizon);
  if (!rates.ok()) return rates.status();
  RecursionInputs in;
  in.n = static_cast<int>(sc.v1.size());
  in.d = d;
  in.l1 = c.l1_smooth;
  in.mu = c.mu;
  in.sigma_g = c.sigma_g;
  in.r1 = sc.r1;
  in.r2 = sc.r2;
  in.v1_norm = sc.V1Norm();
  in.v2_norm = sc.V2Norm();
  in.v1_dot_v2 = sc.V1DotV2();
  in.rho_r = sc.rho_r;
  in.rho_c = sc.rho_c;
  in.rho_l1 = sc.rho_l1;
  in.alpha = rates->alpha;
  in.beta = rates->beta;
  in.gamma = rates->gamma;
  in.m = rates->m_real;
  if (!(in.alpha > 0.0 && in.alpha < sc.alpha_cap)) {
    return absl::FailedPreconditionError(absl::StrCat(
        "alpha_K = ", in.alpha, " violates 0 < alpha_K < alpha_cap = ", sc.alpha_cap));
  }
  if (!(in.beta > 0.0 && in.beta < sc.beta_cap)) {
    return absl::FailedPreconditionError(absl::StrCat(
        "beta_K = ", in.beta, " violates 0 < beta_K < beta_cap = ", sc.beta_cap));
  }
  const double gamma_cap = in.n / (4.0 * in.v1_dot_v2 * in.l1);
  if (!(in.gamma > 0.0 && in.gamma < gamma_cap)) {
    return absl::FailedPreconditionError(absl::StrCat(
        "gamma_K = ", in.gamma, " violates 0 < gamma_K < n/(4 v1'v2 L1) = ",
        gamma_cap));
  }
  const double n = in.n, l = in.l1, a = in.alpha, b = in.beta, g = in.gamma;
  const double r1a = in.r1 * a, r2b = in.r2 * b;
  const double v22 = in.v2_norm * in.v2_norm, v11 = in.v1_norm * in.v1_norm;
  const double w = in.v1_dot_v2;
  RecursionModel model;
  Eigen::Matrix3d& m = model.a;
  m(0, 0) = 1.0 - r1a + 4.0 * (1.0 + r1a) * v22 * g * g * l * l / (n * n * n * r1a);
  m(0, 1) = 2.0 * (1.0 + r1a) * g * g / r1a;
  m(0, 2) = 8.0 * (1.0 + r1a) * v22 * g * g * l / (n * n * r1a);
  m(1, 0) = 6.0 * (1.0 + r2b) *
            (n * in.rho_l1 * in.rho_l1 * a * a + 2.0 * v22 * g * g * l * l) * l * l /
            (n * r2b);
  m(1, 1) = 1.0 - r2b + 6.0 * (1.0 + r2b) * g * g * l * l / r2b;
  m(1, 2) = 24.0 * (1.0 + r2b) * v22 * g * g * l * l * l / r2b;
  m(2, 0) = w * (3.0 * n + 4.0 * w * g * l) * g * l * l / (2.0 * n * n * n);
  m(2, 1) = 3.0 * v11 * g / (2.0 * n * w);
  m(2, 2) = 1.0 - w * in.mu * g / n + 4.0 * w * w * g * g * l / (n * n);
  model.in = in;
  model.rates = *rates;
  model.s_eta.assign(horizon + 2, 0.0);
  for (int64_t k = 1; k <= horizon + 1; ++k) {
    const double s = rates->MaxSigmaEta(k - 1);
    model.s_eta[k] = model.s_eta[k - 1] + s * s;
  }
  return model;
}

Eigen::Vector3d RecursionModel::U(int64_t k) const {
  const RecursionInputs& in = this->in;
  const double n = in.n, d = in.d, l = in.l1, a = in.alpha, b = in.beta,
               g = in.gamma, m = in.m;
  const double r1a = in.r1 * a, r2b = in.r2 * b;
  const double v22 = in.v2_norm * in.v2_norm, v11 = in.v1_norm * in.v1_norm;
  const double w = in.v1_dot_v2;
  const double sg2 = in.sigma_g * in.sigma_g;
  const double rr2 = in.rho_r * in.rho_r, rc2 = in.rho_c * in.rho_c;
  const double sz = rates.MaxSigmaZeta(k), se = rates.MaxSigmaEta(k);
  const double sz2 = sz * sz, se2 = se * se;
  const double s_k = s_eta[std::min<size_t>(k, s_eta.size() - 1)];
  Eigen::Vector3d u;
  u(0) = 2.0 * n * d * rr2 * a * a * sz2 +
         2.0 * (1.0 + r1a) * v22 * g * g * sg2 / (n * n * r1a * m) +
         4.0 * d * (1.0 + r1a) * v22 * rc2 * b * b * g * g / (n * n * n * r1a) * s_k;
  u(1) = 12.0 * d * (1.0 + r2b) * v22 * rc2 * b * g * g * l * l / (n * in.r2) * s_k +
         (2.0 * n + 3.0 * n * r2b + (6.0 + 6.0 * r2b) * v22 * g * g * l * l) * sg2 /
             (in.r2 * m * b) +
         2.0 * n * d * rc2 * b * b * se2 +
         4.0 * (1.0 + r2b) * n * d * rr2 * a * a * l * l * sz2 / r2b;
  u(2) = w * (3.0 * n + 2.0 * w * g * l) * g * sg2 / (2.0 * n * n * m) +
         2.0 * d * v11 * rr2 * a * sz2 / n +
         w * d * rc2 * (3.0 * n + 2.0 * w * g * l) * b * b * g / (n * n * n) * s_k;
  return u;
}

ContractionReport ContractionCheck(const RecursionModel& model) {
  ContractionReport rep;
  rep.rho = SpectralRadius(model.a);
  rep.contracts = rep.rho < 1.0;
  const RecursionInputs& in = model.in;
  rep.s_tilde << 1.0 / (in.l1 * in.l1),
      in.v1_dot_v2 * in.v1_dot_v2 / (3.0 * in.v1_norm * in.v1_norm),
      in.mu > 0.0 ? 3.0 / in.mu : std::numeric_limits<double>::infinity();
  if (in.mu > 0.0) {
    rep.a_s_tilde = model.a * rep.s_tilde;
    rep.certificate = (rep.a_s_tilde.array() < rep.s_tilde.array()).all();
  } else {
    rep.a_s_tilde.setConstant(std::numeric_limits<double>::infinity());
    rep.certificate = false;
  }
  return rep;
}

absl::StatusOr<DominanceReport> DominanceCheck(const RecursionModel& model,
                                               const EnsembleTrajectory& ens,
                                               bool deterministic,
                                               double sigmas) {
  if (!deterministic && ens.runs < kMinDominanceRuns) {
    return absl::FailedPreconditionError(absl::StrCat(
        "ensemble has ", ens.runs, " runs; at least ", kMinDominanceRuns,
        " are needed for a dominance check (or mark the run deterministic)"));
  }
  const auto& recs = ens.mean.records;
  const auto& vars = ens.variance.records;
  if (recs.empty()) {
    return absl::InvalidArgumentError("ensemble has no per-iteration records");
  }
  auto v_of = [](const IterationRecord& r) {
    return Eigen::Vector3d(r.consensus_x, r.consensus_y, r.gap);
  };
  const double runs = std::max(1, ens.runs);
  auto se_of = [&](const IterationRecord& r) {
    if (deterministic) return Eigen::Vector3d::Zero().eval();
    return (v_of(r) / runs).cwiseSqrt().eval();
  };
  DominanceReport rep;
  rep.runs = ens.runs;
  rep.worst_excess = -std::numeric_limits<double>::infinity();
  const Eigen::Matrix3d a2 = model.a.cwiseAbs2();
  for (size_t k = 0; k < recs.size(); ++k) {
    const IterationRecord& next =
        k + 1 < recs.size() ? recs[k + 1] : ens.mean.final_record;
    const IterationRecord& next_var =
        k + 1 < recs.size() ? vars[k + 1] : ens.variance.final_record;
    const Eigen::Vector3d lhs = v_of(next);
    const Eigen::Vector3d rhs = model.a * v_of(recs[k]) + model.U(recs[k].k);
    const Eigen::Vector3d se_next = se_of(next_var);
    const Eigen::Vector3d se_cur = se_of(vars[k]);
    const Eigen::Vector3d slack =
        sigmas * (se_next.cwiseAbs2() + a2 * se_cur.cwiseAbs2()).cwiseSqrt();
    bool ok = true;
    for (int r = 0; r < 3; ++r) {
      const double excess = lhs(r) - rhs(r) - slack(r);
      const double scale = std::max({std::abs(rhs(r)), std::abs(lhs(r)), 1e-300});
      // Relative round-off allowance for the deterministic case.
      if (excess > 1e-12 * scale) {
        ok = false;
        ++rep.component_failures[r];
      }
      rep.worst_excess = std::max(rep.worst_excess, excess / scale);
    }
    ++rep.checked;
    if (ok) {
      ++rep.passed;
    } else if (rep.first_failure < 0) {
      rep.first_failure = recs[k].k;
    }
  }
  rep.pass_rate = rep.checked > 0 ? static_cast<double>(rep.passed) / rep.checked : 1.0;
  return rep;
}

}  // namespace dpgt
