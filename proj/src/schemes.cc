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

#include "dpgt/schemes.h"

#include <algorithm>
#include <cmath>
#include <limits>

#include "absl/strings/str_cat.h"

namespace dpgt {
namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();

double MaxOf(const std::vector<double>& v) {
  return v.empty() ? 0.0 : *std::max_element(v.begin(), v.end());
}
double MinOf(const std::vector<double>& v) {
  return v.empty() ? 0.0 : *std::min_element(v.begin(), v.end());
}

double SumCap(const Vector& sums) {
  double cap = kInf;
  for (int i = 0; i < sums.size(); ++i) {
    if (sums(i) > 0.0) cap = std::min(cap, 1.0 / sums(i));
  }
  return cap;
}

bool AllFinite(std::initializer_list<double> xs) {
  for (double x : xs) {
    if (!std::isfinite(x)) return false;
  }
  return true;
}

}  // namespace

std::string SchemeKindName(SchemeKind kind) {
  return kind == SchemeKind::kS1 ? "S1" : "S2";
}

absl::Status ValidateSchemeParams(const SchemeParams& p, int n) {
  if (static_cast<int>(p.p_zeta.size()) != n ||
      static_cast<int>(p.p_eta.size()) != n) {
    return absl::InvalidArgumentError(
        absl::StrCat("p_zeta and p_eta must have length n = ", n));
  }
  for (double v : p.p_zeta) {
    if (!std::isfinite(v)) return absl::InvalidArgumentError("non-finite p_zeta");
  }
  for (double v : p.p_eta) {
    if (!std::isfinite(v)) return absl::InvalidArgumentError("non-finite p_eta");
  }
  if (!(p.noise_multiplier >= 0.0) || !std::isfinite(p.noise_multiplier)) {
    return absl::InvalidArgumentError("noise_multiplier must be finite and >= 0");
  }
  if (!(p.p_m >= 0.0) || !std::isfinite(p.p_m)) {
    return absl::InvalidArgumentError("p_m must be finite and >= 0");
  }
  if (p.kind == SchemeKind::kS1) {
    if (!AllFinite({p.a1, p.a2, p.a3, p.a4, p.p_alpha, p.p_beta, p.p_gamma})) {
      return absl::InvalidArgumentError("non-finite S1 parameter");
    }
    if (!(p.a1 > 0 && p.a2 > 0 && p.a3 > 0)) {
      return absl::InvalidArgumentError("S1 requires a1, a2, a3 > 0");
    }
    if (!(p.a4 >= 0)) return absl::InvalidArgumentError("S1 requires a4 >= 0");
    if (!(p.p_alpha > 0 && p.p_beta > 0 && p.p_gamma > 0)) {
      return absl::InvalidArgumentError("S1 requires positive step exponents");
    }
  } else {
    if (!AllFinite({p.alpha, p.beta, p.gamma})) {
      return absl::InvalidArgumentError("non-finite S2 parameter");
    }
    if (!(p.alpha > 0 && p.beta > 0 && p.gamma > 0)) {
      return absl::InvalidArgumentError("S2 requires alpha, beta, gamma > 0");
    }
    for (size_t i = 0; i < p.p_zeta.size(); ++i) {
      if (!(p.p_zeta[i] > 0 && p.p_eta[i] > 0)) {
        return absl::InvalidArgumentError("S2 requires noise bases > 0");
      }
    }
  }
  return absl::OkStatus();
}

absl::StatusOr<Rates> RatesAt(const SchemeParams& p, int64_t horizon) {
  if (horizon < 0) return absl::InvalidArgumentError("horizon K must be >= 0");
  Rates r;
  r.kind = p.kind;
  r.horizon = horizon;
  r.p_zeta = p.p_zeta;
  r.p_eta = p.p_eta;
  r.noise_multiplier = p.noise_multiplier;
  const double kp1 = static_cast<double>(horizon) + 1.0;
  if (p.kind == SchemeKind::kS1) {
    r.alpha = p.a1 / std::pow(kp1, p.p_alpha);
    r.beta = p.a2 / std::pow(kp1, p.p_beta);
    r.gamma = p.a3 / std::pow(kp1, p.p_gamma);
    r.m_real = std::floor(p.a4 * std::pow(static_cast<double>(horizon), p.p_m)) + 1.0;
  } else {
    r.alpha = p.alpha;
    r.beta = p.beta;
    r.gamma = p.gamma;
    r.m_real = std::floor(std::pow(p.p_m, static_cast<double>(horizon))) + 1.0;
  }
  // 2^63 is the first double that does not fit in int64.
  constexpr double kTwo63 = 9223372036854775808.0;
  r.m = r.m_real >= kTwo63 ? std::numeric_limits<int64_t>::max()
                           : static_cast<int64_t>(r.m_real);
  return r;
}

double Rates::SigmaZeta(int agent, int64_t k) const {
  const double e = p_zeta[agent];
  return noise_multiplier * (kind == SchemeKind::kS1
                                 ? std::pow(static_cast<double>(k) + 1.0, e)
                                 : std::pow(e, static_cast<double>(horizon)));
}

double Rates::SigmaEta(int agent, int64_t k) const {
  const double e = p_eta[agent];
  return noise_multiplier * (kind == SchemeKind::kS1
                                 ? std::pow(static_cast<double>(k) + 1.0, e)
                                 : std::pow(e, static_cast<double>(horizon)));
}

double Rates::MaxSigmaZeta(int64_t k) const {
  double m = 0.0;
  for (size_t i = 0; i < p_zeta.size(); ++i) m = std::max(m, SigmaZeta(i, k));
  return m;
}

double Rates::MaxSigmaEta(int64_t k) const {
  double m = 0.0;
  for (size_t i = 0; i < p_eta.size(); ++i) m = std::max(m, SigmaEta(i, k));
  return m;
}

void ValidationReport::Less(std::string name, double lhs, double rhs) {
  InequalityCheck c{std::move(name), lhs, rhs, true, lhs < rhs, rhs - lhs};
  overall = overall && c.satisfied;
  entries.push_back(std::move(c));
}

void ValidationReport::AtLeast(std::string name, double lhs, double rhs) {
  InequalityCheck c{std::move(name), lhs, rhs, false,
                    lhs >= rhs - kNonStrictTolerance, lhs - rhs};
  overall = overall && c.satisfied;
  entries.push_back(std::move(c));
}

ValidationReport ValidateAssumption4(const SchemeParams& p,
                                     const SpectralConstants& sc,
                                     double l1_smooth) {
  ValidationReport rep;
  const double n = static_cast<double>(sc.v1.size());
  rep.Less("a1 < alpha_cap", p.a1, sc.alpha_cap);
  rep.Less("a2 < beta_cap", p.a2, sc.beta_cap);
  rep.Less("a3 < n/(4 v1'v2 L)", p.a3, n / (4.0 * sc.V1DotV2() * l1_smooth));
  rep.Less("1/2 < p_beta", 0.5, p.p_beta);
  rep.Less("p_beta < p_alpha", p.p_beta, p.p_alpha);
  rep.Less("p_alpha < p_gamma", p.p_alpha, p.p_gamma);
  rep.Less("p_gamma < 1", p.p_gamma, 1.0);
  rep.AtLeast("p_m - p_beta >= 1", p.p_m - p.p_beta, 1.0);
  rep.AtLeast("2 p_gamma - p_alpha >= 1", 2.0 * p.p_gamma - p.p_alpha, 1.0);
  const double zmax = std::max(MaxOf(p.p_zeta), 0.0);
  const double emax = std::max(MaxOf(p.p_eta), 0.0);
  rep.AtLeast("2 p_alpha - p_beta - 2 max(p_zeta, 0) >= 1",
              2.0 * p.p_alpha - p.p_beta - 2.0 * zmax, 1.0);
  rep.AtLeast("p_gamma + 2 p_beta - 2 max(p_eta, 0) >= 2",
              p.p_gamma + 2.0 * p.p_beta - 2.0 * emax, 2.0);
  rep.theta = Theta(p);
  return rep;
}

QCaps ComputeQCaps(const SpectralConstants& sc, int n, double l1_smooth,
                   double mu) {
  const double nn = n;
  const double l = l1_smooth;
  const double v12 = sc.V1DotV2();
  const double nv1 = sc.V1Norm(), nv2 = sc.V2Norm();
  const double ind = mu == 0.0 ? 1.0 : 0.0;
  QCaps q;
  q.q1 = std::min(nn * std::sqrt(3.0 * nn) * sc.r1 / (24.0 * nv2 * l),
                  sc.r1 / (2.0 * nv2 * l) *
                      std::sqrt(mu / (12.0 * l + 2.0 * mu) + ind / 2.0));
  q.q2 = std::min(
      {std::sqrt(3.0) * sc.r2 / (6.0 * nn * l),
       std::sqrt(3.0) * v12 * sc.r2 / (36.0 * nv1 * nv2 * l),
       std::sqrt(6.0) * v12 * sc.r1 * sc.r2 /
           (144.0 * sc.rho_l1 * nv1 * nv2 * l),
       std::sqrt(6.0) * v12 * sc.r2 / (12.0 * nv1 * nv2 * l) *
           std::sqrt(mu / (36.0 * l + 7.0 * mu) + ind / 7.0)});
  return q;
}

ValidationReport ValidateAssumption5(const SchemeParams& p,
                                     const SpectralConstants& sc,
                                     double l1_smooth, double mu) {
  ValidationReport rep;
  const int n = static_cast<int>(sc.v1.size());
  const double l = l1_smooth;
  rep.Less("beta < beta_cap", p.beta, sc.beta_cap);
  rep.Less("alpha < alpha_cap", p.alpha, sc.alpha_cap);
  rep.Less("alpha < sqrt2 v1'v2 r2 beta/(12 rho(L1) |v1| L)", p.alpha,
           std::sqrt(2.0) * sc.V1DotV2() * sc.r2 * p.beta /
               (12.0 * sc.rho_l1 * sc.V1Norm() * l));
  for (int i = 0; i < static_cast<int>(p.p_zeta.size()); ++i) {
    rep.Less(absl::StrCat("0 < p_zeta[", i, "]"), 0.0, p.p_zeta[i]);
    rep.Less(absl::StrCat("p_zeta[", i, "] < 1"), p.p_zeta[i], 1.0);
  }
  for (int i = 0; i < static_cast<int>(p.p_eta.size()); ++i) {
    rep.Less(absl::StrCat("0 < p_eta[", i, "]"), 0.0, p.p_eta[i]);
    rep.Less(absl::StrCat("p_eta[", i, "] < 1"), p.p_eta[i], 1.0);
  }
  rep.Less("p_m > 1", 1.0, p.p_m);
  const QCaps q = ComputeQCaps(sc, n, l, mu);
  rep.q1 = q.q1;
  rep.q2 = q.q2;
  rep.Less("gamma < 1", p.gamma, 1.0);
  rep.Less("gamma < n/(20 v1'v2 L)", p.gamma,
           n / (20.0 * sc.V1DotV2() * l));
  rep.Less("gamma < Q1 alpha", p.gamma, q.q1 * p.alpha);
  rep.Less("gamma < Q2 beta", p.gamma, q.q2 * p.beta);
  return rep;
}

double Theta(const SchemeParams& p) {
  const double zmax = std::max(MaxOf(p.p_zeta), 0.0);
  const double emax = std::max(MaxOf(p.p_eta), 0.0);
  return std::min({p.p_m - p.p_beta, 2.0 * p.p_alpha - p.p_beta - 2.0 * zmax,
                   2.0 * p.p_beta - 2.0 * emax});
}

double RateExponent(const SchemeParams& p) { return Theta(p) - p.p_gamma; }

PhiExponents PhiConstruction(double phi) {
  PhiExponents e;
  e.p_alpha = std::max(1.0 - phi / 5.0, 0.9);
  e.p_beta = std::max(2.0 / 3.0 * (1.0 - phi / 5.0), 0.6);
  e.p_gamma = std::max(1.0 - phi / 10.0, 0.9);
  e.p_m = std::max(2.0 - phi / 10.0, 39.0 / 20.0);
  e.p_noise = std::max(phi / 10.0, 1.0 / 20.0);
  return e;
}

ValidationReport CheckBudgetFiniteness(const SchemeParams& p,
                                       const GraphPair& gp) {
  ValidationReport rep;
  const double row_cap = SumCap(gp.RowSums());
  const double col_cap = SumCap(gp.ColSums());
  if (p.kind == SchemeKind::kS1) {
    rep.Less("0 < p_m - p_beta + min(min p_eta - 1, 0)", 0.0,
             p.p_m - p.p_beta + std::min(MinOf(p.p_eta) - 1.0, 0.0));
    rep.Less("0 < p_m + min(0, p_gamma - p_alpha - p_beta) + "
             "min(min p_zeta - 1, 0)",
             0.0,
             p.p_m + std::min(0.0, p.p_gamma - p.p_alpha - p.p_beta) +
                 std::min(MinOf(p.p_zeta) - 1.0, 0.0));
    rep.Less("a1 < 1/max row sum of R", p.a1, row_cap);
    rep.Less("a2 < 1/max column sum of C", p.a2, col_cap);
  } else {
    double worst = 0.0;
    for (size_t i = 0; i < p.p_zeta.size(); ++i) {
      rep.Less(absl::StrCat("0 < p_zeta[", i, "] < 1 (lower)"), 0.0, p.p_zeta[i]);
      rep.Less(absl::StrCat("0 < p_zeta[", i, "] < 1 (upper)"), p.p_zeta[i], 1.0);
      rep.Less(absl::StrCat("0 < p_eta[", i, "] < 1 (lower)"), 0.0, p.p_eta[i]);
      rep.Less(absl::StrCat("0 < p_eta[", i, "] < 1 (upper)"), p.p_eta[i], 1.0);
      worst = std::max({worst, 1.0 / p.p_zeta[i], 1.0 / p.p_eta[i]});
    }
    rep.Less("p_m > max 1/p", worst, p.p_m);
    rep.Less("alpha < 1/max row sum of R", p.alpha, row_cap);
    rep.Less("beta < 1/max column sum of C", p.beta, col_cap);
  }
  return rep;
}

}  // namespace dpgt
