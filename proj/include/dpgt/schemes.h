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

#ifndef DPGT_SCHEMES_H_
#define DPGT_SCHEMES_H_

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "absl/status/status.h"
#include "absl/status/statusor.h"
#include "dpgt/graph_spectral.h"

namespace dpgt {

enum class SchemeKind { kS1, kS2 };

// Step-size, sampling and noise parameters. S1 uses a1..a4 and the
// exponents; S2 uses the constant step sizes. Noise scales are multiplied by
// noise_multiplier (0 turns the privacy noise off).
struct SchemeParams {
  SchemeKind kind = SchemeKind::kS1;
  double a1 = 0.0, a2 = 0.0, a3 = 0.0, a4 = 0.0;
  double p_alpha = 0.0, p_beta = 0.0, p_gamma = 0.0;
  double alpha = 0.0, beta = 0.0, gamma = 0.0;
  double p_m = 0.0;
  std::vector<double> p_zeta;
  std::vector<double> p_eta;
  double noise_multiplier = 1.0;
};

absl::Status ValidateSchemeParams(const SchemeParams& p, int n);

// Quantities fixed for a run with horizon K.
struct Rates {
  SchemeKind kind = SchemeKind::kS1;
  int64_t horizon = 0;
  double alpha = 0.0, beta = 0.0, gamma = 0.0;
  // Exact floor(a4 K^pm) + 1 (resp. floor(pm^K) + 1) as a double; m is the
  // same value saturated to int64.
  double m_real = 1.0;
  int64_t m = 1;
  std::vector<double> p_zeta;
  std::vector<double> p_eta;
  double noise_multiplier = 1.0;

  double SigmaZeta(int agent, int64_t k) const;
  double SigmaEta(int agent, int64_t k) const;
  double MaxSigmaZeta(int64_t k) const;
  double MaxSigmaEta(int64_t k) const;
};

absl::StatusOr<Rates> RatesAt(const SchemeParams& p, int64_t horizon);

struct InequalityCheck {
  std::string name;
  double lhs = 0.0;
  double rhs = 0.0;
  bool strict = true;
  bool satisfied = false;
  // rhs - lhs for "lhs < rhs" / "lhs >= rhs" forms oriented so that
  // positive means satisfied.
  double slack = 0.0;
};

struct ValidationReport {
  std::vector<InequalityCheck> entries;
  bool overall = true;
  std::optional<double> theta;
  std::optional<double> q1;
  std::optional<double> q2;

  void Less(std::string name, double lhs, double rhs);
  void AtLeast(std::string name, double lhs, double rhs);
};

// Tolerance for non-strict inequalities; only absorbs rounding, e.g.
// 2 * 0.95 - 0.9 evaluating just below 1.
inline constexpr double kNonStrictTolerance = 1e-12;

ValidationReport ValidateAssumption4(const SchemeParams& p,
                                     const SpectralConstants& sc,
                                     double l1_smooth);
ValidationReport ValidateAssumption5(const SchemeParams& p,
                                     const SpectralConstants& sc,
                                     double l1_smooth, double mu);

struct QCaps {
  double q1 = 0.0;
  double q2 = 0.0;
};
QCaps ComputeQCaps(const SpectralConstants& sc, int n, double l1_smooth,
                   double mu);

double Theta(const SchemeParams& p);
// theta - p_gamma; the predicted decay exponent of E||grad F||^2.
double RateExponent(const SchemeParams& p);

// Exponents of the oracle-complexity construction for a target phi.
struct PhiExponents {
  double p_alpha, p_beta, p_gamma, p_m, p_noise;
};
PhiExponents PhiConstruction(double phi);

ValidationReport CheckBudgetFiniteness(const SchemeParams& p,
                                       const GraphPair& gp);

std::string SchemeKindName(SchemeKind kind);

}  // namespace dpgt

#endif  // DPGT_SCHEMES_H_
