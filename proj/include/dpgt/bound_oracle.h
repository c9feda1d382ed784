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

#ifndef DPGT_BOUND_ORACLE_H_
#define DPGT_BOUND_ORACLE_H_

#include <array>
#include <cstdint>
#include <vector>

#include "Eigen/Dense"
#include "absl/status/statusor.h"
#include "dpgt/engine.h"
#include "dpgt/graph_spectral.h"
#include "dpgt/objectives.h"
#include "dpgt/schemes.h"

namespace dpgt {

struct RecursionInputs {
  int n = 0;
  int d = 0;
  double l1 = 0.0;
  double mu = 0.0;
  double sigma_g = 0.0;
  double r1 = 0.0, r2 = 0.0;
  double v1_norm = 0.0, v2_norm = 0.0, v1_dot_v2 = 0.0;
  double rho_r = 0.0, rho_c = 0.0, rho_l1 = 0.0;
  double alpha = 0.0, beta = 0.0, gamma = 0.0;
  double m = 1.0;
};

// E V_{k+1} <= A E V_k + u_k with
// V_k = (E||(W1 x I) x_k||^2, E||(W2 x I) y_k||^2, E(F(x-bar_k) - F*)).
struct RecursionModel {
  Eigen::Matrix3d a;
  RecursionInputs in;
  Rates rates;
  // s_eta[k] = sum_{l < k} max_i sigma_eta_l^2, k = 0..K+1.
  std::vector<double> s_eta;

  Eigen::Vector3d U(int64_t k) const;
};

absl::StatusOr<RecursionModel> BuildModel(const SpectralConstants& sc,
                                          const SchemeParams& params,
                                          const ObjectiveConstants& c, int d,
                                          int64_t horizon);

struct ContractionReport {
  double rho = 0.0;
  bool contracts = false;
  Eigen::Vector3d s_tilde;
  Eigen::Vector3d a_s_tilde;
  bool certificate = false;  // A s~ < s~ entrywise
};

ContractionReport ContractionCheck(const RecursionModel& model);

struct DominanceReport {
  int runs = 0;
  int checked = 0;
  int passed = 0;
  double pass_rate = 0.0;
  double worst_excess = 0.0;  // max of (lhs - rhs - slack) / scale
  // Violations per coordinate (consensus x, consensus y, gap).
  std::array<int, 3> component_failures{0, 0, 0};
  int64_t first_failure = -1;
};

inline constexpr int kMinDominanceRuns = 30;

// Checks every k = 0..K with sigmas * propagated standard errors of slack.
// deterministic = true accepts a single run and uses zero standard error.
absl::StatusOr<DominanceReport> DominanceCheck(const RecursionModel& model,
                                               const EnsembleTrajectory& ens,
                                               bool deterministic = false,
                                               double sigmas = 3.0);

}  // namespace dpgt

#endif  // DPGT_BOUND_ORACLE_H_
