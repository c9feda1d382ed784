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

#ifndef DPGT_PRIVACY_ACCOUNTANT_H_
#define DPGT_PRIVACY_ACCOUNTANT_H_

#include <cstdint>
#include <string>
#include <vector>

#include "absl/status/statusor.h"
#include "dpgt/engine.h"
#include "dpgt/graph_spectral.h"
#include "dpgt/objectives.h"
#include "dpgt/schemes.h"

namespace dpgt {

// Index of the single sample where two equally sized datasets differ.
absl::StatusOr<int> DifferingIndex(const Dataset& a, const Dataset& b);

// (2^tau + 1) sqrt(d) L2 max ||xi||^tau over both datasets.
absl::StatusOr<double> AdjacencyConstant(const Objective& obj, const Dataset& a,
                                         const Dataset& b);

// The same bound over every dataset of the objective; a worst case over any
// single-sample replacement drawn from the same support.
double DatasetAdjacencyBound(const Objective& obj);

// sup over a grid of x of ||g(x, xi_l0) - g(x, xi'_l0)||_1.
absl::StatusOr<double> EmpiricalAdjacencyConstant(const Objective& obj,
                                                  const Dataset& a,
                                                  const Dataset& b,
                                                  int points, double box,
                                                  uint64_t seed);

// Per-agent l1 sensitivity bounds, indexed [agent][k] for k = 0..K.
struct SensitivityTrace {
  double c = 0.0;
  int64_t horizon = 0;
  double m = 1.0;
  std::vector<std::vector<double>> dx;
  std::vector<std::vector<double>> dy;
};

absl::StatusOr<SensitivityTrace> ComputeSensitivityTrace(
    const GraphPair& gp, const SchemeParams& params, double c, int64_t horizon);

// The same bounds by direct evaluation of the double sums; O(K^2).
absl::StatusOr<SensitivityTrace> DirectSensitivityTrace(
    const GraphPair& gp, const SchemeParams& params, double c, int64_t horizon);

struct BudgetReport {
  int64_t horizon = 0;
  std::vector<double> eps;  // per agent; +inf when some sigma is 0
  double eps_max = 0.0;
  std::vector<std::vector<double>> increments;  // [agent][k]
  ValidationReport finiteness;
  std::string tail_order;

  // Partial sums of the increments, [agent][k].
  std::vector<std::vector<double>> Cumulative() const;
};

absl::StatusOr<BudgetReport> ComputeEpsilon(const SensitivityTrace& trace,
                                            const SchemeParams& params,
                                            const GraphPair& gp);

// max_i eps_i for a run with horizon K.
absl::StatusOr<double> EpsilonAtHorizon(const GraphPair& gp,
                                        const SchemeParams& params, double c,
                                        int64_t horizon);

std::string TailOrder(const SchemeParams& params);

// Realized per-iteration differences of two runs on adjacent datasets that
// consume identical broadcasts and sample indices. [agent][k], k = 0..K.
struct CoupledDifferences {
  std::vector<std::vector<double>> dx;
  std::vector<std::vector<double>> dy;
};

struct CoupledRunSpec {
  const GraphPair* gp = nullptr;
  const SpectralConstants* sc = nullptr;
  SchemeParams params;
  const Objective* obj = nullptr;
  int agent = 0;
  Dataset alt_dataset;
  int64_t horizon = 0;
  Matrix x0;
  // Never draw the differing sample.
  bool exclude_differing = false;
};

absl::StatusOr<CoupledDifferences> CoupledPairRun(const CoupledRunSpec& spec,
                                                  uint64_t seed);

struct MicroDpReport {
  double epsilon = 0.0;
  double bound = 0.0;  // e^epsilon
  double worst_ratio = 0.0;
  double worst_allowed = 0.0;  // e^epsilon (1 + 3 relative standard errors)
  int events = 0;
  int64_t trials = 0;
  bool pass = false;
};

struct MicroDpSpec {
  const GraphPair* gp = nullptr;
  const SpectralConstants* sc = nullptr;
  SchemeParams params;
  const Objective* obj = nullptr;
  int agent = 0;
  Dataset alt_dataset;
  int64_t horizon = 0;
  Matrix x0;
  double c = 0.0;  // adjacency constant used for the budget
  int64_t trials = 1000000;
  // Events whose probability is below this under both datasets are skipped.
  double min_probability = 1e-3;
  uint64_t seed = 1;
};

absl::StatusOr<MicroDpReport> MicroDpCheck(const MicroDpSpec& spec);

}  // namespace dpgt

#endif  // DPGT_PRIVACY_ACCOUNTANT_H_
