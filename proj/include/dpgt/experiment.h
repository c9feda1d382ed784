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

#ifndef DPGT_EXPERIMENT_H_
#define DPGT_EXPERIMENT_H_

#include <cstdint>
#include <map>
#include <memory>
#include <optional>
#include <string>
#include <vector>

#include "absl/status/statusor.h"
#include "dpgt/engine.h"
#include "dpgt/json_io.h"

namespace dpgt {

enum class RateModel { kPowerLaw, kExponential };

struct RateFit {
  RateModel model = RateModel::kPowerLaw;
  // Power law: value ~ c x^exponent. Exponential: value ~ c base^x.
  double exponent = 0.0;
  double base = 0.0;
  double slope = 0.0;
  double intercept = 0.0;
  double r2 = 0.0;
  int64_t lo = 0;
  int64_t hi = 0;
  int masked = 0;
};

// Least squares on (ln x, ln y) or (x, ln y). Non-positive y are masked;
// more than 20% masked is refused.
absl::StatusOr<RateFit> FitPoints(const std::vector<double>& xs,
                                  const std::vector<double>& ys,
                                  RateModel model);

// Fit of a per-iteration series indexed by k, dropping the first
// drop_fraction of iterations. Requires at least 50 entries.
absl::StatusOr<RateFit> FitTrace(const std::vector<double>& series,
                                 RateModel model, double drop_fraction = 0.2);

struct HorizonEstimate {
  int64_t horizon = 0;
  std::vector<double> grad_norm_sq;  // per agent, E||grad F(x_{i,K+1})||^2
  int64_t m = 1;
};

struct SuboptimalResult {
  bool reached = false;
  int64_t horizon = -1;
  int64_t oracle_count = 0;
};

// Smallest horizon whose estimate is below phi for every agent;
// oracle_count = (N + 1) m_N per agent.
absl::StatusOr<SuboptimalResult> SuboptimalHorizon(
    std::vector<HorizonEstimate> estimates, double phi);

struct ExperimentConfig {
  Json graph;
  Json scheme;
  Json objective;
  std::vector<int64_t> horizons;
  int runs = 1;
  uint64_t first_seed = 1;
  std::optional<double> phi;
  std::string out_dir;
  bool baseline = false;
  bool force = false;
  std::optional<uint64_t> x0_seed;
  // Adjacency constant; absent means the dataset-wide worst-case bound.
  std::optional<double> c;
  RecordFlags flags;
  std::map<std::string, std::string> input_hashes;
};

// Fields "graph", "scheme", "objective" are inline objects or paths
// relative to base_dir.
absl::StatusOr<ExperimentConfig> ExperimentConfigFromJson(
    const Json& j, const std::string& base_dir);

// Loaded inputs shared by the CLI subcommands.
struct Problem {
  GraphPair gp;
  SpectralConstants sc;
  Assumption1Report a1;
  SchemeParams params;
  std::unique_ptr<Objective> obj;
};

absl::StatusOr<Problem> LoadProblem(const Json& graph, const Json& scheme,
                                    const Json& objective);

ValidationReport ValidateForScheme(const Problem& p);

std::string TraceCsv(const Trajectory& mean, int n);
std::string AgentTraceCsv(const Trajectory& mean, int n);

// Runs every horizon, writes the CSV traces and summary.json into out_dir
// (when set) and returns the summary.
absl::StatusOr<Json> RunExperiment(const ExperimentConfig& config);

}  // namespace dpgt

#endif  // DPGT_EXPERIMENT_H_
