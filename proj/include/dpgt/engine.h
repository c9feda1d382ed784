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

#ifndef DPGT_ENGINE_H_
#define DPGT_ENGINE_H_

#include <cstdint>
#include <optional>
#include <vector>

#include "absl/status/status.h"
#include "absl/status/statusor.h"
#include "dpgt/graph_spectral.h"
#include "dpgt/objectives.h"
#include "dpgt/rng.h"
#include "dpgt/schemes.h"

namespace dpgt {

// Any state entry above this magnitude aborts the run.
inline constexpr double kDivergenceThreshold = 1e12;

// Draw from Laplace(0, b); b must be positive.
absl::StatusOr<double> LaplaceSample(double b, KeyedStream& rng);

// Row i of each matrix belongs to agent i.
struct EngineState {
  int64_t k = 0;
  Matrix x;
  Matrix y;
  Matrix g;
};

// Perturbed values an agent publishes at one iteration.
struct Broadcast {
  Matrix x;
  Matrix y;
};

using SampleSets = std::vector<std::vector<int>>;

struct RecordFlags {
  bool per_iteration = true;
  bool grad_norms = true;
  bool gap = true;
  // x-bar weighted by v1 / n (true) or the uniform mean (false).
  bool v1_weighted_mean = true;
};

struct IterationRecord {
  int64_t k = 0;
  double consensus_x = 0.0;
  double consensus_y = 0.0;
  std::vector<double> grad_norm_sq;  // per agent
  double gap = 0.0;
  int64_t samples_cum = 0;
  std::vector<double> eps_cum;  // per agent, empty when not accounted

  double MaxGradNormSq() const;
};

struct Trajectory {
  // States k = 0..K, then the returned state K+1 in final_record.
  std::vector<IterationRecord> records;
  IterationRecord final_record;
  Matrix x_final;
  int64_t m = 1;
};

class Engine {
 public:
  // All references must outlive the engine.
  Engine(const GraphPair& gp, const SpectralConstants& sc, const Rates& rates,
         const Objective& obj);

  absl::StatusOr<EngineState> Initialize(const Matrix& x0, uint64_t seed) const;
  Broadcast Perturb(const EngineState& s, uint64_t seed) const;
  // m distinct indices of agent's dataset for iteration k (k = 0 is the
  // initialization draw). An excluded index is never drawn.
  std::vector<int> SampleIndices(int agent, int64_t k, uint64_t seed,
                                 int excluded = -1) const;
  SampleSets AllSampleIndices(int64_t k, uint64_t seed, int excluded_agent = -1,
                              int excluded = -1) const;
  // One iteration of the agentwise updates given the broadcast snapshot
  // and the index sets drawn for iteration s.k + 1.
  absl::Status Advance(EngineState& s, const Broadcast& b,
                       const SampleSets& samples) const;
  absl::Status Step(EngineState& s, uint64_t seed) const;

  IterationRecord Record(const EngineState& s, const RecordFlags& flags) const;

  const Rates& rates() const { return rates_; }
  const Objective& objective() const { return obj_; }

 private:
  const GraphPair& gp_;
  const SpectralConstants& sc_;
  const Rates& rates_;
  const Objective& obj_;
  Vector row_sums_;
  Vector col_sums_;
};

// Reference evaluation of the stacked (Kronecker) form of one iteration,
// independent of Engine::Advance.
absl::StatusOr<EngineState> CompactAdvance(const GraphPair& gp,
                                           const Rates& rates,
                                           const Objective& obj,
                                           const EngineState& s,
                                           const Broadcast& b,
                                           const SampleSets& samples);

Matrix DefaultInitialState(int n, int d, uint64_t seed);

struct RunSpec {
  const GraphPair* gp = nullptr;
  const SpectralConstants* sc = nullptr;
  SchemeParams params;
  const Objective* obj = nullptr;
  int64_t horizon = 0;
  // Fixed initial state; when absent it is drawn from the run seed.
  std::optional<Matrix> x0;
  RecordFlags flags;
  // Optional cumulative budget per agent, indexed [agent][k], k = 0..K.
  const std::vector<std::vector<double>>* eps_cumulative = nullptr;
};

absl::StatusOr<Trajectory> Run(const RunSpec& spec, uint64_t seed);

struct EnsembleTrajectory {
  int runs = 0;
  Trajectory mean;
  Trajectory variance;  // sample variance (n - 1 denominator), 0 if runs == 1
};

// Worker count from DPGT_WORKERS, else the hardware concurrency.
int WorkerCount();

absl::StatusOr<EnsembleTrajectory> RunEnsemble(
    const RunSpec& spec, const std::vector<uint64_t>& seeds);

std::vector<uint64_t> SeedRange(uint64_t first, int count);

}  // namespace dpgt

#endif  // DPGT_ENGINE_H_
