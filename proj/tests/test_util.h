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

#ifndef DPGT_TESTS_TEST_UTIL_H_
#define DPGT_TESTS_TEST_UTIL_H_

#include <algorithm>
#include <memory>
#include <numeric>
#include <random>
#include <string>
#include <vector>

#include "dpgt/graph_spectral.h"
#include "dpgt/objectives.h"
#include "dpgt/rng.h"
#include "dpgt/schemes.h"

namespace dpgt::testing {

inline std::string ConfigDir() { return DPGT_CONFIG_DIR; }

// Random weighted adjacency containing a spanning tree rooted at `root`
// (edge j -> i stored at (i, j)) plus extra edges with probability p.
inline Matrix RandomRootedAdjacency(int n, int root, double p,
                                    std::mt19937_64& rng) {
  std::uniform_real_distribution<double> w(0.1, 1.0);
  std::bernoulli_distribution extra(p);
  Matrix a = Matrix::Zero(n, n);
  std::vector<int> order(n);
  std::iota(order.begin(), order.end(), 0);
  std::swap(order[0], order[root]);
  std::shuffle(order.begin() + 1, order.end(), rng);
  for (int t = 1; t < n; ++t) {
    std::uniform_int_distribution<int> parent(0, t - 1);
    a(order[t], order[parent(rng)]) = w(rng);
  }
  for (int i = 0; i < n; ++i) {
    for (int j = 0; j < n; ++j) {
      if (i != j && a(i, j) == 0.0 && extra(rng)) a(i, j) = w(rng);
    }
  }
  return a;
}

// Graph pair satisfying the spanning-tree condition with a common root.
inline GraphPair RandomGraphPair(int n, uint64_t seed, double p = 0.3) {
  std::mt19937_64 rng(seed);
  std::uniform_int_distribution<int> pick(0, n - 1);
  const int root = pick(rng);
  const Matrix r = RandomRootedAdjacency(n, root, p, rng);
  const Matrix ct = RandomRootedAdjacency(n, root, p, rng);
  return *BuildGraphPair(r, ct.transpose());
}

// Directed ring with unit weights, R = C.
inline GraphPair RingGraph(int n) {
  Matrix r = Matrix::Zero(n, n);
  for (int i = 0; i < n; ++i) r(i, (i + n - 1) % n) = 1.0;
  return *BuildGraphPair(r, r);
}

inline GraphPair TwoCycle() {
  Matrix r(2, 2);
  r << 0, 1, 1, 0;
  return *BuildGraphPair(r, r);
}

inline SchemeParams RemarkS1(int n) {
  SchemeParams p;
  p.kind = SchemeKind::kS1;
  p.a1 = 0.1;
  p.a2 = 0.1;
  p.a3 = 0.1;
  p.a4 = 1e-5;
  p.p_alpha = 0.987;
  p.p_beta = 0.69;
  p.p_gamma = 0.997;
  p.p_m = 2.0;
  p.p_zeta.assign(n, 0.1);
  p.p_eta.assign(n, 0.1);
  return p;
}

inline SchemeParams SimpleS2(int n, double alpha, double beta, double gamma,
                             double p_m, double p) {
  SchemeParams s;
  s.kind = SchemeKind::kS2;
  s.alpha = alpha;
  s.beta = beta;
  s.gamma = gamma;
  s.p_m = p_m;
  s.p_zeta.assign(n, p);
  s.p_eta.assign(n, p);
  return s;
}

// Largest entry-wise difference of two matrices.
// Quadratic objective with N(0, 4) scalar samples.
inline std::unique_ptr<QuadraticObjective> MakeQuadratic(int n, int d,
                                                         int samples,
                                                         uint64_t seed) {
  return *QuadraticObjective::Create(RandomConditionedMatrix(d, 1.0, 1.5, seed),
                                     Vector::Ones(d),
                                     GenerateGaussianDatasets(n, samples, 2.0, seed));
}

// Copy of agent's dataset with sample l replaced by value.
inline Dataset ReplaceSample(const Objective& obj, int agent, int l,
                             double value) {
  Dataset ds = obj.dataset(agent);
  ds.samples[l] = Vector::Constant(ds.samples[l].size(), value);
  return ds;
}

// Names of the unsatisfied entries, for failure messages.
inline std::string FailedEntries(const ValidationReport& r) {
  std::string out;
  for (const InequalityCheck& e : r.entries) {
    if (!e.satisfied) out += e.name + " (slack " + std::to_string(e.slack) + "); ";
  }
  return out;
}

inline double MaxAbsDiff(const Matrix& a, const Matrix& b) {
  return (a - b).cwiseAbs().maxCoeff();
}

}  // namespace dpgt::testing

#endif  // DPGT_TESTS_TEST_UTIL_H_
