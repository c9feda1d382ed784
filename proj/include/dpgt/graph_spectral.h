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

#ifndef DPGT_GRAPH_SPECTRAL_H_
#define DPGT_GRAPH_SPECTRAL_H_

#include <complex>
#include <optional>
#include <vector>

#include "Eigen/Dense"
#include "absl/status/statusor.h"

namespace dpgt {

using Matrix = Eigen::MatrixXd;
using Vector = Eigen::VectorXd;
using Complex = std::complex<double>;

// Two weighted digraphs over the same agent set. An entry M(i, j) > 0 means
// agent i receives from agent j over that graph.
struct GraphPair {
  int n = 0;
  Matrix r;
  Matrix c;
  Matrix l1;  // diag(R 1) - R
  Matrix l2;  // diag(1^T C) - C

  Vector RowSums() const { return r.rowwise().sum(); }
  Vector ColSums() const { return c.colwise().sum().transpose(); }
};

absl::StatusOr<GraphPair> BuildGraphPair(const Matrix& r, const Matrix& c);

struct Assumption1Report {
  bool g_r_has_tree = false;
  bool g_ct_has_tree = false;
  std::optional<int> common_root;

  bool satisfied() const { return common_root.has_value(); }
};

Assumption1Report CheckAssumption1(const GraphPair& gp);

// Nodes from which every node is reachable in the digraph with an edge
// j -> i whenever adjacency(i, j) > 0 and i != j.
std::vector<int> SpanningTreeRoots(const Matrix& adjacency);

inline constexpr int kDefaultSpectrumCap = 256;

// Eigenvalues sorted by (modulus, real part, imaginary part).
absl::StatusOr<std::vector<Complex>> Spectrum(const Matrix& m,
                                              int max_n = kDefaultSpectrumCap);

// Largest residual min_v ||M v - lambda v|| over the returned pairs, using
// the eigenvectors of the same decomposition.
absl::StatusOr<double> SpectrumResidual(const Matrix& m);

double SpectralRadius(const Matrix& m);

struct SpectralConstants {
  std::vector<Complex> eigs_l1;
  std::vector<Complex> eigs_l2;
  Vector v1;
  Vector v2;
  double r1 = 0.0;
  double r2 = 0.0;
  double alpha_cap = 0.0;
  double beta_cap = 0.0;
  Matrix w1;
  Matrix w2;
  double rho_r = 0.0;
  double rho_c = 0.0;
  double rho_l1 = 0.0;

  double V1DotV2() const { return v1.dot(v2); }
  double V1Norm() const { return v1.norm(); }
  double V2Norm() const { return v2.norm(); }
};

absl::StatusOr<SpectralConstants> ComputeSpectralConstants(
    const GraphPair& gp);

// Left Perron vector of (I - alpha L1) and right Perron vector of
// (I - beta L2), each scaled to sum n.
absl::StatusOr<Vector> LeftPerronVector(const Matrix& l1, double alpha);
absl::StatusOr<Vector> RightPerronVector(const Matrix& l2, double beta);

}  // namespace dpgt

#endif  // DPGT_GRAPH_SPECTRAL_H_
