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

#include "dpgt/graph_spectral.h"

#include <algorithm>
#include <cmath>
#include <deque>
#include <limits>
#include <string>

#include "Eigen/Eigenvalues"
#include "absl/status/status.h"
#include "absl/strings/str_cat.h"

namespace dpgt {
namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();
constexpr double kZeroEigRelTol = 1e-8;
constexpr double kClipTol = 1e-12;
constexpr double kPerronResidualTol = 1e-9;
constexpr int kInverseIterations = 6;

bool EigLess(const Complex& a, const Complex& b) {
  const double ma = std::abs(a), mb = std::abs(b);
  if (ma != mb) return ma < mb;
  if (a.real() != b.real()) return a.real() < b.real();
  return a.imag() < b.imag();
}

// Null vector of a (near) singular matrix by shifted inverse iteration,
// seeded with ones. The result is scaled to sum n.
absl::StatusOr<Vector> PerronByInverseIteration(const Matrix& m) {
  const int n = static_cast<int>(m.rows());
  const double scale = std::max(1.0, m.cwiseAbs().maxCoeff());
  // Eigenvalue 1 of m is sought; shifting just off it keeps the solve regular.
  const double shift = 1.0 + 1e-10 * scale;
  Matrix shifted = m - shift * Matrix::Identity(n, n);
  Eigen::PartialPivLU<Matrix> lu(shifted);
  Vector w = Vector::Ones(n);
  for (int it = 0; it < kInverseIterations; ++it) {
    w = lu.solve(w);
    if (!w.allFinite()) {
      return absl::InternalError("inverse iteration produced non-finite values");
    }
    w /= w.norm();
  }
  const double total = w.sum();
  if (std::abs(total) < 1e-300) {
    return absl::InternalError("Perron vector has zero sum");
  }
  w *= n / total;
  for (int i = 0; i < n; ++i) {
    if (w(i) < 0.0) {
      if (w(i) < -kClipTol * n) {
        return absl::InternalError(
            absl::StrCat("Perron vector entry ", i, " is negative: ", w(i)));
      }
      w(i) = 0.0;
    }
  }
  return w;
}

struct CapAndRate {
  double cap = kInf;
  double rate = kInf;
};

absl::StatusOr<CapAndRate> CapAndRateFor(const std::vector<Complex>& eigs,
                                         const Vector& sums,
                                         const char* which) {
  double rho = 0.0;
  for (const Complex& e : eigs) rho = std::max(rho, std::abs(e));
  const double tol = kZeroEigRelTol * (1.0 + rho);
  int zeros = 0;
  for (const Complex& e : eigs) {
    if (std::abs(e) < tol) ++zeros;
  }
  if (zeros != 1) {
    return absl::FailedPreconditionError(absl::StrCat(
        "Laplacian ", which, " has ", zeros,
        " eigenvalues at zero; the graph is degenerate"));
  }
  CapAndRate out;
  for (int i = 0; i < sums.size(); ++i) {
    if (sums(i) > 0.0) out.cap = std::min(out.cap, 1.0 / sums(i));
  }
  // eigs is sorted, so the zero eigenvalue is first.
  for (size_t l = 1; l < eigs.size(); ++l) {
    const double re = eigs[l].real();
    const double mod2 = std::norm(eigs[l]);
    if (re <= 0.0) {
      return absl::FailedPreconditionError(absl::StrCat(
          "Laplacian ", which, " has a nonzero eigenvalue with Re <= 0"));
    }
    out.cap = std::min(out.cap, re / (1.0 + mod2));
    out.rate = std::min(out.rate, (2.0 + mod2) * re / (2.0 + 2.0 * mod2));
  }
  return out;
}

}  // namespace

absl::StatusOr<GraphPair> BuildGraphPair(const Matrix& r, const Matrix& c) {
  if (r.rows() != r.cols() || c.rows() != c.cols()) {
    return absl::InvalidArgumentError("dimension mismatch: R and C must be square");
  }
  if (r.rows() != c.rows()) {
    return absl::InvalidArgumentError("dimension mismatch: R and C differ in size");
  }
  if (r.rows() < 1) {
    return absl::InvalidArgumentError("dimension mismatch: n must be >= 1");
  }
  if (!r.allFinite() || !c.allFinite()) {
    return absl::InvalidArgumentError("non-finite entry in R or C");
  }
  if (r.minCoeff() < 0.0 || c.minCoeff() < 0.0) {
    return absl::InvalidArgumentError("negative entry in R or C");
  }
  GraphPair gp;
  gp.n = static_cast<int>(r.rows());
  gp.r = r;
  gp.c = c;
  gp.l1 = Matrix(gp.RowSums().asDiagonal()) - r;
  gp.l2 = Matrix(gp.ColSums().asDiagonal()) - c;
  return gp;
}

std::vector<int> SpanningTreeRoots(const Matrix& adjacency) {
  const int n = static_cast<int>(adjacency.rows());
  std::vector<int> roots;
  for (int s = 0; s < n; ++s) {
    std::vector<bool> seen(n, false);
    std::deque<int> queue = {s};
    seen[s] = true;
    int count = 1;
    while (!queue.empty()) {
      const int j = queue.front();
      queue.pop_front();
      for (int i = 0; i < n; ++i) {
        if (i != j && !seen[i] && adjacency(i, j) > 0.0) {
          seen[i] = true;
          ++count;
          queue.push_back(i);
        }
      }
    }
    if (count == n) roots.push_back(s);
  }
  return roots;
}

Assumption1Report CheckAssumption1(const GraphPair& gp) {
  Assumption1Report report;
  const std::vector<int> roots_r = SpanningTreeRoots(gp.r);
  const std::vector<int> roots_ct = SpanningTreeRoots(gp.c.transpose());
  report.g_r_has_tree = !roots_r.empty();
  report.g_ct_has_tree = !roots_ct.empty();
  for (int root : roots_r) {
    if (std::find(roots_ct.begin(), roots_ct.end(), root) != roots_ct.end()) {
      report.common_root = root;
      break;
    }
  }
  return report;
}

absl::StatusOr<std::vector<Complex>> Spectrum(const Matrix& m, int max_n) {
  if (m.rows() != m.cols()) {
    return absl::InvalidArgumentError("spectrum requires a square matrix");
  }
  if (m.rows() > max_n) {
    return absl::InvalidArgumentError(
        absl::StrCat("matrix size ", m.rows(), " exceeds cap ", max_n));
  }
  if (!m.allFinite()) {
    return absl::InvalidArgumentError("spectrum requires finite entries");
  }
  if (m.rows() == 0) return std::vector<Complex>{};
  Eigen::EigenSolver<Matrix> solver(m, /*computeEigenvectors=*/false);
  if (solver.info() != Eigen::Success) {
    return absl::ResourceExhaustedError(
        "eigensolver did not converge within its iteration budget");
  }
  std::vector<Complex> eigs(solver.eigenvalues().data(),
                            solver.eigenvalues().data() + m.rows());
  std::sort(eigs.begin(), eigs.end(), EigLess);
  return eigs;
}

absl::StatusOr<double> SpectrumResidual(const Matrix& m) {
  if (m.rows() != m.cols() || m.rows() == 0) {
    return absl::InvalidArgumentError("residual requires a nonempty square matrix");
  }
  Eigen::EigenSolver<Matrix> solver(m, /*computeEigenvectors=*/true);
  if (solver.info() != Eigen::Success) {
    return absl::ResourceExhaustedError(
        "eigensolver did not converge within its iteration budget");
  }
  const Eigen::MatrixXcd mc = m.cast<Complex>();
  double worst = 0.0;
  for (int l = 0; l < m.rows(); ++l) {
    Eigen::VectorXcd v = solver.eigenvectors().col(l);
    v /= v.norm();
    const Eigen::VectorXcd res = mc * v - solver.eigenvalues()(l) * v;
    worst = std::max(worst, res.norm());
  }
  return worst;
}

double SpectralRadius(const Matrix& m) {
  if (m.rows() == 0) return 0.0;
  Eigen::EigenSolver<Matrix> solver(m, /*computeEigenvectors=*/false);
  return solver.eigenvalues().cwiseAbs().maxCoeff();
}

absl::StatusOr<Vector> LeftPerronVector(const Matrix& l1, double alpha) {
  const int n = static_cast<int>(l1.rows());
  const Matrix m = (Matrix::Identity(n, n) - alpha * l1).transpose();
  return PerronByInverseIteration(m);
}

absl::StatusOr<Vector> RightPerronVector(const Matrix& l2, double beta) {
  const int n = static_cast<int>(l2.rows());
  const Matrix m = Matrix::Identity(n, n) - beta * l2;
  return PerronByInverseIteration(m);
}

absl::StatusOr<SpectralConstants> ComputeSpectralConstants(
    const GraphPair& gp) {
  const Assumption1Report a1 = CheckAssumption1(gp);
  if (!a1.satisfied()) {
    return absl::FailedPreconditionError(
        "Assumption 1 violated: no common spanning-tree root for R and C^T");
  }
  const int n = gp.n;
  SpectralConstants sc;
  auto e1 = Spectrum(gp.l1);
  if (!e1.ok()) return e1.status();
  auto e2 = Spectrum(gp.l2);
  if (!e2.ok()) return e2.status();
  sc.eigs_l1 = *std::move(e1);
  sc.eigs_l2 = *std::move(e2);

  auto cr1 = CapAndRateFor(sc.eigs_l1, gp.RowSums(), "L1");
  if (!cr1.ok()) return cr1.status();
  auto cr2 = CapAndRateFor(sc.eigs_l2, gp.ColSums(), "L2");
  if (!cr2.ok()) return cr2.status();
  sc.alpha_cap = cr1->cap;
  sc.r1 = cr1->rate;
  sc.beta_cap = cr2->cap;
  sc.r2 = cr2->rate;

  if (n == 1) {
    sc.v1 = Vector::Ones(1);
    sc.v2 = Vector::Ones(1);
  } else {
    const double alphas[3] = {0.5, 0.25, 0.75};
    for (int t = 0; t < 3; ++t) {
      auto v1 = LeftPerronVector(gp.l1, alphas[t] * sc.alpha_cap);
      if (!v1.ok()) return v1.status();
      auto v2 = RightPerronVector(gp.l2, alphas[t] * sc.beta_cap);
      if (!v2.ok()) return v2.status();
      if (t == 0) {
        sc.v1 = *v1;
        sc.v2 = *v2;
        continue;
      }
      const double dev = std::max((*v1 - sc.v1).cwiseAbs().maxCoeff(),
                                  (*v2 - sc.v2).cwiseAbs().maxCoeff());
      if (dev > kPerronResidualTol * n) {
        return absl::InternalError(absl::StrCat(
            "Perron vectors vary with the step size by ", dev));
      }
    }
    const double res1 = (gp.l1.transpose() * sc.v1).norm() * sc.alpha_cap;
    const double res2 = (gp.l2 * sc.v2).norm() * sc.beta_cap;
    if (res1 > kPerronResidualTol || res2 > kPerronResidualTol) {
      return absl::InternalError(
          absl::StrCat("Perron residuals too large: ", res1, ", ", res2));
    }
  }
  if (sc.V1DotV2() <= 0.0) {
    return absl::InternalError("v1^T v2 must be positive");
  }
  const Vector ones = Vector::Ones(n);
  sc.w1 = Matrix::Identity(n, n) - ones * sc.v1.transpose() / n;
  sc.w2 = Matrix::Identity(n, n) - sc.v2 * ones.transpose() / n;
  sc.rho_r = SpectralRadius(gp.r);
  sc.rho_c = SpectralRadius(gp.c);
  sc.rho_l1 = SpectralRadius(gp.l1);
  return sc;
}

}  // namespace dpgt
