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

// Randomized properties that span several modules.

#include <cmath>
#include <random>

#include "dpgt/bound_oracle.h"
#include "dpgt/graph_spectral.h"
#include "dpgt/schemes.h"
#include "gtest/gtest.h"
#include "test_util.h"

namespace dpgt {
namespace {

using ::dpgt::testing::RandomGraphPair;
using ::dpgt::testing::SimpleS2;

TEST(SpectralProperty, ContractionFactorBound) {
  std::mt19937_64 rng(17);
  std::uniform_real_distribution<double> unit(0.02, 0.98);
  for (uint64_t seed = 1; seed <= 30; ++seed) {
    const int n = 2 + static_cast<int>(seed % 7);
    const GraphPair gp = RandomGraphPair(n, seed, 0.1 + 0.05 * (seed % 5));
    auto sc = ComputeSpectralConstants(gp);
    ASSERT_TRUE(sc.ok()) << sc.status();
    const Matrix id = Matrix::Identity(n, n);
    for (int t = 0; t < 5; ++t) {
      const double a = unit(rng) * sc->alpha_cap, b = unit(rng) * sc->beta_cap;
      EXPECT_LE(SpectralRadius(sc->w1 - a * gp.l1), 1.0 - sc->r1 * a + 1e-9);
      EXPECT_LE(SpectralRadius(sc->w2 - b * gp.l2), 1.0 - sc->r2 * b + 1e-9);
    }
    EXPECT_GE(sc->v1.minCoeff(), -1e-12);
    EXPECT_GE(sc->v2.minCoeff(), -1e-12);
    EXPECT_GT(sc->V1DotV2(), 0.0);
    EXPECT_LE((sc->w1 - (id - Vector::Ones(n) * sc->v1.transpose() / n)).norm(), 1e-12);
    for (const auto* eigs : {&sc->eigs_l1, &sc->eigs_l2}) {
      int zeros = 0;
      for (const Complex& z : *eigs) {
        if (std::abs(z) < 1e-8) {
          ++zeros;
        } else {
          EXPECT_GT(z.real(), 0.0);
        }
      }
      EXPECT_EQ(zeros, 1);
    }
    EXPECT_LE(*SpectrumResidual(gp.l1), 1e-9);
    EXPECT_LE(*SpectrumResidual(gp.l2), 1e-9);
  }
}

TEST(SchemeProperty, StepsDecreaseAndSamplesGrow) {
  const SchemeParams s1 = ::dpgt::testing::RemarkS1(3);
  const SchemeParams s2 = SimpleS2(3, 0.1, 0.1, 0.01, 1.05, 0.9);
  double prev_a = INFINITY, prev_b = INFINITY, prev_g = INFINITY;
  int64_t prev_m = 0;
  for (int64_t k = 0; k <= 2000; k += 50) {
    auto r = RatesAt(s1, k);
    EXPECT_LT(r->alpha, prev_a);
    EXPECT_LT(r->beta, prev_b);
    EXPECT_LT(r->gamma, prev_g);
    prev_a = r->alpha;
    prev_b = r->beta;
    prev_g = r->gamma;
    auto m = RatesAt(s2, k);
    EXPECT_GE(m->m, prev_m);
    EXPECT_GE(m->m, 1);
    prev_m = m->m;
  }
}

// Every validated S2 set with mu > 0 contracts. The s~ certificate is only
// implied for L1 >= 1: its rows are invariant under rescaling L1 while the
// alpha cap scales like 1 / L1.
TEST(SchemeProperty, ValidatedParametersContract) {
  std::mt19937_64 rng(5);
  std::uniform_real_distribution<double> u(0.0, 1.0);
  int accepted = 0, tried = 0;
  while (accepted < 50 && tried < 200000) {
    ++tried;
    const GraphPair gp = RandomGraphPair(3 + tried % 4, tried);
    auto sc = ComputeSpectralConstants(gp);
    const double l = std::pow(10.0, -1.0 + 2.0 * u(rng)), mu = l * (0.05 + 0.9 * u(rng));
    const QCaps q = ComputeQCaps(*sc, gp.n, l, mu);
    const double beta = u(rng) * sc->beta_cap;
    const double alpha = u(rng) * std::min(sc->alpha_cap, q.q1 > 0 ? 10 * beta : 1.0);
    const double gamma = u(rng) * std::min(q.q1 * alpha, q.q2 * beta);
    const SchemeParams p = SimpleS2(gp.n, alpha, beta, gamma, 1.1, 0.93);
    if (!ValidateAssumption5(p, *sc, l, mu).overall) continue;
    ++accepted;
    ObjectiveConstants c;
    c.l1_smooth = l;
    c.mu = mu;
    auto model = BuildModel(*sc, p, c, 2, 100);
    ASSERT_TRUE(model.ok()) << model.status();
    const ContractionReport rep = ContractionCheck(*model);
    EXPECT_TRUE(rep.contracts) << rep.rho;
    if (l >= 1.0) EXPECT_TRUE(rep.certificate) << l;
  }
  EXPECT_EQ(accepted, 50);
}

TEST(SchemeProperty, ValidationIsPure) {
  const GraphPair gp = RandomGraphPair(4, 9);
  auto sc = ComputeSpectralConstants(gp);
  const SchemeParams p = SimpleS2(4, 0.05, 0.1, 0.001, 1.1, 0.93);
  const ValidationReport a = ValidateAssumption5(p, *sc, 1.0, 0.5);
  const ValidationReport b = ValidateAssumption5(p, *sc, 1.0, 0.5);
  ASSERT_EQ(a.entries.size(), b.entries.size());
  for (size_t i = 0; i < a.entries.size(); ++i) {
    EXPECT_EQ(a.entries[i].name, b.entries[i].name);
    EXPECT_EQ(a.entries[i].slack, b.entries[i].slack);
  }
  EXPECT_EQ(a.overall, b.overall);
}

}  // namespace
}  // namespace dpgt
