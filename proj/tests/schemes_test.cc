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

#include <cmath>
#include <random>

#include "gtest/gtest.h"
#include "test_util.h"

namespace dpgt {
namespace {

using ::dpgt::testing::RemarkS1;
using ::dpgt::testing::SimpleS2;
using ::dpgt::testing::TwoCycle;

const InequalityCheck* Find(const ValidationReport& r, const std::string& name) {
  for (const InequalityCheck& e : r.entries) {
    if (e.name == name) return &e;
  }
  return nullptr;
}

SchemeParams SectionFourS1() {
  SchemeParams p = RemarkS1(2);
  p.a1 = 72;
  p.a2 = 0.95;
  p.a3 = 98;
  p.a4 = 0.00007;
  p.p_m = 1.78;
  return p;
}

TEST(RatesTest, SectionFourS1Frozen) {
  auto r = RatesAt(SectionFourS1(), 2000);
  ASSERT_TRUE(r.ok());
  EXPECT_NEAR(r->alpha, 0.039719303102312344, 1e-12);
  EXPECT_NEAR(r->beta, 0.0050102928863223215, 1e-12);
  EXPECT_NEAR(r->gamma, 0.050105191730277616, 1e-12);
  EXPECT_EQ(r->m, 53);
  EXPECT_NEAR(r->SigmaZeta(0, 0), 1.0, 1e-15);
  EXPECT_NEAR(r->SigmaZeta(1, 99), std::pow(100.0, 0.1), 1e-12);
}

TEST(RatesTest, S2SamplingFrozen) {
  auto r = RatesAt(SimpleS2(2, 0.1, 0.1, 0.01, 1.002, 0.95), 2000);
  ASSERT_TRUE(r.ok());
  EXPECT_EQ(r->m, 55);
  EXPECT_NEAR(r->SigmaEta(0, 0), std::pow(0.95, 2000), 1e-300);
  EXPECT_EQ(r->SigmaEta(0, 0), r->SigmaEta(0, 1999));
}

TEST(RatesTest, SingleSampleRegime) {
  SchemeParams p = RemarkS1(2);
  p.p_m = 0.0;
  p.a4 = 0.0;
  for (int64_t k : {0, 1, 10, 100000}) EXPECT_EQ(RatesAt(p, k)->m, 1);
}

TEST(RatesTest, NegativeHorizonRejected) {
  EXPECT_FALSE(RatesAt(RemarkS1(2), -1).ok());
}

TEST(RatesTest, SaturatesHugeSampleCounts) {
  auto r = RatesAt(SimpleS2(2, 0.1, 0.1, 0.01, 2.0, 0.9), 100);
  ASSERT_TRUE(r.ok());
  EXPECT_EQ(r->m, std::numeric_limits<int64_t>::max());
}

TEST(RatesTest, MonotoneInHorizon) {
  const SchemeParams s1 = RemarkS1(2);
  const SchemeParams s2 = SimpleS2(2, 0.1, 0.1, 0.01, 1.01, 0.95);
  for (int64_t k = 1; k < 500; ++k) {
    EXPECT_LT(RatesAt(s1, k)->alpha, RatesAt(s1, k - 1)->alpha);
    EXPECT_LT(RatesAt(s1, k)->beta, RatesAt(s1, k - 1)->beta);
    EXPECT_LT(RatesAt(s1, k)->gamma, RatesAt(s1, k - 1)->gamma);
    EXPECT_GE(RatesAt(s2, k)->m, RatesAt(s2, k - 1)->m);
    EXPECT_GE(RatesAt(s1, k)->m, 1);
  }
}

TEST(SchemeParamsTest, RejectsMalformed) {
  SchemeParams p = RemarkS1(2);
  EXPECT_TRUE(ValidateSchemeParams(p, 2).ok());
  EXPECT_FALSE(ValidateSchemeParams(p, 3).ok());
  p.a1 = -1.0;
  EXPECT_FALSE(ValidateSchemeParams(p, 2).ok());
  SchemeParams s = SimpleS2(2, 0.1, 0.1, 0.01, 1.1, 0.0);
  EXPECT_FALSE(ValidateSchemeParams(s, 2).ok());
}

TEST(Assumption4Test, RemarkExponentsSatisfyOrdering) {
  auto sc = ComputeSpectralConstants(TwoCycle());
  for (double p : {-0.29, 0.0, 0.1, 0.141}) {
    SchemeParams s = RemarkS1(2);
    s.p_zeta.assign(2, p);
    s.p_eta.assign(2, p);
    const ValidationReport r = ValidateAssumption4(s, *sc, 1.0);
    EXPECT_TRUE(r.overall) << p << ": " << testing::FailedEntries(r);
  }
}

// The ordering 2 p_alpha - p_beta - 2 p >= 1 caps the noise exponent at
// 0.142 for these step exponents.
TEST(Assumption4Test, NoiseExponentBoundary) {
  auto sc = ComputeSpectralConstants(TwoCycle());
  SchemeParams s = RemarkS1(2);
  s.p_zeta.assign(2, 0.143);
  s.p_eta.assign(2, 0.143);
  const ValidationReport r = ValidateAssumption4(s, *sc, 1.0);
  EXPECT_FALSE(r.overall);
  for (const InequalityCheck& e : r.entries) {
    if (e.name == "2 p_alpha - p_beta - 2 max(p_zeta, 0) >= 1") {
      EXPECT_FALSE(e.satisfied);
      EXPECT_NEAR(e.slack, -0.002, 1e-9);
    }
  }
}

TEST(Assumption4Test, LowBetaExponentFails) {
  auto sc = ComputeSpectralConstants(TwoCycle());
  SchemeParams s = RemarkS1(2);
  s.p_beta = 0.4;
  const ValidationReport r = ValidateAssumption4(s, *sc, 1.0);
  EXPECT_FALSE(r.overall);
  const InequalityCheck* e = Find(r, "1/2 < p_beta");
  ASSERT_NE(e, nullptr);
  EXPECT_FALSE(e->satisfied);
  EXPECT_NEAR(e->slack, -0.1, 1e-15);
}

TEST(Assumption4Test, PhiConstructionOrdering) {
  const PhiExponents e = PhiConstruction(0.5);
  EXPECT_NEAR(e.p_alpha, 0.9, 1e-15);
  EXPECT_NEAR(e.p_beta, 0.6, 1e-15);
  EXPECT_NEAR(e.p_gamma, 0.95, 1e-15);
  EXPECT_NEAR(e.p_m, 1.95, 1e-15);
  auto sc = ComputeSpectralConstants(TwoCycle());
  SchemeParams s = RemarkS1(2);
  s.p_alpha = e.p_alpha;
  s.p_beta = e.p_beta;
  s.p_gamma = e.p_gamma;
  s.p_m = e.p_m;
  s.p_zeta.assign(2, 0.0);
  s.p_eta.assign(2, 0.0);
  const ValidationReport r = ValidateAssumption4(s, *sc, 1.0);
  for (const char* name : {"1/2 < p_beta", "p_beta < p_alpha", "p_alpha < p_gamma",
                           "p_gamma < 1", "p_m - p_beta >= 1", "2 p_gamma - p_alpha >= 1"}) {
    const InequalityCheck* c = Find(r, name);
    ASSERT_NE(c, nullptr) << name;
    EXPECT_TRUE(c->satisfied) << name;
  }
}

TEST(Assumption4Test, NonStrictBoundaryAbsorbsRounding) {
  // 2 * 0.95 - 0.9 lands just below 1 in floating point.
  auto sc = ComputeSpectralConstants(TwoCycle());
  SchemeParams s = RemarkS1(2);
  s.p_alpha = 0.9;
  s.p_gamma = 0.95;
  const InequalityCheck* c = Find(ValidateAssumption4(s, *sc, 1.0), "2 p_gamma - p_alpha >= 1");
  ASSERT_NE(c, nullptr);
  EXPECT_TRUE(c->satisfied);
}

TEST(Assumption5Test, CorollaryExample) {
  auto sc = ComputeSpectralConstants(TwoCycle());
  for (double p : {0.911, 0.93, 0.949}) {
    const ValidationReport r =
        ValidateAssumption5(SimpleS2(2, 0.1, 0.1, 0.01, 1.1, p), *sc, 1.0, 1.0);
    for (const InequalityCheck& e : r.entries) {
      if (e.name.find("p_zeta") != std::string::npos ||
          e.name.find("p_eta") != std::string::npos || e.name == "p_m > 1") {
        EXPECT_TRUE(e.satisfied) << e.name;
      }
    }
  }
}

TEST(Assumption5Test, TwoCycleQCapsFrozen) {
  auto sc = ComputeSpectralConstants(TwoCycle());
  const QCaps q = ComputeQCaps(*sc, 2, 1.0, 1.0);
  EXPECT_NEAR(q.q1, 0.11338934190276816, 1e-12);
  EXPECT_NEAR(q.q2, 0.012247448713915886, 1e-12);
  const ValidationReport r = ValidateAssumption5(SimpleS2(2, 0.005, 0.1, 0.0005, 1.1, 0.93), *sc, 1.0, 1.0);
  ASSERT_TRUE(r.q1.has_value());
  EXPECT_EQ(*r.q1, q.q1);
  EXPECT_TRUE(r.overall) << testing::FailedEntries(r);
}

TEST(Assumption5Test, IndicatorActivatesAtZeroMu) {
  auto sc = ComputeSpectralConstants(TwoCycle());
  const QCaps q = ComputeQCaps(*sc, 2, 1.0, 0.0);
  const double second = 1.2 / (2.0 * std::sqrt(2.0)) * std::sqrt(0.5);
  const double first = 2.0 * std::sqrt(6.0) * 1.2 / (24.0 * std::sqrt(2.0));
  EXPECT_NEAR(q.q1, std::min(first, second), 1e-14);
}

TEST(Assumption5Test, GammaAboveCapFails) {
  auto sc = ComputeSpectralConstants(TwoCycle());
  const ValidationReport r = ValidateAssumption5(SimpleS2(2, 0.1, 0.1, 0.05, 1.1, 0.93), *sc, 1.0, 1.0);
  EXPECT_FALSE(r.overall);
  EXPECT_FALSE(Find(r, "gamma < Q2 beta")->satisfied);
}

TEST(ValidationTest, OverallIsConjunctionAndPure) {
  auto sc = ComputeSpectralConstants(TwoCycle());
  const SchemeParams s = SimpleS2(2, 0.1, 0.1, 0.05, 1.1, 0.93);
  const ValidationReport a = ValidateAssumption5(s, *sc, 1.0, 1.0);
  const ValidationReport b = ValidateAssumption5(s, *sc, 1.0, 1.0);
  bool all = true;
  ASSERT_EQ(a.entries.size(), b.entries.size());
  for (size_t t = 0; t < a.entries.size(); ++t) {
    all = all && a.entries[t].satisfied;
    EXPECT_EQ(a.entries[t].lhs, b.entries[t].lhs);
    EXPECT_EQ(a.entries[t].rhs, b.entries[t].rhs);
  }
  EXPECT_EQ(a.overall, all);
}

TEST(ThetaTest, RemarkSetFrozen) {
  const SchemeParams p = RemarkS1(2);
  EXPECT_NEAR(Theta(p), 1.084, 1e-12);
  EXPECT_NEAR(RateExponent(p), 0.087, 1e-12);
}

TEST(ThetaTest, NonPositiveNoiseExponentsVanish) {
  SchemeParams p = RemarkS1(2);
  p.p_zeta.assign(2, -0.2);
  p.p_eta.assign(2, 0.0);
  EXPECT_NEAR(Theta(p), std::min({2.0 - 0.69, 2 * 0.987 - 0.69, 2 * 0.69}), 1e-12);
}

TEST(ThetaTest, MatchesBruteForce) {
  std::mt19937_64 rng(5);
  std::uniform_real_distribution<double> u(-0.5, 2.0);
  for (int t = 0; t < 1000; ++t) {
    SchemeParams p = RemarkS1(3);
    p.p_alpha = u(rng);
    p.p_beta = u(rng);
    p.p_m = u(rng);
    for (int i = 0; i < 3; ++i) {
      p.p_zeta[i] = u(rng);
      p.p_eta[i] = u(rng);
    }
    double zmax = 0.0, emax = 0.0;
    for (int i = 0; i < 3; ++i) {
      zmax = std::max(zmax, p.p_zeta[i]);
      emax = std::max(emax, p.p_eta[i]);
    }
    const double candidates[3] = {p.p_m - p.p_beta, 2 * p.p_alpha - p.p_beta - 2 * zmax,
                                  2 * p.p_beta - 2 * emax};
    double best = candidates[0];
    for (double c : candidates) best = c < best ? c : best;
    EXPECT_EQ(Theta(p), best);
  }
}

TEST(FinitenessTest, RemarkS1Passes) {
  const ValidationReport r = CheckBudgetFiniteness(RemarkS1(2), TwoCycle());
  EXPECT_TRUE(r.overall) << testing::FailedEntries(r);
}

TEST(FinitenessTest, S2Boundaries) {
  EXPECT_TRUE(CheckBudgetFiniteness(SimpleS2(2, 0.1, 0.1, 0.01, 1.1, 0.95), TwoCycle()).overall);
  EXPECT_FALSE(CheckBudgetFiniteness(SimpleS2(2, 0.1, 0.1, 0.01, 1.1, 1.0), TwoCycle()).overall);
  EXPECT_FALSE(CheckBudgetFiniteness(SimpleS2(2, 0.1, 0.1, 0.01, 1.05, 0.95), TwoCycle()).overall);
}

}  // namespace
}  // namespace dpgt
