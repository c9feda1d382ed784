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

#include "dpgt/objectives.h"

#include <cmath>
#include <numbers>
#include <random>
#include <vector>

#include "gtest/gtest.h"

namespace dpgt {
namespace {

Dataset ScalarDataset(int agent, std::vector<double> values) {
  Dataset ds;
  ds.agent = agent;
  ds.r = 1;
  for (double v : values) ds.samples.push_back(Vector::Constant(1, v));
  return ds;
}

std::vector<Dataset> Replicate(int n, std::vector<double> values) {
  std::vector<Dataset> out;
  for (int i = 0; i < n; ++i) out.push_back(ScalarDataset(i, values));
  return out;
}

std::unique_ptr<QuadraticObjective> MakeQuadratic(const Matrix& a, const Vector& b,
                                                  std::vector<Dataset> ds) {
  auto q = QuadraticObjective::Create(a, b, std::move(ds));
  EXPECT_TRUE(q.ok()) << q.status();
  return *std::move(q);
}

// Central differences of the sample loss.
Vector NumericGradient(const Objective& obj, const Vector& x, const Vector& xi) {
  Vector g(x.size());
  const double h = 1e-6;
  for (int t = 0; t < x.size(); ++t) {
    Vector p = x, m = x;
    p(t) += h;
    m(t) -= h;
    g(t) = (obj.Loss(p, xi) - obj.Loss(m, xi)) / (2 * h);
  }
  return g;
}

TEST(DatasetTest, Validation) {
  Dataset ok = ScalarDataset(0, {1.0, 2.0});
  EXPECT_TRUE(ValidateDataset(ok).ok());
  Dataset empty = ScalarDataset(0, {});
  EXPECT_FALSE(ValidateDataset(empty).ok());
  Dataset bad = ScalarDataset(0, {1.0, std::nan("")});
  EXPECT_FALSE(ValidateDataset(bad).ok());
  Dataset ragged = ok;
  ragged.samples.push_back(Vector::Zero(2));
  EXPECT_FALSE(ValidateDataset(ragged).ok());
}

TEST(QuadraticTest, DeclaredConstantsFrozen) {
  Matrix a(2, 2);
  a << 1, 0, 0, 2;
  auto q = MakeQuadratic(a, Vector::Ones(2), Replicate(3, {0.0, 1.0}));
  const ObjectiveConstants& c = q->constants();
  EXPECT_NEAR(c.l1_smooth, 4.0 / 6.0, 1e-12);
  EXPECT_EQ(c.l2_holder, 1.0);
  EXPECT_EQ(c.tau, 1.0);
  EXPECT_EQ(c.sigma_g, 2.0);
  EXPECT_NEAR(c.mu, 2.0, 1e-12);
}

TEST(QuadraticTest, StationaryAtOriginForIdentity) {
  auto q = MakeQuadratic(Matrix::Identity(2, 2), Vector::Zero(2), Replicate(1, {0.0}));
  EXPECT_EQ(q->SampleGradient(Vector::Zero(2), Vector::Zero(1)).norm(), 0.0);
}

TEST(QuadraticTest, SmoothPartGradientAtOrigin) {
  Matrix a(2, 2);
  a << 1, 0, 0, 2;
  const int n = 4;
  auto q = MakeQuadratic(a, Vector::Ones(2), Replicate(n, {0.3, -1.0}));
  const Vector g = q->SampleGradient(Vector::Zero(2), Vector::Constant(1, 0.7));
  EXPECT_NEAR(g(0), -1.0 / n, 1e-15);
  EXPECT_NEAR(g(1), -2.0 / n, 1e-15);
}

TEST(QuadraticTest, RejectsRankDeficient) {
  Matrix a(2, 2);
  a << 1, 2, 2, 4;
  EXPECT_FALSE(QuadraticObjective::Create(a, Vector::Ones(2), Replicate(1, {0.0})).ok());
}

TEST(QuadraticTest, OptimumIsStationary) {
  const Matrix a = RandomConditionedMatrix(3, 1.0, 2.0, 9);
  const Vector b = Vector::LinSpaced(3, -1.0, 2.0);
  auto q = MakeQuadratic(a, b, GenerateGaussianDatasets(3, 20, 2.0, 4));
  ASSERT_TRUE(q->x_star().has_value());
  EXPECT_LE(q->Gradient(*q->x_star()).norm(), 1e-8);
  EXPECT_NEAR(q->Value(*q->x_star()), *q->f_star(), 1e-12);
}

TEST(QuadraticTest, DeclaredSmoothnessIsRefutedByVerifier) {
  // A = I, n = 1: the smooth part alone has gradient-Lipschitz constant 1,
  // twice the declared rho(A)^2 / 2n.
  auto q = MakeQuadratic(Matrix::Identity(2, 2), Vector::Zero(2), Replicate(1, {0.0, 0.0}));
  const VerifyReport rep = VerifyConstants(*q, VerifyOptions{});
  ASSERT_EQ(rep.checks[0].name, "L1_smooth");
  EXPECT_NEAR(rep.checks[0].declared, 0.5, 1e-12);
  EXPECT_GE(rep.checks[0].estimate, 0.99);
  EXPECT_FALSE(rep.checks[0].pass);
}

TEST(QuadraticTest, ZeroVarianceDataset) {
  auto q = MakeQuadratic(Matrix::Identity(2, 2), Vector::Ones(2), Replicate(2, {0.5, 0.5, 0.5}));
  const VerifyReport rep = VerifyConstants(*q, VerifyOptions{});
  ASSERT_EQ(rep.checks[1].name, "sigma_g_sq");
  EXPECT_NEAR(rep.checks[1].estimate, 0.0, 1e-20);
  EXPECT_TRUE(rep.checks[1].pass);
}

TEST(TrigTest, DeclaredConstantsFrozen) {
  auto t = TrigObjective::Create(Replicate(4, {0.1, -0.2}));
  ASSERT_TRUE(t.ok());
  const ObjectiveConstants& c = (*t)->constants();
  EXPECT_EQ(c.l1_smooth, 8.0);
  EXPECT_EQ(c.l2_holder, 2.0);
  EXPECT_EQ(c.tau, 1.0);
  EXPECT_EQ(c.sigma_g, 2.5);
  EXPECT_EQ(c.mu, 4.0 / 32.0);
}

TEST(TrigTest, GradientOracleValues) {
  auto t = TrigObjective::Create(Replicate(1, {0.0}));
  ASSERT_TRUE(t.ok());
  EXPECT_EQ((*t)->SampleGradient(Vector::Zero(1), Vector::Zero(1))(0), 0.0);
  const double g = (*t)->SampleGradient(Vector::Constant(1, std::numbers::pi / 2),
                                        Vector::Constant(1, 1.0))(0);
  EXPECT_NEAR(g, std::numbers::pi - 2.0, 1e-12);
}

TEST(TrigTest, PlConstantHoldsOnGridForSmallN) {
  auto t = TrigObjective::Create(GenerateLaplaceDatasets(4, 50, 0.5, 3));
  ASSERT_TRUE(t.ok());
  const VerifyReport rep = VerifyConstants(**t, VerifyOptions{});
  ASSERT_EQ(rep.checks[2].name, "mu");
  EXPECT_TRUE(rep.checks[2].pass) << rep.checks[2].estimate;
}

// |l''(x, xi)| <= 8 + 4 |xi|, so the per-sample Lipschitz constant exceeds
// the declared 8 once the dataset holds samples far from zero.
TEST(TrigTest, PerSampleSmoothnessTracksLargestSample) {
  auto t = TrigObjective::Create(GenerateLaplaceDatasets(4, 50, 0.5, 3));
  ASSERT_TRUE(t.ok());
  double xi_max = 0.0;
  for (const Dataset& ds : (*t)->datasets()) {
    for (const Vector& xi : ds.samples) xi_max = std::max(xi_max, std::abs(xi(0)));
  }
  const VerifyReport rep = VerifyConstants(**t, VerifyOptions{});
  ASSERT_EQ(rep.checks[0].name, "L1_smooth");
  EXPECT_LE(rep.checks[0].estimate, 8.0 + 4.0 * xi_max + 1e-6);
  EXPECT_GT(rep.checks[0].estimate, 8.0);
  EXPECT_FALSE(rep.checks[0].pass);

  auto calm = TrigObjective::Create(
      std::vector<Dataset>(2, Dataset{0, 1, std::vector<Vector>(5, Vector::Zero(1))}));
  ASSERT_TRUE(calm.ok());
  EXPECT_TRUE(VerifyConstants(**calm, VerifyOptions{}).checks[0].pass);
}

TEST(TrigTest, OptimumFromGoldenSection) {
  auto t = TrigObjective::Create(GenerateLaplaceDatasets(3, 40, 0.5, 8));
  ASSERT_TRUE(t.ok());
  const Vector xs = *(*t)->x_star();
  EXPECT_LE(std::abs((*t)->Gradient(xs)(0)), 1e-6);
  for (double x = -3.0; x <= 3.0; x += 0.01) {
    EXPECT_GE((*t)->Value(Vector::Constant(1, x)), *(*t)->f_star() - 1e-12);
  }
}

TEST(AveragedGradientTest, SingleFullAndSubsetBatches) {
  const Matrix a = RandomConditionedMatrix(2, 1.0, 2.0, 3);
  auto q = MakeQuadratic(a, Vector::Ones(2), GenerateGaussianDatasets(2, 6, 2.0, 5));
  const Vector x = Vector::LinSpaced(2, 0.3, -0.7);
  const Dataset& ds = q->dataset(1);

  const std::vector<int> one{4};
  EXPECT_LE((*q->AveragedSampledGradient(1, x, one) - q->SampleGradient(x, ds.samples[4])).norm(),
            1e-15);

  const std::vector<int> all{0, 1, 2, 3, 4, 5};
  EXPECT_LE((*q->AveragedSampledGradient(1, x, all) - q->LocalGradient(1, x)).norm(), 1e-14);

  const std::vector<int> three{5, 0, 2};
  const Vector want = (q->SampleGradient(x, ds.samples[5]) + q->SampleGradient(x, ds.samples[0]) +
                       q->SampleGradient(x, ds.samples[2])) / 3.0;
  EXPECT_LE((*q->AveragedSampledGradient(1, x, three) - want).norm(), 1e-15);
}

TEST(AveragedGradientTest, RejectsBadIndices) {
  auto t = TrigObjective::Create(Replicate(1, {0.1, 0.2, 0.3}));
  const Vector x = Vector::Zero(1);
  const std::vector<int> dup{1, 1};
  const std::vector<int> out{0, 3};
  EXPECT_EQ((*t)->AveragedSampledGradient(0, x, dup).status().code(),
            absl::StatusCode::kInvalidArgument);
  EXPECT_EQ((*t)->AveragedSampledGradient(0, x, out).status().code(),
            absl::StatusCode::kOutOfRange);
}

TEST(AveragedGradientTest, UnbiasedOverAllSubsets) {
  auto t = TrigObjective::Create(GenerateLaplaceDatasets(1, 6, 0.5, 2));
  const Vector x = Vector::Constant(1, 0.8);
  for (int m = 1; m <= 6; ++m) {
    // Enumerate subsets of size m through bit masks.
    Vector sum = Vector::Zero(1);
    int count = 0;
    for (int mask = 0; mask < 64; ++mask) {
      if (__builtin_popcount(mask) != m) continue;
      std::vector<int> idx;
      for (int l = 0; l < 6; ++l) {
        if (mask & (1 << l)) idx.push_back(l);
      }
      sum += *(*t)->AveragedSampledGradient(0, x, idx);
      ++count;
    }
    EXPECT_NEAR(sum(0) / count, (*t)->LocalGradient(0, x)(0), 1e-13);
  }
}

TEST(GradientTest, MatchesFiniteDifferences) {
  std::mt19937_64 rng(17);
  std::normal_distribution<double> normal(0.0, 1.0);
  const Matrix a = RandomConditionedMatrix(3, 1.0, 2.0, 11);
  auto q = MakeQuadratic(a, Vector::Ones(3), GenerateGaussianDatasets(2, 5, 2.0, 1));
  auto t = TrigObjective::Create(GenerateLaplaceDatasets(2, 5, 0.5, 1));
  auto lg = LogisticObjective::Create(3, 0.1, GenerateLogisticDatasets(2, 5, 3, 1));
  ASSERT_TRUE(t.ok() && lg.ok());
  for (int trial = 0; trial < 50; ++trial) {
    Vector x3(3), xi1(1), x1(1);
    for (int c = 0; c < 3; ++c) x3(c) = normal(rng);
    x1(0) = 2.0 * normal(rng);
    xi1(0) = normal(rng);
    for (const Objective* obj : {static_cast<const Objective*>(q.get()),
                                 static_cast<const Objective*>(t->get())}) {
      const Vector& x = obj->dim() == 3 ? x3 : x1;
      const Vector g = obj->SampleGradient(x, xi1);
      const Vector fd = NumericGradient(*obj, x, xi1);
      EXPECT_LE((g - fd).norm(), 1e-5 * std::max(1.0, g.norm())) << obj->kind();
    }
    const Vector& xi = (*lg)->dataset(0).samples[trial % 5];
    const Vector g = (*lg)->SampleGradient(x3, xi);
    EXPECT_LE((g - NumericGradient(**lg, x3, xi)).norm(), 1e-5 * std::max(1.0, g.norm()));
  }
}

TEST(GradientTest, FastPathsMatchSampleSums) {
  const Matrix a = RandomConditionedMatrix(2, 1.0, 2.0, 3);
  auto q = MakeQuadratic(a, Vector::Ones(2), GenerateGaussianDatasets(2, 8, 2.0, 6));
  auto t = TrigObjective::Create(GenerateLaplaceDatasets(2, 8, 0.5, 6));
  const std::vector<int> idx{7, 1, 3};
  for (const Objective* obj : {static_cast<const Objective*>(q.get()),
                               static_cast<const Objective*>(t->get())}) {
    const Vector x = Vector::Constant(obj->dim(), 0.4);
    Vector want = Vector::Zero(obj->dim());
    for (int l : idx) want += obj->SampleGradient(x, obj->dataset(1).samples[l]);
    want /= 3.0;
    EXPECT_LE((obj->AveragedGradient(1, x, idx) - want).norm(), 1e-14);
    double value = 0.0;
    for (const Vector& xi : obj->dataset(1).samples) value += obj->Loss(x, xi);
    EXPECT_NEAR(obj->LocalValue(1, x), value / 8.0, 1e-13);
  }
}

TEST(GeneratorTest, DeterministicAndShaped) {
  const auto a = GenerateGaussianDatasets(3, 10, 2.0, 42);
  const auto b = GenerateGaussianDatasets(3, 10, 2.0, 42);
  ASSERT_EQ(a.size(), 3u);
  for (int i = 0; i < 3; ++i) {
    EXPECT_EQ(a[i].agent, i);
    ASSERT_EQ(a[i].size(), 10);
    for (int l = 0; l < 10; ++l) EXPECT_EQ(a[i].samples[l], b[i].samples[l]);
  }
  const Matrix m = RandomConditionedMatrix(4, 1.0, 3.0, 2);
  Eigen::JacobiSVD<Matrix> svd(m);
  EXPECT_NEAR(svd.singularValues()(0), 3.0, 1e-12);
  EXPECT_NEAR(svd.singularValues()(3), 1.0, 1e-12);
}

}  // namespace
}  // namespace dpgt
