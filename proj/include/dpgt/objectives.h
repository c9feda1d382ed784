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

#ifndef DPGT_OBJECTIVES_H_
#define DPGT_OBJECTIVES_H_

#include <cstdint>
#include <memory>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "absl/status/status.h"
#include "absl/status/statusor.h"
#include "dpgt/graph_spectral.h"

namespace dpgt {

struct Dataset {
  int agent = 0;
  int r = 1;
  std::vector<Vector> samples;

  int size() const { return static_cast<int>(samples.size()); }
};

absl::Status ValidateDataset(const Dataset& ds);

struct ObjectiveConstants {
  double l1_smooth = 1.0;
  double l2_holder = 1.0;
  double tau = 1.0;
  double sigma_g = 1.0;
  double mu = 0.0;
};

absl::Status ValidateConstants(const ObjectiveConstants& c);

// Empirical-risk objective F(x) = (1/n) sum_i f_i(x) with
// f_i(x) = (1/D) sum_l loss(x, xi_{i,l}). All agents share the per-sample
// loss; only their datasets differ.
class Objective {
 public:
  virtual ~Objective() = default;

  virtual std::string kind() const = 0;
  virtual double Loss(const Vector& x, const Vector& xi) const = 0;
  virtual Vector SampleGradient(const Vector& x, const Vector& xi) const = 0;
  // Same objective over different datasets of the same shape.
  virtual absl::StatusOr<std::unique_ptr<Objective>> WithDatasets(
      std::vector<Dataset> datasets) const = 0;

  int dim() const { return dim_; }
  int num_agents() const { return static_cast<int>(datasets_.size()); }
  const Dataset& dataset(int i) const { return datasets_[i]; }
  const std::vector<Dataset>& datasets() const { return datasets_; }
  const ObjectiveConstants& constants() const { return constants_; }
  void set_constants(const ObjectiveConstants& c) { constants_ = c; }
  std::optional<double> f_star() const { return f_star_; }
  const std::optional<Vector>& x_star() const { return x_star_; }

  // (1/m) sum of sampled gradients; checks the indices.
  absl::StatusOr<Vector> AveragedSampledGradient(
      int agent, const Vector& x, std::span<const int> indices) const;
  // Unchecked fast path used by the engine.
  virtual Vector AveragedGradient(int agent, const Vector& x,
                                  std::span<const int> indices) const;

  virtual double LocalValue(int agent, const Vector& x) const;
  virtual Vector LocalGradient(int agent, const Vector& x) const;
  virtual double Value(const Vector& x) const;
  virtual Vector Gradient(const Vector& x) const;

 protected:
  Objective(int dim, std::vector<Dataset> datasets, ObjectiveConstants c)
      : dim_(dim), datasets_(std::move(datasets)), constants_(c) {}

  int dim_;
  std::vector<Dataset> datasets_;
  ObjectiveConstants constants_;
  std::optional<double> f_star_;
  std::optional<Vector> x_star_;
};

// loss(x, xi) = (1/2n)||A x - b||^2 + ||x|| xi / (1 + ||x||), scalar xi.
class QuadraticObjective : public Objective {
 public:
  static absl::StatusOr<std::unique_ptr<QuadraticObjective>> Create(
      const Matrix& a, const Vector& b, std::vector<Dataset> datasets);

  std::string kind() const override { return "quadratic"; }
  double Loss(const Vector& x, const Vector& xi) const override;
  Vector SampleGradient(const Vector& x, const Vector& xi) const override;
  absl::StatusOr<std::unique_ptr<Objective>> WithDatasets(
      std::vector<Dataset> datasets) const override;
  Vector AveragedGradient(int agent, const Vector& x,
                          std::span<const int> indices) const override;
  double LocalValue(int agent, const Vector& x) const override;
  Vector LocalGradient(int agent, const Vector& x) const override;
  double Value(const Vector& x) const override;
  Vector Gradient(const Vector& x) const override;

  const Matrix& a() const { return a_; }
  const Vector& b() const { return b_; }
  // Declared constants of the closed-form example.
  static ObjectiveConstants DeclaredConstants(const Matrix& a, int n);

 private:
  QuadraticObjective(const Matrix& a, const Vector& b,
                     std::vector<Dataset> datasets);
  double SmoothValue(const Vector& x) const;
  Vector SmoothGradient(const Vector& x) const;
  void SolveOptimum();

  Matrix a_;
  Vector b_;
  Matrix ata_n_;  // A^T A / n
  Vector atb_n_;  // A^T b / n
  std::vector<double> xi_mean_;
  double xi_mean_all_ = 0.0;
};

// loss(x, xi) = x^2 + (3 + xi) sin(x)^2 + 2 xi cos(x), d = 1.
class TrigObjective : public Objective {
 public:
  static absl::StatusOr<std::unique_ptr<TrigObjective>> Create(
      std::vector<Dataset> datasets);

  std::string kind() const override { return "trig"; }
  double Loss(const Vector& x, const Vector& xi) const override;
  Vector SampleGradient(const Vector& x, const Vector& xi) const override;
  absl::StatusOr<std::unique_ptr<Objective>> WithDatasets(
      std::vector<Dataset> datasets) const override;
  Vector AveragedGradient(int agent, const Vector& x,
                          std::span<const int> indices) const override;
  double LocalValue(int agent, const Vector& x) const override;
  Vector LocalGradient(int agent, const Vector& x) const override;
  double Value(const Vector& x) const override;
  Vector Gradient(const Vector& x) const override;

  static ObjectiveConstants DeclaredConstants(int n);

 private:
  explicit TrigObjective(std::vector<Dataset> datasets);
  static double ValueAt(double x, double xi);
  static double GradAt(double x, double xi);

  std::vector<double> xi_mean_;
  double xi_mean_all_ = 0.0;
};

// Regularized logistic loss; xi = (features..., label in {-1, +1}).
class LogisticObjective : public Objective {
 public:
  static absl::StatusOr<std::unique_ptr<LogisticObjective>> Create(
      int dim, double lambda, std::vector<Dataset> datasets);

  std::string kind() const override { return "logistic"; }
  double Loss(const Vector& x, const Vector& xi) const override;
  Vector SampleGradient(const Vector& x, const Vector& xi) const override;
  absl::StatusOr<std::unique_ptr<Objective>> WithDatasets(
      std::vector<Dataset> datasets) const override;

  double lambda() const { return lambda_; }

 private:
  LogisticObjective(int dim, double lambda, std::vector<Dataset> datasets);
  void EstimateConstantsAndOptimum();

  double lambda_;
};

// Synthetic data, deterministic in the seed.
std::vector<Dataset> GenerateGaussianDatasets(int n, int samples, double stddev,
                                              uint64_t seed);
std::vector<Dataset> GenerateLaplaceDatasets(int n, int samples, double scale,
                                             uint64_t seed);
std::vector<Dataset> GenerateLogisticDatasets(int n, int samples, int dim,
                                              uint64_t seed);
// Random d x d matrix with singular values spread over [smin, smax].
Matrix RandomConditionedMatrix(int d, double smin, double smax, uint64_t seed);

struct ConstantCheck {
  std::string name;
  double estimate = 0.0;
  double declared = 0.0;
  bool pass = false;
};

struct VerifyReport {
  std::vector<ConstantCheck> checks;
  bool all_pass() const;
};

struct VerifyOptions {
  int trials = 2000;
  double box = 3.0;
  int grid = 2001;
  uint64_t seed = 1;
  double tolerance = 0.05;
};

VerifyReport VerifyConstants(const Objective& obj, const VerifyOptions& opts);

// Gradient-Lipschitz, variance and PL estimates without pass/fail, used to
// derive verified constants for experiments.
ObjectiveConstants EstimateConstants(const Objective& obj,
                                     const VerifyOptions& opts);

}  // namespace dpgt

#endif  // DPGT_OBJECTIVES_H_
