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

#include <algorithm>
#include <cmath>
#include <limits>
#include <numbers>
#include <random>

#include "absl/strings/str_cat.h"
#include "dpgt/rng.h"

namespace dpgt {
namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();

double Mean(const std::vector<double>& v) {
  double s = 0.0;
  for (double e : v) s += e;
  return v.empty() ? 0.0 : s / v.size();
}

std::vector<double> ScalarMeans(const std::vector<Dataset>& datasets) {
  std::vector<double> means;
  means.reserve(datasets.size());
  for (const Dataset& ds : datasets) {
    double s = 0.0;
    for (const Vector& xi : ds.samples) s += xi(0);
    means.push_back(s / ds.size());
  }
  return means;
}

double MeanOverIndices(const Dataset& ds, std::span<const int> indices) {
  double s = 0.0;
  for (int l : indices) s += ds.samples[l](0);
  return s / indices.size();
}

absl::Status ValidateAll(const std::vector<Dataset>& datasets, int r) {
  if (datasets.empty()) {
    return absl::InvalidArgumentError("at least one dataset is required");
  }
  for (const Dataset& ds : datasets) {
    if (absl::Status s = ValidateDataset(ds); !s.ok()) return s;
    if (ds.r != r) {
      return absl::InvalidArgumentError(
          absl::StrCat("dataset of agent ", ds.agent, " has r = ", ds.r,
                       ", expected ", r));
    }
  }
  return absl::OkStatus();
}

// Golden-section minimization of a unimodal function on [lo, hi].
template <typename F>
double GoldenSection(F f, double lo, double hi, double tol) {
  const double invphi = (std::sqrt(5.0) - 1.0) / 2.0;
  double a = lo, b = hi;
  double c = b - invphi * (b - a), d = a + invphi * (b - a);
  double fc = f(c), fd = f(d);
  while (b - a > tol) {
    if (fc < fd) {
      b = d;
      d = c;
      fd = fc;
      c = b - invphi * (b - a);
      fc = f(c);
    } else {
      a = c;
      c = d;
      fc = fd;
      d = a + invphi * (b - a);
      fd = f(d);
    }
  }
  return 0.5 * (a + b);
}

}  // namespace

absl::Status ValidateDataset(const Dataset& ds) {
  if (ds.samples.empty()) {
    return absl::InvalidArgumentError(
        absl::StrCat("dataset of agent ", ds.agent, " is empty"));
  }
  if (ds.r < 1) return absl::InvalidArgumentError("sample dimension r < 1");
  for (const Vector& xi : ds.samples) {
    if (xi.size() != ds.r) {
      return absl::InvalidArgumentError(absl::StrCat(
          "dataset of agent ", ds.agent, " has a sample of size ", xi.size(),
          ", expected ", ds.r));
    }
    if (!xi.allFinite()) {
      return absl::InvalidArgumentError(
          absl::StrCat("dataset of agent ", ds.agent, " has a non-finite sample"));
    }
  }
  return absl::OkStatus();
}

absl::Status ValidateConstants(const ObjectiveConstants& c) {
  if (!(c.l1_smooth > 0.0)) return absl::InvalidArgumentError("L1 must be > 0");
  if (!(c.tau >= 0.0)) return absl::InvalidArgumentError("tau must be >= 0");
  if (!(c.sigma_g > 0.0)) return absl::InvalidArgumentError("sigma_g must be > 0");
  if (!(c.mu >= 0.0)) return absl::InvalidArgumentError("mu must be >= 0");
  if (!(c.l2_holder >= 0.0)) return absl::InvalidArgumentError("L2 must be >= 0");
  return absl::OkStatus();
}

absl::StatusOr<Vector> Objective::AveragedSampledGradient(
    int agent, const Vector& x, std::span<const int> indices) const {
  if (agent < 0 || agent >= num_agents()) {
    return absl::OutOfRangeError(absl::StrCat("agent ", agent, " out of range"));
  }
  if (indices.empty()) return absl::InvalidArgumentError("no sample indices");
  const int size = datasets_[agent].size();
  std::vector<bool> used(size, false);
  for (int l : indices) {
    if (l < 0 || l >= size) {
      return absl::OutOfRangeError(absl::StrCat("sample index ", l, " out of range"));
    }
    if (used[l]) {
      return absl::InvalidArgumentError(absl::StrCat("duplicate sample index ", l));
    }
    used[l] = true;
  }
  return AveragedGradient(agent, x, indices);
}

Vector Objective::AveragedGradient(int agent, const Vector& x,
                                   std::span<const int> indices) const {
  Vector sum = Vector::Zero(dim_);
  for (int l : indices) sum += SampleGradient(x, datasets_[agent].samples[l]);
  return sum / static_cast<double>(indices.size());
}

double Objective::LocalValue(int agent, const Vector& x) const {
  double s = 0.0;
  for (const Vector& xi : datasets_[agent].samples) s += Loss(x, xi);
  return s / datasets_[agent].size();
}

Vector Objective::LocalGradient(int agent, const Vector& x) const {
  Vector s = Vector::Zero(dim_);
  for (const Vector& xi : datasets_[agent].samples) s += SampleGradient(x, xi);
  return s / datasets_[agent].size();
}

double Objective::Value(const Vector& x) const {
  double s = 0.0;
  for (int i = 0; i < num_agents(); ++i) s += LocalValue(i, x);
  return s / num_agents();
}

Vector Objective::Gradient(const Vector& x) const {
  Vector s = Vector::Zero(dim_);
  for (int i = 0; i < num_agents(); ++i) s += LocalGradient(i, x);
  return s / num_agents();
}

// ---------------------------------------------------------------------------
// Quadratic example.

ObjectiveConstants QuadraticObjective::DeclaredConstants(const Matrix& a,
                                                         int n) {
  Eigen::JacobiSVD<Matrix> svd(a);
  const double rho = svd.singularValues()(0);
  const double theta =
      Eigen::SelfAdjointEigenSolver<Matrix>(a.transpose() * a)
          .eigenvalues()
          .minCoeff();
  ObjectiveConstants c;
  c.l1_smooth = rho * rho / (2.0 * n);
  c.l2_holder = 1.0;
  c.tau = 1.0;
  c.sigma_g = 2.0;
  c.mu = 2.0 * theta * theta;
  return c;
}

QuadraticObjective::QuadraticObjective(const Matrix& a, const Vector& b,
                                       std::vector<Dataset> datasets)
    : Objective(static_cast<int>(a.cols()), std::move(datasets),
                ObjectiveConstants{}),
      a_(a),
      b_(b) {
  const double n = num_agents();
  ata_n_ = a_.transpose() * a_ / n;
  atb_n_ = a_.transpose() * b_ / n;
  xi_mean_ = ScalarMeans(datasets_);
  xi_mean_all_ = Mean(xi_mean_);
  constants_ = DeclaredConstants(a_, num_agents());
  SolveOptimum();
}

absl::StatusOr<std::unique_ptr<QuadraticObjective>> QuadraticObjective::Create(
    const Matrix& a, const Vector& b, std::vector<Dataset> datasets) {
  if (a.rows() < a.cols() || a.cols() < 1) {
    return absl::InvalidArgumentError("A must be m x d with m >= d >= 1");
  }
  if (b.size() != a.rows()) {
    return absl::InvalidArgumentError("b must have as many entries as A has rows");
  }
  if (!a.allFinite() || !b.allFinite()) {
    return absl::InvalidArgumentError("A and b must be finite");
  }
  Eigen::ColPivHouseholderQR<Matrix> qr(a);
  if (qr.rank() < a.cols()) {
    return absl::InvalidArgumentError("A is rank deficient");
  }
  if (absl::Status s = ValidateAll(datasets, 1); !s.ok()) return s;
  return std::unique_ptr<QuadraticObjective>(
      new QuadraticObjective(a, b, std::move(datasets)));
}

absl::StatusOr<std::unique_ptr<Objective>> QuadraticObjective::WithDatasets(
    std::vector<Dataset> datasets) const {
  auto made = Create(a_, b_, std::move(datasets));
  if (!made.ok()) return made.status();
  (*made)->set_constants(constants_);
  return std::unique_ptr<Objective>(std::move(*made));
}

double QuadraticObjective::SmoothValue(const Vector& x) const {
  return (a_ * x - b_).squaredNorm() / (2.0 * num_agents());
}

Vector QuadraticObjective::SmoothGradient(const Vector& x) const {
  return ata_n_ * x - atb_n_;
}

namespace {
// h(x) = ||x|| / (1 + ||x||) and its gradient, defined as 0 at x = 0.
double CouplingValue(const Vector& x) {
  const double r = x.norm();
  return r / (1.0 + r);
}
Vector CouplingGradient(const Vector& x) {
  const double r = x.norm();
  if (r == 0.0) return Vector::Zero(x.size());
  return x / (r * (1.0 + r) * (1.0 + r));
}
}  // namespace

double QuadraticObjective::Loss(const Vector& x, const Vector& xi) const {
  return SmoothValue(x) + xi(0) * CouplingValue(x);
}

Vector QuadraticObjective::SampleGradient(const Vector& x,
                                          const Vector& xi) const {
  return SmoothGradient(x) + xi(0) * CouplingGradient(x);
}

Vector QuadraticObjective::AveragedGradient(int agent, const Vector& x,
                                            std::span<const int> indices) const {
  return SmoothGradient(x) +
         MeanOverIndices(datasets_[agent], indices) * CouplingGradient(x);
}

double QuadraticObjective::LocalValue(int agent, const Vector& x) const {
  return SmoothValue(x) + xi_mean_[agent] * CouplingValue(x);
}

Vector QuadraticObjective::LocalGradient(int agent, const Vector& x) const {
  return SmoothGradient(x) + xi_mean_[agent] * CouplingGradient(x);
}

double QuadraticObjective::Value(const Vector& x) const {
  return SmoothValue(x) + xi_mean_all_ * CouplingValue(x);
}

Vector QuadraticObjective::Gradient(const Vector& x) const {
  return SmoothGradient(x) + xi_mean_all_ * CouplingGradient(x);
}

void QuadraticObjective::SolveOptimum() {
  // Start from the least-squares minimizer and polish with gradient descent
  // on the full objective (the coupling term shifts the minimizer slightly).
  Vector x = a_.colPivHouseholderQr().solve(b_);
  Eigen::JacobiSVD<Matrix> svd(a_);
  const double smax = svd.singularValues()(0);
  const double step =
      1.0 / (smax * smax / num_agents() + 4.0 * std::abs(xi_mean_all_) + 1e-12);
  for (int it = 0; it < 200000; ++it) {
    const Vector g = Gradient(x);
    if (g.norm() < 1e-14 * (1.0 + x.norm())) break;
    x -= step * g;
  }
  double best = Value(x);
  Vector best_x = x;
  const Vector zero = Vector::Zero(dim_);
  if (Value(zero) < best) {
    best = Value(zero);
    best_x = zero;
  }
  f_star_ = best;
  x_star_ = best_x;
}

// ---------------------------------------------------------------------------
// Trigonometric example.

ObjectiveConstants TrigObjective::DeclaredConstants(int n) {
  ObjectiveConstants c;
  c.l1_smooth = 8.0;
  c.l2_holder = 2.0;
  c.tau = 1.0;
  c.sigma_g = 2.5;
  c.mu = n / 32.0;
  return c;
}

TrigObjective::TrigObjective(std::vector<Dataset> datasets)
    : Objective(1, std::move(datasets), ObjectiveConstants{}) {
  xi_mean_ = ScalarMeans(datasets_);
  xi_mean_all_ = Mean(xi_mean_);
  constants_ = DeclaredConstants(num_agents());
  // F(x) >= x^2 - 3 |xi| - ..., so the minimizer lies well inside [-6, 6]
  // for any realistic mean; scan then refine.
  const double xi = xi_mean_all_;
  const double half = 6.0 + std::abs(xi);
  const int grid = 12001;
  double best_x = 0.0, best_v = ValueAt(0.0, xi);
  for (int t = 0; t < grid; ++t) {
    const double x = -half + 2.0 * half * t / (grid - 1);
    const double v = ValueAt(x, xi);
    if (v < best_v) {
      best_v = v;
      best_x = x;
    }
  }
  const double h = 2.0 * half / (grid - 1);
  const double xs = GoldenSection([xi](double x) { return ValueAt(x, xi); },
                                  best_x - h, best_x + h, 1e-10);
  f_star_ = std::min(ValueAt(xs, xi), best_v);
  x_star_ = Vector::Constant(1, ValueAt(xs, xi) <= best_v ? xs : best_x);
}

absl::StatusOr<std::unique_ptr<TrigObjective>> TrigObjective::Create(
    std::vector<Dataset> datasets) {
  if (absl::Status s = ValidateAll(datasets, 1); !s.ok()) return s;
  return std::unique_ptr<TrigObjective>(new TrigObjective(std::move(datasets)));
}

absl::StatusOr<std::unique_ptr<Objective>> TrigObjective::WithDatasets(
    std::vector<Dataset> datasets) const {
  auto made = Create(std::move(datasets));
  if (!made.ok()) return made.status();
  (*made)->set_constants(constants_);
  return std::unique_ptr<Objective>(std::move(*made));
}

double TrigObjective::ValueAt(double x, double xi) {
  const double s = std::sin(x);
  return x * x + (3.0 + xi) * s * s + 2.0 * xi * std::cos(x);
}

double TrigObjective::GradAt(double x, double xi) {
  return 2.0 * x + (3.0 + xi) * std::sin(2.0 * x) - 2.0 * xi * std::sin(x);
}

double TrigObjective::Loss(const Vector& x, const Vector& xi) const {
  return ValueAt(x(0), xi(0));
}

Vector TrigObjective::SampleGradient(const Vector& x, const Vector& xi) const {
  return Vector::Constant(1, GradAt(x(0), xi(0)));
}

Vector TrigObjective::AveragedGradient(int agent, const Vector& x,
                                       std::span<const int> indices) const {
  return Vector::Constant(
      1, GradAt(x(0), MeanOverIndices(datasets_[agent], indices)));
}

double TrigObjective::LocalValue(int agent, const Vector& x) const {
  return ValueAt(x(0), xi_mean_[agent]);
}

Vector TrigObjective::LocalGradient(int agent, const Vector& x) const {
  return Vector::Constant(1, GradAt(x(0), xi_mean_[agent]));
}

double TrigObjective::Value(const Vector& x) const {
  return ValueAt(x(0), xi_mean_all_);
}

Vector TrigObjective::Gradient(const Vector& x) const {
  return Vector::Constant(1, GradAt(x(0), xi_mean_all_));
}

// ---------------------------------------------------------------------------
// Logistic regression.

LogisticObjective::LogisticObjective(int dim, double lambda,
                                     std::vector<Dataset> datasets)
    : Objective(dim, std::move(datasets), ObjectiveConstants{}),
      lambda_(lambda) {
  EstimateConstantsAndOptimum();
}

absl::StatusOr<std::unique_ptr<LogisticObjective>> LogisticObjective::Create(
    int dim, double lambda, std::vector<Dataset> datasets) {
  if (dim < 1) return absl::InvalidArgumentError("dim must be >= 1");
  if (!(lambda > 0.0)) return absl::InvalidArgumentError("lambda must be > 0");
  if (absl::Status s = ValidateAll(datasets, dim + 1); !s.ok()) return s;
  return std::unique_ptr<LogisticObjective>(
      new LogisticObjective(dim, lambda, std::move(datasets)));
}

absl::StatusOr<std::unique_ptr<Objective>> LogisticObjective::WithDatasets(
    std::vector<Dataset> datasets) const {
  auto made = Create(dim_, lambda_, std::move(datasets));
  if (!made.ok()) return made.status();
  (*made)->set_constants(constants_);
  return std::unique_ptr<Objective>(std::move(*made));
}

double LogisticObjective::Loss(const Vector& x, const Vector& xi) const {
  const double margin = xi(dim_) * xi.head(dim_).dot(x);
  // log(1 + exp(-margin)), stable for both signs.
  const double l = margin > 0 ? std::log1p(std::exp(-margin))
                              : -margin + std::log1p(std::exp(margin));
  return l + 0.5 * lambda_ * x.squaredNorm();
}

Vector LogisticObjective::SampleGradient(const Vector& x,
                                         const Vector& xi) const {
  const double y = xi(dim_);
  const double margin = y * xi.head(dim_).dot(x);
  const double s = 1.0 / (1.0 + std::exp(margin));
  return -y * s * xi.head(dim_) + lambda_ * x;
}

void LogisticObjective::EstimateConstantsAndOptimum() {
  double max_feat2 = 0.0;
  for (const Dataset& ds : datasets_) {
    for (const Vector& xi : ds.samples) {
      max_feat2 = std::max(max_feat2, xi.head(dim_).squaredNorm());
    }
  }
  constants_.l1_smooth = max_feat2 / 4.0 + lambda_;
  constants_.l2_holder = 1.0 + 3.0 * std::sqrt(max_feat2);
  constants_.tau = 1.0;
  constants_.sigma_g = 2.0 * std::sqrt(max_feat2);
  constants_.mu = lambda_;
  Vector x = Vector::Zero(dim_);
  const double step = 1.0 / constants_.l1_smooth;
  for (int it = 0; it < 100000; ++it) {
    const Vector g = Gradient(x);
    if (g.norm() < 1e-12) break;
    x -= step * g;
  }
  f_star_ = Value(x);
  x_star_ = x;
}

// ---------------------------------------------------------------------------
// Data generation.

std::vector<Dataset> GenerateGaussianDatasets(int n, int samples, double stddev,
                                              uint64_t seed) {
  std::vector<Dataset> out(n);
  for (int i = 0; i < n; ++i) {
    KeyedStream rng(seed, i, 0, Role::kData);
    std::normal_distribution<double> normal(0.0, stddev);
    out[i].agent = i;
    out[i].r = 1;
    for (int l = 0; l < samples; ++l) {
      out[i].samples.push_back(Vector::Constant(1, normal(rng)));
    }
  }
  return out;
}

std::vector<Dataset> GenerateLaplaceDatasets(int n, int samples, double scale,
                                             uint64_t seed) {
  std::vector<Dataset> out(n);
  for (int i = 0; i < n; ++i) {
    KeyedStream rng(seed, i, 0, Role::kData);
    out[i].agent = i;
    out[i].r = 1;
    for (int l = 0; l < samples; ++l) {
      out[i].samples.push_back(Vector::Constant(1, rng.Laplace(scale)));
    }
  }
  return out;
}

std::vector<Dataset> GenerateLogisticDatasets(int n, int samples, int dim,
                                              uint64_t seed) {
  // Two Gaussian classes with means +/- w_true.
  KeyedStream root(seed, 0, 0, Role::kMisc);
  std::normal_distribution<double> normal(0.0, 1.0);
  Vector w = Vector::Zero(dim);
  for (int j = 0; j < dim; ++j) w(j) = normal(root);
  w /= std::max(w.norm(), 1e-12);
  std::vector<Dataset> out(n);
  for (int i = 0; i < n; ++i) {
    KeyedStream rng(seed, i, 0, Role::kData);
    out[i].agent = i;
    out[i].r = dim + 1;
    for (int l = 0; l < samples; ++l) {
      const double label = rng.Uniform() < 0.5 ? -1.0 : 1.0;
      Vector xi(dim + 1);
      for (int j = 0; j < dim; ++j) xi(j) = label * w(j) + normal(rng);
      xi(dim) = label;
      out[i].samples.push_back(xi);
    }
  }
  return out;
}

Matrix RandomConditionedMatrix(int d, double smin, double smax, uint64_t seed) {
  KeyedStream rng(seed, 0, 0, Role::kMisc);
  std::normal_distribution<double> normal(0.0, 1.0);
  Matrix g1(d, d), g2(d, d);
  for (int i = 0; i < d; ++i) {
    for (int j = 0; j < d; ++j) {
      g1(i, j) = normal(rng);
      g2(i, j) = normal(rng);
    }
  }
  const Matrix u = Eigen::HouseholderQR<Matrix>(g1).householderQ();
  const Matrix v = Eigen::HouseholderQR<Matrix>(g2).householderQ();
  Vector s(d);
  for (int i = 0; i < d; ++i) {
    s(i) = d == 1 ? smax : smin + (smax - smin) * i / (d - 1.0);
  }
  return u * s.asDiagonal() * v.transpose();
}

// ---------------------------------------------------------------------------
// Constant verification.

bool VerifyReport::all_pass() const {
  for (const ConstantCheck& c : checks) {
    if (!c.pass) return false;
  }
  return true;
}

namespace {

struct Estimates {
  double lipschitz = 0.0;
  double variance = 0.0;
  double pl = kInf;
  bool pl_available = false;
};

Vector RandomPoint(KeyedStream& rng, int d, double box) {
  Vector x(d);
  for (int j = 0; j < d; ++j) x(j) = box * (2.0 * rng.Uniform() - 1.0);
  return x;
}

Estimates Estimate(const Objective& obj, const VerifyOptions& opts) {
  Estimates e;
  const int d = obj.dim();
  const int n = obj.num_agents();
  KeyedStream rng(opts.seed, 0, 0, Role::kMisc);
  // Gradient Lipschitz in x: global pairs, local pairs, and pairs near the
  // origin where radial terms are least regular.
  for (int t = 0; t < opts.trials; ++t) {
    const Dataset& ds = obj.dataset(static_cast<int>(rng.Below(n)));
    const Vector& xi = ds.samples[rng.Below(ds.size())];
    Vector x = RandomPoint(rng, d, opts.box), y;
    switch (t % 3) {
      case 0:
        y = RandomPoint(rng, d, opts.box);
        break;
      case 1:
        y = x + 1e-4 * RandomPoint(rng, d, 1.0);
        break;
      default: {
        const double scale = std::pow(10.0, -3.0 * rng.Uniform());
        x = scale * RandomPoint(rng, d, 1.0);
        y = -x;
        break;
      }
    }
    const double dist = (x - y).norm();
    if (dist == 0.0) continue;
    const double ratio =
        (obj.SampleGradient(x, xi) - obj.SampleGradient(y, xi)).norm() / dist;
    e.lipschitz = std::max(e.lipschitz, ratio);
  }
  // Gradient noise: per-agent empirical variance at random points.
  const int var_points = std::max(1, opts.trials / 20);
  for (int t = 0; t < var_points; ++t) {
    const Vector x = RandomPoint(rng, d, opts.box);
    for (int i = 0; i < n; ++i) {
      const Vector mean = obj.LocalGradient(i, x);
      double v = 0.0;
      for (const Vector& xi : obj.dataset(i).samples) {
        v += (obj.SampleGradient(x, xi) - mean).squaredNorm();
      }
      e.variance = std::max(e.variance, v / obj.dataset(i).size());
    }
  }
  // PL ratio ||grad F||^2 / (2 (F - F*)).
  if (obj.f_star().has_value()) {
    e.pl_available = true;
    const double fstar = *obj.f_star();
    auto consider = [&](const Vector& x) {
      const double gap = obj.Value(x) - fstar;
      if (gap <= 1e-9 * (1.0 + std::abs(fstar))) return;
      e.pl = std::min(e.pl, obj.Gradient(x).squaredNorm() / (2.0 * gap));
    };
    if (d == 1) {
      for (int t = 0; t < opts.grid; ++t) {
        consider(Vector::Constant(
            1, -opts.box + 2.0 * opts.box * t / std::max(1, opts.grid - 1)));
      }
    } else {
      for (int t = 0; t < opts.grid; ++t) consider(RandomPoint(rng, d, opts.box));
    }
  }
  return e;
}

}  // namespace

VerifyReport VerifyConstants(const Objective& obj, const VerifyOptions& opts) {
  const Estimates e = Estimate(obj, opts);
  const ObjectiveConstants& c = obj.constants();
  const double tol = opts.tolerance;
  VerifyReport report;
  report.checks.push_back({"L1_smooth", e.lipschitz, c.l1_smooth,
                           e.lipschitz <= c.l1_smooth * (1.0 + tol)});
  report.checks.push_back({"sigma_g_sq", e.variance, c.sigma_g * c.sigma_g,
                           e.variance <= c.sigma_g * c.sigma_g * (1.0 + tol)});
  if (e.pl_available) {
    report.checks.push_back({"mu", e.pl, c.mu, e.pl >= c.mu * (1.0 - tol)});
  } else {
    report.checks.push_back({"mu", std::nan(""), c.mu, c.mu == 0.0});
  }
  return report;
}

ObjectiveConstants EstimateConstants(const Objective& obj,
                                     const VerifyOptions& opts) {
  const Estimates e = Estimate(obj, opts);
  ObjectiveConstants c = obj.constants();
  c.l1_smooth = e.lipschitz;
  c.sigma_g = std::sqrt(e.variance);
  c.mu = e.pl_available && std::isfinite(e.pl) ? e.pl : 0.0;
  return c;
}

}  // namespace dpgt
