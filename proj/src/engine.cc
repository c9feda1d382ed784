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

#include "dpgt/engine.h"

#include <algorithm>
#include <atomic>
#include <cmath>
#include <cstdlib>
#include <numeric>
#include <thread>

#include "absl/strings/str_cat.h"

namespace dpgt {
namespace {

absl::Status GuardFinite(const Matrix& m, const char* what, int64_t k) {
  for (int i = 0; i < m.rows(); ++i) {
    for (int j = 0; j < m.cols(); ++j) {
      const double v = m(i, j);
      if (!std::isfinite(v) || std::abs(v) > kDivergenceThreshold) {
        return absl::AbortedError(absl::StrCat(
            "divergence guard: ", what, "(", i, ", ", j, ") = ", v,
            " at iteration ", k));
      }
    }
  }
  return absl::OkStatus();
}

// Running mean / sum of squared deviations (Welford) for one scalar.
struct Moments {
  double mean = 0.0;
  double m2 = 0.0;
  void Add(double v, int count) {
    const double delta = v - mean;
    mean += delta / count;
    m2 += delta * (v - mean);
  }
};

}  // namespace

absl::StatusOr<double> LaplaceSample(double b, KeyedStream& rng) {
  if (!(b > 0.0) || !std::isfinite(b)) {
    return absl::InvalidArgumentError("Laplace scale must be positive and finite");
  }
  return rng.Laplace(b);
}

double IterationRecord::MaxGradNormSq() const {
  double m = 0.0;
  for (double v : grad_norm_sq) m = std::max(m, v);
  return m;
}

Engine::Engine(const GraphPair& gp, const SpectralConstants& sc,
               const Rates& rates, const Objective& obj)
    : gp_(gp), sc_(sc), rates_(rates), obj_(obj) {
  row_sums_ = gp_.RowSums();
  col_sums_ = gp_.ColSums();
}

absl::StatusOr<EngineState> Engine::Initialize(const Matrix& x0,
                                               uint64_t seed) const {
  const int n = gp_.n;
  const int d = obj_.dim();
  if (obj_.num_agents() != n) {
    return absl::InvalidArgumentError(absl::StrCat(
        "objective has ", obj_.num_agents(), " agents, graph has ", n));
  }
  if (x0.rows() != n || x0.cols() != d) {
    return absl::InvalidArgumentError(
        absl::StrCat("x0 must be ", n, " x ", d));
  }
  for (int i = 0; i < n; ++i) {
    if (rates_.m > obj_.dataset(i).size()) {
      return absl::FailedPreconditionError(absl::StrCat(
          "sampling number m_K = ", rates_.m, " exceeds dataset size D = ",
          obj_.dataset(i).size(), " of agent ", i));
    }
  }
  EngineState s;
  s.k = 0;
  s.x = x0;
  s.g = Matrix(n, d);
  for (int i = 0; i < n; ++i) {
    const std::vector<int> idx = SampleIndices(i, 0, seed);
    s.g.row(i) = obj_.AveragedGradient(i, x0.row(i).transpose(), idx).transpose();
  }
  s.y = s.g;
  return s;
}

Broadcast Engine::Perturb(const EngineState& s, uint64_t seed) const {
  const int n = gp_.n;
  const int d = static_cast<int>(s.x.cols());
  Broadcast b{s.x, s.y};
  for (int i = 0; i < n; ++i) {
    KeyedStream zeta(seed, i, s.k, Role::kZeta);
    KeyedStream eta(seed, i, s.k, Role::kEta);
    const double sz = rates_.SigmaZeta(i, s.k);
    const double se = rates_.SigmaEta(i, s.k);
    for (int c = 0; c < d; ++c) b.x(i, c) += zeta.Laplace(sz);
    for (int c = 0; c < d; ++c) b.y(i, c) += eta.Laplace(se);
  }
  return b;
}

std::vector<int> Engine::SampleIndices(int agent, int64_t k, uint64_t seed,
                                       int excluded) const {
  const int size = obj_.dataset(agent).size();
  std::vector<int> pool;
  pool.reserve(size);
  for (int l = 0; l < size; ++l) {
    if (l != excluded) pool.push_back(l);
  }
  const int m = static_cast<int>(
      std::min<int64_t>(rates_.m, static_cast<int64_t>(pool.size())));
  KeyedStream rng(seed, agent, k, Role::kSample);
  // Partial Fisher-Yates: the first m slots end up a uniform m-subset.
  for (int t = 0; t < m; ++t) {
    const int j = t + static_cast<int>(rng.Below(pool.size() - t));
    std::swap(pool[t], pool[j]);
  }
  pool.resize(m);
  return pool;
}

SampleSets Engine::AllSampleIndices(int64_t k, uint64_t seed,
                                    int excluded_agent, int excluded) const {
  SampleSets sets(gp_.n);
  for (int i = 0; i < gp_.n; ++i) {
    sets[i] = SampleIndices(i, k, seed, i == excluded_agent ? excluded : -1);
  }
  return sets;
}

absl::Status Engine::Advance(EngineState& s, const Broadcast& b,
                             const SampleSets& samples) const {
  const int n = gp_.n;
  const int d = static_cast<int>(s.x.cols());
  const double alpha = rates_.alpha, beta = rates_.beta, gamma = rates_.gamma;
  Matrix xn(n, d), gn(n, d), yn(n, d);
  for (int i = 0; i < n; ++i) {
    xn.row(i) = (1.0 - alpha * row_sums_(i)) * s.x.row(i) - gamma * s.y.row(i);
    for (int j = 0; j < n; ++j) {
      if (gp_.r(i, j) != 0.0) xn.row(i) += alpha * gp_.r(i, j) * b.x.row(j);
    }
  }
  for (int i = 0; i < n; ++i) {
    gn.row(i) =
        obj_.AveragedGradient(i, xn.row(i).transpose(), samples[i]).transpose();
  }
  for (int i = 0; i < n; ++i) {
    yn.row(i) = (1.0 - beta * col_sums_(i)) * s.y.row(i) + gn.row(i) - s.g.row(i);
    for (int j = 0; j < n; ++j) {
      if (gp_.c(i, j) != 0.0) yn.row(i) += beta * gp_.c(i, j) * b.y.row(j);
    }
  }
  if (absl::Status st = GuardFinite(xn, "x", s.k + 1); !st.ok()) return st;
  if (absl::Status st = GuardFinite(yn, "y", s.k + 1); !st.ok()) return st;
  s.k += 1;
  s.x = std::move(xn);
  s.y = std::move(yn);
  s.g = std::move(gn);
  return absl::OkStatus();
}

absl::Status Engine::Step(EngineState& s, uint64_t seed) const {
  const Broadcast b = Perturb(s, seed);
  const SampleSets samples = AllSampleIndices(s.k + 1, seed);
  return Advance(s, b, samples);
}

IterationRecord Engine::Record(const EngineState& s,
                               const RecordFlags& flags) const {
  const int n = gp_.n;
  IterationRecord rec;
  rec.k = s.k;
  const Vector ones = Vector::Ones(n);
  const Matrix wx = s.x - ones * (sc_.v1.transpose() * s.x) / n;
  const Matrix wy = s.y - sc_.v2 * (ones.transpose() * s.y) / n;
  rec.consensus_x = wx.squaredNorm();
  rec.consensus_y = wy.squaredNorm();
  if (flags.grad_norms) {
    rec.grad_norm_sq.resize(n);
    for (int i = 0; i < n; ++i) {
      rec.grad_norm_sq[i] = obj_.Gradient(s.x.row(i).transpose()).squaredNorm();
    }
  }
  if (flags.gap) {
    const Vector xbar = flags.v1_weighted_mean
                            ? Vector(s.x.transpose() * sc_.v1 / n)
                            : Vector(s.x.colwise().mean().transpose());
    rec.gap = obj_.Value(xbar) - obj_.f_star().value_or(0.0);
  }
  rec.samples_cum = (s.k + 1) * rates_.m;
  return rec;
}

absl::StatusOr<EngineState> CompactAdvance(const GraphPair& gp,
                                           const Rates& rates,
                                           const Objective& obj,
                                           const EngineState& s,
                                           const Broadcast& b,
                                           const SampleSets& samples) {
  const int n = gp.n;
  const int d = static_cast<int>(s.x.cols());
  const Matrix id_n = Matrix::Identity(n, n);
  const Matrix id_d = Matrix::Identity(d, d);
  auto kron = [](const Matrix& a, const Matrix& b) {
    Matrix out(a.rows() * b.rows(), a.cols() * b.cols());
    for (int i = 0; i < a.rows(); ++i) {
      for (int j = 0; j < a.cols(); ++j) {
        out.block(i * b.rows(), j * b.cols(), b.rows(), b.cols()) = a(i, j) * b;
      }
    }
    return out;
  };
  auto stack = [n, d](const Matrix& m) {
    Vector v(n * d);
    for (int i = 0; i < n; ++i) v.segment(i * d, d) = m.row(i).transpose();
    return v;
  };
  auto unstack = [n, d](const Vector& v) {
    Matrix m(n, d);
    for (int i = 0; i < n; ++i) m.row(i) = v.segment(i * d, d).transpose();
    return m;
  };
  const Vector xk = stack(s.x), yk = stack(s.y), gk = stack(s.g);
  const Vector zeta = stack(b.x - s.x), eta = stack(b.y - s.y);
  const Vector x1 = kron(id_n - rates.alpha * gp.l1, id_d) * xk +
                    rates.alpha * kron(gp.r, id_d) * zeta - rates.gamma * yk;
  const Matrix xn = unstack(x1);
  Matrix gn(n, d);
  for (int i = 0; i < n; ++i) {
    Vector acc = Vector::Zero(d);
    for (int l : samples[i]) {
      acc += obj.SampleGradient(xn.row(i).transpose(), obj.dataset(i).samples[l]);
    }
    gn.row(i) = (acc / static_cast<double>(samples[i].size())).transpose();
  }
  const Vector y1 = kron(id_n - rates.beta * gp.l2, id_d) * yk +
                    rates.beta * kron(gp.c, id_d) * eta + stack(gn) - gk;
  EngineState out;
  out.k = s.k + 1;
  out.x = xn;
  out.y = unstack(y1);
  out.g = gn;
  return out;
}

Matrix DefaultInitialState(int n, int d, uint64_t seed) {
  Matrix x0(n, d);
  for (int i = 0; i < n; ++i) {
    KeyedStream rng(seed, i, 0, Role::kInit);
    for (int c = 0; c < d; ++c) x0(i, c) = 2.0 * rng.Uniform() - 1.0;
  }
  return x0;
}

absl::StatusOr<Trajectory> Run(const RunSpec& spec, uint64_t seed) {
  if (spec.gp == nullptr || spec.sc == nullptr || spec.obj == nullptr) {
    return absl::InvalidArgumentError("run spec is missing graph or objective");
  }
  if (absl::Status st = ValidateSchemeParams(spec.params, spec.gp->n); !st.ok()) {
    return st;
  }
  auto rates = RatesAt(spec.params, spec.horizon);
  if (!rates.ok()) return rates.status();
  const Engine engine(*spec.gp, *spec.sc, *rates, *spec.obj);
  const int n = spec.gp->n;
  const Matrix x0 = spec.x0.has_value()
                        ? *spec.x0
                        : DefaultInitialState(n, spec.obj->dim(), seed);
  auto state = engine.Initialize(x0, seed);
  if (!state.ok()) return state.status();
  const auto* eps = spec.eps_cumulative;
  auto attach_eps = [eps, n](IterationRecord& rec, int64_t k) {
    if (eps == nullptr) return;
    rec.eps_cum.resize(n);
    for (int i = 0; i < n; ++i) rec.eps_cum[i] = (*eps)[i][k];
  };
  Trajectory traj;
  traj.m = rates->m;
  if (spec.flags.per_iteration) traj.records.reserve(spec.horizon + 1);
  for (int64_t k = 0; k <= spec.horizon; ++k) {
    if (spec.flags.per_iteration) {
      traj.records.push_back(engine.Record(*state, spec.flags));
      attach_eps(traj.records.back(), k);
    }
    if (absl::Status st = engine.Step(*state, seed); !st.ok()) return st;
  }
  traj.final_record = engine.Record(*state, spec.flags);
  attach_eps(traj.final_record, spec.horizon);
  traj.x_final = state->x;
  return traj;
}

int WorkerCount() {
  if (const char* env = std::getenv("DPGT_WORKERS")) {
    const int w = std::atoi(env);
    if (w > 0) return w;
  }
  return std::max(1u, std::thread::hardware_concurrency());
}

std::vector<uint64_t> SeedRange(uint64_t first, int count) {
  std::vector<uint64_t> seeds(count);
  std::iota(seeds.begin(), seeds.end(), first);
  return seeds;
}

namespace {

void AccumulateRecord(std::vector<Moments>& acc, const IterationRecord& rec,
                      int count) {
  size_t t = 0;
  acc[t++].Add(rec.consensus_x, count);
  acc[t++].Add(rec.consensus_y, count);
  acc[t++].Add(rec.gap, count);
  for (double v : rec.grad_norm_sq) acc[t++].Add(v, count);
}

void EmitRecord(const std::vector<Moments>& acc, const IterationRecord& shape,
                int runs, IterationRecord& mean, IterationRecord& var) {
  mean = shape;
  var = shape;
  auto put = [&](size_t t, double& m, double& v) {
    m = acc[t].mean;
    v = runs > 1 ? acc[t].m2 / (runs - 1) : 0.0;
  };
  size_t t = 0;
  put(t++, mean.consensus_x, var.consensus_x);
  put(t++, mean.consensus_y, var.consensus_y);
  put(t++, mean.gap, var.gap);
  for (size_t i = 0; i < shape.grad_norm_sq.size(); ++i) {
    put(t++, mean.grad_norm_sq[i], var.grad_norm_sq[i]);
  }
  std::fill(var.eps_cum.begin(), var.eps_cum.end(), 0.0);
  var.samples_cum = 0;
}

}  // namespace

absl::StatusOr<EnsembleTrajectory> RunEnsemble(
    const RunSpec& spec, const std::vector<uint64_t>& seeds) {
  if (seeds.empty()) return absl::InvalidArgumentError("at least one run required");
  const int runs = static_cast<int>(seeds.size());
  const int workers = std::min(WorkerCount(), runs);
  // Runs execute in blocks; each block is reduced in seed order, so the
  // result does not depend on the worker count.
  const int block = std::max(1, workers * 4);
  std::vector<std::vector<Moments>> per_k;
  std::vector<Moments> final_acc;
  Trajectory first;
  Matrix x_sum;
  for (int start = 0; start < runs; start += block) {
    const int count = std::min(block, runs - start);
    std::vector<absl::StatusOr<Trajectory>> results(
        count, absl::UnknownError("not run"));
    std::atomic<int> next{0};
    auto worker = [&]() {
      for (int r = next++; r < count; r = next++) {
        results[r] = Run(spec, seeds[start + r]);
      }
    };
    if (workers <= 1) {
      worker();
    } else {
      std::vector<std::thread> pool;
      for (int w = 0; w < std::min(workers, count); ++w) pool.emplace_back(worker);
      for (std::thread& t : pool) t.join();
    }
    for (int r = 0; r < count; ++r) {
      if (!results[r].ok()) return results[r].status();
      const Trajectory& tr = *results[r];
      if (start == 0 && r == 0) {
        first = tr;
        const size_t fields = 3 + tr.final_record.grad_norm_sq.size();
        per_k.assign(tr.records.size(), std::vector<Moments>(fields));
        final_acc.assign(fields, Moments{});
        x_sum = Matrix::Zero(tr.x_final.rows(), tr.x_final.cols());
      }
      const int count_so_far = start + r + 1;
      for (size_t k = 0; k < tr.records.size(); ++k) {
        AccumulateRecord(per_k[k], tr.records[k], count_so_far);
      }
      AccumulateRecord(final_acc, tr.final_record, count_so_far);
      x_sum += tr.x_final;
    }
  }
  EnsembleTrajectory ens;
  ens.runs = runs;
  ens.mean.m = ens.variance.m = first.m;
  ens.mean.records.resize(first.records.size());
  ens.variance.records.resize(first.records.size());
  for (size_t k = 0; k < first.records.size(); ++k) {
    EmitRecord(per_k[k], first.records[k], runs, ens.mean.records[k],
               ens.variance.records[k]);
  }
  EmitRecord(final_acc, first.final_record, runs, ens.mean.final_record,
             ens.variance.final_record);
  ens.mean.x_final = x_sum / runs;
  ens.variance.x_final = Matrix::Zero(x_sum.rows(), x_sum.cols());
  return ens;
}

}  // namespace dpgt
