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

#include "dpgt/json_io.h"

#include <cmath>
#include <cstdio>
#include <fstream>
#include <random>
#include <sstream>

#include "absl/strings/str_cat.h"
#include "absl/strings/str_format.h"
#include "dpgt/rng.h"

namespace dpgt {
namespace {

absl::StatusOr<double> GetNumber(const Json& j, const char* key) {
  if (!j.contains(key)) return absl::InvalidArgumentError(absl::StrCat("missing field '", key, "'"));
  if (!j.at(key).is_number()) {
    return absl::InvalidArgumentError(absl::StrCat("field '", key, "' must be a number"));
  }
  return j.at(key).get<double>();
}

double NumberOr(const Json& j, const char* key, double fallback) {
  return j.contains(key) && j.at(key).is_number() ? j.at(key).get<double>() : fallback;
}

// A per-agent array, or one number broadcast to all agents.
absl::StatusOr<std::vector<double>> PerAgent(const Json& j, const char* key, int n) {
  if (!j.contains(key)) return absl::InvalidArgumentError(absl::StrCat("missing field '", key, "'"));
  const Json& v = j.at(key);
  if (v.is_number()) return std::vector<double>(n, v.get<double>());
  if (!v.is_array() || static_cast<int>(v.size()) != n) {
    return absl::InvalidArgumentError(
        absl::StrCat("field '", key, "' must be a number or an array of length ", n));
  }
  std::vector<double> out;
  for (const Json& e : v) {
    if (!e.is_number()) return absl::InvalidArgumentError(absl::StrCat("non-numeric entry in '", key, "'"));
    out.push_back(e.get<double>());
  }
  return out;
}

}  // namespace

Json Num(double v) {
  if (std::isnan(v)) return "nan";
  if (std::isinf(v)) return v > 0 ? "inf" : "-inf";
  return v;
}

absl::StatusOr<std::string> ReadTextFile(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) return absl::NotFoundError(absl::StrCat("cannot open ", path));
  std::stringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

absl::StatusOr<Json> ReadJsonFile(const std::string& path) {
  auto text = ReadTextFile(path);
  if (!text.ok()) return text.status();
  Json j = Json::parse(*text, nullptr, /*allow_exceptions=*/false);
  if (j.is_discarded()) return absl::InvalidArgumentError(absl::StrCat("invalid JSON in ", path));
  return j;
}

absl::Status WriteTextFile(const std::string& path, const std::string& text) {
  std::ofstream out(path, std::ios::binary);
  if (!out) return absl::PermissionDeniedError(absl::StrCat("cannot write ", path));
  out << text;
  out.close();
  if (!out) return absl::DataLossError(absl::StrCat("write failed for ", path));
  return absl::OkStatus();
}

std::string ContentHash(const std::string& text) {
  uint64_t h = 0xcbf29ce484222325ULL;
  for (unsigned char c : text) {
    h ^= c;
    h *= 0x100000001b3ULL;
  }
  return absl::StrFormat("%016x", h);
}

absl::StatusOr<Matrix> MatrixFromJson(const Json& j) {
  if (!j.is_array() || j.empty() || !j[0].is_array()) {
    return absl::InvalidArgumentError("matrix must be a nonempty array of rows");
  }
  const size_t rows = j.size(), cols = j[0].size();
  Matrix m(rows, cols);
  for (size_t i = 0; i < rows; ++i) {
    if (!j[i].is_array() || j[i].size() != cols) {
      return absl::InvalidArgumentError("dimension mismatch: ragged matrix rows");
    }
    for (size_t k = 0; k < cols; ++k) {
      if (!j[i][k].is_number()) return absl::InvalidArgumentError("non-numeric matrix entry");
      m(i, k) = j[i][k].get<double>();
    }
  }
  return m;
}

Json MatrixToJson(const Matrix& m) {
  Json j = Json::array();
  for (int i = 0; i < m.rows(); ++i) {
    Json row = Json::array();
    for (int k = 0; k < m.cols(); ++k) row.push_back(Num(m(i, k)));
    j.push_back(row);
  }
  return j;
}

Json VectorToJson(const Vector& v) {
  Json j = Json::array();
  for (int i = 0; i < v.size(); ++i) j.push_back(Num(v(i)));
  return j;
}

absl::StatusOr<GraphPair> GraphFromJson(const Json& j) {
  if (!j.is_object() || !j.contains("R") || !j.contains("C")) {
    return absl::InvalidArgumentError("graph JSON needs fields R and C");
  }
  auto r = MatrixFromJson(j.at("R"));
  if (!r.ok()) return r.status();
  auto c = MatrixFromJson(j.at("C"));
  if (!c.ok()) return c.status();
  if (j.contains("n") && j.at("n").get<int>() != r->rows()) {
    return absl::InvalidArgumentError("dimension mismatch: n disagrees with R");
  }
  return BuildGraphPair(*r, *c);
}

Json GraphToJson(const GraphPair& gp) {
  return Json{{"schema_version", kSchemaVersion},
              {"n", gp.n},
              {"R", MatrixToJson(gp.r)},
              {"C", MatrixToJson(gp.c)}};
}

Json SpectralToJson(const SpectralConstants& sc, const Assumption1Report& a1) {
  auto eigs = [](const std::vector<Complex>& e) {
    Json out = Json::array();
    for (const Complex& z : e) out.push_back(Json::array({Num(z.real()), Num(z.imag())}));
    return out;
  };
  Json j;
  j["schema_version"] = kSchemaVersion;
  j["assumption1"] = {{"gR_has_tree", a1.g_r_has_tree},
                      {"gCT_has_tree", a1.g_ct_has_tree},
                      {"common_root", a1.common_root.has_value()
                                          ? Json(*a1.common_root)
                                          : Json(nullptr)}};
  j["eigs_L1"] = eigs(sc.eigs_l1);
  j["eigs_L2"] = eigs(sc.eigs_l2);
  j["v1"] = VectorToJson(sc.v1);
  j["v2"] = VectorToJson(sc.v2);
  j["r1"] = Num(sc.r1);
  j["r2"] = Num(sc.r2);
  j["alpha_cap"] = Num(sc.alpha_cap);
  j["beta_cap"] = Num(sc.beta_cap);
  j["W1"] = MatrixToJson(sc.w1);
  j["W2"] = MatrixToJson(sc.w2);
  j["rhoR"] = Num(sc.rho_r);
  j["rhoC"] = Num(sc.rho_c);
  j["rhoL1"] = Num(sc.rho_l1);
  j["v1_dot_v2"] = Num(sc.V1DotV2());
  return j;
}

absl::StatusOr<SchemeParams> SchemeFromJson(const Json& j, int n) {
  if (!j.is_object() || !j.contains("kind")) {
    return absl::InvalidArgumentError("scheme JSON needs a 'kind' of S1 or S2");
  }
  SchemeParams p;
  const std::string kind = j.at("kind").get<std::string>();
  if (kind == "S1") {
    p.kind = SchemeKind::kS1;
    for (auto [key, dst] : {std::pair{"a1", &p.a1}, {"a2", &p.a2}, {"a3", &p.a3},
                            {"a4", &p.a4}, {"p_alpha", &p.p_alpha},
                            {"p_beta", &p.p_beta}, {"p_gamma", &p.p_gamma}}) {
      auto v = GetNumber(j, key);
      if (!v.ok()) return v.status();
      *dst = *v;
    }
  } else if (kind == "S2") {
    p.kind = SchemeKind::kS2;
    for (auto [key, dst] : {std::pair{"alpha", &p.alpha}, {"beta", &p.beta},
                            {"gamma", &p.gamma}}) {
      auto v = GetNumber(j, key);
      if (!v.ok()) return v.status();
      *dst = *v;
    }
  } else {
    return absl::InvalidArgumentError(absl::StrCat("unknown scheme kind '", kind, "'"));
  }
  auto pm = GetNumber(j, "p_m");
  if (!pm.ok()) return pm.status();
  p.p_m = *pm;
  auto pz = PerAgent(j, "p_zeta", n);
  if (!pz.ok()) return pz.status();
  auto pe = PerAgent(j, "p_eta", n);
  if (!pe.ok()) return pe.status();
  p.p_zeta = *pz;
  p.p_eta = *pe;
  p.noise_multiplier = NumberOr(j, "noise_multiplier", 1.0);
  if (absl::Status s = ValidateSchemeParams(p, n); !s.ok()) return s;
  return p;
}

Json SchemeToJson(const SchemeParams& p) {
  Json j;
  j["schema_version"] = kSchemaVersion;
  j["kind"] = SchemeKindName(p.kind);
  if (p.kind == SchemeKind::kS1) {
    j["a1"] = p.a1;
    j["a2"] = p.a2;
    j["a3"] = p.a3;
    j["a4"] = p.a4;
    j["p_alpha"] = p.p_alpha;
    j["p_beta"] = p.p_beta;
    j["p_gamma"] = p.p_gamma;
  } else {
    j["alpha"] = p.alpha;
    j["beta"] = p.beta;
    j["gamma"] = p.gamma;
  }
  j["p_m"] = p.p_m;
  j["p_zeta"] = p.p_zeta;
  j["p_eta"] = p.p_eta;
  j["noise_multiplier"] = p.noise_multiplier;
  return j;
}

absl::StatusOr<Dataset> DatasetFromJson(const Json& j) {
  if (!j.is_object() || !j.contains("samples")) {
    return absl::InvalidArgumentError("dataset JSON needs 'samples'");
  }
  Dataset ds;
  ds.agent = j.value("agent", 0);
  ds.r = j.value("r", 1);
  for (const Json& s : j.at("samples")) {
    if (s.is_number()) {
      ds.samples.push_back(Vector::Constant(1, s.get<double>()));
      continue;
    }
    Vector v(s.size());
    for (size_t t = 0; t < s.size(); ++t) v(t) = s[t].get<double>();
    ds.samples.push_back(v);
  }
  if (absl::Status st = ValidateDataset(ds); !st.ok()) return st;
  return ds;
}

Json DatasetToJson(const Dataset& ds) {
  Json samples = Json::array();
  for (const Vector& v : ds.samples) samples.push_back(VectorToJson(v));
  return Json{{"agent", ds.agent}, {"r", ds.r}, {"samples", samples}};
}

Json ConstantsToJson(const ObjectiveConstants& c) {
  return Json{{"L1", Num(c.l1_smooth)}, {"L2", Num(c.l2_holder)}, {"tau", Num(c.tau)},
              {"sigma_g", Num(c.sigma_g)}, {"mu", Num(c.mu)}};
}

absl::StatusOr<std::unique_ptr<Objective>> ObjectiveFromJson(const Json& j) {
  if (!j.is_object() || !j.contains("kind")) {
    return absl::InvalidArgumentError("objective JSON needs a 'kind'");
  }
  const std::string kind = j.at("kind").get<std::string>();
  const int n = j.value("n", 0);
  const int samples = j.value("D", 0);
  const uint64_t seed = j.value("seed", uint64_t{1});
  std::vector<Dataset> datasets;
  if (j.contains("datasets")) {
    for (const Json& dj : j.at("datasets")) {
      auto ds = DatasetFromJson(dj);
      if (!ds.ok()) return ds.status();
      datasets.push_back(*std::move(ds));
    }
  } else if (n < 1 || samples < 1) {
    return absl::InvalidArgumentError("objective JSON needs n >= 1 and D >= 1 or explicit datasets");
  }
  std::unique_ptr<Objective> obj;
  if (kind == "quadratic") {
    Matrix a;
    if (j.contains("A")) {
      auto m = MatrixFromJson(j.at("A"));
      if (!m.ok()) return m.status();
      a = *m;
    } else {
      const int d = j.value("d", 1);
      double smin = 1.0, smax = 2.0;
      if (j.contains("singular_values")) {
        smin = j.at("singular_values")[0].get<double>();
        smax = j.at("singular_values")[1].get<double>();
      }
      a = RandomConditionedMatrix(d, smin, smax, SplitMix64(seed + 1));
    }
    Vector b(a.rows());
    if (j.contains("b")) {
      if (j.at("b").size() != static_cast<size_t>(a.rows())) {
        return absl::InvalidArgumentError("b must have one entry per row of A");
      }
      for (int i = 0; i < a.rows(); ++i) b(i) = j.at("b")[i].get<double>();
    } else {
      KeyedStream rng(seed, 0, 1, Role::kMisc);
      std::normal_distribution<double> normal(0.0, 1.0);
      for (int i = 0; i < a.rows(); ++i) b(i) = normal(rng);
    }
    if (datasets.empty()) datasets = GenerateGaussianDatasets(n, samples, 2.0, seed);
    auto made = QuadraticObjective::Create(a, b, std::move(datasets));
    if (!made.ok()) return made.status();
    obj = std::move(*made);
    if (j.contains("constants") && j.at("constants").is_string()) {
      const std::string which = j.at("constants").get<std::string>();
      if (which != "smooth_part") {
        return absl::InvalidArgumentError(absl::StrCat("unknown constants preset '", which, "'"));
      }
      // Constants of the smooth least-squares part: gradient Lipschitz
      // ||A||^2 / n and PL constant lambda_min(A^T A) / n.
      const auto* q = static_cast<const QuadraticObjective*>(obj.get());
      Eigen::JacobiSVD<Matrix> svd(q->a());
      const Vector s = svd.singularValues();
      ObjectiveConstants c = obj->constants();
      c.l1_smooth = s(0) * s(0) / obj->num_agents();
      c.mu = s(s.size() - 1) * s(s.size() - 1) / obj->num_agents();
      obj->set_constants(c);
    }
  } else if (kind == "trig") {
    if (datasets.empty()) datasets = GenerateLaplaceDatasets(n, samples, 0.5, seed);
    auto made = TrigObjective::Create(std::move(datasets));
    if (!made.ok()) return made.status();
    obj = std::move(*made);
  } else if (kind == "logistic") {
    const int d = j.value("d", 2);
    if (datasets.empty()) datasets = GenerateLogisticDatasets(n, samples, d, seed);
    auto made = LogisticObjective::Create(d, j.value("lambda", 0.1), std::move(datasets));
    if (!made.ok()) return made.status();
    obj = std::move(*made);
  } else {
    return absl::InvalidArgumentError(absl::StrCat("unknown objective kind '", kind, "'"));
  }
  if (j.contains("constants") && j.at("constants").is_object()) {
    const Json& cj = j.at("constants");
    ObjectiveConstants c = obj->constants();
    c.l1_smooth = NumberOr(cj, "L1", c.l1_smooth);
    c.l2_holder = NumberOr(cj, "L2", c.l2_holder);
    c.tau = NumberOr(cj, "tau", c.tau);
    c.sigma_g = NumberOr(cj, "sigma_g", c.sigma_g);
    c.mu = NumberOr(cj, "mu", c.mu);
    if (absl::Status s = ValidateConstants(c); !s.ok()) return s;
    obj->set_constants(c);
  }
  return obj;
}

Json ValidationToJson(const ValidationReport& r) {
  Json entries = Json::array();
  for (const InequalityCheck& c : r.entries) {
    entries.push_back({{"name", c.name}, {"lhs", Num(c.lhs)}, {"rhs", Num(c.rhs)},
                       {"strict", c.strict}, {"satisfied", c.satisfied},
                       {"slack", Num(c.slack)}});
  }
  Json j{{"entries", entries}, {"overall", r.overall}};
  if (r.theta) j["theta"] = Num(*r.theta);
  if (r.q1) j["Q1"] = Num(*r.q1);
  if (r.q2) j["Q2"] = Num(*r.q2);
  return j;
}

Json VerifyToJson(const VerifyReport& r) {
  Json checks = Json::array();
  for (const ConstantCheck& c : r.checks) {
    checks.push_back({{"name", c.name}, {"estimate", Num(c.estimate)},
                      {"declared", Num(c.declared)}, {"pass", c.pass}});
  }
  return Json{{"checks", checks}, {"all_pass", r.all_pass()}};
}

Json BudgetToJson(const BudgetReport& r) {
  Json eps = Json::array();
  for (double e : r.eps) eps.push_back(Num(e));
  return Json{{"schema_version", kSchemaVersion},
              {"K", r.horizon},
              {"epsilon", eps},
              {"epsilon_max", Num(r.eps_max)},
              {"finiteness", ValidationToJson(r.finiteness)},
              {"tail_order", r.tail_order}};
}

Json ContractionToJson(const ContractionReport& r) {
  return Json{{"rho", Num(r.rho)},
              {"contracts", r.contracts},
              {"s_tilde", {Num(r.s_tilde(0)), Num(r.s_tilde(1)), Num(r.s_tilde(2))}},
              {"A_s_tilde", {Num(r.a_s_tilde(0)), Num(r.a_s_tilde(1)), Num(r.a_s_tilde(2))}},
              {"certificate", r.certificate}};
}

Json DominanceToJson(const DominanceReport& r) {
  return Json{{"runs", r.runs}, {"checked", r.checked}, {"passed", r.passed},
              {"pass_rate", Num(r.pass_rate)}, {"worst_excess", Num(r.worst_excess)},
              {"component_failures", r.component_failures},
              {"first_failure", r.first_failure}};
}

}  // namespace dpgt
