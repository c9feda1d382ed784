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

#ifndef DPGT_JSON_IO_H_
#define DPGT_JSON_IO_H_

#include <memory>
#include <string>

#include "absl/status/statusor.h"
#include "dpgt/bound_oracle.h"
#include "dpgt/graph_spectral.h"
#include "dpgt/objectives.h"
#include "dpgt/privacy_accountant.h"
#include "dpgt/schemes.h"
#include "json.hpp"

namespace dpgt {

using Json = nlohmann::json;

inline constexpr int kSchemaVersion = 1;

absl::StatusOr<Json> ReadJsonFile(const std::string& path);
absl::Status WriteTextFile(const std::string& path, const std::string& text);
absl::StatusOr<std::string> ReadTextFile(const std::string& path);
// FNV-1a 64-bit digest, hex encoded.
std::string ContentHash(const std::string& text);

absl::StatusOr<Matrix> MatrixFromJson(const Json& j);
Json MatrixToJson(const Matrix& m);
Json VectorToJson(const Vector& v);

// {"n": int, "R": [[...]], "C": [[...]]}
absl::StatusOr<GraphPair> GraphFromJson(const Json& j);
Json GraphToJson(const GraphPair& gp);
Json SpectralToJson(const SpectralConstants& sc, const Assumption1Report& a1);

absl::StatusOr<SchemeParams> SchemeFromJson(const Json& j, int n);
Json SchemeToJson(const SchemeParams& p);

// {"agent": int, "r": int, "samples": [[...], ...]}
absl::StatusOr<Dataset> DatasetFromJson(const Json& j);
Json DatasetToJson(const Dataset& ds);

// Objective specification:
// {"kind": "quadratic" | "trig" | "logistic", "n": int, "D": int,
//  "seed": int, "d": int, "A": [[...]], "b": [...],
//  "singular_values": [min, max], "lambda": real, "datasets": [...],
//  "constants": {"L1": .., "L2": .., "tau": .., "sigma_g": .., "mu": ..}}
absl::StatusOr<std::unique_ptr<Objective>> ObjectiveFromJson(const Json& j);
Json ConstantsToJson(const ObjectiveConstants& c);

Json ValidationToJson(const ValidationReport& r);
Json VerifyToJson(const VerifyReport& r);
Json BudgetToJson(const BudgetReport& r);
Json ContractionToJson(const ContractionReport& r);
Json DominanceToJson(const DominanceReport& r);

// Non-finite numbers become strings ("inf", "-inf", "nan") so the output
// stays valid JSON.
Json Num(double v);

}  // namespace dpgt

#endif  // DPGT_JSON_IO_H_
