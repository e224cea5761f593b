// Copyright 2026 The qdlab Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//      http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#pragma once

#include <string>

#include "json.hpp"
#include "qd/dephasing.hpp"
#include "qd/linalg.hpp"

namespace qd {

inline constexpr int kSchemaVersion = 1;

const char *to_string(EnsembleMethod method);
EnsembleMethod ensemble_method_from_string(const std::string &text);

/// Report fields as typed, plus diagnostics when present.
nlohmann::json to_json(const EnsembleReport &report);
EnsembleReport ensemble_report_from_json(const nlohmann::json &j);

/// `outcome,probability` header followed by one row per outcome.
std::string to_csv(const EnsembleReport &report);

/// {"dims": [...], "rows": ["re+imj re+imj ...", ...]} using the matrix
/// exchange entry format.
nlohmann::json to_json(const DensityMatrix &rho);
DensityMatrix density_matrix_from_json(const nlohmann::json &j, const Tolerances &tol = {});

}  // namespace qd
