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

#include <cstddef>

namespace qd {

/// Numerical thresholds shared by every module. Defaults are the library-wide
/// contract; callers pass a modified copy where a looser or tighter check is
/// wanted.
struct Tolerances {
    double norm_tol = 1e-12;   // |‖ψ‖ − 1|, |Tr ρ − 1|
    double op_tol = 1e-10;     // ‖U†U − I‖_F, ‖A − A†‖_F
    double psd_tol = 1e-9;     // smallest admissible eigenvalue of ρ is −psd_tol
    double eig_tol = 1e-9;     // ‖AV − VΛ‖_F
    double degen_tol = 1e-8;   // eigenvalue gap below which eigenpairs share a block
    double label_tol = 1e-9;   // class-label comparison, max norm
    double null_tol = 1e-12;   // norm below which a vector counts as zero
    double gamma_cap_tol = 1e-12;
    std::size_t max_dim = 4096;

    /// Defaults with `max_dim` taken from the QD_MAX_DIM environment variable
    /// when it is set to a positive integer.
    static Tolerances from_environment();

    bool operator==(const Tolerances &) const = default;
};

}  // namespace qd
