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

#include <cstdint>
#include <optional>
#include <span>
#include <vector>

#include "qd/linalg.hpp"
#include "qd/quotient.hpp"

namespace qd {

/// Independent uniform phases in [0, 2π), one per phase group.
struct PhaseSample {
    std::vector<double> gammas;
    std::uint64_t seed = 0;
    std::uint64_t stream_index = 0;
};

/// Phases drawn from the counter-based stream (seed, stream): the result
/// depends on nothing else, so samples can be produced in any order or on
/// any thread.
PhaseSample sample_phases(std::size_t count, std::uint64_t seed, std::uint64_t stream);

/// U(γ) = Σ_k e^{−iγ_{g(k)}} |k⟩⟨k| in the eigenbasis of `spec`, where g maps
/// an eigen-index to its phase group under `mode`. Throws ShapeError when the
/// sample length differs from the group count.
Operator random_phase_unitary(const PhaseSample &sample, const ObservableSpec &spec, ClassMode mode);

/// Exact average of U(γ) ρ U(γ)† over uniformly distributed phases: in the
/// eigenbasis every entry coupling two different phase groups is removed.
DensityMatrix dephase_analytic(const DensityMatrix &rho, const ObservableSpec &spec, ClassMode mode);
DensityMatrix dephase_analytic(const DensityMatrix &rho, const ObservableSpec &spec);

/// Finite-sample estimate (1/M) Σ_k U(γ_k) ρ U(γ_k)† with sample k drawn from
/// stream k of `seed`. Samples are reduced in fixed-size chunks whose partial
/// sums are added in chunk order, so the result is bit-identical for every
/// `workers` value.
DensityMatrix dephase_monte_carlo(const DensityMatrix &rho, const ObservableSpec &spec, ClassMode mode,
                                  std::uint64_t samples, std::uint64_t seed, unsigned workers = 1);
/// Average over explicitly supplied phase samples.
DensityMatrix dephase_monte_carlo(const DensityMatrix &rho, const ObservableSpec &spec, ClassMode mode,
                                  std::span<const PhaseSample> samples);

enum class EnsembleMethod { analytic, monte_carlo };

/// Outcomes and their Born probabilities, with provenance and optional
/// measurement diagnostics.
struct EnsembleReport {
    std::vector<double> outcome_values;
    std::vector<double> probabilities;
    double expectation = 0.0;
    EnsembleMethod method = EnsembleMethod::analytic;
    std::uint64_t samples = 0;
    std::uint64_t seed = 0;

    /// |⟨φ_m|φ_n⟩| for every pair m < n of apparatus branch states, ordered
    /// (0,1), (0,2), ..., (1,2), ...; empty when not applicable.
    std::vector<double> branch_overlaps;
    /// Set when some branch overlap exceeds 1e-12.
    bool overlap_flagged = false;
    /// Largest change of the report when a sampled random-phase unitary is
    /// applied before measuring.
    std::optional<double> invariance_residual;

    bool operator==(const EnsembleReport &) const = default;
};

/// Probabilities from the dephased diagonal (aggregated per block in
/// per_block mode) and expectation Tr(O ρ_dephased).
EnsembleReport born_ensemble(const DensityMatrix &rho, const ObservableSpec &spec, ClassMode mode);
EnsembleReport born_ensemble(const DensityMatrix &rho, const ObservableSpec &spec);
EnsembleReport born_ensemble(const StateVector &psi, const ObservableSpec &spec, ClassMode mode);
EnsembleReport born_ensemble(const StateVector &psi, const ObservableSpec &spec);

/// Ensemble of U(t)ψ₀. Also records, as `invariance_residual`, how far the
/// report moves when a sampled random-phase unitary (seeded by
/// `invariance_seed`) acts on U(t)ψ₀. Throws KindError if `u_t` is not unitary.
EnsembleReport measure_after_evolution(const StateVector &psi0, const Operator &u_t, const ObservableSpec &spec,
                                       const Tolerances &tol = {}, std::uint64_t invariance_seed = 0);

/// Returned by decoherence_function for orthogonal branch pairs.
inline constexpr double kOrthogonalGamma = -1e9;

/// Γ(t) = ln |⟨E₁(t)|E₂(t)⟩|² for each time step, clamped to ≤ 0. Pairs with
/// |⟨E₁|E₂⟩| < `tol.null_tol` yield kOrthogonalGamma.
std::vector<double> decoherence_function(std::span<const StateVector> e1, std::span<const StateVector> e2,
                                         const Tolerances &tol = {});

}  // namespace qd
