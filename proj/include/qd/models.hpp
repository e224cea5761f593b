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

#include <array>
#include <cstdint>
#include <optional>
#include <utility>
#include <vector>

#include "qd/dephasing.hpp"
#include "qd/linalg.hpp"
#include "qd/quotient.hpp"

namespace qd {

/// diag(0, 1, ..., n−1) over `dims`: the observable whose eigenbasis is the
/// product basis itself. Dephasing against it per index keeps only the
/// diagonal of ρ in that basis.
Operator product_basis_observable(const Dims &dims);

/// Operator on `n_qubits` qubits acting as `factors[q]` on each listed qubit
/// (0-based) and as the identity elsewhere.
Operator lift_qubit_operator(std::size_t n_qubits, const std::vector<std::pair<std::size_t, Operator>> &factors,
                             const Tolerances &tol = {});

// ---------------------------------------------------------------------------
// Stern-Gerlach: spin ⊗ pointer {|−p_z⟩, |+p_z⟩}, natural units (ħ = 1).

struct SternGerlachParams {
    Complex alpha{1.0, 0.0};
    Complex beta{0.0, 0.0};
    double omega = 0.0;  // |e| B_z(0) / 2m
    double pz = 0.0;     // momentum transfer
    double t = 0.0;
    double z = 0.0;
    bool inject_random_phase = false;

    /// Throws ValidationError listing every violated constraint.
    void validate(const Tolerances &tol = {}) const;
    bool operator==(const SternGerlachParams &) const = default;
};

struct SternGerlachResult {
    StateVector correlated;
    DensityMatrix ensemble;
    /// Spin σ_z statistics of the ensemble.
    EnsembleReport report;
    /// Pointer phases (γ₁, γ₂); zero unless injected.
    std::array<double, 2> pointer_phases{0.0, 0.0};
};

/// Spin precession exp(−i(ωt − p_z z)σ_z), spin-conditioned pointer shift
/// |↑⟩|−p_z⟩ → |↑⟩|−p_z⟩, |↓⟩|−p_z⟩ → |↓⟩|+p_z⟩, optional random pointer
/// phases diag(e^{−iγ₁}, e^{−iγ₂}) drawn from `seed`, then per-index
/// dephasing in the spin ⊗ pointer product basis.
SternGerlachResult stern_gerlach_run(const SternGerlachParams &p, std::uint64_t seed, const Tolerances &tol = {});

// ---------------------------------------------------------------------------
// N-qubit chain: qubit 1 is copied onto qubits 2..N by C-NOT links.

struct ChainParams {
    std::size_t n_qubits = 1;
    Complex alpha{1.0, 0.0};
    Complex beta{0.0, 0.0};
    /// Steady phases of link 1→(i+2), one entry per link; empty means zeros.
    std::vector<double> link_gamma;
    std::vector<double> link_delta;
    double gamma_env = 0.0;
    double delta_env = 0.0;
    std::uint64_t seed = 0;
    /// 1-based target qubits in application order; empty means 2, 3, ..., N.
    std::vector<std::size_t> link_order;

    /// Link and environment phases drawn uniformly from `seed`.
    static ChainParams with_random_phases(std::size_t n_qubits, Complex alpha, Complex beta, std::uint64_t seed);
    void validate(const Tolerances &tol = {}) const;
    bool operator==(const ChainParams &) const = default;
};

struct ChainResult {
    StateVector pre_dephase;
    DensityMatrix ensemble;
    /// Statistics of qubit 1's bit value n̂₁ = |1⟩⟨1|.
    EnsembleReport report;
    /// ‖[S, CNOT₁₂]‖_F for every applied steady operator S (links, then the
    /// environment operator).
    std::vector<double> stability_residuals;
};

/// Applies CNOT(1→i) followed by the link's steady operator for each link,
/// then the environment phase operator, then per-index dephasing in the
/// computational basis.
///
/// The steady operator of link 1→i is e^{−iγ}|00⟩⟨00| + |01⟩⟨01| +
/// e^{−iδ}(|10⟩⟨10| + |11⟩⟨11|) on qubits (1, i). On the states the link can
/// produce it equals e^{−iγ}|00⟩⟨00| + e^{−iδ}|11⟩⟨11|, and the |10⟩ phase
/// makes it commute with every C-NOT controlled by qubit 1. Throws KindError
/// if a steady operator fails that stability check.
ChainResult qubit_chain_run(const ChainParams &p, const Tolerances &tol = {});

// ---------------------------------------------------------------------------
// Von Neumann measurement: U = exp(−it Σ_n λ_n P_n ⊗ T_A).

struct MeasurementSetup {
    ObservableSpec system_spec;
    /// One coupling per degeneracy block of `system_spec`, in block order.
    std::vector<double> couplings;
    Operator pointer_generator;
    StateVector apparatus_init;

    void validate(const Tolerances &tol = {}) const;
};

/// Direct exponential of the coupling Hamiltonian. Cross-checked against
/// von_neumann_unitary_factorized (1e-9) and against commutation with O ⊗ I
/// (1e-10); a failed check throws Error.
Operator von_neumann_unitary(const MeasurementSetup &setup, double t, const Tolerances &tol = {});
/// Σ_n P_n ⊗ exp(−itλ_n T_A).
Operator von_neumann_unitary_factorized(const MeasurementSetup &setup, double t, const Tolerances &tol = {});
/// exp(−itλ_n T_A)|a₀⟩ for every block n.
std::vector<StateVector> apparatus_branches(const MeasurementSetup &setup, double t, const Tolerances &tol = {});

struct PipelineResult {
    StateVector correlated;
    /// System-observable statistics after dephasing the system blocks, with
    /// branch overlaps and the random-phase invariance residual attached.
    EnsembleReport report;
    /// System state after tracing out the apparatus.
    DensityMatrix reduced;
};

PipelineResult measurement_pipeline(const StateVector &psi, const MeasurementSetup &setup, double t,
                                    std::uint64_t seed, const Tolerances &tol = {});

// ---------------------------------------------------------------------------
// Cat: atom {|E₂⟩, |E₁⟩} ⊗ cat {|alive⟩, |dead⟩}.

struct CatParams {
    Complex alpha{1.0, 0.0};  // stay excited, cat alive
    Complex beta{0.0, 0.0};   // decay, cat dead
    std::optional<double> gamma;
    std::optional<double> delta;

    void validate(const Tolerances &tol = {}) const;
    bool operator==(const CatParams &) const = default;
};

struct CatResult {
    StateVector transition;
    DensityMatrix ensemble;
    /// Alive (0) / dead (1) statistics.
    EnsembleReport report;
    double gamma = 0.0;
    double delta = 0.0;
};

/// e^{−iγ}α|E₂⟩|alive⟩ + e^{−iδ}β|E₁⟩|dead⟩ produced by a von Neumann
/// coupling that rotates the cat (generator σ_y) only in the |E₁⟩ branch;
/// phases missing from `p` are drawn from `seed`.
CatResult cat_run(const CatParams &p, std::uint64_t seed, const Tolerances &tol = {});

// ---------------------------------------------------------------------------
// Product-state environment baseline for the decoherence function.

/// E₁ = |0⟩^⊗N and E₂ = (cos θ|0⟩ + sin θ|1⟩)^⊗N, so ⟨E₁|E₂⟩ = cos^N θ.
std::pair<StateVector, StateVector> product_environment_branches(std::size_t n_qubits, double theta,
                                                                 const Tolerances &tol = {});

struct DecoherenceTrajectory {
    std::vector<double> times;
    std::vector<double> gamma;
};

/// Γ(t) for product environments with θ(t) = rate·t, t = k·dt, k = 0..steps−1.
DecoherenceTrajectory environment_decoherence(std::size_t n_qubits, double rate, double dt, std::size_t steps,
                                              const Tolerances &tol = {});

}  // namespace qd
