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
#include <span>
#include <vector>

#include "json.hpp"
#include "qd/linalg.hpp"

namespace qd {

/// How phases (and class labels) are grouped: one per eigenvector, or one per
/// degeneracy block of the observable.
enum class ClassMode { per_index, per_block };

/// Hermitian observable with its spectral data cached.
class ObservableSpec {
   public:
    /// Throws KindError for a non-Hermitian operator.
    explicit ObservableSpec(Operator op, const Tolerances &tol = {});

    const Operator &op() const { return op_; }
    const Dims &dims() const { return op_.dims(); }
    std::size_t dim() const { return op_.dim(); }
    const RVector &eigenvalues() const { return eig_.eigenvalues; }
    const Operator &eigenbasis() const { return eig_.eigenvectors; }
    const std::vector<std::vector<std::size_t>> &blocks() const { return eig_.blocks; }
    /// Block number of eigen-index `k`.
    std::size_t block_of(std::size_t k) const { return block_of_[k]; }
    /// Mean eigenvalue of each block.
    const std::vector<double> &block_values() const { return block_values_; }
    bool is_degenerate() const { return blocks().size() < dim(); }
    /// per_block for degenerate observables, per_index otherwise.
    ClassMode default_mode() const { return is_degenerate() ? ClassMode::per_block : ClassMode::per_index; }
    /// Number of phase groups under `mode`.
    std::size_t group_count(ClassMode mode) const {
        return mode == ClassMode::per_index ? dim() : blocks().size();
    }
    /// Group of eigen-index `k` under `mode`.
    std::size_t group_of(std::size_t k, ClassMode mode) const {
        return mode == ClassMode::per_index ? k : block_of_[k];
    }

    /// V†ψ: amplitudes in the eigenbasis.
    CVector to_eigenbasis(const CVector &psi) const;
    CVector from_eigenbasis(const CVector &coeffs) const;
    /// V†ρV and its inverse.
    CMatrix to_eigenbasis(const CMatrix &rho) const;
    CMatrix from_eigenbasis(const CMatrix &rho) const;
    /// Projector onto block `b`, in the original basis.
    CMatrix block_projector(std::size_t b) const;

   private:
    Operator op_;
    HermitianEigen eig_;
    std::vector<std::size_t> block_of_;
    std::vector<double> block_values_;
};

/// Spectral data with degeneracy blocks computed at `tol.degen_tol`.
ObservableSpec observable_from_matrix(const Operator &m, const Tolerances &tol = {});

/// The outcome probabilities |⟨k|ψ⟩|² that identify an equivalence class.
struct ClassLabel {
    std::vector<double> probabilities;        // per eigen-index
    std::vector<double> block_probabilities;  // summed per degeneracy block
    std::vector<std::vector<std::size_t>> blocks;
    double tol = 1e-9;

    bool operator==(const ClassLabel &) const = default;
};

/// {"probabilities": [...], "blocks": [[...]], "tol": x}
nlohmann::json to_json(const ClassLabel &label);
ClassLabel class_label_from_json(const nlohmann::json &j);

struct CommutantCheck {
    bool member = false;
    /// max over observables of ‖[U, O]‖_F / ‖O‖_F.
    double residual = 0.0;
};

/// Membership of `u` in the joint stability group {U : [U, O] = 0 for every O}.
CommutantCheck commutant_member(const Operator &u, std::span<const Operator> observables, double tol = 1e-10);
CommutantCheck commutant_member(const Operator &u, const Operator &observable, double tol = 1e-10);

ClassLabel class_label(const StateVector &psi, const ObservableSpec &spec, const Tolerances &tol = {});

/// True iff the labels agree (per index or per block) within `tol.label_tol`.
bool same_class(const StateVector &a, const StateVector &b, const ObservableSpec &spec, ClassMode mode,
                const Tolerances &tol = {});
bool same_class(const StateVector &a, const StateVector &b, const ObservableSpec &spec, const Tolerances &tol = {});

/// Canonical class representative: nonnegative amplitudes |α_k| in the
/// eigenbasis, expressed back in the original basis.
StateVector gauge_fix(const StateVector &psi, const ObservableSpec &spec, const Tolerances &tol = {});

struct SuperpositionResult {
    bool closed = false;  // the combination stayed in a's class
    ClassLabel label;     // label of the normalized combination
};

/// Normalizes c0·a + c1·b and compares its class with a's. Throws
/// NullVectorError when the combination vanishes and ShapeError when both
/// coefficients are zero.
SuperpositionResult superposition_closed(const StateVector &a, const StateVector &b, Complex c0, Complex c1,
                                         const ObservableSpec &spec, const Tolerances &tol = {});

/// A sampled member of the stability group of `spec`: an independent Haar
/// unitary inside every degeneracy block (a pure phase for singleton blocks),
/// expressed in the original basis. Deterministic in (seed, stream).
Operator sample_commutant_unitary(const ObservableSpec &spec, std::uint64_t seed, std::uint64_t stream);

}  // namespace qd
