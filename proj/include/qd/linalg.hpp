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

#include <complex>
#include <cstddef>
#include <span>
#include <vector>

#include <Eigen/Dense>

#include "qd/tolerances.hpp"

namespace qd {

using Complex = std::complex<double>;
using CMatrix = Eigen::MatrixXcd;
using CVector = Eigen::VectorXcd;
using RVector = Eigen::VectorXd;

/// Subsystem dimensions of a tensor-product space. The composite basis is
/// row-major over subsystem indices: the leftmost subsystem varies slowest.
using Dims = std::vector<std::size_t>;

/// Product of `dims`; throws CapacityError when it exceeds `max_dim`.
std::size_t total_dimension(const Dims &dims, std::size_t max_dim);

/// Normalized amplitude vector over a labeled tensor-product basis.
class StateVector {
   public:
    /// Validates length and unit norm (within `tol.norm_tol`).
    StateVector(Dims dims, CVector amplitudes, const Tolerances &tol = {});

    /// Rescales `amplitudes` to unit norm. Throws NullVectorError when the
    /// norm is below `tol.null_tol`.
    static StateVector normalized(Dims dims, CVector amplitudes, const Tolerances &tol = {});
    static StateVector basis(Dims dims, std::size_t index);

    const Dims &dims() const { return dims_; }
    const CVector &amplitudes() const { return amplitudes_; }
    std::size_t dim() const { return static_cast<std::size_t>(amplitudes_.size()); }
    Complex operator[](std::size_t i) const { return amplitudes_[static_cast<Eigen::Index>(i)]; }

    /// ⟨this|other⟩.
    Complex inner(const StateVector &other) const;

   private:
    Dims dims_;
    CVector amplitudes_;
};

enum class OperatorKind { general, hermitian, unitary };

/// Dense square operator. The declared kind is checked when an operation
/// depends on it, not at construction.
class Operator {
   public:
    Operator(Dims dims, CMatrix matrix, OperatorKind kind = OperatorKind::general);

    static Operator identity(Dims dims);
    /// diag(values) as a Hermitian operator.
    static Operator diagonal(Dims dims, const RVector &values);

    const Dims &dims() const { return dims_; }
    const CMatrix &matrix() const { return matrix_; }
    OperatorKind kind() const { return kind_; }
    std::size_t dim() const { return static_cast<std::size_t>(matrix_.rows()); }

    bool is_hermitian(double tol) const;
    bool is_unitary(double tol) const;
    /// Throws KindError unless ‖A − A†‖_F ≤ tol.
    void require_hermitian(double tol) const;
    /// Throws KindError unless ‖U†U − I‖_F ≤ tol.
    void require_unitary(double tol) const;

    Operator adjoint() const;
    /// Maps a state through this operator. The result is renormalization-free,
    /// so the operator must preserve norm (unitary) to within `tol.norm_tol`.
    StateVector apply(const StateVector &psi, const Tolerances &tol = {}) const;

   private:
    Dims dims_;
    CMatrix matrix_;
    OperatorKind kind_;
};

/// Product of two operators; unitary × unitary stays unitary.
Operator operator*(const Operator &a, const Operator &b);
Operator operator+(const Operator &a, const Operator &b);
Operator operator*(Complex scale, const Operator &a);

/// Hermitian, unit-trace, positive semidefinite matrix.
class DensityMatrix {
   public:
    /// Validates hermiticity (`op_tol`), trace (`norm_tol`) and the smallest
    /// eigenvalue (≥ −`psd_tol`).
    DensityMatrix(Dims dims, CMatrix matrix, const Tolerances &tol = {});

    /// |ψ⟩⟨ψ|.
    static DensityMatrix from_pure(const StateVector &psi);
    /// Σ w_k |ψ_k⟩⟨ψ_k| with w ≥ 0 and Σ w = 1.
    static DensityMatrix mixture(std::span<const double> weights, std::span<const StateVector> states,
                                 const Tolerances &tol = {});

    /// Skips validation. Reserved for results that are density matrices by
    /// construction (dephasing, partial traces, convex sums).
    struct Unchecked {};
    DensityMatrix(Unchecked, Dims dims, CMatrix matrix);

    const Dims &dims() const { return dims_; }
    const CMatrix &matrix() const { return matrix_; }
    std::size_t dim() const { return static_cast<std::size_t>(matrix_.rows()); }
    double trace() const { return matrix_.trace().real(); }
    double min_eigenvalue() const;

   private:
    Dims dims_;
    CMatrix matrix_;
};

Operator tensor_product(const Operator &a, const Operator &b, const Tolerances &tol = {});
StateVector tensor_product(const StateVector &a, const StateVector &b, const Tolerances &tol = {});
DensityMatrix tensor_product(const DensityMatrix &a, const DensityMatrix &b, const Tolerances &tol = {});
/// Left fold of tensor_product over a non-empty list.
Operator tensor_product(std::span<const Operator> factors, const Tolerances &tol = {});

/// AB − BA. Throws ShapeError on mismatched dims.
Operator commutator(const Operator &a, const Operator &b);

struct HermitianEigen {
    RVector eigenvalues;   // ascending
    Operator eigenvectors; // columns, unitary
    /// Index sets of the degeneracy clusters, in ascending eigenvalue order.
    std::vector<std::vector<std::size_t>> blocks;
    /// Set when every eigenvector is a standard basis vector; `permutation[k]`
    /// is then the basis index carrying eigenvector k.
    std::vector<std::size_t> permutation;

    bool is_permutation() const { return !permutation.empty(); }
};

/// Spectral decomposition of a Hermitian operator.
///
/// Eigenvalues are ascending. Eigenvalues closer than `degen_tol` to their
/// neighbour form one cluster. Inside a cluster the basis is made canonical:
/// it is rebuilt from the cluster's projector by pivoted Gram-Schmidt over
/// the standard basis, each vector is phased so that its first component of
/// largest magnitude is real positive, and vectors are ordered by the index
/// of that component. Singletons get the same phase convention.
HermitianEigen hermitian_eig(const Operator &a, const Tolerances &tol = {});

/// exp(scale · A) through the spectral decomposition of Hermitian A. With a
/// purely imaginary scale the result is declared unitary.
/// Throws UnsupportedError for non-Hermitian input.
Operator matrix_exp(const Operator &a, Complex scale, const Tolerances &tol = {});

/// Reduced density matrix over the subsystems listed in `keep` (any order,
/// duplicates ignored; the result keeps them in ascending order).
DensityMatrix partial_trace(const DensityMatrix &rho, std::span<const std::size_t> keep);

/// Frobenius norm of the difference; throws ShapeError on mismatched sizes.
double frobenius_distance(const CMatrix &a, const CMatrix &b);

namespace pauli {
Operator x();
Operator y();
Operator z();
Operator hadamard();
}  // namespace pauli

}  // namespace qd
