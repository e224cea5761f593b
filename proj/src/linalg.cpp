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

#include "qd/linalg.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>
#include <string>

#include "qd/errors.hpp"

namespace qd {

namespace {

std::size_t dims_product(const Dims &dims) {
    if (dims.empty()) {
        throw ShapeError("dims must name at least one subsystem");
    }
    std::size_t total = 1;
    for (std::size_t d : dims) {
        if (d == 0) {
            throw ShapeError("subsystem dimension must be positive");
        }
        if (total > std::numeric_limits<std::size_t>::max() / d) {
            throw CapacityError("total dimension overflows");
        }
        total *= d;
    }
    return total;
}

Dims concat(const Dims &a, const Dims &b) {
    Dims out = a;
    out.insert(out.end(), b.begin(), b.end());
    return out;
}

bool is_diagonal(const CMatrix &m) {
    for (Eigen::Index j = 0; j < m.cols(); ++j) {
        for (Eigen::Index i = 0; i < m.rows(); ++i) {
            if (i != j && m(i, j) != Complex(0.0, 0.0)) {
                return false;
            }
        }
    }
    return true;
}

CMatrix kron(const CMatrix &a, const CMatrix &b) {
    CMatrix out(a.rows() * b.rows(), a.cols() * b.cols());
    for (Eigen::Index i = 0; i < a.rows(); ++i) {
        for (Eigen::Index j = 0; j < a.cols(); ++j) {
            out.block(i * b.rows(), j * b.cols(), b.rows(), b.cols()) = a(i, j) * b;
        }
    }
    return out;
}

void require_same_dims(const Dims &a, const Dims &b, const char *what) {
    if (a != b) {
        throw ShapeError(std::string(what) + ": operand dims differ");
    }
}

// Rotates `v` so that its first component of (numerically) largest magnitude
// is real and positive; returns that component's index.
std::size_t fix_phase(Eigen::Ref<CVector> v) {
    double largest = v.cwiseAbs().maxCoeff();
    Eigen::Index pivot = 0;
    for (Eigen::Index i = 0; i < v.size(); ++i) {
        if (std::abs(v[i]) >= largest * (1.0 - 1e-8)) {
            pivot = i;
            break;
        }
    }
    Complex c = v[pivot];
    v *= std::conj(c) / std::abs(c);
    v[pivot] = Complex(v[pivot].real(), 0.0);
    return static_cast<std::size_t>(pivot);
}

// Canonical orthonormal basis of span(columns of `cluster`), built by pivoted
// modified Gram-Schmidt over the projections of the standard basis vectors.
CMatrix canonical_cluster_basis(const CMatrix &cluster) {
    const Eigen::Index m = cluster.cols();
    // Column k holds the cluster coordinates of P e_k.
    CMatrix residual = cluster.adjoint();
    CMatrix coords(m, m);
    for (Eigen::Index step = 0; step < m; ++step) {
        RVector norms = residual.colwise().norm().transpose();
        double best = norms.maxCoeff();
        Eigen::Index pick = 0;
        for (Eigen::Index k = 0; k < norms.size(); ++k) {
            if (norms[k] >= best * (1.0 - 1e-9)) {
                pick = k;
                break;
            }
        }
        CVector q = residual.col(pick) / norms[pick];
        residual -= q * (q.adjoint() * residual);
        coords.col(step) = q;
    }
    return cluster * coords;
}

}  // namespace

std::size_t total_dimension(const Dims &dims, std::size_t max_dim) {
    std::size_t total = dims_product(dims);
    if (total > max_dim) {
        throw CapacityError("total dimension " + std::to_string(total) + " exceeds max_dim " +
                            std::to_string(max_dim));
    }
    return total;
}

// ---------------------------------------------------------------------------
// StateVector

StateVector::StateVector(Dims dims, CVector amplitudes, const Tolerances &tol)
    : dims_(std::move(dims)), amplitudes_(std::move(amplitudes)) {
    std::size_t n = total_dimension(dims_, tol.max_dim);
    if (static_cast<std::size_t>(amplitudes_.size()) != n) {
        throw ShapeError("state length " + std::to_string(amplitudes_.size()) + " does not match dims product " +
                         std::to_string(n));
    }
    double norm = amplitudes_.norm();
    if (!(std::abs(norm - 1.0) <= tol.norm_tol)) {
        throw KindError("state is not normalized (norm " + std::to_string(norm) + ")");
    }
}

StateVector StateVector::normalized(Dims dims, CVector amplitudes, const Tolerances &tol) {
    double norm = amplitudes.norm();
    if (!(norm >= tol.null_tol)) {
        throw NullVectorError("cannot normalize a null vector");
    }
    amplitudes /= norm;
    return StateVector(std::move(dims), std::move(amplitudes), tol);
}

StateVector StateVector::basis(Dims dims, std::size_t index) {
    std::size_t n = dims_product(dims);
    if (index >= n) {
        throw ShapeError("basis index out of range");
    }
    CVector amps = CVector::Zero(static_cast<Eigen::Index>(n));
    amps[static_cast<Eigen::Index>(index)] = 1.0;
    Tolerances tol;
    tol.max_dim = n;
    return StateVector(std::move(dims), std::move(amps), tol);
}

Complex StateVector::inner(const StateVector &other) const {
    if (other.dim() != dim()) {
        throw ShapeError("inner product of states with different dimension");
    }
    return amplitudes_.dot(other.amplitudes_);
}

// ---------------------------------------------------------------------------
// Operator

Operator::Operator(Dims dims, CMatrix matrix, OperatorKind kind)
    : dims_(std::move(dims)), matrix_(std::move(matrix)), kind_(kind) {
    std::size_t n = dims_product(dims_);
    if (matrix_.rows() != matrix_.cols()) {
        throw ShapeError("operator matrix is not square");
    }
    if (static_cast<std::size_t>(matrix_.rows()) != n) {
        throw ShapeError("operator side " + std::to_string(matrix_.rows()) + " does not match dims product " +
                         std::to_string(n));
    }
}

Operator Operator::identity(Dims dims) {
    auto n = static_cast<Eigen::Index>(dims_product(dims));
    return Operator(std::move(dims), CMatrix::Identity(n, n), OperatorKind::unitary);
}

Operator Operator::diagonal(Dims dims, const RVector &values) {
    CMatrix m = values.cast<Complex>().asDiagonal();
    return Operator(std::move(dims), std::move(m), OperatorKind::hermitian);
}

bool Operator::is_hermitian(double tol) const {
    return (matrix_ - matrix_.adjoint()).norm() <= tol;
}

bool Operator::is_unitary(double tol) const {
    auto n = matrix_.rows();
    return (matrix_.adjoint() * matrix_ - CMatrix::Identity(n, n)).norm() <= tol;
}

void Operator::require_hermitian(double tol) const {
    double residual = (matrix_ - matrix_.adjoint()).norm();
    if (!(residual <= tol)) {
        throw KindError("operator is not Hermitian (‖A − A†‖_F = " + std::to_string(residual) + ")");
    }
}

void Operator::require_unitary(double tol) const {
    auto n = matrix_.rows();
    double residual = (matrix_.adjoint() * matrix_ - CMatrix::Identity(n, n)).norm();
    if (!(residual <= tol)) {
        throw KindError("operator is not unitary (‖U†U − I‖_F = " + std::to_string(residual) + ")");
    }
}

Operator Operator::adjoint() const {
    return Operator(dims_, matrix_.adjoint(), kind_);
}

StateVector Operator::apply(const StateVector &psi, const Tolerances &tol) const {
    require_same_dims(dims_, psi.dims(), "apply");
    return StateVector(dims_, matrix_ * psi.amplitudes(), tol);
}

Operator operator*(const Operator &a, const Operator &b) {
    require_same_dims(a.dims(), b.dims(), "operator product");
    OperatorKind kind = (a.kind() == OperatorKind::unitary && b.kind() == OperatorKind::unitary)
                            ? OperatorKind::unitary
                            : OperatorKind::general;
    return Operator(a.dims(), a.matrix() * b.matrix(), kind);
}

Operator operator+(const Operator &a, const Operator &b) {
    require_same_dims(a.dims(), b.dims(), "operator sum");
    OperatorKind kind = (a.kind() == OperatorKind::hermitian && b.kind() == OperatorKind::hermitian)
                            ? OperatorKind::hermitian
                            : OperatorKind::general;
    return Operator(a.dims(), a.matrix() + b.matrix(), kind);
}

Operator operator*(Complex scale, const Operator &a) {
    OperatorKind kind = OperatorKind::general;
    if (a.kind() == OperatorKind::hermitian && scale.imag() == 0.0) {
        kind = OperatorKind::hermitian;
    } else if (a.kind() == OperatorKind::unitary && std::abs(scale) == 1.0) {
        kind = OperatorKind::unitary;
    }
    return Operator(a.dims(), scale * a.matrix(), kind);
}

// ---------------------------------------------------------------------------
// DensityMatrix

DensityMatrix::DensityMatrix(Dims dims, CMatrix matrix, const Tolerances &tol)
    : dims_(std::move(dims)), matrix_(std::move(matrix)) {
    std::size_t n = total_dimension(dims_, tol.max_dim);
    if (matrix_.rows() != matrix_.cols() || static_cast<std::size_t>(matrix_.rows()) != n) {
        throw ShapeError("density matrix shape does not match dims");
    }
    double herm = (matrix_ - matrix_.adjoint()).norm();
    if (!(herm <= tol.op_tol)) {
        throw KindError("density matrix is not Hermitian (‖ρ − ρ†‖_F = " + std::to_string(herm) + ")");
    }
    double tr = matrix_.trace().real();
    if (!(std::abs(tr - 1.0) <= tol.norm_tol)) {
        throw KindError("density matrix trace is " + std::to_string(tr) + ", expected 1");
    }
    double lowest = min_eigenvalue();
    if (!(lowest >= -tol.psd_tol)) {
        throw KindError("density matrix has negative eigenvalue " + std::to_string(lowest));
    }
}

DensityMatrix::DensityMatrix(Unchecked, Dims dims, CMatrix matrix)
    : dims_(std::move(dims)), matrix_(std::move(matrix)) {}

DensityMatrix DensityMatrix::from_pure(const StateVector &psi) {
    return DensityMatrix(Unchecked{}, psi.dims(), psi.amplitudes() * psi.amplitudes().adjoint());
}

DensityMatrix DensityMatrix::mixture(std::span<const double> weights, std::span<const StateVector> states,
                                     const Tolerances &tol) {
    if (weights.size() != states.size() || states.empty()) {
        throw ShapeError("mixture needs one weight per state and at least one state");
    }
    double total = 0.0;
    for (double w : weights) {
        if (!(w >= 0.0)) {
            throw KindError("mixture weights must be nonnegative");
        }
        total += w;
    }
    if (!(std::abs(total - 1.0) <= tol.norm_tol)) {
        throw KindError("mixture weights sum to " + std::to_string(total));
    }
    auto n = static_cast<Eigen::Index>(states.front().dim());
    CMatrix acc = CMatrix::Zero(n, n);
    for (std::size_t k = 0; k < states.size(); ++k) {
        require_same_dims(states[k].dims(), states.front().dims(), "mixture");
        acc += weights[k] * (states[k].amplitudes() * states[k].amplitudes().adjoint());
    }
    return DensityMatrix(Unchecked{}, states.front().dims(), std::move(acc));
}

double DensityMatrix::min_eigenvalue() const {
    CMatrix herm = 0.5 * (matrix_ + matrix_.adjoint());
    Eigen::SelfAdjointEigenSolver<CMatrix> solver(herm, Eigen::EigenvaluesOnly);
    return solver.eigenvalues().minCoeff();
}

// ---------------------------------------------------------------------------
// Tensor products

Operator tensor_product(const Operator &a, const Operator &b, const Tolerances &tol) {
    Dims dims = concat(a.dims(), b.dims());
    total_dimension(dims, tol.max_dim);
    OperatorKind kind = OperatorKind::general;
    if (a.kind() == b.kind()) {
        kind = a.kind();
    }
    return Operator(std::move(dims), kron(a.matrix(), b.matrix()), kind);
}

StateVector tensor_product(const StateVector &a, const StateVector &b, const Tolerances &tol) {
    Dims dims = concat(a.dims(), b.dims());
    total_dimension(dims, tol.max_dim);
    CMatrix out = kron(a.amplitudes(), b.amplitudes());
    return StateVector(std::move(dims), out.col(0), tol);
}

DensityMatrix tensor_product(const DensityMatrix &a, const DensityMatrix &b, const Tolerances &tol) {
    Dims dims = concat(a.dims(), b.dims());
    total_dimension(dims, tol.max_dim);
    return DensityMatrix(DensityMatrix::Unchecked{}, std::move(dims), kron(a.matrix(), b.matrix()));
}

Operator tensor_product(std::span<const Operator> factors, const Tolerances &tol) {
    if (factors.empty()) {
        throw ShapeError("tensor product of an empty list");
    }
    Operator acc = factors.front();
    for (std::size_t i = 1; i < factors.size(); ++i) {
        acc = tensor_product(acc, factors[i], tol);
    }
    return acc;
}

// ---------------------------------------------------------------------------

Operator commutator(const Operator &a, const Operator &b) {
    require_same_dims(a.dims(), b.dims(), "commutator");
    const CMatrix &am = a.matrix();
    const CMatrix &bm = b.matrix();
    // [D, B]_ij = (d_i − d_j) B_ij for diagonal D.
    if (is_diagonal(am) || is_diagonal(bm)) {
        bool a_diag = is_diagonal(am);
        const CMatrix &d = a_diag ? am : bm;
        const CMatrix &other = a_diag ? bm : am;
        CMatrix out(other.rows(), other.cols());
        for (Eigen::Index j = 0; j < other.cols(); ++j) {
            for (Eigen::Index i = 0; i < other.rows(); ++i) {
                out(i, j) = (d(i, i) - d(j, j)) * other(i, j);
            }
        }
        if (!a_diag) {
            out = -out;
        }
        return Operator(a.dims(), std::move(out));
    }
    return Operator(a.dims(), am * bm - bm * am);
}

HermitianEigen hermitian_eig(const Operator &a, const Tolerances &tol) {
    a.require_hermitian(tol.op_tol);
    const CMatrix &m = a.matrix();
    const auto n = m.rows();

    HermitianEigen out{RVector(n), Operator::identity(a.dims()), {}, {}};
    CMatrix vectors = CMatrix::Zero(n, n);

    if (is_diagonal(m)) {
        std::vector<std::size_t> order(static_cast<std::size_t>(n));
        std::iota(order.begin(), order.end(), std::size_t{0});
        std::stable_sort(order.begin(), order.end(), [&](std::size_t i, std::size_t j) {
            return m(static_cast<Eigen::Index>(i), static_cast<Eigen::Index>(i)).real() <
                   m(static_cast<Eigen::Index>(j), static_cast<Eigen::Index>(j)).real();
        });
        for (Eigen::Index k = 0; k < n; ++k) {
            auto src = static_cast<Eigen::Index>(order[static_cast<std::size_t>(k)]);
            out.eigenvalues[k] = m(src, src).real();
            vectors(src, k) = 1.0;
        }
        out.permutation = std::move(order);
    } else {
        CMatrix herm = 0.5 * (m + m.adjoint());
        Eigen::SelfAdjointEigenSolver<CMatrix> solver(herm);
        if (solver.info() != Eigen::Success) {
            throw UnsupportedError("Hermitian eigensolver did not converge");
        }
        out.eigenvalues = solver.eigenvalues();
        vectors = solver.eigenvectors();
    }

    // Degeneracy clusters over the ascending spectrum.
    Eigen::Index start = 0;
    while (start < n) {
        Eigen::Index end = start + 1;
        while (end < n && out.eigenvalues[end] - out.eigenvalues[end - 1] < tol.degen_tol) {
            ++end;
        }
        std::vector<std::size_t> block;
        for (Eigen::Index k = start; k < end; ++k) {
            block.push_back(static_cast<std::size_t>(k));
        }
        out.blocks.push_back(std::move(block));
        start = end;
    }

    if (!out.is_permutation()) {
        for (const auto &block : out.blocks) {
            auto first = static_cast<Eigen::Index>(block.front());
            auto count = static_cast<Eigen::Index>(block.size());
            CMatrix basis = count > 1 ? canonical_cluster_basis(vectors.middleCols(first, count))
                                      : CMatrix(vectors.middleCols(first, count));
            std::vector<std::pair<std::size_t, Eigen::Index>> keyed;
            for (Eigen::Index c = 0; c < count; ++c) {
                keyed.emplace_back(fix_phase(basis.col(c)), c);
            }
            std::stable_sort(keyed.begin(), keyed.end(),
                             [](const auto &x, const auto &y) { return x.first < y.first; });
            for (Eigen::Index c = 0; c < count; ++c) {
                vectors.col(first + c) = basis.col(keyed[static_cast<std::size_t>(c)].second);
            }
        }
    }

    out.eigenvectors = Operator(a.dims(), std::move(vectors), OperatorKind::unitary);
    return out;
}

Operator matrix_exp(const Operator &a, Complex scale, const Tolerances &tol) {
    if (!a.is_hermitian(tol.op_tol)) {
        throw UnsupportedError("matrix_exp supports Hermitian generators only");
    }
    HermitianEigen eig = hermitian_eig(a, tol);
    CVector factors = (scale * eig.eigenvalues.cast<Complex>()).array().exp().matrix();
    const CMatrix &v = eig.eigenvectors.matrix();
    CMatrix result = v * factors.asDiagonal() * v.adjoint();
    OperatorKind kind = OperatorKind::general;
    if (scale.real() == 0.0) {
        kind = OperatorKind::unitary;
    } else if (scale.imag() == 0.0) {
        kind = OperatorKind::hermitian;
    }
    return Operator(a.dims(), std::move(result), kind);
}

DensityMatrix partial_trace(const DensityMatrix &rho, std::span<const std::size_t> keep) {
    if (keep.empty()) {
        throw DegenerateRequestError("partial_trace needs at least one subsystem to keep");
    }
    const Dims &dims = rho.dims();
    std::vector<bool> kept(dims.size(), false);
    for (std::size_t k : keep) {
        if (k >= dims.size()) {
            throw ShapeError("partial_trace subsystem index " + std::to_string(k) + " out of range");
        }
        kept[k] = true;
    }
    Dims kept_dims;
    std::size_t kept_size = 1;
    std::size_t traced_size = 1;
    for (std::size_t s = 0; s < dims.size(); ++s) {
        if (kept[s]) {
            kept_dims.push_back(dims[s]);
            kept_size *= dims[s];
        } else {
            traced_size *= dims[s];
        }
    }

    // full_index[a * traced_size + t] for kept index a and traced index t.
    const std::size_t n = rho.dim();
    std::vector<std::size_t> full_index(n);
    for (std::size_t i = 0; i < n; ++i) {
        std::size_t rest = i;
        std::size_t a = 0, t = 0, a_stride = 1, t_stride = 1;
        for (std::size_t s = dims.size(); s-- > 0;) {
            std::size_t digit = rest % dims[s];
            rest /= dims[s];
            if (kept[s]) {
                a += digit * a_stride;
                a_stride *= dims[s];
            } else {
                t += digit * t_stride;
                t_stride *= dims[s];
            }
        }
        full_index[a * traced_size + t] = i;
    }

    const CMatrix &m = rho.matrix();
    CMatrix out = CMatrix::Zero(static_cast<Eigen::Index>(kept_size), static_cast<Eigen::Index>(kept_size));
    for (std::size_t a = 0; a < kept_size; ++a) {
        for (std::size_t b = 0; b < kept_size; ++b) {
            Complex acc(0.0, 0.0);
            for (std::size_t t = 0; t < traced_size; ++t) {
                acc += m(static_cast<Eigen::Index>(full_index[a * traced_size + t]),
                         static_cast<Eigen::Index>(full_index[b * traced_size + t]));
            }
            out(static_cast<Eigen::Index>(a), static_cast<Eigen::Index>(b)) = acc;
        }
    }
    return DensityMatrix(DensityMatrix::Unchecked{}, std::move(kept_dims), std::move(out));
}

double frobenius_distance(const CMatrix &a, const CMatrix &b) {
    if (a.rows() != b.rows() || a.cols() != b.cols()) {
        throw ShapeError("frobenius_distance: shapes differ");
    }
    return (a - b).norm();
}

namespace pauli {

Operator x() {
    CMatrix m(2, 2);
    m << 0.0, 1.0, 1.0, 0.0;
    return Operator({2}, m, OperatorKind::hermitian);
}

Operator y() {
    const Complex i(0.0, 1.0);
    CMatrix m(2, 2);
    m << 0.0, -i, i, 0.0;
    return Operator({2}, m, OperatorKind::hermitian);
}

Operator z() {
    CMatrix m(2, 2);
    m << 1.0, 0.0, 0.0, -1.0;
    return Operator({2}, m, OperatorKind::hermitian);
}

Operator hadamard() {
    const double s = 1.0 / std::sqrt(2.0);
    CMatrix m(2, 2);
    m << s, s, s, -s;
    return Operator({2}, m, OperatorKind::unitary);
}

}  // namespace pauli

}  // namespace qd
