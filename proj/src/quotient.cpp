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

#include "qd/quotient.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>

#include "qd/errors.hpp"
#include "qd/random.hpp"

namespace qd {

namespace {

std::vector<double> group_probabilities(const ClassLabel &label, ClassMode mode) {
    return mode == ClassMode::per_index ? label.probabilities : label.block_probabilities;
}

CMatrix haar_unitary(Eigen::Index n, PhiloxStream &rng) {
    CMatrix g(n, n);
    for (Eigen::Index j = 0; j < n; ++j) {
        for (Eigen::Index i = 0; i < n; ++i) {
            double re = rng.normal();
            double im = rng.normal();
            g(i, j) = Complex(re, im) / std::sqrt(2.0);
        }
    }
    Eigen::HouseholderQR<CMatrix> qr(g);
    CMatrix q = qr.householderQ();
    CMatrix r = qr.matrixQR().triangularView<Eigen::Upper>();
    for (Eigen::Index k = 0; k < n; ++k) {
        Complex d = r(k, k);
        q.col(k) *= std::abs(d) > 0.0 ? d / std::abs(d) : Complex(1.0, 0.0);
    }
    return q;
}

}  // namespace

ObservableSpec::ObservableSpec(Operator op, const Tolerances &tol)
    : op_(std::move(op)), eig_(hermitian_eig(op_, tol)) {
    block_of_.resize(dim());
    for (std::size_t b = 0; b < eig_.blocks.size(); ++b) {
        double sum = 0.0;
        for (std::size_t k : eig_.blocks[b]) {
            block_of_[k] = b;
            sum += eig_.eigenvalues[static_cast<Eigen::Index>(k)];
        }
        block_values_.push_back(sum / static_cast<double>(eig_.blocks[b].size()));
    }
}

CVector ObservableSpec::to_eigenbasis(const CVector &psi) const {
    if (eig_.is_permutation()) {
        CVector out(psi.size());
        for (Eigen::Index k = 0; k < psi.size(); ++k) {
            out[k] = psi[static_cast<Eigen::Index>(eig_.permutation[static_cast<std::size_t>(k)])];
        }
        return out;
    }
    return eigenbasis().matrix().adjoint() * psi;
}

CVector ObservableSpec::from_eigenbasis(const CVector &coeffs) const {
    if (eig_.is_permutation()) {
        CVector out(coeffs.size());
        for (Eigen::Index k = 0; k < coeffs.size(); ++k) {
            out[static_cast<Eigen::Index>(eig_.permutation[static_cast<std::size_t>(k)])] = coeffs[k];
        }
        return out;
    }
    return eigenbasis().matrix() * coeffs;
}

CMatrix ObservableSpec::to_eigenbasis(const CMatrix &rho) const {
    if (eig_.is_permutation()) {
        const auto &p = eig_.permutation;
        CMatrix out(rho.rows(), rho.cols());
        for (Eigen::Index j = 0; j < rho.cols(); ++j) {
            for (Eigen::Index i = 0; i < rho.rows(); ++i) {
                out(i, j) = rho(static_cast<Eigen::Index>(p[static_cast<std::size_t>(i)]),
                                static_cast<Eigen::Index>(p[static_cast<std::size_t>(j)]));
            }
        }
        return out;
    }
    const CMatrix &v = eigenbasis().matrix();
    return v.adjoint() * rho * v;
}

CMatrix ObservableSpec::from_eigenbasis(const CMatrix &rho) const {
    if (eig_.is_permutation()) {
        const auto &p = eig_.permutation;
        CMatrix out(rho.rows(), rho.cols());
        for (Eigen::Index j = 0; j < rho.cols(); ++j) {
            for (Eigen::Index i = 0; i < rho.rows(); ++i) {
                out(static_cast<Eigen::Index>(p[static_cast<std::size_t>(i)]),
                    static_cast<Eigen::Index>(p[static_cast<std::size_t>(j)])) = rho(i, j);
            }
        }
        return out;
    }
    const CMatrix &v = eigenbasis().matrix();
    return v * rho * v.adjoint();
}

CMatrix ObservableSpec::block_projector(std::size_t b) const {
    if (b >= blocks().size()) {
        throw ShapeError("block index out of range");
    }
    auto n = static_cast<Eigen::Index>(dim());
    CMatrix diag = CMatrix::Zero(n, n);
    for (std::size_t k : blocks()[b]) {
        diag(static_cast<Eigen::Index>(k), static_cast<Eigen::Index>(k)) = 1.0;
    }
    return from_eigenbasis(diag);
}

ObservableSpec observable_from_matrix(const Operator &m, const Tolerances &tol) {
    return ObservableSpec(m, tol);
}

nlohmann::json to_json(const ClassLabel &label) {
    return nlohmann::json{{"probabilities", label.probabilities}, {"blocks", label.blocks}, {"tol", label.tol}};
}

ClassLabel class_label_from_json(const nlohmann::json &j) {
    ClassLabel label;
    label.probabilities = j.at("probabilities").get<std::vector<double>>();
    label.blocks = j.at("blocks").get<std::vector<std::vector<std::size_t>>>();
    label.tol = j.at("tol").get<double>();
    for (const auto &block : label.blocks) {
        double sum = 0.0;
        for (std::size_t k : block) {
            if (k >= label.probabilities.size()) {
                throw ShapeError("class label block index out of range");
            }
            sum += label.probabilities[k];
        }
        label.block_probabilities.push_back(sum);
    }
    return label;
}

CommutantCheck commutant_member(const Operator &u, std::span<const Operator> observables, double tol) {
    CommutantCheck check{true, 0.0};
    for (const Operator &o : observables) {
        if (o.dims() != u.dims()) {
            throw ShapeError("commutant_member: operator dims differ");
        }
        double scale = o.matrix().norm();
        double residual = scale > 0.0 ? commutator(u, o).matrix().norm() / scale : 0.0;
        check.residual = std::max(check.residual, residual);
    }
    check.member = check.residual <= tol;
    return check;
}

CommutantCheck commutant_member(const Operator &u, const Operator &observable, double tol) {
    return commutant_member(u, std::span<const Operator>(&observable, 1), tol);
}

ClassLabel class_label(const StateVector &psi, const ObservableSpec &spec, const Tolerances &tol) {
    if (psi.dims() != spec.dims()) {
        throw ShapeError("class_label: state and observable dims differ");
    }
    CVector coeffs = spec.to_eigenbasis(psi.amplitudes());
    ClassLabel label;
    label.tol = tol.label_tol;
    label.blocks = spec.blocks();
    double total = 0.0;
    for (Eigen::Index k = 0; k < coeffs.size(); ++k) {
        double p = std::norm(coeffs[k]);
        if (p > 1.0 + tol.label_tol) {
            throw KindError("class_label: probability exceeds one; state not normalized");
        }
        p = std::clamp(p, 0.0, 1.0);
        total += p;
        label.probabilities.push_back(p);
    }
    if (!(std::abs(total - 1.0) <= tol.label_tol)) {
        throw KindError("class_label: probabilities sum to " + std::to_string(total));
    }
    for (const auto &block : label.blocks) {
        double sum = 0.0;
        for (std::size_t k : block) {
            sum += label.probabilities[k];
        }
        label.block_probabilities.push_back(sum);
    }
    return label;
}

bool same_class(const StateVector &a, const StateVector &b, const ObservableSpec &spec, ClassMode mode,
                const Tolerances &tol) {
    std::vector<double> pa = group_probabilities(class_label(a, spec, tol), mode);
    std::vector<double> pb = group_probabilities(class_label(b, spec, tol), mode);
    double worst = 0.0;
    for (std::size_t k = 0; k < pa.size(); ++k) {
        worst = std::max(worst, std::abs(pa[k] - pb[k]));
    }
    return worst < tol.label_tol;
}

bool same_class(const StateVector &a, const StateVector &b, const ObservableSpec &spec, const Tolerances &tol) {
    return same_class(a, b, spec, spec.default_mode(), tol);
}

StateVector gauge_fix(const StateVector &psi, const ObservableSpec &spec, const Tolerances &tol) {
    if (psi.dims() != spec.dims()) {
        throw ShapeError("gauge_fix: state and observable dims differ");
    }
    CVector coeffs = spec.to_eigenbasis(psi.amplitudes());
    CVector moduli = coeffs.cwiseAbs().cast<Complex>();
    return StateVector(psi.dims(), spec.from_eigenbasis(moduli), tol);
}

SuperpositionResult superposition_closed(const StateVector &a, const StateVector &b, Complex c0, Complex c1,
                                         const ObservableSpec &spec, const Tolerances &tol) {
    if (a.dims() != b.dims()) {
        throw ShapeError("superposition_closed: state dims differ");
    }
    if (c0 == Complex(0.0, 0.0) && c1 == Complex(0.0, 0.0)) {
        throw ShapeError("superposition_closed: both coefficients are zero");
    }
    CVector combined = c0 * a.amplitudes() + c1 * b.amplitudes();
    StateVector mixed = StateVector::normalized(a.dims(), combined, tol);
    SuperpositionResult result;
    result.label = class_label(mixed, spec, tol);
    result.closed = same_class(mixed, a, spec, tol);
    return result;
}

Operator sample_commutant_unitary(const ObservableSpec &spec, std::uint64_t seed, std::uint64_t stream) {
    PhiloxStream rng(seed, stream);
    auto n = static_cast<Eigen::Index>(spec.dim());
    CMatrix inner = CMatrix::Zero(n, n);
    for (const auto &block : spec.blocks()) {
        auto size = static_cast<Eigen::Index>(block.size());
        auto first = static_cast<Eigen::Index>(block.front());
        if (size == 1) {
            double gamma = 2.0 * std::numbers::pi * rng.uniform();
            inner(first, first) = std::polar(1.0, -gamma);
        } else {
            inner.block(first, first, size, size) = haar_unitary(size, rng);
        }
    }
    return Operator(spec.dims(), spec.from_eigenbasis(inner), OperatorKind::unitary);
}

}  // namespace qd
