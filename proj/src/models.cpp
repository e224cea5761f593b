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

#include "qd/models.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <string>

#include "qd/errors.hpp"

namespace qd {

namespace {

constexpr double kStabilityTol = 1e-12;
constexpr double kOverlapFlag = 1e-12;

void check_amplitudes(Complex alpha, Complex beta, double tol, std::vector<std::string> &problems) {
    double norm = std::norm(alpha) + std::norm(beta);
    if (!(std::abs(norm - 1.0) <= tol)) {
        problems.push_back("|alpha|^2 + |beta|^2 = " + std::to_string(norm) + ", expected 1");
    }
}

void throw_if_any(std::vector<std::string> problems) {
    if (!problems.empty()) {
        throw ValidationError(std::move(problems));
    }
}

Operator projector(std::size_t bit) {
    CMatrix m = CMatrix::Zero(2, 2);
    m(static_cast<Eigen::Index>(bit), static_cast<Eigen::Index>(bit)) = 1.0;
    return Operator({2}, m, OperatorKind::hermitian);
}

StateVector qubit(Complex a0, Complex a1, const Tolerances &tol) {
    CVector v(2);
    v << a0, a1;
    return StateVector({2}, v, tol);
}

}  // namespace

Operator product_basis_observable(const Dims &dims) {
    std::size_t n = total_dimension(dims, std::numeric_limits<std::size_t>::max());
    RVector labels = RVector::LinSpaced(static_cast<Eigen::Index>(n), 0.0, static_cast<double>(n) - 1.0);
    return Operator::diagonal(dims, labels);
}

Operator lift_qubit_operator(std::size_t n_qubits, const std::vector<std::pair<std::size_t, Operator>> &factors,
                             const Tolerances &tol) {
    std::vector<Operator> slots(n_qubits, Operator::identity({2}));
    for (const auto &[q, op] : factors) {
        if (q >= n_qubits || op.dim() != 2) {
            throw ShapeError("lift_qubit_operator: bad qubit index or non-qubit factor");
        }
        slots[q] = op;
    }
    Operator lifted = tensor_product(slots, tol);
    return Operator(Dims(n_qubits, 2), lifted.matrix(), lifted.kind());
}

// ---------------------------------------------------------------------------

void SternGerlachParams::validate(const Tolerances &tol) const {
    std::vector<std::string> problems;
    check_amplitudes(alpha, beta, tol.norm_tol, problems);
    if (!(t >= 0.0)) {
        problems.push_back("t must be nonnegative");
    }
    throw_if_any(std::move(problems));
}

SternGerlachResult stern_gerlach_run(const SternGerlachParams &p, std::uint64_t seed, const Tolerances &tol) {
    p.validate(tol);
    const Complex minus_i(0.0, -1.0);

    Operator precession = matrix_exp(pauli::z(), minus_i * (p.omega * p.t - p.pz * p.z), tol);
    StateVector spin = precession.apply(qubit(p.alpha, p.beta, tol), tol);
    StateVector joint = tensor_product(spin, StateVector::basis({2}, 0), tol);

    // |↓⟩ moves the pointer from |−p_z⟩ to |+p_z⟩.
    Operator shift = tensor_product(projector(0), Operator::identity({2}), tol) +
                     tensor_product(projector(1), pauli::x(), tol);
    joint = shift.apply(joint, tol);

    SternGerlachResult result{joint, DensityMatrix::from_pure(joint), {}, {0.0, 0.0}};
    if (p.inject_random_phase) {
        PhaseSample phases = sample_phases(2, seed, 0);
        result.pointer_phases = {phases.gammas[0], phases.gammas[1]};
        CMatrix u = CMatrix::Zero(2, 2);
        u(0, 0) = std::polar(1.0, -phases.gammas[0]);
        u(1, 1) = std::polar(1.0, -phases.gammas[1]);
        Operator pointer_phase = tensor_product(Operator::identity({2}), Operator({2}, u, OperatorKind::unitary), tol);
        result.correlated = pointer_phase.apply(joint, tol);
    }

    const Dims dims{2, 2};
    ObservableSpec pointer_basis(product_basis_observable(dims), tol);
    result.ensemble =
        dephase_analytic(DensityMatrix::from_pure(result.correlated), pointer_basis, ClassMode::per_index);
    ObservableSpec spin_z(tensor_product(pauli::z(), Operator::identity({2}), tol), tol);
    result.report = born_ensemble(result.ensemble, spin_z);
    result.report.seed = seed;
    return result;
}

// ---------------------------------------------------------------------------

ChainParams ChainParams::with_random_phases(std::size_t n_qubits, Complex alpha, Complex beta, std::uint64_t seed) {
    ChainParams p;
    p.n_qubits = n_qubits;
    p.alpha = alpha;
    p.beta = beta;
    p.seed = seed;
    std::size_t links = n_qubits > 0 ? n_qubits - 1 : 0;
    PhaseSample phases = sample_phases(2 * links + 2, seed, 0);
    p.link_gamma.assign(phases.gammas.begin(), phases.gammas.begin() + static_cast<std::ptrdiff_t>(links));
    p.link_delta.assign(phases.gammas.begin() + static_cast<std::ptrdiff_t>(links),
                        phases.gammas.begin() + static_cast<std::ptrdiff_t>(2 * links));
    p.gamma_env = phases.gammas[2 * links];
    p.delta_env = phases.gammas[2 * links + 1];
    return p;
}

void ChainParams::validate(const Tolerances &tol) const {
    std::vector<std::string> problems;
    if (n_qubits < 1) {
        problems.push_back("n_qubits must be at least 1");
    }
    check_amplitudes(alpha, beta, tol.norm_tol, problems);
    std::size_t links = n_qubits > 0 ? n_qubits - 1 : 0;
    if (!link_gamma.empty() && link_gamma.size() != links) {
        problems.push_back("link_gamma needs " + std::to_string(links) + " entries");
    }
    if (!link_delta.empty() && link_delta.size() != links) {
        problems.push_back("link_delta needs " + std::to_string(links) + " entries");
    }
    if (!link_order.empty()) {
        std::vector<std::size_t> sorted = link_order;
        std::sort(sorted.begin(), sorted.end());
        bool ok = sorted.size() == links;
        for (std::size_t i = 0; ok && i < sorted.size(); ++i) {
            ok = sorted[i] == i + 2;
        }
        if (!ok) {
            problems.push_back("link_order must be a permutation of 2.." + std::to_string(n_qubits));
        }
    }
    throw_if_any(std::move(problems));
    if (n_qubits >= 63 || (std::size_t{1} << n_qubits) > tol.max_dim) {
        throw CapacityError(std::to_string(n_qubits) + " qubits exceed max_dim " + std::to_string(tol.max_dim));
    }
}

ChainResult qubit_chain_run(const ChainParams &p, const Tolerances &tol) {
    p.validate(tol);
    const std::size_t n = p.n_qubits;
    const Dims dims(n, 2);
    const Complex minus_i(0.0, -1.0);

    std::vector<std::size_t> order = p.link_order;
    if (order.empty()) {
        for (std::size_t i = 2; i <= n; ++i) {
            order.push_back(i);
        }
    }

    StateVector state = StateVector::basis(Dims(1, 2), 0);
    {
        StateVector first = qubit(p.alpha, p.beta, tol);
        state = first;
        for (std::size_t q = 1; q < n; ++q) {
            state = tensor_product(state, StateVector::basis({2}, 0), tol);
        }
    }

    auto cnot_from_first = [&](std::size_t target) {
        return lift_qubit_operator(n, {{0, projector(0)}}, tol) +
               lift_qubit_operator(n, {{0, projector(1)}, {target, pauli::x()}}, tol);
    };
    std::optional<Operator> cnot12;
    if (n >= 2) {
        cnot12 = cnot_from_first(1);
    }

    ChainResult result{state, DensityMatrix::from_pure(state), {}, {}};
    auto apply_steady = [&](const Operator &steady) {
        if (cnot12) {
            double residual = commutator(steady, *cnot12).matrix().norm();
            result.stability_residuals.push_back(residual);
            if (!(residual <= kStabilityTol)) {
                throw KindError("steady operator leaves the C-NOT stability group (residual " +
                                std::to_string(residual) + ")");
            }
        }
        state = steady.apply(state, tol);
    };

    for (std::size_t target_1based : order) {
        std::size_t link = target_1based - 2;
        std::size_t target = target_1based - 1;
        double gamma = p.link_gamma.empty() ? 0.0 : p.link_gamma[link];
        double delta = p.link_delta.empty() ? 0.0 : p.link_delta[link];

        state = cnot_from_first(target).apply(state, tol);
        Operator steady = std::polar(1.0, -gamma) * lift_qubit_operator(n, {{0, projector(0)}, {target, projector(0)}}, tol) +
                          lift_qubit_operator(n, {{0, projector(0)}, {target, projector(1)}}, tol) +
                          std::polar(1.0, -delta) * lift_qubit_operator(n, {{0, projector(1)}}, tol);
        apply_steady(steady);
    }
    Operator environment = std::polar(1.0, -p.gamma_env) * lift_qubit_operator(n, {{0, projector(0)}}, tol) +
                           std::polar(1.0, -p.delta_env) * lift_qubit_operator(n, {{0, projector(1)}}, tol);
    apply_steady(environment);

    result.pre_dephase = state;
    ObservableSpec bits(product_basis_observable(dims), tol);
    result.ensemble = dephase_analytic(DensityMatrix::from_pure(state), bits, ClassMode::per_index);
    ObservableSpec first_bit(lift_qubit_operator(n, {{0, projector(1)}}, tol), tol);
    result.report = born_ensemble(result.ensemble, first_bit);
    result.report.seed = p.seed;
    return result;
}

// ---------------------------------------------------------------------------

void MeasurementSetup::validate(const Tolerances &tol) const {
    if (couplings.size() != system_spec.blocks().size()) {
        throw ShapeError("measurement setup needs one coupling per observable block (" +
                         std::to_string(system_spec.blocks().size()) + "), got " + std::to_string(couplings.size()));
    }
    pointer_generator.require_hermitian(tol.op_tol);
    if (apparatus_init.dims() != pointer_generator.dims()) {
        throw ShapeError("apparatus state and pointer generator dims differ");
    }
}

Operator von_neumann_unitary_factorized(const MeasurementSetup &setup, double t, const Tolerances &tol) {
    setup.validate(tol);
    const Complex minus_i(0.0, -1.0);
    std::optional<Operator> sum;
    for (std::size_t b = 0; b < setup.couplings.size(); ++b) {
        Operator proj(setup.system_spec.dims(), setup.system_spec.block_projector(b), OperatorKind::hermitian);
        Operator term =
            tensor_product(proj, matrix_exp(setup.pointer_generator, minus_i * t * setup.couplings[b], tol), tol);
        sum = sum ? *sum + term : term;
    }
    return Operator(sum->dims(), sum->matrix(), OperatorKind::unitary);
}

Operator von_neumann_unitary(const MeasurementSetup &setup, double t, const Tolerances &tol) {
    setup.validate(tol);
    const Complex minus_i(0.0, -1.0);
    std::optional<Operator> hamiltonian;
    for (std::size_t b = 0; b < setup.couplings.size(); ++b) {
        Operator proj(setup.system_spec.dims(), setup.couplings[b] * setup.system_spec.block_projector(b),
                      OperatorKind::hermitian);
        Operator term = tensor_product(proj, setup.pointer_generator, tol);
        term = Operator(term.dims(), term.matrix(), OperatorKind::hermitian);
        hamiltonian = hamiltonian ? *hamiltonian + term : term;
    }
    // Projector round-off can leave ~1e-16 anti-Hermitian residue.
    CMatrix h = 0.5 * (hamiltonian->matrix() + hamiltonian->matrix().adjoint());
    Operator u = matrix_exp(Operator(hamiltonian->dims(), h, OperatorKind::hermitian), minus_i * t, tol);

    double gap = frobenius_distance(u.matrix(), von_neumann_unitary_factorized(setup, t, tol).matrix());
    if (!(gap <= 1e-9)) {
        throw Error("von Neumann unitary disagrees with its factorized form (" + std::to_string(gap) + ")");
    }
    Operator lifted = tensor_product(setup.system_spec.op(), Operator::identity(setup.pointer_generator.dims()), tol);
    CommutantCheck check = commutant_member(u, lifted, 1e-10);
    if (!check.member) {
        throw Error("von Neumann unitary does not commute with the measured observable (" +
                    std::to_string(check.residual) + ")");
    }
    return u;
}

std::vector<StateVector> apparatus_branches(const MeasurementSetup &setup, double t, const Tolerances &tol) {
    setup.validate(tol);
    const Complex minus_i(0.0, -1.0);
    std::vector<StateVector> branches;
    for (double lambda : setup.couplings) {
        branches.push_back(matrix_exp(setup.pointer_generator, minus_i * t * lambda, tol).apply(setup.apparatus_init, tol));
    }
    return branches;
}

PipelineResult measurement_pipeline(const StateVector &psi, const MeasurementSetup &setup, double t,
                                    std::uint64_t seed, const Tolerances &tol) {
    if (psi.dims() != setup.system_spec.dims()) {
        throw ShapeError("measurement_pipeline: state dims do not match the system observable");
    }
    Operator u = von_neumann_unitary(setup, t, tol);
    StateVector joint = tensor_product(psi, setup.apparatus_init, tol);
    StateVector correlated = u.apply(joint, tol);

    Operator lifted = tensor_product(setup.system_spec.op(), Operator::identity(setup.pointer_generator.dims()), tol);
    ObservableSpec joint_spec(Operator(lifted.dims(), lifted.matrix(), OperatorKind::hermitian), tol);
    EnsembleReport report = measure_after_evolution(joint, u, joint_spec, tol, seed);
    report.seed = seed;

    std::vector<StateVector> branches = apparatus_branches(setup, t, tol);
    for (std::size_t m = 0; m < branches.size(); ++m) {
        for (std::size_t k = m + 1; k < branches.size(); ++k) {
            double overlap = std::abs(branches[m].inner(branches[k]));
            report.branch_overlaps.push_back(overlap);
            report.overlap_flagged = report.overlap_flagged || overlap > kOverlapFlag;
        }
    }

    const std::size_t keep[] = {0};
    DensityMatrix reduced = partial_trace(DensityMatrix::from_pure(correlated), keep);
    // The reduced state lives on the system's own dims.
    reduced = DensityMatrix(DensityMatrix::Unchecked{}, psi.dims(), reduced.matrix());
    return PipelineResult{correlated, std::move(report), std::move(reduced)};
}

// ---------------------------------------------------------------------------

void CatParams::validate(const Tolerances &tol) const {
    std::vector<std::string> problems;
    check_amplitudes(alpha, beta, tol.norm_tol, problems);
    throw_if_any(std::move(problems));
}

CatResult cat_run(const CatParams &p, std::uint64_t seed, const Tolerances &tol) {
    p.validate(tol);
    CatResult result{StateVector::basis({2, 2}, 0), DensityMatrix::from_pure(StateVector::basis({2, 2}, 0)), {},
                     0.0, 0.0};
    PhaseSample drawn = sample_phases(2, seed, 0);
    result.gamma = p.gamma.value_or(drawn.gammas[0]);
    result.delta = p.delta.value_or(drawn.gammas[1]);

    // Atom basis (|E₂⟩, |E₁⟩) with energies (1, 0); ascending blocks are
    // therefore E₁ then E₂.
    RVector energies(2);
    energies << 1.0, 0.0;
    ObservableSpec atom(Operator::diagonal({2}, energies), tol);
    MeasurementSetup setup{atom, {std::numbers::pi / 2.0, 0.0}, pauli::y(), StateVector::basis({2}, 0)};

    StateVector psi = qubit(std::polar(1.0, -result.gamma) * p.alpha, std::polar(1.0, -result.delta) * p.beta, tol);
    PipelineResult pipeline = measurement_pipeline(psi, setup, 1.0, seed, tol);
    result.transition = pipeline.correlated;

    ObservableSpec joint_basis(product_basis_observable({2, 2}), tol);
    result.ensemble =
        dephase_analytic(DensityMatrix::from_pure(result.transition), joint_basis, ClassMode::per_index);
    RVector cat_labels(2);
    cat_labels << 0.0, 1.0;
    ObservableSpec cat(tensor_product(Operator::identity({2}), Operator::diagonal({2}, cat_labels), tol), tol);
    result.report = born_ensemble(result.ensemble, cat);
    result.report.seed = seed;
    return result;
}

// ---------------------------------------------------------------------------

std::pair<StateVector, StateVector> product_environment_branches(std::size_t n_qubits, double theta,
                                                                 const Tolerances &tol) {
    if (n_qubits < 1) {
        throw ShapeError("product environment needs at least one qubit");
    }
    StateVector e1 = StateVector::basis({2}, 0);
    StateVector e2 = qubit(std::cos(theta), std::sin(theta), tol);
    StateVector q1 = e1, q2 = e2;
    for (std::size_t k = 1; k < n_qubits; ++k) {
        e1 = tensor_product(e1, q1, tol);
        e2 = tensor_product(e2, q2, tol);
    }
    return {e1, e2};
}

DecoherenceTrajectory environment_decoherence(std::size_t n_qubits, double rate, double dt, std::size_t steps,
                                              const Tolerances &tol) {
    DecoherenceTrajectory out;
    std::vector<StateVector> first, second;
    for (std::size_t k = 0; k < steps; ++k) {
        double t = static_cast<double>(k) * dt;
        auto [e1, e2] = product_environment_branches(n_qubits, rate * t, tol);
        out.times.push_back(t);
        first.push_back(std::move(e1));
        second.push_back(std::move(e2));
    }
    out.gamma = decoherence_function(first, second, tol);
    return out;
}

}  // namespace qd
