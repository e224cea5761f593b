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

#include "qd/dephasing.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <string>
#include <thread>

#include "qd/errors.hpp"
#include "qd/random.hpp"

namespace qd {

namespace {

constexpr std::uint64_t kChunk = 4096;
constexpr double kOverlapFlag = 1e-12;

void require_spec_dims(const Dims &dims, const ObservableSpec &spec, const char *what) {
    if (dims != spec.dims()) {
        throw ShapeError(std::string(what) + ": dims do not match the observable");
    }
}

// Σ over samples in [first, last) of z z† with z_g = e^{−iγ_g}.
CMatrix phase_moment(std::size_t groups, std::uint64_t seed, std::uint64_t first, std::uint64_t last) {
    auto g = static_cast<Eigen::Index>(groups);
    CMatrix acc = CMatrix::Zero(g, g);
    CVector z(g);
    for (std::uint64_t s = first; s < last; ++s) {
        PhaseSample sample = sample_phases(groups, seed, s);
        for (Eigen::Index k = 0; k < g; ++k) {
            z[k] = std::polar(1.0, -sample.gammas[static_cast<std::size_t>(k)]);
        }
        acc.noalias() += z * z.adjoint();
    }
    return acc;
}

DensityMatrix apply_group_weights(const DensityMatrix &rho, const ObservableSpec &spec, ClassMode mode,
                                  CMatrix weights) {
    // |z_g|² is one up to rounding; pin it so the diagonal is untouched.
    weights.diagonal().setOnes();
    CMatrix r = spec.to_eigenbasis(rho.matrix());
    for (Eigen::Index j = 0; j < r.cols(); ++j) {
        auto gj = static_cast<Eigen::Index>(spec.group_of(static_cast<std::size_t>(j), mode));
        for (Eigen::Index i = 0; i < r.rows(); ++i) {
            auto gi = static_cast<Eigen::Index>(spec.group_of(static_cast<std::size_t>(i), mode));
            r(i, j) *= weights(gi, gj);
        }
    }
    return DensityMatrix(DensityMatrix::Unchecked{}, rho.dims(), spec.from_eigenbasis(r));
}

}  // namespace

PhaseSample sample_phases(std::size_t count, std::uint64_t seed, std::uint64_t stream) {
    if (count == 0) {
        throw ShapeError("sample_phases: count must be at least 1");
    }
    PhiloxStream rng(seed, stream);
    PhaseSample sample{std::vector<double>(count), seed, stream};
    for (double &gamma : sample.gammas) {
        gamma = 2.0 * std::numbers::pi * rng.uniform();
        if (gamma >= 2.0 * std::numbers::pi) {
            gamma = 0.0;
        }
    }
    return sample;
}

Operator random_phase_unitary(const PhaseSample &sample, const ObservableSpec &spec, ClassMode mode) {
    if (sample.gammas.size() != spec.group_count(mode)) {
        throw ShapeError("random_phase_unitary: expected " + std::to_string(spec.group_count(mode)) +
                         " phases, got " + std::to_string(sample.gammas.size()));
    }
    auto n = static_cast<Eigen::Index>(spec.dim());
    CMatrix diag = CMatrix::Zero(n, n);
    for (Eigen::Index k = 0; k < n; ++k) {
        diag(k, k) = std::polar(1.0, -sample.gammas[spec.group_of(static_cast<std::size_t>(k), mode)]);
    }
    return Operator(spec.dims(), spec.from_eigenbasis(diag), OperatorKind::unitary);
}

DensityMatrix dephase_analytic(const DensityMatrix &rho, const ObservableSpec &spec, ClassMode mode) {
    require_spec_dims(rho.dims(), spec, "dephase_analytic");
    CMatrix r = spec.to_eigenbasis(rho.matrix());
    for (Eigen::Index j = 0; j < r.cols(); ++j) {
        for (Eigen::Index i = 0; i < r.rows(); ++i) {
            if (spec.group_of(static_cast<std::size_t>(i), mode) != spec.group_of(static_cast<std::size_t>(j), mode)) {
                r(i, j) = 0.0;
            }
        }
    }
    return DensityMatrix(DensityMatrix::Unchecked{}, rho.dims(), spec.from_eigenbasis(r));
}

DensityMatrix dephase_analytic(const DensityMatrix &rho, const ObservableSpec &spec) {
    return dephase_analytic(rho, spec, spec.default_mode());
}

DensityMatrix dephase_monte_carlo(const DensityMatrix &rho, const ObservableSpec &spec, ClassMode mode,
                                  std::uint64_t samples, std::uint64_t seed, unsigned workers) {
    require_spec_dims(rho.dims(), spec, "dephase_monte_carlo");
    if (samples == 0) {
        throw ShapeError("dephase_monte_carlo: at least one sample is required");
    }
    const std::size_t groups = spec.group_count(mode);
    const std::uint64_t chunks = (samples + kChunk - 1) / kChunk;
    std::vector<CMatrix> partial(static_cast<std::size_t>(chunks));
    auto run_chunk = [&](std::uint64_t c) {
        std::uint64_t first = c * kChunk;
        std::uint64_t last = std::min(samples, first + kChunk);
        partial[static_cast<std::size_t>(c)] = phase_moment(groups, seed, first, last);
    };

    unsigned threads = std::max(1u, std::min<unsigned>(workers, static_cast<unsigned>(chunks)));
    if (threads == 1) {
        for (std::uint64_t c = 0; c < chunks; ++c) {
            run_chunk(c);
        }
    } else {
        std::vector<std::jthread> pool;
        for (unsigned w = 0; w < threads; ++w) {
            pool.emplace_back([&, w] {
                for (std::uint64_t c = w; c < chunks; c += threads) {
                    run_chunk(c);
                }
            });
        }
    }

    auto g = static_cast<Eigen::Index>(groups);
    CMatrix total = CMatrix::Zero(g, g);
    for (const CMatrix &p : partial) {
        total += p;
    }
    total /= static_cast<double>(samples);
    return apply_group_weights(rho, spec, mode, std::move(total));
}

DensityMatrix dephase_monte_carlo(const DensityMatrix &rho, const ObservableSpec &spec, ClassMode mode,
                                  std::span<const PhaseSample> samples) {
    require_spec_dims(rho.dims(), spec, "dephase_monte_carlo");
    if (samples.empty()) {
        throw ShapeError("dephase_monte_carlo: at least one sample is required");
    }
    const std::size_t groups = spec.group_count(mode);
    auto g = static_cast<Eigen::Index>(groups);
    CMatrix total = CMatrix::Zero(g, g);
    CVector z(g);
    for (const PhaseSample &sample : samples) {
        if (sample.gammas.size() != groups) {
            throw ShapeError("dephase_monte_carlo: sample length does not match the phase groups");
        }
        for (Eigen::Index k = 0; k < g; ++k) {
            z[k] = std::polar(1.0, -sample.gammas[static_cast<std::size_t>(k)]);
        }
        total.noalias() += z * z.adjoint();
    }
    total /= static_cast<double>(samples.size());
    return apply_group_weights(rho, spec, mode, std::move(total));
}

EnsembleReport born_ensemble(const DensityMatrix &rho, const ObservableSpec &spec, ClassMode mode) {
    require_spec_dims(rho.dims(), spec, "born_ensemble");
    DensityMatrix dephased = dephase_analytic(rho, spec, mode);
    CMatrix r = spec.to_eigenbasis(dephased.matrix());

    EnsembleReport report;
    if (mode == ClassMode::per_index) {
        for (Eigen::Index k = 0; k < r.rows(); ++k) {
            report.outcome_values.push_back(spec.eigenvalues()[k]);
            report.probabilities.push_back(std::max(0.0, r(k, k).real()));
        }
    } else {
        for (std::size_t b = 0; b < spec.blocks().size(); ++b) {
            double p = 0.0;
            for (std::size_t k : spec.blocks()[b]) {
                p += r(static_cast<Eigen::Index>(k), static_cast<Eigen::Index>(k)).real();
            }
            report.outcome_values.push_back(spec.block_values()[b]);
            report.probabilities.push_back(std::max(0.0, p));
        }
    }
    // Tr(Oρ) = Σ_ij O_ij ρ_ji
    report.expectation = (spec.op().matrix().array() * dephased.matrix().transpose().array()).sum().real();
    return report;
}

EnsembleReport born_ensemble(const DensityMatrix &rho, const ObservableSpec &spec) {
    return born_ensemble(rho, spec, spec.default_mode());
}

EnsembleReport born_ensemble(const StateVector &psi, const ObservableSpec &spec, ClassMode mode) {
    return born_ensemble(DensityMatrix::from_pure(psi), spec, mode);
}

EnsembleReport born_ensemble(const StateVector &psi, const ObservableSpec &spec) {
    return born_ensemble(psi, spec, spec.default_mode());
}

EnsembleReport measure_after_evolution(const StateVector &psi0, const Operator &u_t, const ObservableSpec &spec,
                                       const Tolerances &tol, std::uint64_t invariance_seed) {
    require_spec_dims(psi0.dims(), spec, "measure_after_evolution");
    if (u_t.dims() != psi0.dims()) {
        throw ShapeError("measure_after_evolution: evolution dims do not match the state");
    }
    u_t.require_unitary(tol.op_tol);
    const ClassMode mode = spec.default_mode();
    StateVector evolved = u_t.apply(psi0, tol);
    EnsembleReport report = born_ensemble(evolved, spec, mode);

    Operator phase = random_phase_unitary(sample_phases(spec.group_count(mode), invariance_seed, 0), spec, mode);
    EnsembleReport shifted = born_ensemble(phase.apply(evolved, tol), spec, mode);
    double residual = std::abs(shifted.expectation - report.expectation);
    for (std::size_t k = 0; k < report.probabilities.size(); ++k) {
        residual = std::max(residual, std::abs(shifted.probabilities[k] - report.probabilities[k]));
    }
    report.invariance_residual = residual;
    return report;
}

std::vector<double> decoherence_function(std::span<const StateVector> e1, std::span<const StateVector> e2,
                                         const Tolerances &tol) {
    if (e1.size() != e2.size()) {
        throw ShapeError("decoherence_function: trajectories have different lengths");
    }
    std::vector<double> gamma;
    gamma.reserve(e1.size());
    for (std::size_t t = 0; t < e1.size(); ++t) {
        if (e1[t].dims() != e2[t].dims()) {
            throw ShapeError("decoherence_function: branch states have different dims");
        }
        double overlap = std::abs(e1[t].inner(e2[t]));
        if (overlap < tol.null_tol) {
            gamma.push_back(kOrthogonalGamma);
        } else {
            gamma.push_back(std::min(0.0, 2.0 * std::log(overlap)));
        }
    }
    return gamma;
}

}  // namespace qd
