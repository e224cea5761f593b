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

// Acceptance suite: one PASS/FAIL line per criterion, nonzero exit on any
// failure.

#include <sys/wait.h>
#include <unistd.h>

#include <chrono>
#include <cmath>
#include <complex>
#include <cstdio>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <functional>
#include <numbers>
#include <random>
#include <sstream>
#include <string>
#include <vector>

#include <Eigen/Dense>

#include "qd/dephasing.hpp"
#include "qd/linalg.hpp"
#include "qd/models.hpp"
#include "qd/quotient.hpp"

using namespace qd;
namespace fs = std::filesystem;

namespace {

struct Outcome {
    bool pass = true;
    std::string detail;
};

struct Criterion {
    int id;
    const char *name;
    double time_limit_s;  // 0: none
    std::function<Outcome()> run;
};

std::string num(double x) {
    char buf[32];
    std::snprintf(buf, sizeof(buf), "%.3g", x);
    return buf;
}

// --- independent helpers ----------------------------------------------------

CVector random_state(std::size_t n, std::mt19937_64 &rng) {
    std::normal_distribution<double> g;
    CVector v(static_cast<Eigen::Index>(n));
    for (auto &z : v) z = Complex(g(rng), g(rng));
    return v / v.norm();
}

CMatrix random_hermitian(std::size_t n, std::mt19937_64 &rng) {
    std::normal_distribution<double> g;
    const Eigen::Index m = static_cast<Eigen::Index>(n);
    CMatrix a(m, m);
    for (Eigen::Index i = 0; i < m; ++i)
        for (Eigen::Index j = 0; j < m; ++j) a(i, j) = Complex(g(rng), g(rng));
    return 0.5 * (a + a.adjoint());
}

CMatrix random_unitary(std::size_t n, std::mt19937_64 &rng) {
    Eigen::HouseholderQR<CMatrix> qr(random_hermitian(n, rng) + Complex(0.0, 1.0) * random_hermitian(n, rng));
    return qr.householderQ();
}

// Hermitian with a prescribed, possibly repeated, spectrum.
CMatrix hermitian_with_spectrum(const std::vector<double> &values, std::mt19937_64 &rng) {
    CMatrix w = random_unitary(values.size(), rng);
    RVector d = Eigen::Map<const RVector>(values.data(), static_cast<Eigen::Index>(values.size()));
    CMatrix h = w * d.cast<Complex>().asDiagonal() * w.adjoint();
    return 0.5 * (h + h.adjoint());
}

CMatrix kron(const CMatrix &a, const CMatrix &b) {
    CMatrix out(a.rows() * b.rows(), a.cols() * b.cols());
    for (Eigen::Index i = 0; i < a.rows(); ++i)
        for (Eigen::Index j = 0; j < a.cols(); ++j)
            out.block(i * b.rows(), j * b.cols(), b.rows(), b.cols()) = a(i, j) * b;
    return out;
}

// exp(−i s H) for Hermitian H by direct diagonalization.
CMatrix exp_minus_i(const CMatrix &h, double s) {
    Eigen::SelfAdjointEigenSolver<CMatrix> es(h);
    CVector phases = (Complex(0.0, -s) * es.eigenvalues().cast<Complex>()).array().exp();
    return es.eigenvectors() * phases.asDiagonal() * es.eigenvectors().adjoint();
}

double log_log_slope(const std::vector<double> &x, const std::vector<double> &y) {
    const double n = static_cast<double>(x.size());
    double sx = 0, sy = 0, sxx = 0, sxy = 0;
    for (std::size_t i = 0; i < x.size(); ++i) {
        double lx = std::log(x[i]), ly = std::log(y[i]);
        sx += lx, sy += ly, sxx += lx * lx, sxy += lx * ly;
    }
    return (n * sxy - sx * sy) / (n * sxx - sx * sx);
}

// --- criteria -----------------------------------------------------------------

Outcome born_rule_exactness() {
    std::mt19937_64 rng(1001);
    double worst_diag = 0.0, worst_mean = 0.0;
    std::size_t checked = 0;
    for (std::size_t dim : {2, 3, 4, 8}) {
        for (int trial = 0; trial < 1000; ++trial) {
            CMatrix o = random_hermitian(dim, rng);
            CVector psi = random_state(dim, rng);
            ObservableSpec spec(Operator({dim}, o, OperatorKind::hermitian));
            DensityMatrix rho = DensityMatrix::from_pure(StateVector({dim}, psi));
            CMatrix dephased = dephase_analytic(rho, spec, ClassMode::per_index).matrix();

            Eigen::SelfAdjointEigenSolver<CMatrix> es(o);
            for (Eigen::Index n = 0; n < es.eigenvectors().cols(); ++n) {
                CVector e = es.eigenvectors().col(n);
                double born = std::norm(e.dot(psi));
                worst_diag = std::max(worst_diag, std::abs(e.dot(dephased * e).real() - born));
            }
            double mean = psi.dot(o * psi).real();
            worst_mean = std::max(worst_mean, std::abs((o * dephased).trace().real() - mean));
            ++checked;
        }
    }
    return {worst_diag <= 1e-12 && worst_mean <= 1e-12,
            std::to_string(checked) + " states, max |diag - born| " + num(worst_diag) + ", max |Tr(O rho) - <O>| " +
                num(worst_mean)};
}

Outcome monte_carlo_convergence() {
    std::mt19937_64 rng(2002);
    CVector a = random_state(4, rng), b = random_state(4, rng);
    CMatrix mixed = 0.3 * a * a.adjoint() + 0.7 * b * b.adjoint();
    DensityMatrix rho({4}, 0.5 * (mixed + mixed.adjoint()));
    ObservableSpec spec(Operator({4}, random_hermitian(4, rng), OperatorKind::hermitian));
    CMatrix exact = dephase_analytic(rho, spec, ClassMode::per_index).matrix();

    std::vector<double> ms{1e2, 1e3, 1e4, 1e5}, errors;
    for (double m : ms) {
        double total = 0.0;
        for (std::uint64_t seed = 0; seed < 10; ++seed) {
            auto samples = static_cast<std::uint64_t>(m);
            total += (dephase_monte_carlo(rho, spec, ClassMode::per_index, samples, 500 + seed * 7919 + samples)
                          .matrix() -
                      exact)
                         .norm();
        }
        errors.push_back(total / 10.0);
    }
    double slope = log_log_slope(ms, errors);

    const double h = 1.0 / std::sqrt(2.0);
    CVector plus(2);
    plus << h, h;
    ObservableSpec z(pauli::z());
    double off = 0.0;
    for (std::uint64_t seed = 0; seed < 10; ++seed) {
        CMatrix out = dephase_monte_carlo(DensityMatrix::from_pure(StateVector({2}, plus)), z, ClassMode::per_index,
                                          10000, 9000 + seed)
                          .matrix();
        off = std::max(off, std::abs(out(0, 1)));
    }
    return {slope >= -0.6 && slope <= -0.4 && off <= 0.05,
            "slope " + num(slope) + ", max |off-diagonal| at M=1e4 " + num(off)};
}

Outcome commutant_soundness() {
    std::mt19937_64 rng(3003);
    double worst = 0.0;
    std::size_t generated = 0;
    const std::vector<std::vector<double>> spectra{{-1, 1}, {0, 1, 2}, {1, 1, 3}, {0, 0, 0, 1}, {2, -1, 2, -1}};
    for (int trial = 0; trial < 200; ++trial) {
        const auto &values = spectra[static_cast<std::size_t>(trial) % spectra.size()];
        const std::size_t dim = values.size();
        ObservableSpec spec(Operator({dim}, hermitian_with_spectrum(values, rng), OperatorKind::hermitian));
        for (ClassMode mode : {ClassMode::per_index, ClassMode::per_block}) {
            PhaseSample s = sample_phases(spec.group_count(mode), 77, static_cast<std::uint64_t>(trial));
            Operator u = random_phase_unitary(s, spec, mode);
            CommutantCheck check = commutant_member(u, spec.op(), 1e-10);
            worst = std::max(worst, check.residual);
            if (!check.member) worst = std::max(worst, 1.0);
            ++generated;
        }
    }
    double hadamard = commutant_member(pauli::hadamard(), pauli::z()).residual;
    return {worst <= 1e-12 && hadamard >= 1.0,
            std::to_string(generated) + " unitaries, max residual " + num(worst) + ", Hadamard residual " +
                num(hadamard)};
}

Outcome superposition_non_closure() {
    const double h = 1.0 / std::sqrt(2.0);
    const Complex i(0.0, 1.0);
    ObservableSpec z(pauli::z());
    std::vector<CVector> triple(3, CVector(2));
    triple[0] << h, h;
    triple[1] << h, -h;
    triple[2] << h, i * h;

    double label_err = 0.0;
    for (const CVector &v : triple)
        for (double p : class_label(StateVector({2}, v), z).probabilities) label_err = std::max(label_err, std::abs(p - 0.5));

    bool all_left = true;
    double min_shift = 1.0, oracle_err = 0.0;
    for (std::size_t a = 0; a < 3; ++a) {
        for (std::size_t b = a + 1; b < 3; ++b) {
            SuperpositionResult r =
                superposition_closed(StateVector({2}, triple[a]), StateVector({2}, triple[b]), 1.0, 1.0, z);
            all_left = all_left && !r.closed;
            CVector sum = triple[a] + triple[b];
            sum /= sum.norm();
            // Eigen-index 0 is |1⟩, index 1 is |0⟩.
            oracle_err = std::max(oracle_err, std::abs(r.label.probabilities[0] - std::norm(sum(1))));
            oracle_err = std::max(oracle_err, std::abs(r.label.probabilities[1] - std::norm(sum(0))));
            min_shift = std::min(min_shift, std::abs(r.label.probabilities[0] - 0.5));
        }
    }
    return {label_err <= 1e-12 && all_left && min_shift >= 0.1 && oracle_err <= 1e-12,
            "triple label error " + num(label_err) + ", smallest shift of a sum " + num(min_shift)};
}

Outcome stern_gerlach_ensembles() {
    std::mt19937_64 rng(5005);
    std::uniform_real_distribution<double> u(-3.0, 3.0);
    double worst = 0.0;
    for (int trial = 0; trial < 100; ++trial) {
        CVector amps = random_state(2, rng);
        SternGerlachParams p;
        p.alpha = amps(0), p.beta = amps(1);
        p.omega = u(rng), p.pz = u(rng), p.t = std::abs(u(rng)), p.z = u(rng);
        p.inject_random_phase = true;
        SternGerlachResult r = stern_gerlach_run(p, static_cast<std::uint64_t>(trial));
        CMatrix expected = CMatrix::Zero(4, 4);
        expected(0, 0) = std::norm(p.alpha);
        expected(3, 3) = std::norm(p.beta);
        worst = std::max(worst, (r.ensemble.matrix() - expected).cwiseAbs().maxCoeff());
    }
    return {worst <= 1e-12, "100 runs, max entry error " + num(worst)};
}

Outcome qubit_chain() {
    std::mt19937_64 rng(6006);
    double magnitude_err = 0.0, ensemble_err = 0.0, stability = 0.0;
    for (std::size_t n = 1; n <= 10; ++n) {
        CVector amps = random_state(2, rng);
        ChainResult r = qubit_chain_run(ChainParams::with_random_phases(n, amps(0), amps(1), 600 + n));
        const std::size_t last = (std::size_t{1} << n) - 1;
        magnitude_err = std::max(magnitude_err, std::abs(std::abs(r.pre_dephase[0]) - std::abs(amps(0))));
        magnitude_err = std::max(magnitude_err, std::abs(std::abs(r.pre_dephase[last]) - std::abs(amps(1))));
        CMatrix expected = CMatrix::Zero(r.ensemble.matrix().rows(), r.ensemble.matrix().cols());
        expected(0, 0) += std::norm(amps(0));
        expected(static_cast<Eigen::Index>(last), static_cast<Eigen::Index>(last)) += std::norm(amps(1));
        ensemble_err = std::max(ensemble_err, (r.ensemble.matrix() - expected).cwiseAbs().maxCoeff());
        for (double s : r.stability_residuals) stability = std::max(stability, s);
    }
    return {magnitude_err <= 1e-12 && ensemble_err <= 1e-12 && stability <= 1e-12,
            "N=1..10, magnitude error " + num(magnitude_err) + ", ensemble error " + num(ensemble_err) +
                ", max stability residual " + num(stability)};
}

Outcome von_neumann_factorization() {
    std::mt19937_64 rng(7007);
    std::uniform_real_distribution<double> coupling(-2.0, 2.0), time(0.0, 3.0);
    std::uniform_int_distribution<std::size_t> dims(2, 4);
    double worst_factor = 0.0, worst_commute = 0.0;
    for (int trial = 0; trial < 100; ++trial) {
        const std::size_t ds = dims(rng), da = dims(rng);
        std::vector<double> spectrum;
        for (std::size_t k = 0; k < ds; ++k) spectrum.push_back(static_cast<double>(rng() % 3));
        CMatrix o = hermitian_with_spectrum(spectrum, rng);
        ObservableSpec spec(Operator({ds}, o, OperatorKind::hermitian));
        std::vector<double> lambdas;
        for (std::size_t b = 0; b < spec.blocks().size(); ++b) lambdas.push_back(coupling(rng));
        CMatrix ta = random_hermitian(da, rng);
        MeasurementSetup setup{spec, lambdas, Operator({da}, ta, OperatorKind::hermitian),
                               StateVector::basis({da}, 0)};
        const double t = time(rng);
        CMatrix direct = von_neumann_unitary(setup, t).matrix();

        // Oracle: projectors from the observable's own eigen-decomposition.
        CMatrix factored = CMatrix::Zero(direct.rows(), direct.cols());
        for (std::size_t b = 0; b < spec.blocks().size(); ++b) {
            CMatrix proj = spec.block_projector(b).matrix();
            factored += kron(proj, exp_minus_i(ta, t * lambdas[b]));
        }
        worst_factor = std::max(worst_factor, (direct - factored).norm());
        CMatrix lifted = kron(o, CMatrix::Identity(static_cast<Eigen::Index>(da), static_cast<Eigen::Index>(da)));
        worst_commute = std::max(worst_commute, (direct * lifted - lifted * direct).norm());
    }
    return {worst_factor <= 1e-9 && worst_commute <= 1e-10,
            "100 setups, max factorization gap " + num(worst_factor) + ", max commutator " + num(worst_commute)};
}

// Hermitian H with exp(−inH)|0⟩ = |n mod d⟩ (generator of the cyclic shift).
CMatrix shift_generator(std::size_t d) {
    const Eigen::Index m = static_cast<Eigen::Index>(d);
    CMatrix h = CMatrix::Zero(m, m);
    for (Eigen::Index k = 0; k < m; ++k) {
        CVector f(m);
        for (Eigen::Index j = 0; j < m; ++j)
            f(j) = std::polar(1.0 / std::sqrt(static_cast<double>(d)), -2.0 * std::numbers::pi * double(j * k) / double(d));
        h += (-2.0 * std::numbers::pi * double(k) / double(d)) * f * f.adjoint();
    }
    return 0.5 * (h + h.adjoint());
}

Outcome einselection() {
    std::mt19937_64 rng(8008);
    double worst = 0.0;
    bool flags_right = true;
    for (int trial = 0; trial < 60; ++trial) {
        const std::size_t ds = 2 + static_cast<std::size_t>(trial % 3);
        ObservableSpec spec(Operator({ds}, random_hermitian(ds, rng), OperatorKind::hermitian));
        const std::size_t blocks = spec.blocks().size();
        const bool orthogonal = trial % 2 == 0;
        std::vector<double> lambdas;
        for (std::size_t b = 0; b < blocks; ++b) lambdas.push_back(orthogonal ? double(b) : 0.3 * double(b));
        CMatrix ta = shift_generator(blocks);
        MeasurementSetup setup{spec, lambdas, Operator({blocks}, ta, OperatorKind::hermitian),
                               StateVector::basis({blocks}, 0)};
        StateVector psi({ds}, random_state(ds, rng));
        PipelineResult r = measurement_pipeline(psi, setup, 1.0, static_cast<std::uint64_t>(trial));

        // Oracle overlaps |⟨φ_m|φ_n⟩| of the branches exp(−iλ_n T)|0⟩.
        std::vector<CVector> branches;
        for (double l : lambdas) branches.push_back(exp_minus_i(ta, l).col(0));
        double largest = 0.0;
        for (std::size_t m = 0, k = 0; m < blocks; ++m)
            for (std::size_t n = m + 1; n < blocks; ++n, ++k) {
                double overlap = std::abs(branches[m].dot(branches[n]));
                largest = std::max(largest, overlap);
                if (k >= r.report.branch_overlaps.size() || std::abs(r.report.branch_overlaps[k] - overlap) > 1e-10)
                    flags_right = false;
            }
        if (r.report.overlap_flagged != (largest > 1e-12)) flags_right = false;

        if (orthogonal) {
            CMatrix reduced = spec.to_eigenbasis(r.reduced.matrix());
            for (std::size_t b = 0; b < blocks; ++b) {
                double diag = 0.0;
                for (std::size_t k : spec.blocks()[b])
                    diag += reduced(static_cast<Eigen::Index>(k), static_cast<Eigen::Index>(k)).real();
                worst = std::max(worst, std::abs(r.report.probabilities[b] - diag));
            }
        }
    }
    return {worst <= 1e-10 && flags_right,
            "max |P - reduced diagonal| " + num(worst) + (flags_right ? ", overlap diagnostics correct"
                                                                     : ", overlap diagnostics WRONG")};
}

Outcome decoherence_baseline() {
    double worst_cap = -1e300, worst_oracle = 0.0;
    for (std::size_t n = 1; n <= 8; ++n) {
        DecoherenceTrajectory traj = environment_decoherence(n, 0.15, 0.25, 40);
        for (std::size_t k = 0; k < traj.times.size(); ++k) {
            worst_cap = std::max(worst_cap, traj.gamma[k]);
            double theta = 0.15 * traj.times[k];
            // Direct overlap of the two product states.
            CVector e1 = CVector::Ones(1), e2 = CVector::Ones(1);
            CVector q1(2), q2(2);
            q1 << 1.0, 0.0;
            q2 << std::cos(theta), std::sin(theta);
            for (std::size_t q = 0; q < n; ++q) {
                CVector a(e1.size() * 2), b(e2.size() * 2);
                for (Eigen::Index j = 0; j < e1.size(); ++j) a.segment(2 * j, 2) = e1(j) * q1, b.segment(2 * j, 2) = e2(j) * q2;
                e1 = a, e2 = b;
            }
            double overlap = std::abs(e1.dot(e2));
            if (overlap < 1e-12) continue;
            worst_oracle = std::max(worst_oracle, std::abs(traj.gamma[k] - std::log(overlap * overlap)));
            double c = std::cos(theta);
            worst_oracle = std::max(worst_oracle, std::abs(traj.gamma[k] - double(n) * std::log(c * c)));
        }
    }
    return {worst_cap <= 1e-12 && worst_oracle <= 1e-9,
            "max Gamma " + num(worst_cap) + ", max oracle gap " + num(worst_oracle)};
}

std::string slurp(const fs::path &p) {
    std::ifstream in(p, std::ios::binary);
    std::ostringstream s;
    s << in.rdbuf();
    return s.str();
}

Outcome determinism() {
    fs::path dir = fs::temp_directory_path() / ("qdlab_acceptance_" + std::to_string(::getpid()));
    fs::create_directories(dir);
    const std::vector<std::pair<std::string, std::string>> configs{
        {"chain.cfg", "[experiment]\nname = qubit_chain\nseed = 3\nn_qubits = 5\nalpha = 0.6\nbeta = 0.8j\n"
                      "random_phases = true\n"},
        {"dephase.cfg", "[experiment]\nname = dephase\nseed = 4\nstate = 0.6 0.48 0.64j\nobservable = diag\n"
                        "eigenvalues = 1 2 3\nmode = monte_carlo\nsamples = 20000\n"},
        {"cat.cfg", "[experiment]\nname = cat\nseed = 5\nalpha = 0.6\nbeta = 0.8\nformat = csv\n"},
        {"sg.cfg", "[experiment]\nname = stern_gerlach\nseed = 6\nalpha = 0.8\nbeta = 0.6\nomega = 1.5\nt = 2\n"
                   "inject_random_phase = true\n"},
        {"conv.cfg", "[experiment]\nname = convergence\nseed = 7\nsample_grid = 100 1000 10000\nrepeats = 3\n"},
    };
    bool identical = true;
    std::string failures;
    for (const auto &[name, text] : configs) {
        std::ofstream(dir / name) << text;
        std::vector<std::string> outputs;
        for (const char *extra : {"", "", " --workers 3"}) {
            fs::path out = dir / (name + std::to_string(outputs.size()) + ".out");
            std::string cmd = std::string(QDLAB_PATH) + " run " + (dir / name).string() + " --out " + out.string() +
                              extra + " >/dev/null 2>&1";
            int status = std::system(cmd.c_str());
            if (!WIFEXITED(status) || WEXITSTATUS(status) != 0) {
                identical = false;
                failures += " " + name + "(exit)";
            }
            outputs.push_back(slurp(out));
        }
        if (outputs[0].empty() || outputs[0] != outputs[1] || outputs[0] != outputs[2]) {
            identical = false;
            failures += " " + name;
        }
    }
    std::error_code ignored;
    fs::remove_all(dir, ignored);

    std::mt19937_64 rng(1010);
    CVector psi = random_state(6, rng);
    DensityMatrix rho = DensityMatrix::from_pure(StateVector({2, 3}, psi));
    ObservableSpec spec(Operator({2, 3}, random_hermitian(6, rng), OperatorKind::hermitian));
    CMatrix reference = dephase_monte_carlo(rho, spec, ClassMode::per_index, 50000, 12, 1).matrix();
    bool worker_invariant = true;
    for (unsigned workers : {2u, 3u, 5u, 8u})
        worker_invariant =
            worker_invariant && dephase_monte_carlo(rho, spec, ClassMode::per_index, 50000, 12, workers).matrix() == reference;

    return {identical && worker_invariant,
            std::string(identical ? "5 configs byte-identical across 3 invocations" : "differing:" + failures) +
                (worker_invariant ? ", Monte Carlo identical for 1/2/3/5/8 workers" : ", worker counts DIFFER")};
}

}  // namespace

int main() {
    const std::vector<Criterion> criteria{
        {1, "Born-rule exactness", 10.0, born_rule_exactness},
        {2, "Monte Carlo convergence", 60.0, monte_carlo_convergence},
        {3, "commutant soundness", 0.0, commutant_soundness},
        {4, "superposition non-closure", 0.0, superposition_non_closure},
        {5, "Stern-Gerlach ensemble", 0.0, stern_gerlach_ensembles},
        {6, "qubit chain", 30.0, qubit_chain},
        {7, "von Neumann factorization", 0.0, von_neumann_factorization},
        {8, "einselection cross-check", 0.0, einselection},
        {9, "decoherence-function baseline", 0.0, decoherence_baseline},
        {10, "determinism", 0.0, determinism},
    };
    int failed = 0;
    for (const Criterion &c : criteria) {
        auto start = std::chrono::steady_clock::now();
        Outcome outcome;
        try {
            outcome = c.run();
        } catch (const std::exception &e) {
            outcome = {false, std::string("exception: ") + e.what()};
        }
        double elapsed = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
        if (c.time_limit_s > 0.0 && elapsed >= c.time_limit_s) {
            outcome.pass = false;
            outcome.detail += ", over the " + num(c.time_limit_s) + " s limit";
        }
        failed += outcome.pass ? 0 : 1;
        std::printf("%s  %2d %-30s %7.2f s  %s\n", outcome.pass ? "PASS" : "FAIL", c.id, c.name, elapsed,
                    outcome.detail.c_str());
    }
    std::printf("%zu/%zu criteria passed\n", criteria.size() - static_cast<std::size_t>(failed), criteria.size());
    return failed == 0 ? 0 : 1;
}
