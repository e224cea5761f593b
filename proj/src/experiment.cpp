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

#include "qd/experiment.hpp"

#include <cmath>
#include <cstdio>
#include <fstream>
#include <ostream>
#include <sstream>

#include "qd/dephasing.hpp"
#include "qd/errors.hpp"
#include "qd/matrix_io.hpp"
#include "qd/models.hpp"
#include "qd/random.hpp"
#include "qd/report_io.hpp"

namespace qd {

namespace {

using nlohmann::json;

std::string fmt(const char *pattern, double x) {
    char buf[48];
    std::snprintf(buf, sizeof(buf), pattern, x);
    return buf;
}

CVector to_vector(const std::vector<Complex> &v) {
    return Eigen::Map<const CVector>(v.data(), static_cast<Eigen::Index>(v.size()));
}

json amplitudes_json(const StateVector &psi) {
    json amps = json::array();
    for (std::size_t k = 0; k < psi.dim(); ++k) amps.push_back(format_complex(psi[k]));
    return json{{"dims", psi.dims()}, {"amplitudes", amps}};
}

// Config amplitudes are accepted to 1e-9; the models need them exact.
std::pair<Complex, Complex> normalized_pair(Complex alpha, Complex beta) {
    double norm = std::sqrt(std::norm(alpha) + std::norm(beta));
    return {alpha / norm, beta / norm};
}

double max_off_diagonal(const CMatrix &m) {
    double worst = 0.0;
    for (Eigen::Index i = 0; i < m.rows(); ++i)
        for (Eigen::Index j = 0; j < m.cols(); ++j)
            if (i != j) worst = std::max(worst, std::abs(m(i, j)));
    return worst;
}

json header(const ExperimentConfig &cfg) {
    return json{{"schema_version", kSchemaVersion}, {"experiment", to_string(cfg.experiment())}, {"seed", cfg.seed}};
}

std::string report_summary(const ExperimentConfig &cfg, const EnsembleReport &report, double off_diagonal) {
    return std::string(to_string(cfg.experiment())) + " seed=" + std::to_string(cfg.seed) +
           " expectation=" + fmt("%.6g", report.expectation) + " max_offdiag=" + fmt("%.3g", off_diagonal);
}

ExperimentOutput finish(const ExperimentConfig &cfg, json body, const EnsembleReport &report, double off_diagonal) {
    body["report"] = to_json(report);
    std::string text = cfg.format == OutputFormat::json ? body.dump(2) + "\n" : to_csv(report);
    return {text, report_summary(cfg, report, off_diagonal)};
}

ClassMode resolve(GroupMode mode, const ObservableSpec &spec) {
    switch (mode) {
        case GroupMode::per_index:
            return ClassMode::per_index;
        case GroupMode::per_block:
            return ClassMode::per_block;
        case GroupMode::automatic:
            break;
    }
    return spec.default_mode();
}

ExperimentOutput run(const ExperimentConfig &cfg, const DephaseConfig &p, const Tolerances &tol) {
    ObservableSpec spec(p.observable.build(), tol);
    StateVector psi = StateVector::normalized({p.state.size()}, to_vector(p.state), tol);
    ClassMode mode = resolve(p.group_mode, spec);
    DensityMatrix rho = DensityMatrix::from_pure(psi);

    DensityMatrix out = rho;
    EnsembleReport report;
    if (cfg.mode == EnsembleMethod::monte_carlo) {
        out = dephase_monte_carlo(rho, spec, mode, *cfg.samples, cfg.seed, cfg.workers);
        report = born_ensemble(out, spec, mode);
        report.method = EnsembleMethod::monte_carlo;
        report.samples = *cfg.samples;
    } else {
        out = dephase_analytic(rho, spec, mode);
        report = born_ensemble(rho, spec, mode);
    }
    report.seed = cfg.seed;

    // Largest surviving coherence between different phase groups.
    CMatrix eigen = spec.to_eigenbasis(out.matrix());
    double off = 0.0;
    for (std::size_t i = 0; i < out.dim(); ++i)
        for (std::size_t j = 0; j < out.dim(); ++j)
            if (spec.group_of(i, mode) != spec.group_of(j, mode))
                off = std::max(off, std::abs(eigen(static_cast<Eigen::Index>(i), static_cast<Eigen::Index>(j))));

    json body = header(cfg);
    body["density_matrix"] = to_json(out);
    body["max_offdiagonal"] = off;
    return finish(cfg, std::move(body), report, off);
}

ExperimentOutput run(const ExperimentConfig &cfg, const SternGerlachConfig &p, const Tolerances &tol) {
    SternGerlachParams params;
    std::tie(params.alpha, params.beta) = normalized_pair(p.alpha, p.beta);
    params.omega = p.omega;
    params.pz = p.pz;
    params.t = p.t;
    params.z = p.z;
    params.inject_random_phase = p.inject_random_phase;
    SternGerlachResult r = stern_gerlach_run(params, cfg.seed, tol);

    json body = header(cfg);
    body["correlated"] = amplitudes_json(r.correlated);
    body["ensemble"] = to_json(r.ensemble);
    body["pointer_phases"] = r.pointer_phases;
    return finish(cfg, std::move(body), r.report, max_off_diagonal(r.ensemble.matrix()));
}

ExperimentOutput run(const ExperimentConfig &cfg, const QubitChainConfig &p, const Tolerances &tol) {
    auto [alpha, beta] = normalized_pair(p.alpha, p.beta);
    ChainParams params;
    if (p.random_phases) {
        params = ChainParams::with_random_phases(p.n_qubits, alpha, beta, cfg.seed);
    } else {
        params.n_qubits = p.n_qubits;
        params.alpha = alpha;
        params.beta = beta;
        params.link_gamma = p.link_gamma;
        params.link_delta = p.link_delta;
        params.gamma_env = p.gamma_env;
        params.delta_env = p.delta_env;
        params.seed = cfg.seed;
    }
    params.link_order = p.link_order;
    ChainResult r = qubit_chain_run(params, tol);

    double worst = 0.0;
    for (double residual : r.stability_residuals) worst = std::max(worst, residual);
    json body = header(cfg);
    body["pre_dephase"] = amplitudes_json(r.pre_dephase);
    body["ensemble"] = to_json(r.ensemble);
    body["max_stability_residual"] = worst;
    return finish(cfg, std::move(body), r.report, max_off_diagonal(r.ensemble.matrix()));
}

ExperimentOutput run(const ExperimentConfig &cfg, const CatConfig &p, const Tolerances &tol) {
    CatParams params;
    std::tie(params.alpha, params.beta) = normalized_pair(p.alpha, p.beta);
    params.gamma = p.gamma;
    params.delta = p.delta;
    CatResult r = cat_run(params, cfg.seed, tol);

    json body = header(cfg);
    body["transition"] = amplitudes_json(r.transition);
    body["ensemble"] = to_json(r.ensemble);
    body["gamma"] = r.gamma;
    body["delta"] = r.delta;
    return finish(cfg, std::move(body), r.report, max_off_diagonal(r.ensemble.matrix()));
}

ExperimentOutput run(const ExperimentConfig &cfg, const MeasureConfig &p, const Tolerances &tol) {
    ObservableSpec spec(p.observable.build(), tol);
    StateVector psi = StateVector::normalized({p.state.size()}, to_vector(p.state), tol);
    MeasurementSetup setup{spec, p.couplings, p.pointer.build(),
                           StateVector::normalized({p.apparatus.size()}, to_vector(p.apparatus), tol)};
    PipelineResult r = measurement_pipeline(psi, setup, p.t, cfg.seed, tol);

    json body = header(cfg);
    body["correlated"] = amplitudes_json(r.correlated);
    body["reduced"] = to_json(r.reduced);
    return finish(cfg, std::move(body), r.report, max_off_diagonal(spec.to_eigenbasis(r.reduced.matrix())));
}

ExperimentOutput run(const ExperimentConfig &cfg, const DecoherenceConfig &p, const Tolerances &tol) {
    DecoherenceTrajectory traj = environment_decoherence(p.n_qubits, p.rate, p.dt, p.steps, tol);
    std::string text;
    if (cfg.format == OutputFormat::json) {
        json body = header(cfg);
        body["n_qubits"] = p.n_qubits;
        body["times"] = traj.times;
        body["gamma"] = traj.gamma;
        text = body.dump(2) + "\n";
    } else {
        text = "t,gamma\n";
        for (std::size_t k = 0; k < traj.times.size(); ++k)
            text += fmt("%.17g", traj.times[k]) + "," + fmt("%.17g", traj.gamma[k]) + "\n";
    }
    return {text, "decoherence_fn seed=" + std::to_string(cfg.seed) + " final_gamma=" +
                      fmt("%.6g", traj.gamma.back())};
}

// Random mixed state (G G† / Tr) from stream 0 of the seed.
DensityMatrix seeded_density(std::size_t dim, std::uint64_t seed, const Tolerances &tol) {
    PhiloxStream stream(seed, 0);
    const Eigen::Index n = static_cast<Eigen::Index>(dim);
    CMatrix g(n, n);
    for (Eigen::Index i = 0; i < n; ++i)
        for (Eigen::Index j = 0; j < n; ++j) {
            double re = stream.normal();
            g(i, j) = Complex(re, stream.normal());
        }
    CMatrix rho = g * g.adjoint();
    rho = 0.5 * (rho + rho.adjoint());
    rho /= rho.trace().real();
    return DensityMatrix({dim}, rho, tol);
}

ExperimentOutput run(const ExperimentConfig &cfg, const ConvergenceConfig &p, const Tolerances &tol) {
    DensityMatrix rho = seeded_density(p.dim, cfg.seed, tol);
    ObservableSpec spec(product_basis_observable({p.dim}), tol);
    CMatrix exact = dephase_analytic(rho, spec, ClassMode::per_index).matrix();
    PhiloxStream run_seeds(cfg.seed, 1);

    std::vector<double> errors;
    for (std::size_t i = 0; i < p.sample_grid.size(); ++i) {
        double total = 0.0;
        for (std::size_t r = 0; r < p.repeats; ++r) {
            std::uint64_t seed = run_seeds.word_at(i * p.repeats + r);
            CMatrix mc =
                dephase_monte_carlo(rho, spec, ClassMode::per_index, p.sample_grid[i], seed, cfg.workers).matrix();
            total += (mc - exact).norm();
        }
        errors.push_back(total / static_cast<double>(p.repeats));
    }

    // Least-squares slope of log error against log M.
    const double n = static_cast<double>(errors.size());
    double mx = 0.0, my = 0.0;
    for (std::size_t i = 0; i < errors.size(); ++i) {
        mx += std::log(static_cast<double>(p.sample_grid[i])) / n;
        my += std::log(errors[i]) / n;
    }
    double sxy = 0.0, sxx = 0.0;
    for (std::size_t i = 0; i < errors.size(); ++i) {
        double dx = std::log(static_cast<double>(p.sample_grid[i])) - mx;
        sxy += dx * (std::log(errors[i]) - my);
        sxx += dx * dx;
    }
    const double slope = sxx > 0.0 ? sxy / sxx : 0.0;

    std::string text;
    if (cfg.format == OutputFormat::json) {
        json body = header(cfg);
        json points = json::array();
        for (std::size_t i = 0; i < errors.size(); ++i)
            points.push_back({{"samples", p.sample_grid[i]}, {"frobenius_error", errors[i]}});
        body["points"] = points;
        body["repeats"] = p.repeats;
        body["dim"] = p.dim;
        body["slope"] = slope;
        text = body.dump(2) + "\n";
    } else {
        text = "M,frobenius_error\n";
        for (std::size_t i = 0; i < errors.size(); ++i)
            text += std::to_string(p.sample_grid[i]) + "," + fmt("%.17g", errors[i]) + "\n";
    }
    return {text, "convergence seed=" + std::to_string(cfg.seed) + " slope=" + fmt("%.4f", slope)};
}

}  // namespace

ExperimentOutput execute(const ExperimentConfig &cfg, const Tolerances &tol) {
    cfg.validate(tol);
    return std::visit([&](const auto &p) { return run(cfg, p, tol); }, cfg.params);
}

void write_atomically(const std::filesystem::path &path, const std::string &content) {
    std::filesystem::path tmp = path;
    tmp += ".tmp";
    {
        std::ofstream out(tmp, std::ios::binary | std::ios::trunc);
        if (!out) throw IoError("cannot open " + tmp.string() + " for writing");
        out << content;
        out.flush();
        if (!out) {
            std::error_code ignored;
            std::filesystem::remove(tmp, ignored);
            throw IoError("failed writing " + tmp.string());
        }
    }
    std::error_code ec;
    std::filesystem::rename(tmp, path, ec);
    if (ec) {
        std::error_code ignored;
        std::filesystem::remove(tmp, ignored);
        throw IoError("cannot move report into " + path.string() + ": " + ec.message());
    }
}

int exit_status_for(const std::exception &e) {
    if (dynamic_cast<const ValidationError *>(&e)) return 2;
    if (dynamic_cast<const CapacityError *>(&e)) return 3;
    if (dynamic_cast<const IoError *>(&e)) return 4;
    return 1;
}

int run_experiment(const ExperimentConfig &cfg, std::ostream &out, std::ostream &err, const Tolerances &tol) {
    try {
        ExperimentOutput result = execute(cfg, tol);
        if (cfg.output.empty()) {
            out << result.report;
            err << result.summary << '\n';
        } else {
            write_atomically(cfg.output, result.report);
            out << result.summary << " -> " << cfg.output << '\n';
        }
        return 0;
    } catch (const std::exception &e) {
        err << "error: " << e.what() << '\n';
        return exit_status_for(e);
    }
}

}  // namespace qd
