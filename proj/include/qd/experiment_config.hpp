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
#include <string>
#include <string_view>
#include <variant>
#include <vector>

#include "qd/dephasing.hpp"
#include "qd/linalg.hpp"
#include "qd/quotient.hpp"

namespace qd {

enum class ExperimentKind { dephase, stern_gerlach, qubit_chain, cat, measure, decoherence_fn, convergence };
enum class OutputFormat { json, csv };

const char *to_string(ExperimentKind kind);
const char *to_string(OutputFormat format);

/// Observable named in a config: a Pauli matrix or diag(eigenvalues).
struct ObservableChoice {
    enum class Kind { pauli_x, pauli_y, pauli_z, diag };
    Kind kind = Kind::pauli_z;
    std::vector<double> eigenvalues;  // diag only

    std::size_t dim() const;
    Operator build() const;
    bool operator==(const ObservableChoice &) const = default;
};

/// How phase groups are formed; `automatic` follows the observable's default mode.
enum class GroupMode { automatic, per_index, per_block };

struct DephaseConfig {
    std::vector<Complex> state;
    ObservableChoice observable;
    GroupMode group_mode = GroupMode::automatic;
    bool operator==(const DephaseConfig &) const = default;
};

struct SternGerlachConfig {
    Complex alpha{1.0, 0.0};
    Complex beta{0.0, 0.0};
    double omega = 0.0;
    double pz = 0.0;
    double t = 0.0;
    double z = 0.0;
    bool inject_random_phase = false;
    bool operator==(const SternGerlachConfig &) const = default;
};

struct QubitChainConfig {
    std::size_t n_qubits = 1;
    Complex alpha{1.0, 0.0};
    Complex beta{0.0, 0.0};
    /// Draw every link and environment phase from the run seed.
    bool random_phases = false;
    std::vector<double> link_gamma;
    std::vector<double> link_delta;
    double gamma_env = 0.0;
    double delta_env = 0.0;
    std::vector<std::size_t> link_order;
    bool operator==(const QubitChainConfig &) const = default;
};

struct CatConfig {
    Complex alpha{1.0, 0.0};
    Complex beta{0.0, 0.0};
    std::optional<double> gamma;
    std::optional<double> delta;
    bool operator==(const CatConfig &) const = default;
};

struct MeasureConfig {
    std::vector<Complex> state;
    ObservableChoice observable;
    std::vector<double> couplings;
    ObservableChoice pointer;
    std::vector<Complex> apparatus;
    double t = 1.0;
    bool operator==(const MeasureConfig &) const = default;
};

struct DecoherenceConfig {
    std::size_t n_qubits = 1;
    double rate = 0.0;
    double dt = 0.0;
    std::size_t steps = 1;
    bool operator==(const DecoherenceConfig &) const = default;
};

struct ConvergenceConfig {
    std::vector<std::uint64_t> sample_grid{100, 1000, 10000, 100000};
    std::size_t repeats = 10;
    std::size_t dim = 4;
    bool operator==(const ConvergenceConfig &) const = default;
};

using ExperimentParams = std::variant<DephaseConfig, SternGerlachConfig, QubitChainConfig, CatConfig, MeasureConfig,
                                      DecoherenceConfig, ConvergenceConfig>;

struct ExperimentConfig {
    ExperimentParams params;
    std::uint64_t seed = 0;
    std::optional<std::uint64_t> samples;
    EnsembleMethod mode = EnsembleMethod::analytic;
    /// Report path; empty writes the report to standard output.
    std::string output;
    OutputFormat format = OutputFormat::json;
    unsigned workers = 1;

    ExperimentKind experiment() const;
    /// Throws ValidationError listing every problem found.
    void validate(const Tolerances &tol = {}) const;
    bool operator==(const ExperimentConfig &) const = default;
};

/// Reads a config document:
///
///     # comment
///     [experiment]
///     name = qubit_chain
///     seed = 7
///     n_qubits = 3
///     alpha = 0.6+0j
///
/// Lists are space-separated; complex values use the re+imj form. All
/// problems are collected into one ValidationError.
ExperimentConfig parse_config(std::string_view text, const Tolerances &tol = {});

/// Canonical text form; parse_config(render(cfg)) == cfg.
std::string render(const ExperimentConfig &cfg);

}  // namespace qd
