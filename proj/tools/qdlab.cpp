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

// qdlab: run and validate experiment configs.
//
//   qdlab run <config> [--seed N] [--samples M] [--out PATH] [--format json|csv] [--workers N]
//   qdlab validate <config>

#include <fstream>
#include <iostream>
#include <optional>
#include <sstream>
#include <string>

#include "CLI11.hpp"
#include "qd/errors.hpp"
#include "qd/experiment.hpp"
#include "qd/experiment_config.hpp"

namespace {

std::string read_file(const std::string &path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw qd::IoError("cannot read config " + path);
    std::ostringstream text;
    text << in.rdbuf();
    return text.str();
}

}  // namespace

int main(int argc, char **argv) {
    CLI::App app{"Random-phase dephasing and measurement-model laboratory"};
    app.require_subcommand(1);

    std::string config_path;
    std::optional<std::uint64_t> seed, samples;
    std::optional<std::string> out_path;
    std::optional<std::string> format;
    std::optional<unsigned> workers;

    CLI::App *run = app.add_subcommand("run", "Run an experiment and write its report");
    run->add_option("config", config_path, "Config file")->required();
    run->add_option("--seed", seed, "Override the config seed");
    run->add_option("--samples", samples, "Override the Monte Carlo sample count");
    run->add_option("--out", out_path, "Override the report path");
    run->add_option("--format", format, "Report format")->check(CLI::IsMember({"json", "csv"}));
    run->add_option("--workers", workers, "Monte Carlo worker threads")->check(CLI::PositiveNumber);

    CLI::App *validate = app.add_subcommand("validate", "Check a config without running it");
    validate->add_option("config", config_path, "Config file")->required();

    CLI11_PARSE(app, argc, argv);

    try {
        const qd::Tolerances tol = qd::Tolerances::from_environment();
        qd::ExperimentConfig cfg = qd::parse_config(read_file(config_path), tol);
        if (*validate) {
            std::cout << config_path << ": ok (" << qd::to_string(cfg.experiment()) << ")\n";
            return 0;
        }
        if (seed) cfg.seed = *seed;
        if (samples) cfg.samples = *samples;
        if (out_path) cfg.output = *out_path;
        if (format) cfg.format = *format == "csv" ? qd::OutputFormat::csv : qd::OutputFormat::json;
        if (workers) cfg.workers = *workers;
        return qd::run_experiment(cfg, std::cout, std::cerr, tol);
    } catch (const std::exception &e) {
        std::cerr << "error: " << e.what() << '\n';
        return qd::exit_status_for(e);
    }
}
