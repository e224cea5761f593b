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

#include <sys/wait.h>

#include <cmath>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <sstream>

#include "gtest/gtest.h"

#include "json.hpp"
#include "qd/errors.hpp"
#include "qd/report_io.hpp"

using namespace qd;
namespace fs = std::filesystem;

namespace {

class ScratchDir {
   public:
    ScratchDir() {
        path_ = fs::temp_directory_path() / ("qdlab_test_" + std::to_string(::getpid()) + "_" +
                                             std::to_string(counter_++));
        fs::create_directories(path_);
    }
    ~ScratchDir() {
        std::error_code ignored;
        fs::remove_all(path_, ignored);
    }
    fs::path operator/(const std::string &name) const { return path_ / name; }

   private:
    fs::path path_;
    static inline int counter_ = 0;
};

std::string slurp(const fs::path &p) {
    std::ifstream in(p, std::ios::binary);
    std::ostringstream s;
    s << in.rdbuf();
    return s.str();
}

void put(const fs::path &p, const std::string &text) { std::ofstream(p, std::ios::binary) << text; }

int qdlab(const std::string &args) {
    std::string cmd = std::string(QDLAB_PATH) + " " + args + " >/dev/null 2>&1";
    int status = std::system(cmd.c_str());
    return WIFEXITED(status) ? WEXITSTATUS(status) : -1;
}

const char *kChain =
    "[experiment]\nname = qubit_chain\nseed = 5\nn_qubits = 3\nalpha = 0.6\nbeta = 0.8\nrandom_phases = true\n";

}  // namespace

TEST(execute, qubit_chain_report) {
    ExperimentOutput out = execute(parse_config(kChain));
    nlohmann::json j = nlohmann::json::parse(out.report);
    EXPECT_EQ(j.at("schema_version"), 1);
    EXPECT_EQ(j.at("experiment"), "qubit_chain");
    EnsembleReport r = ensemble_report_from_json(j.at("report"));
    ASSERT_EQ(r.probabilities.size(), 2u);
    EXPECT_NEAR(r.probabilities[0], 0.36, 1e-12);
    EXPECT_NEAR(r.probabilities[1], 0.64, 1e-12);
    EXPECT_NE(out.summary.find("qubit_chain seed=5"), std::string::npos);
    EXPECT_NE(out.summary.find("expectation=0.64"), std::string::npos);
}

TEST(execute, convergence_csv_slope) {
    ExperimentConfig cfg = parse_config("[experiment]\nname = convergence\nseed = 11\nformat = csv\n");
    ExperimentOutput out = execute(cfg);
    std::istringstream in(out.report);
    std::string line;
    std::getline(in, line);
    EXPECT_EQ(line, "M,frobenius_error");
    std::vector<double> xs, ys;
    while (std::getline(in, line)) {
        auto comma = line.find(',');
        xs.push_back(std::log(std::stod(line.substr(0, comma))));
        ys.push_back(std::log(std::stod(line.substr(comma + 1))));
    }
    ASSERT_EQ(xs.size(), 4u);
    EXPECT_DOUBLE_EQ(std::exp(xs.front()), 100.0);
    EXPECT_DOUBLE_EQ(std::exp(xs.back()), 100000.0);
    // Independent least-squares fit over the written points.
    double n = 4, sx = 0, sy = 0, sxx = 0, sxy = 0;
    for (std::size_t i = 0; i < 4; ++i) sx += xs[i], sy += ys[i], sxx += xs[i] * xs[i], sxy += xs[i] * ys[i];
    double slope = (n * sxy - sx * sy) / (n * sxx - sx * sx);
    EXPECT_GE(slope, -0.6);
    EXPECT_LE(slope, -0.4);
}

TEST(execute, dephase_analytic_and_monte_carlo) {
    const std::string base = "[experiment]\nname = dephase\nstate = 0.6 0.8\nseed = 2\n";
    nlohmann::json analytic = nlohmann::json::parse(execute(parse_config(base)).report);
    EXPECT_EQ(analytic.at("max_offdiagonal").get<double>(), 0.0);
    EXPECT_NEAR(analytic.at("report").at("expectation").get<double>(), -0.28, 1e-15);

    nlohmann::json mc =
        nlohmann::json::parse(execute(parse_config(base + "mode = monte_carlo\nsamples = 10000\n")).report);
    EXPECT_EQ(mc.at("report").at("method"), "monte_carlo");
    EXPECT_EQ(mc.at("report").at("samples"), 10000);
    EXPECT_LE(mc.at("max_offdiagonal").get<double>(), 0.05);
    EXPECT_GT(mc.at("max_offdiagonal").get<double>(), 0.0);
}

TEST(execute, monte_carlo_is_worker_invariant) {
    ExperimentConfig cfg =
        parse_config("[experiment]\nname = dephase\nstate = 0.6 0.8j\nmode = monte_carlo\nsamples = 30000\n");
    std::string one = execute(cfg).report;
    cfg.workers = 4;
    EXPECT_EQ(execute(cfg).report, one);
}

TEST(execute, every_experiment_is_deterministic) {
    const char *configs[] = {
        kChain,
        "[experiment]\nname = stern_gerlach\nalpha = 0.6\nbeta = 0.8\nomega = 1\nt = 2\n"
        "inject_random_phase = true\nseed = 4\n",
        "[experiment]\nname = cat\nalpha = 0.6\nbeta = 0.8\nseed = 8\n",
        "[experiment]\nname = measure\nstate = 0.6 0.8\ncouplings = 0 0.5\npointer = pauli_x\napparatus = 1 0\n",
        "[experiment]\nname = decoherence_fn\nn_qubits = 3\nrate = 0.1\ndt = 1\nsteps = 4\n",
    };
    for (const char *text : configs) {
        for (const char *format : {"json", "csv"}) {
            ExperimentConfig cfg = parse_config(std::string(text) + "format = " + format + "\n");
            ExperimentOutput a = execute(cfg), b = execute(cfg);
            EXPECT_EQ(a.report, b.report);
            EXPECT_EQ(a.summary, b.summary);
            if (cfg.format == OutputFormat::json) {
                EXPECT_EQ(nlohmann::json::parse(a.report).at("schema_version"), 1) << text;
            }
        }
    }
}

TEST(execute, measurement_overlap_diagnostics) {
    nlohmann::json j = nlohmann::json::parse(execute(parse_config(
        "[experiment]\nname = measure\nstate = 0.6 0.8\ncouplings = 0 0.5\npointer = pauli_x\napparatus = 1 0\n"))
                                                 .report);
    EnsembleReport r = ensemble_report_from_json(j.at("report"));
    ASSERT_EQ(r.branch_overlaps.size(), 1u);
    EXPECT_NEAR(r.branch_overlaps[0], std::cos(0.5), 1e-12);
    EXPECT_TRUE(r.overlap_flagged);
}

TEST(run_experiment, writes_report_and_summary) {
    ScratchDir dir;
    ExperimentConfig cfg = parse_config(kChain);
    cfg.output = (dir / "chain.json").string();
    std::ostringstream out, err;
    EXPECT_EQ(run_experiment(cfg, out, err), 0);
    EXPECT_EQ(slurp(dir / "chain.json"), execute(cfg).report);
    EXPECT_NE(out.str().find(" -> "), std::string::npos);
    EXPECT_TRUE(err.str().empty());
    EXPECT_FALSE(fs::exists(dir / "chain.json.tmp"));
}

TEST(run_experiment, failure_leaves_no_output) {
    ScratchDir dir;
    ExperimentConfig cfg = parse_config(kChain);
    auto &chain = std::get<QubitChainConfig>(cfg.params);
    chain.n_qubits = 14;
    cfg.output = (dir / "big.json").string();
    std::ostringstream out, err;
    EXPECT_EQ(run_experiment(cfg, out, err), 3);
    EXPECT_FALSE(fs::exists(dir / "big.json"));
    EXPECT_NE(err.str().find("error:"), std::string::npos);

    put(dir / "keep.json", "previous");
    cfg.output = (dir / "keep.json").string();
    cfg.mode = EnsembleMethod::monte_carlo;
    EXPECT_EQ(run_experiment(cfg, out, err), 2);
    EXPECT_EQ(slurp(dir / "keep.json"), "previous");
}

TEST(write_atomically, replaces_and_reports_io_errors) {
    ScratchDir dir;
    write_atomically(dir / "a.txt", "one");
    write_atomically(dir / "a.txt", "two");
    EXPECT_EQ(slurp(dir / "a.txt"), "two");
    EXPECT_THROW(write_atomically(dir / "missing" / "a.txt", "x"), IoError);
}

TEST(cli, repeated_runs_are_byte_identical) {
    ScratchDir dir;
    put(dir / "mc.cfg", "[experiment]\nname = dephase\nstate = 0.6 0.8\nmode = monte_carlo\nsamples = 5000\n");
    const std::string cfg = (dir / "mc.cfg").string();
    ASSERT_EQ(qdlab("run " + cfg + " --seed 3 --out " + (dir / "a.json").string()), 0);
    ASSERT_EQ(qdlab("run " + cfg + " --seed 3 --out " + (dir / "b.json").string()), 0);
    ASSERT_EQ(qdlab("run " + cfg + " --seed 3 --workers 3 --out " + (dir / "c.json").string()), 0);
    ASSERT_EQ(qdlab("run " + cfg + " --seed 4 --out " + (dir / "d.json").string()), 0);
    EXPECT_EQ(slurp(dir / "a.json"), slurp(dir / "b.json"));
    EXPECT_EQ(slurp(dir / "a.json"), slurp(dir / "c.json"));
    EXPECT_NE(slurp(dir / "a.json"), slurp(dir / "d.json"));
    EXPECT_EQ(nlohmann::json::parse(slurp(dir / "d.json")).at("seed"), 4);
}

TEST(cli, overrides_and_formats) {
    ScratchDir dir;
    put(dir / "d.cfg", "[experiment]\nname = dephase\nstate = 0.6 0.8\nmode = monte_carlo\nsamples = 10\n");
    ASSERT_EQ(qdlab("run " + (dir / "d.cfg").string() + " --samples 77 --out " + (dir / "r.json").string()), 0);
    EXPECT_EQ(nlohmann::json::parse(slurp(dir / "r.json")).at("report").at("samples"), 77);
    ASSERT_EQ(qdlab("run " + (dir / "d.cfg").string() + " --format csv --out " + (dir / "r.csv").string()), 0);
    EXPECT_EQ(slurp(dir / "r.csv").rfind("outcome,probability\n", 0), 0u);
    EXPECT_NE(qdlab("run " + (dir / "d.cfg").string() + " --format xml"), 0);
    EXPECT_EQ(qdlab("run " + (dir / "d.cfg").string() + " --samples 0 --out " + (dir / "z.json").string()), 2);
    EXPECT_FALSE(fs::exists(dir / "z.json"));
}

TEST(cli, validate_and_exit_status) {
    ScratchDir dir;
    put(dir / "ok.cfg", "[experiment]\nname = stern_gerlach\nalpha = 1\nbeta = 0\n");
    put(dir / "bad.cfg", "[experiment]\nname = stern_gerlach\nalpha = 1\nbeta = 1\n");
    put(dir / "chain.cfg", "[experiment]\nname = qubit_chain\nn_qubits = 4\nalpha = 1\nbeta = 0\n");
    EXPECT_EQ(qdlab("validate " + (dir / "ok.cfg").string()), 0);
    EXPECT_EQ(qdlab("validate " + (dir / "bad.cfg").string()), 2);
    EXPECT_EQ(qdlab("validate " + (dir / "absent.cfg").string()), 4);
    EXPECT_NE(qdlab(""), 0);
    const std::string out = " --out " + (dir / "c.json").string();
    EXPECT_EQ(qdlab("run " + (dir / "chain.cfg").string() + out), 0);
    EXPECT_EQ(qdlab("run " + (dir / "chain.cfg").string() + out + " 2>/dev/null; QD_MAX_DIM=8 " +
                    std::string(QDLAB_PATH) + " run " + (dir / "chain.cfg").string() + out),
              3);
}
