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

#include "qd/report_io.hpp"

#include <cstdio>
#include <sstream>

#include "qd/errors.hpp"
#include "qd/matrix_io.hpp"

namespace qd {

const char *to_string(EnsembleMethod method) {
    return method == EnsembleMethod::analytic ? "analytic" : "monte_carlo";
}

EnsembleMethod ensemble_method_from_string(const std::string &text) {
    if (text == "analytic") return EnsembleMethod::analytic;
    if (text == "monte_carlo") return EnsembleMethod::monte_carlo;
    throw ValidationError({"unknown method '" + text + "' (expected analytic or monte_carlo)"});
}

nlohmann::json to_json(const EnsembleReport &report) {
    nlohmann::json j{
        {"outcome_values", report.outcome_values},
        {"probabilities", report.probabilities},
        {"expectation", report.expectation},
        {"method", to_string(report.method)},
        {"samples", report.samples},
        {"seed", report.seed},
    };
    if (!report.branch_overlaps.empty()) {
        j["branch_overlaps"] = report.branch_overlaps;
        j["overlap_flagged"] = report.overlap_flagged;
    }
    if (report.invariance_residual) {
        j["invariance_residual"] = *report.invariance_residual;
    }
    return j;
}

EnsembleReport ensemble_report_from_json(const nlohmann::json &j) {
    EnsembleReport report;
    report.outcome_values = j.at("outcome_values").get<std::vector<double>>();
    report.probabilities = j.at("probabilities").get<std::vector<double>>();
    report.expectation = j.at("expectation").get<double>();
    report.method = ensemble_method_from_string(j.at("method").get<std::string>());
    report.samples = j.at("samples").get<std::uint64_t>();
    report.seed = j.at("seed").get<std::uint64_t>();
    if (j.contains("branch_overlaps")) {
        report.branch_overlaps = j.at("branch_overlaps").get<std::vector<double>>();
        report.overlap_flagged = j.at("overlap_flagged").get<bool>();
    }
    if (j.contains("invariance_residual")) {
        report.invariance_residual = j.at("invariance_residual").get<double>();
    }
    return report;
}

std::string to_csv(const EnsembleReport &report) {
    std::ostringstream out;
    out << "outcome,probability\n";
    char buf[64];
    for (std::size_t k = 0; k < report.probabilities.size(); ++k) {
        std::snprintf(buf, sizeof(buf), "%.17g,%.17g\n", report.outcome_values[k], report.probabilities[k]);
        out << buf;
    }
    return out.str();
}

nlohmann::json to_json(const DensityMatrix &rho) {
    nlohmann::json rows = nlohmann::json::array();
    const CMatrix &m = rho.matrix();
    for (Eigen::Index i = 0; i < m.rows(); ++i) {
        std::string row;
        for (Eigen::Index j = 0; j < m.cols(); ++j) {
            if (j > 0) row += ' ';
            row += format_complex(m(i, j));
        }
        rows.push_back(std::move(row));
    }
    return nlohmann::json{{"dims", rho.dims()}, {"rows", std::move(rows)}};
}

DensityMatrix density_matrix_from_json(const nlohmann::json &j, const Tolerances &tol) {
    std::string text = "dims:";
    for (std::size_t d : j.at("dims").get<std::vector<std::size_t>>()) {
        text += ' ' + std::to_string(d);
    }
    text += '\n';
    for (const auto &row : j.at("rows")) {
        text += row.get<std::string>() + '\n';
    }
    MatrixText parsed = parse_matrix_text(text);
    return DensityMatrix(parsed.dims, parsed.matrix, tol);
}

}  // namespace qd
