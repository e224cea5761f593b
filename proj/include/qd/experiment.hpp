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

#include <filesystem>
#include <iosfwd>
#include <string>

#include "qd/experiment_config.hpp"
#include "qd/tolerances.hpp"

namespace qd {

struct ExperimentOutput {
    /// Report file contents in the configured format.
    std::string report;
    /// One line: experiment, seed and headline numbers.
    std::string summary;
};

/// Runs the configured experiment. Pure: the result depends only on `cfg`
/// and `tol`.
ExperimentOutput execute(const ExperimentConfig &cfg, const Tolerances &tol = {});

/// Writes `content` to a temporary sibling of `path` and renames it into
/// place, so `path` is either untouched or complete. Throws IoError.
void write_atomically(const std::filesystem::path &path, const std::string &content);

/// Executes `cfg` and writes the report to `cfg.output`, printing the summary
/// line to `out`. Without an output path the report goes to `out` and the
/// summary to `err`. Errors are reported on `err`; the return value is a
/// process exit status.
int run_experiment(const ExperimentConfig &cfg, std::ostream &out, std::ostream &err, const Tolerances &tol = {});

/// Exit status for an exception escaping the library.
int exit_status_for(const std::exception &e);

}  // namespace qd
