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

#include <charconv>
#include <cstdlib>
#include <string_view>

#include "qd/errors.hpp"
#include "qd/tolerances.hpp"

namespace qd {

namespace {

std::string join_problems(const std::vector<std::string> &problems) {
    std::string out = "validation failed";
    for (const auto &p : problems) {
        out += "\n  - ";
        out += p;
    }
    return out;
}

}  // namespace

ValidationError::ValidationError(std::vector<std::string> problems)
    : Error(join_problems(problems)), problems_(std::move(problems)) {}

Tolerances Tolerances::from_environment() {
    Tolerances tol;
    const char *raw = std::getenv("QD_MAX_DIM");
    if (raw == nullptr) {
        return tol;
    }
    std::string_view text(raw);
    std::size_t value = 0;
    auto [end, ec] = std::from_chars(text.data(), text.data() + text.size(), value);
    if (ec != std::errc() || end != text.data() + text.size() || value == 0) {
        throw ValidationError({"QD_MAX_DIM must be a positive integer, got '" + std::string(text) + "'"});
    }
    tol.max_dim = value;
    return tol;
}

}  // namespace qd
