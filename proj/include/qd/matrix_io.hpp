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

#include <iosfwd>
#include <string>
#include <string_view>

#include "qd/linalg.hpp"

namespace qd {

/// Formats a complex number as `re+imj` / `re-imj` with round-trip precision.
std::string format_complex(Complex z);
/// Parses `re+imj`, `re-imj`, a bare real `re`, or a bare imaginary `imj`.
/// Throws ValidationError on malformed text.
Complex parse_complex(std::string_view text);

/// A matrix in the text exchange format:
///
///   dims: d1 d2 ...
///   <row 0 entries separated by single spaces>
///   ...
///
/// Entries use `format_complex`. A column vector is a matrix with one column.
struct MatrixText {
    Dims dims;
    CMatrix matrix;
};

void write_matrix_text(std::ostream &out, const Dims &dims, const CMatrix &matrix);
std::string to_matrix_text(const Dims &dims, const CMatrix &matrix);
MatrixText read_matrix_text(std::istream &in);
MatrixText parse_matrix_text(std::string_view text);

}  // namespace qd
