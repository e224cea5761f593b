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

#include "qd/matrix_io.hpp"

#include <cctype>
#include <charconv>
#include <cmath>
#include <cstdio>
#include <istream>
#include <ostream>
#include <sstream>
#include <vector>

#include "qd/errors.hpp"

namespace qd {

namespace {

std::string format_real(double x) {
    if (x == 0.0) {
        return "0";  // folds -0
    }
    char buf[32];
    std::snprintf(buf, sizeof(buf), "%.17g", x);
    return buf;
}

double parse_real(std::string_view text, std::string_view whole) {
    if (text.empty()) {
        throw ValidationError({"malformed complex number '" + std::string(whole) + "'"});
    }
    // from_chars rejects a leading '+'.
    std::string_view body = text.front() == '+' ? text.substr(1) : text;
    double value = 0.0;
    auto [end, ec] = std::from_chars(body.data(), body.data() + body.size(), value);
    if (ec != std::errc() || end != body.data() + body.size() || body.empty()) {
        throw ValidationError({"malformed complex number '" + std::string(whole) + "'"});
    }
    return value;
}

}  // namespace

std::string format_complex(Complex z) {
    std::string re = format_real(z.real());
    std::string im = format_real(z.imag());
    if (im.front() != '-') {
        im.insert(im.begin(), '+');
    }
    return re + im + "j";
}

Complex parse_complex(std::string_view text) {
    std::string_view whole = text;
    while (!text.empty() && std::isspace(static_cast<unsigned char>(text.front()))) text.remove_prefix(1);
    while (!text.empty() && std::isspace(static_cast<unsigned char>(text.back()))) text.remove_suffix(1);
    if (text.empty()) {
        throw ValidationError({"empty complex number"});
    }
    if (text.back() != 'j') {
        return Complex(parse_real(text, whole), 0.0);
    }
    std::string_view body = text.substr(0, text.size() - 1);
    // The real/imaginary split is the last sign that is neither leading nor
    // part of an exponent.
    std::size_t split = std::string_view::npos;
    for (std::size_t i = body.size(); i-- > 1;) {
        if ((body[i] == '+' || body[i] == '-') && body[i - 1] != 'e' && body[i - 1] != 'E') {
            split = i;
            break;
        }
    }
    if (split == std::string_view::npos) {
        std::string_view im = body;
        if (im.empty() || im == "+" || im == "-") {
            throw ValidationError({"malformed complex number '" + std::string(whole) + "'"});
        }
        return Complex(0.0, parse_real(im, whole));
    }
    return Complex(parse_real(body.substr(0, split), whole), parse_real(body.substr(split), whole));
}

void write_matrix_text(std::ostream &out, const Dims &dims, const CMatrix &matrix) {
    out << "dims:";
    for (std::size_t d : dims) {
        out << ' ' << d;
    }
    out << '\n';
    for (Eigen::Index i = 0; i < matrix.rows(); ++i) {
        for (Eigen::Index j = 0; j < matrix.cols(); ++j) {
            if (j > 0) {
                out << ' ';
            }
            out << format_complex(matrix(i, j));
        }
        out << '\n';
    }
}

std::string to_matrix_text(const Dims &dims, const CMatrix &matrix) {
    std::ostringstream out;
    write_matrix_text(out, dims, matrix);
    return out.str();
}

MatrixText read_matrix_text(std::istream &in) {
    std::string line;
    if (!std::getline(in, line) || line.rfind("dims:", 0) != 0) {
        throw ValidationError({"matrix text must start with a 'dims:' line"});
    }
    MatrixText result;
    {
        std::istringstream header(line.substr(5));
        std::size_t d = 0;
        while (header >> d) {
            result.dims.push_back(d);
        }
        if (!header.eof() || result.dims.empty()) {
            throw ValidationError({"malformed dims line '" + line + "'"});
        }
    }
    std::vector<std::vector<Complex>> rows;
    while (std::getline(in, line)) {
        if (line.empty()) {
            continue;
        }
        std::vector<Complex> row;
        std::size_t pos = 0;
        while (pos <= line.size()) {
            std::size_t next = line.find(' ', pos);
            if (next == std::string::npos) {
                next = line.size();
            }
            row.push_back(parse_complex(std::string_view(line).substr(pos, next - pos)));
            pos = next + 1;
        }
        if (!rows.empty() && row.size() != rows.front().size()) {
            throw ValidationError({"ragged matrix rows"});
        }
        rows.push_back(std::move(row));
    }
    std::size_t expected = 1;
    for (std::size_t d : result.dims) {
        expected *= d;
    }
    if (rows.size() != expected) {
        throw ValidationError({"matrix has " + std::to_string(rows.size()) + " rows, dims imply " +
                               std::to_string(expected)});
    }
    result.matrix.resize(static_cast<Eigen::Index>(rows.size()), static_cast<Eigen::Index>(rows.front().size()));
    for (std::size_t i = 0; i < rows.size(); ++i) {
        for (std::size_t j = 0; j < rows[i].size(); ++j) {
            result.matrix(static_cast<Eigen::Index>(i), static_cast<Eigen::Index>(j)) = rows[i][j];
        }
    }
    return result;
}

MatrixText parse_matrix_text(std::string_view text) {
    std::istringstream in{std::string(text)};
    return read_matrix_text(in);
}

}  // namespace qd
