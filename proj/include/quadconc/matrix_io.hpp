#pragma once

#include <iosfwd>
#include <string>

#include "quadconc/matrix.hpp"

namespace quadconc {

// Decimal formatting used by every writer: 17 significant digits, '.'
// separator, enough to round-trip any double bit-exactly.
std::string format_double17(double v);

// CSV: n rows of n comma-separated decimals.
SquareMatrix read_matrix_csv(std::istream& in);
void write_matrix_csv(std::ostream& out, const SquareMatrix& a);

// JSON: {"n": <int>, "entries": [<n*n doubles, row-major>]}.
SquareMatrix read_matrix_json(std::istream& in);
void write_matrix_json(std::ostream& out, const SquareMatrix& a);

// JSON: {"sigmas": [...]} or a bare array.
SigmaDiag read_sigmas_json(std::istream& in);
void write_sigmas_json(std::ostream& out, const SigmaDiag& sig);

// Dispatch on extension: ".csv" or ".json". Throws ValidationError on
// unreadable files or malformed content.
SquareMatrix load_matrix(const std::string& path);
SigmaDiag load_sigmas(const std::string& path);

}  // namespace quadconc
