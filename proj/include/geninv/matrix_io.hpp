#pragma once

#include <string>

#include "geninv/exact.hpp"
#include "geninv/matrix.hpp"

namespace geninv {

enum class MatrixFormat { kCsv, kJson };

/// ".json" (any case) selects JSON, everything else CSV.
MatrixFormat format_from_path(const std::string& path);

/// One entry: "a", "bi", "a+bi", "a-bi", "i", "-i" with decimal (optionally
/// with exponent) or p/q components. Values are kept exactly: "0.1" is 1/10.
/// Throws DomainError on malformed text.
RationalScalar parse_scalar(const std::string& text);

/// CSV: one row per line, comma-separated entries, blank lines and lines
/// starting with '#' ignored.
/// JSON: {"rows": r, "cols": c, "data": [[entry, ...], ...]} where an entry is
/// a number, a string in the scalar syntax, or [re, im] of numbers or strings.
/// Other keys are ignored. Throws ParseError with a 1-based line and column
/// (0 when the position is not known, e.g. a shape mismatch in JSON).
RationalMatrix parse_matrix(const std::string& text, MatrixFormat format);

/// Reads and parses a file; an unreadable file is reported as ParseError.
RationalMatrix read_matrix_file(const std::string& path);

/// Floats with 17 significant digits in CSV; JSON uses the shortest decimal
/// that reads back to the same double. Both round-trip exactly.
std::string format_matrix(const ComplexMatrix& a, MatrixFormat format);

/// Exact fractions ("3/5", "1/2-i").
std::string format_matrix(const RationalMatrix& a, MatrixFormat format);

/// "%.17g".
std::string format_double(double x);

}  // namespace geninv
