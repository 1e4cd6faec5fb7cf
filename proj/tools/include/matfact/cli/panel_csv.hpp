#pragma once

#include <filesystem>
#include <iosfwd>
#include <string>

#include "matfact/types.hpp"

namespace matfact::cli {

/// Shortest round-trip-safe rendering used in every output file (%.17g).
std::string format_double(double value);

/// Long-format panel:
///
///   # p1=10 p2=10 T=672
///   t,i,j,value
///   0,0,0,0.53
///   ...
///
/// Indices are 0-based; every (t, i, j) cell must appear exactly once.
/// Raises ParseError (with the 1-based line number) on malformed input and
/// MissingValue for empty/NA/NaN cells or cells that never appear.
MatrixSeries read_panel_csv(std::istream& in);
MatrixSeries read_panel_csv(const std::filesystem::path& path);

void write_panel_csv(std::ostream& out, const MatrixSeries& s);

/// Plain matrix, one row per line, no header.
void write_matrix_csv(std::ostream& out, const Matrix& m);

}  // namespace matfact::cli
