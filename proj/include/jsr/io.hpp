#pragma once

#include <iosfwd>
#include <string>

#include "jsr/apps.hpp"
#include "jsr/matrixset.hpp"

namespace jsr {

// Text format: line 1 `s J`; then J blocks of s lines with s whitespace-separated
// numbers; `#` starts a comment line; rational literals `p/q` allowed.
MatrixSet parse_matrix_set(std::istream& in);
MatrixSet load_matrix_set(const std::string& path);
std::string format_matrix_set(const MatrixSet& set);

// Mask file: header `dilation m`, then one coefficient per line (p/q allowed;
// exact rationals are preserved for the bit-exact restriction path).
SubdivisionScheme parse_mask(std::istream& in);
SubdivisionScheme load_mask(const std::string& path);

// 10 significant digits, `inf` for infinities.
std::string format_number(double x);
std::string format_interval(double lo, double hi);

}  // namespace jsr
