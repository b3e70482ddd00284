#pragma once

#include <string>
#include <string_view>

#include "stpfault/logical_matrix.hpp"

namespace stpfault {

// Text form:
//   delta <rows> <cols>
//   <col_1> <col_2> ... <col_cols>        (1-based, single spaces)
//   args <name:dim> <name:dim> ...        (optional)
// Blank lines and lines starting with '#' are skipped when reading.

LogicalMatrix parse_matrix(std::string_view text);
std::string format_matrix(const LogicalMatrix& m);

/// "F:9,U:4,D:4" or "F:9 U:4 D:4".
ArgSignature parse_signature(std::string_view text);

LogicalMatrix read_matrix_file(const std::string& path);
std::string read_text_file(const std::string& path);

}  // namespace stpfault
