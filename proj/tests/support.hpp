#pragma once

#include <string>

#include "stpfault/assembly.hpp"
#include "stpfault/logical_matrix.hpp"
#include "stpfault/matrix_io.hpp"
#include "stpfault/network.hpp"

namespace testdata {

inline std::string path(const std::string& name) { return std::string(STPFAULT_DATA_DIR) + "/" + name; }

inline stpfault::LogicalMatrix matrix(const std::string& name) { return stpfault::read_matrix_file(path(name)); }

inline stpfault::BlockDiagram network(const std::string& name) {
  return stpfault::parse_network(stpfault::read_text_file(path(name)));
}

inline std::string str(const stpfault::LogicalMatrix& m) { return stpfault::format_delta_matrix(m); }
inline std::string str(const stpfault::DeltaSet& s) { return s.to_string(); }

}  // namespace testdata
