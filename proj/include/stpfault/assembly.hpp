#pragma once

#include <functional>
#include <vector>

#include "stpfault/logical_matrix.hpp"
#include "stpfault/network.hpp"

namespace stpfault {

/// M_f over (x:2, f:3).
LogicalMatrix fault_structure_matrix();
/// M_D over (x:2, d:2), x* = x ∧ ¬d.
LogicalMatrix drug_structure_matrix();

/// Build a matrix column by column: fn receives the per-argument offsets.
LogicalMatrix tabulate(std::size_t rows, const ArgSignature& sig,
                       const std::function<std::size_t(std::span<const std::size_t>)>& fn);

struct AssembledSystem {
  enum class Kind { BM, BCN };
  Kind kind = Kind::BM;
  BlockDiagram diagram;

  /// BM: Y = H U F D. BCN: Y = H U X.
  LogicalMatrix H;
  /// BCN only: X(t) = L U F D X(t-1).
  LogicalMatrix L;

  /// Width of the composite argument Z the per-block matrices are written over:
  /// (U,F,D) for a BM, (U,F,D,X read) for a BCN.
  std::size_t z_dim = 1;
  ArgSignature z_args;

  std::vector<std::vector<LogicalMatrix>> raw_blocks;  // L^i_j over (Z, X1..X(i-1))
  std::vector<std::vector<LogicalMatrix>> block_star;  // L^i*_j over Z
  std::vector<LogicalMatrix> level_matrices;           // L^i over Z
  LogicalMatrix primary;                               // all level outputs over Z

  // BM secondary block
  std::vector<LogicalMatrix> output_raw;   // H_j over (U, X)
  std::vector<LogicalMatrix> output_star;  // H_j* over (U,F,D)

  // BCN read stage and state selection
  std::vector<LogicalMatrix> read_parts;   // P, S_1..S_N over (U,F,D,X)
  LogicalMatrix read_stage;                // R
  std::vector<LogicalMatrix> select_primary;  // Sel_k ⋉ primary over (U,F,D,Xr)
  std::vector<LogicalMatrix> select_star;     // Sel_k* over (U,F,D,X)
};

/// L^i_j by truth table over (Z, X1..X(i-1)), with the node's own transform
/// applied unless it is a BCN state node (whose transform acts on the read).
LogicalMatrix build_block_matrix(const BlockDiagram& d, std::size_t level, std::size_t index);

AssembledSystem assemble(const BlockDiagram& d);
AssembledSystem assemble_bm(const BlockDiagram& d);
AssembledSystem assemble_bcn(const BlockDiagram& d);

/// Per-level and composite matrices from the blocks (shared by assembly and rebuilds).
void compose_levels(AssembledSystem& sys);

/// Compare H (and L) with direct evaluation at every column; throws AssemblyInconsistency.
void cross_check(const AssembledSystem& sys);

DeltaVector step_bcn(const AssembledSystem& sys, const DeltaVector& u, const DeltaVector& f, const DeltaVector& d,
                     const DeltaVector& x);

/// Signature helpers.
ArgSignature bm_signature(const BlockDiagram& d);   // (U,F,D)
ArgSignature bcn_signature(const BlockDiagram& d);  // (U,F,D,X)

}  // namespace stpfault
