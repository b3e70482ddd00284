#pragma once

#include <map>
#include <optional>
#include <string>
#include <vector>

#include "stpfault/assembly.hpp"
#include "stpfault/logical_matrix.hpp"

namespace stpfault {

/// Square transition L_{U,F,D} from L over (U,F,D,X).
LogicalMatrix pin_transition(const LogicalMatrix& L, const DeltaVector& u, const DeltaVector& f, const DeltaVector& d);

struct CycleSet {
  std::vector<std::size_t> lengths;                  // ascending, distinct
  std::map<std::size_t, DeltaSet> states_per_length;
  std::vector<std::vector<std::size_t>> cycles;      // 1-based state positions, each from its smallest state
};

/// Attractors of a square transition matrix.
CycleSet attractor_cycles(const LogicalMatrix& T);

/// Cycle lengths of both matrices together with all their divisors, ascending.
std::vector<std::size_t> probe_set(const LogicalMatrix& a, const LogicalMatrix& b);

struct TraceProbe {
  bool differs = false;
  std::vector<std::size_t> ks;
  std::vector<std::size_t> traces;  // Tr(A^k △ B^k) per k
};

/// Compare two square transitions over the probe set.
TraceProbe compare_transitions(const LogicalMatrix& a, const LogicalMatrix& b);

/// Healthy vs faulty attractor comparison under input U (no drug).
TraceProbe exists_fault_bcn(const LogicalMatrix& L, const DeltaVector& u, const DeltaVector& f);
DeltaSet detecting_inputs_bcn(const LogicalMatrix& L, const DeltaVector& f, const DeltaSet& inputs);

struct SequenceVerdict {
  bool holds = false;
  std::size_t trace = 0;
};

/// Input sequence π = (U1..Uκ) applied cyclically: compares L_{U1}⋯L_{Uκ} with and without F.
SequenceVerdict sequence_detects(const LogicalMatrix& L, const std::vector<DeltaVector>& seq, const DeltaVector& f);

/// F is detected under U while every other fault in `faults` is not.
bool unique_fault_bcn(const LogicalMatrix& L, const DeltaVector& u, const DeltaVector& f, const DeltaSet& faults);

/// Drug D under fault F restores the healthy attractors for the input sequence (k = 1 trace form).
SequenceVerdict exists_control_bcn(const LogicalMatrix& L, const DeltaVector& f, const std::vector<DeltaVector>& seq,
                                   const DeltaVector& d);
/// Same question checked at every k of the probe set.
TraceProbe exists_control_bcn_per_k(const LogicalMatrix& L, const DeltaVector& f, const std::vector<DeltaVector>& seq,
                                    const DeltaVector& d);

/// Attach one more drug to state node `name`; the new L is over (U,F,D:2^{λ+1},X).
AssembledSystem rebuild_bcn_with_new_drug(const AssembledSystem& sys, const std::string& name);

struct BcnSiteTrial {
  std::string site;
  DeltaSet drugs;
};

struct BcnControlResult {
  bool found = false;
  std::string site;
  DeltaSet drugs;
  std::vector<BcnSiteTrial> tried;
};

/// Drugs after a rebuild at each candidate state node, tested input by input over Û.
/// Requires that no existing drug already works for every input.
BcnControlResult improve_controllability_bcn(const AssembledSystem& sys, const DeltaVector& f, const DeltaSet& inputs,
                                             std::optional<std::vector<std::string>> candidates = std::nullopt);

}  // namespace stpfault
