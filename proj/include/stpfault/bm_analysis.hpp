#pragma once

#include <optional>
#include <string>
#include <vector>

#include "stpfault/assembly.hpp"
#include "stpfault/logical_matrix.hpp"

namespace stpfault {

/// H pinned at D_0, plus the permissible inputs Û and hazardous faults F̂.
struct FaultQueryContext {
  LogicalMatrix H_tilde;  // arguments include U and F (any order), no D
  DeltaSet inputs;
  DeltaSet faults;

  std::size_t input_dim() const { return H_tilde.arg_dim("U"); }
  std::size_t fault_dim() const { return H_tilde.arg_dim("F"); }
  DeltaVector f0() const { return last_delta(fault_dim()); }
};

/// H must carry U and F (and optionally D, which is pinned at its last vector).
/// Missing sets default to the whole space.
FaultQueryContext make_fault_context(const LogicalMatrix& H, std::optional<DeltaSet> inputs = std::nullopt,
                                     std::optional<DeltaSet> faults = std::nullopt);

DeltaVector output_of(const FaultQueryContext& ctx, const DeltaVector& u, const DeltaVector& f);

bool exists_fault(const FaultQueryContext& ctx, const DeltaVector& u, const DeltaVector& f);
DeltaSet detectable_faults(const FaultQueryContext& ctx, const DeltaVector& u);
DeltaSet detecting_inputs(const FaultQueryContext& ctx, const DeltaVector& f);
bool uniquely_identifies(const FaultQueryContext& ctx, const DeltaVector& u, const DeltaVector& f);
DeltaSet unique_inputs(const FaultQueryContext& ctx, const DeltaVector& f);
DeltaSet common_faults(const FaultQueryContext& ctx, const DeltaSet& u_star);
DeltaSet test_set(const FaultQueryContext& ctx);
DeltaSet fault_coverage(const FaultQueryContext& ctx, const DeltaSet& u_t);

struct GeneralizedUnique {
  DeltaSet common;
  bool unique = false;
  /// "no-detection" (common set empty), "not-unique" (more than one), "unique", "other-fault"
  std::string verdict;
};
GeneralizedUnique generalized_unique(const FaultQueryContext& ctx, const DeltaSet& u_star, const DeltaVector& f);

struct EquivalenceReport {
  DeltaSet detectable;
  std::vector<DeltaSet> classes;  // ordered by smallest member
  DeltaSet undetectable;
};
EquivalenceReport classify_equivalence(const FaultQueryContext& ctx, const DeltaSet& u_star);

/// Default F̄: faults with no detecting input in Û, plus members of equivalence classes of size ≥ 2.
DeltaSet default_undetectable(const FaultQueryContext& ctx);

struct ReporterCandidate {
  std::size_t level = 0;
  std::size_t index = 0;
  std::string name;
  DeltaSet detected;  // newly detected over all of Û
  std::vector<std::pair<DeltaVector, DeltaSet>> per_input;
};

struct ReporterStep {
  ReporterCandidate chosen;
  std::vector<ReporterCandidate> candidates;  // every node evaluated in this round
};

struct ReporterPlan {
  DeltaSet initial;
  std::vector<ReporterStep> steps;
  DeltaSet residual;
};

/// Greedy reporter selection. `sys` must be an assembled BM whose H matches ctx.
ReporterPlan improve_observability(const AssembledSystem& sys, const FaultQueryContext& ctx,
                                   std::optional<DeltaSet> undetectable = std::nullopt);

}  // namespace stpfault
