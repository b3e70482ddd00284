#pragma once

#include <optional>
#include <string>
#include <vector>

#include "stpfault/assembly.hpp"
#include "stpfault/logical_matrix.hpp"

namespace stpfault {

/// H over (U,F,D) with the fault being treated and the inputs that must be restored.
struct InterventionContext {
  LogicalMatrix H;
  DeltaVector fault;
  DeltaSet inputs;
};

InterventionContext make_intervention_context(const LogicalMatrix& H, const DeltaVector& fault,
                                              std::optional<DeltaSet> inputs = std::nullopt);

/// H F U D == H F0 U D0.
bool exists_drug(const InterventionContext& ctx, const DeltaVector& u, const DeltaVector& d);
/// Drugs restoring the healthy output on every input of the context.
DeltaSet drug_set(const InterventionContext& ctx);
/// On/off state of each drug in a drug vector (true = applied).
std::vector<bool> drug_tuple(const DeltaVector& d, std::size_t lambda);

struct TargetSite {
  enum class Kind { Internal, Output };
  Kind kind = Kind::Internal;
  std::size_t level = 0;  // Internal only, 1-based
  std::size_t index = 0;  // 1-based node index, or output index
  std::string name;
};

/// Outputs first, then levels from the deepest up, each by ascending index.
std::vector<TargetSite> default_sites(const BlockDiagram& d);
/// Look a site up by node or output name; throws ArgumentError when absent.
TargetSite find_site(const BlockDiagram& d, const std::string& name);

/// Name the next drug would get ("d<λ+1>" unless taken).
std::string new_drug_id(const BlockDiagram& d);

/// Attach one more drug at `site` and recompute H over (U, F, D:2^{λ+1}).
AssembledSystem rebuild_with_new_drug(const AssembledSystem& sys, const TargetSite& site);

struct SiteTrial {
  TargetSite site;
  DeltaSet drugs;
};

struct ControlResult {
  bool found = false;
  TargetSite site;
  DeltaSet drugs;
  std::vector<SiteTrial> tried;
};

/// Try sites in order until one yields a nonempty drug set. Requires drug_set(ctx) to be empty.
ControlResult improve_controllability(const AssembledSystem& sys, const InterventionContext& ctx,
                                      std::optional<std::vector<TargetSite>> sites = std::nullopt);

}  // namespace stpfault
