#include "stpfault/bm_intervention.hpp"

#include "stpfault/errors.hpp"
#include "stpfault/stp.hpp"

namespace stpfault {

InterventionContext make_intervention_context(const LogicalMatrix& H, const DeltaVector& fault,
                                              std::optional<DeltaSet> inputs) {
  for (const char* a : {"U", "F", "D"}) {
    if (!H.has_arg(a)) throw ArgumentError(std::string("intervention needs H over U, F and D; missing ") + a);
  }
  if (H.args().size() != 3) throw ArgumentError("unexpected extra arguments in (" + format_signature(H.args()) + ")");
  if (fault.dim() != H.arg_dim("F")) throw DimensionError("fault must be a delta" + std::to_string(H.arg_dim("F")) + " vector");
  InterventionContext ctx{H, fault, inputs ? *inputs : DeltaSet::full(H.arg_dim("U"))};
  if (ctx.inputs.dim() != H.arg_dim("U")) throw DimensionError("input set must be over delta" + std::to_string(H.arg_dim("U")));
  return ctx;
}

bool exists_drug(const InterventionContext& ctx, const DeltaVector& u, const DeltaVector& d) {
  const auto& H = ctx.H;
  if (u.dim() != H.arg_dim("U")) throw DimensionError("input must be a delta" + std::to_string(H.arg_dim("U")) + " vector");
  if (d.dim() != H.arg_dim("D")) throw DimensionError("drug must be a delta" + std::to_string(H.arg_dim("D")) + " vector");
  const auto treated = evaluate(H, {{"U", u}, {"F", ctx.fault}, {"D", d}});
  const auto healthy = evaluate(H, {{"U", u}, {"F", last_delta(H.arg_dim("F"))}, {"D", last_delta(H.arg_dim("D"))}});
  return treated == healthy;
}

DeltaSet drug_set(const InterventionContext& ctx) {
  const std::size_t dd = ctx.H.arg_dim("D");
  DeltaSet out(dd);
  const auto us = ctx.inputs.members();
  for (std::size_t k = 1; k <= dd; ++k) {
    const auto d = delta(dd, k);
    bool ok = true;
    for (const auto& u : us) {
      if (!exists_drug(ctx, u, d)) {
        ok = false;
        break;
      }
    }
    if (ok) out.insert(d);
  }
  return out;
}

std::vector<bool> drug_tuple(const DeltaVector& d, std::size_t lambda) {
  if (d.dim() != (std::size_t{1} << lambda)) throw DimensionError("drug vector does not match the drug count");
  std::vector<bool> out(lambda);
  for (std::size_t i = 0; i < lambda; ++i) out[i] = ((d.offset() >> (lambda - 1 - i)) & 1) == 0;
  return out;
}

std::vector<TargetSite> default_sites(const BlockDiagram& d) {
  std::vector<TargetSite> out;
  for (std::size_t j = 0; j < d.outputs.size(); ++j) {
    out.push_back({TargetSite::Kind::Output, 0, j + 1, d.outputs[j].name});
  }
  for (std::size_t i = d.depth(); i-- > 0;) {
    for (std::size_t j = 0; j < d.levels[i].size(); ++j) {
      out.push_back({TargetSite::Kind::Internal, i + 1, j + 1, d.levels[i][j].name});
    }
  }
  return out;
}

TargetSite find_site(const BlockDiagram& d, const std::string& name) {
  if (const SubBlock* b = d.find_node(name)) return {TargetSite::Kind::Internal, b->level, b->index, b->name};
  for (std::size_t j = 0; j < d.outputs.size(); ++j) {
    if (d.outputs[j].name == name) return {TargetSite::Kind::Output, 0, j + 1, name};
  }
  throw ArgumentError("no node or output named '" + name + "'");
}

std::string new_drug_id(const BlockDiagram& d) {
  auto taken = [&](const std::string& id) {
    for (const auto& x : d.drugs) {
      if (x.id == id) return true;
    }
    for (const auto& x : d.faults) {
      if (x.id == id) return true;
    }
    return false;
  };
  std::string id = "d" + std::to_string(d.lambda() + 1);
  while (taken(id)) id += "_new";
  return id;
}

namespace {

/// Ẑ = Z d_new -> Z.
LogicalMatrix drop_new_drug(std::size_t omega, std::size_t lambda) {
  if (lambda >= 1) return kron(identity_matrix(omega / 2), stp(dummy_matrix(2, 2), swap_matrix(2, 2)));
  return kron(identity_matrix(omega), LogicalMatrix(1, {0, 0}));
}

}  // namespace

AssembledSystem rebuild_with_new_drug(const AssembledSystem& sys, const TargetSite& site) {
  if (sys.kind != AssembledSystem::Kind::BM) throw PreconditionError("rebuild_with_new_drug needs a Boolean map");
  const BlockDiagram& d = sys.diagram;
  const std::size_t omega = sys.z_dim;
  const std::size_t omega_hat = 2 * omega;

  AssembledSystem out;
  out.kind = AssembledSystem::Kind::BM;
  out.diagram = d;
  const std::size_t new_index = d.lambda();
  out.diagram.drugs.push_back({new_drug_id(d), site.name});
  if (site.kind == TargetSite::Kind::Internal) {
    if (site.level == 0 || site.level > d.depth() || site.index == 0 || site.index > d.levels[site.level - 1].size()) {
      throw ArgumentError("no sub-block at level " + std::to_string(site.level) + " index " + std::to_string(site.index));
    }
    out.diagram.levels[site.level - 1][site.index - 1].added_drug = new_index;
  } else {
    if (site.index == 0 || site.index > d.outputs.size()) throw ArgumentError("no output " + std::to_string(site.index));
    out.diagram.outputs[site.index - 1].added_drug = new_index;
  }
  validate_network(out.diagram);
  out.z_dim = omega_hat;
  out.z_args = bm_signature(out.diagram);

  const auto drop = drop_new_drug(omega, d.lambda());
  const auto md = drug_structure_matrix().without_args();
  const bool internal = site.kind == TargetSite::Kind::Internal;
  const std::size_t target_level = internal ? site.level : d.depth() + 1;

  std::size_t widths = 1;  // product of prior level dimensions
  for (std::size_t i = 0; i < d.depth(); ++i) {
    const std::size_t lvl = i + 1;
    std::vector<LogicalMatrix> raws, stars;
    for (std::size_t j = 0; j < d.levels[i].size(); ++j) {
      raws.push_back(stp(sys.raw_blocks[i][j], kron(drop, identity_matrix(widths))));
      if (lvl < target_level) {
        stars.push_back(stp(sys.block_star[i][j], drop).with_args(out.z_args));
      } else if (lvl == target_level) {
        const bool hit = j + 1 == site.index;
        stars.push_back((hit ? stp(md, sys.block_star[i][j]) : stp(sys.block_star[i][j], drop)).with_args(out.z_args));
      } else {
        LogicalMatrix star = raws.back();
        for (std::size_t k = 0; k < i; ++k) star = stp(star, lift_reduce(out.level_matrices[k], omega_hat));
        stars.push_back(star.with_args(out.z_args));
      }
    }
    out.level_matrices.push_back(compose_repeated(stars, omega_hat).with_args(out.z_args));
    out.raw_blocks.push_back(std::move(raws));
    out.block_star.push_back(std::move(stars));
    widths *= std::size_t{1} << d.levels[i].size();
  }
  out.primary = out.level_matrices.empty() ? LogicalMatrix(1, std::vector<Index>(omega_hat, 0), out.z_args)
                                           : compose_repeated(out.level_matrices, omega_hat).with_args(out.z_args);

  out.output_raw = sys.output_raw;
  if (internal) {
    const auto lifted = lift_reduce(out.primary.without_args(), d.input_dim());
    for (const auto& raw : out.output_raw) out.output_star.push_back(stp(raw, lifted).with_args(out.z_args));
  } else {
    for (std::size_t j = 0; j < sys.output_star.size(); ++j) {
      const bool hit = j + 1 == site.index;
      out.output_star.push_back((hit ? stp(md, sys.output_star[j]) : stp(sys.output_star[j], drop)).with_args(out.z_args));
    }
  }
  out.H = out.output_star.empty() ? LogicalMatrix(1, std::vector<Index>(omega_hat, 0), out.z_args)
                                  : compose_repeated(out.output_star, omega_hat).with_args(out.z_args);
  cross_check(out);
  return out;
}

ControlResult improve_controllability(const AssembledSystem& sys, const InterventionContext& ctx,
                                      std::optional<std::vector<TargetSite>> sites) {
  if (!drug_set(ctx).empty()) {
    throw PreconditionError("an existing drug already restores the healthy output; nothing to improve");
  }
  ControlResult res;
  const auto order = sites ? *sites : default_sites(sys.diagram);
  for (const auto& site : order) {
    const auto rebuilt = rebuild_with_new_drug(sys, site);
    const InterventionContext next{rebuilt.H, ctx.fault, ctx.inputs};
    SiteTrial trial{site, drug_set(next)};
    res.tried.push_back(trial);
    if (!trial.drugs.empty()) {
      res.found = true;
      res.site = site;
      res.drugs = trial.drugs;
      break;
    }
  }
  return res;
}

}  // namespace stpfault
