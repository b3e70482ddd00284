#include "stpfault/bm_analysis.hpp"

#include <algorithm>
#include <map>

#include "stpfault/errors.hpp"
#include "stpfault/stp.hpp"

namespace stpfault {

namespace {

void check_input(const FaultQueryContext& ctx, const DeltaVector& u) {
  if (u.dim() != ctx.input_dim()) {
    throw DimensionError("input must be a delta" + std::to_string(ctx.input_dim()) + " vector");
  }
  if (!ctx.inputs.contains(u)) {
    throw ArgumentError("input delta" + std::to_string(u.dim()) + "^" + std::to_string(u.position()) +
                        " is not in the permissible set " + ctx.inputs.to_string());
  }
}

void check_fault(const FaultQueryContext& ctx, const DeltaVector& f) {
  if (f.dim() != ctx.fault_dim()) {
    throw DimensionError("fault must be a delta" + std::to_string(ctx.fault_dim()) + " vector");
  }
}

void check_input_set(const FaultQueryContext& ctx, const DeltaSet& s) {
  if (s.dim() != ctx.input_dim()) throw DimensionError("input set must be over delta" + std::to_string(ctx.input_dim()));
}

}  // namespace

FaultQueryContext make_fault_context(const LogicalMatrix& H, std::optional<DeltaSet> inputs,
                                     std::optional<DeltaSet> faults) {
  if (!H.has_arg("U") || !H.has_arg("F")) {
    throw ArgumentError("fault queries need a matrix with U and F arguments, got (" + format_signature(H.args()) + ")");
  }
  FaultQueryContext ctx;
  ctx.H_tilde = H;
  if (H.has_arg("D")) ctx.H_tilde = pin_argument(H, "D", last_delta(H.arg_dim("D")));
  if (ctx.H_tilde.args().size() != 2) {
    throw ArgumentError("unexpected extra arguments in (" + format_signature(H.args()) + ")");
  }
  ctx.inputs = inputs ? *inputs : DeltaSet::full(ctx.input_dim());
  ctx.faults = faults ? *faults : DeltaSet::full(ctx.fault_dim());
  if (ctx.inputs.dim() != ctx.input_dim()) throw DimensionError("permissible inputs must be over delta" + std::to_string(ctx.input_dim()));
  if (ctx.faults.dim() != ctx.fault_dim()) throw DimensionError("fault set must be over delta" + std::to_string(ctx.fault_dim()));
  return ctx;
}

DeltaVector output_of(const FaultQueryContext& ctx, const DeltaVector& u, const DeltaVector& f) {
  return evaluate(ctx.H_tilde, {{"U", u}, {"F", f}});
}

bool exists_fault(const FaultQueryContext& ctx, const DeltaVector& u, const DeltaVector& f) {
  check_input(ctx, u);
  check_fault(ctx, f);
  return output_of(ctx, u, f) != output_of(ctx, u, ctx.f0());
}

DeltaSet detectable_faults(const FaultQueryContext& ctx, const DeltaVector& u) {
  check_input(ctx, u);
  DeltaSet out(ctx.fault_dim());
  const auto healthy = output_of(ctx, u, ctx.f0());
  for (const auto& f : ctx.faults.members()) {
    if (output_of(ctx, u, f) != healthy) out.insert(f);
  }
  return out;
}

DeltaSet detecting_inputs(const FaultQueryContext& ctx, const DeltaVector& f) {
  check_fault(ctx, f);
  // pin F first: H'F gives a map over U alone
  const auto faulty = pin_argument(ctx.H_tilde, "F", f);
  const auto healthy = pin_argument(ctx.H_tilde, "F", ctx.f0());
  DeltaSet out(ctx.input_dim());
  for (const auto& u : ctx.inputs.members()) {
    if (faulty.apply(u) != healthy.apply(u)) out.insert(u);
  }
  return out;
}

bool uniquely_identifies(const FaultQueryContext& ctx, const DeltaVector& u, const DeltaVector& f) {
  check_input(ctx, u);
  check_fault(ctx, f);
  const auto healthy = output_of(ctx, u, ctx.f0());
  if (output_of(ctx, u, f) == healthy) return false;
  for (const auto& g : ctx.faults.members()) {
    if (g != f && output_of(ctx, u, g) != healthy) return false;
  }
  return true;
}

DeltaSet unique_inputs(const FaultQueryContext& ctx, const DeltaVector& f) {
  check_fault(ctx, f);
  DeltaSet out(ctx.input_dim());
  for (const auto& u : ctx.inputs.members()) {
    if (uniquely_identifies(ctx, u, f)) out.insert(u);
  }
  return out;
}

DeltaSet common_faults(const FaultQueryContext& ctx, const DeltaSet& u_star) {
  check_input_set(ctx, u_star);
  if (u_star.empty()) throw ArgumentError("common_faults needs a nonempty input set");
  std::optional<DeltaSet> acc;
  for (const auto& u : u_star.members()) {
    auto s = detectable_faults(ctx, u);
    acc = acc ? acc->intersected(s) : s;
  }
  return *acc;
}

DeltaSet test_set(const FaultQueryContext& ctx) {
  DeltaSet out(ctx.input_dim());
  for (const auto& f : ctx.faults.members()) out = out.united(detecting_inputs(ctx, f));
  return out;
}

DeltaSet fault_coverage(const FaultQueryContext& ctx, const DeltaSet& u_t) {
  check_input_set(ctx, u_t);
  DeltaSet out(ctx.fault_dim());
  for (const auto& u : u_t.members()) out = out.united(detectable_faults(ctx, u));
  return out;
}

GeneralizedUnique generalized_unique(const FaultQueryContext& ctx, const DeltaSet& u_star, const DeltaVector& f) {
  check_fault(ctx, f);
  GeneralizedUnique g;
  g.common = common_faults(ctx, u_star);
  if (g.common.empty()) {
    g.verdict = "no-detection";
  } else if (g.common.size() != 1) {
    g.verdict = "not-unique";
  } else if (g.common.contains(f)) {
    g.verdict = "unique";
    g.unique = true;
  } else {
    g.verdict = "other-fault";
  }
  return g;
}

namespace {

using Signature = std::vector<std::size_t>;

Signature signature_of(const FaultQueryContext& ctx, const std::vector<DeltaVector>& us, const DeltaVector& f) {
  Signature s;
  s.reserve(us.size());
  for (const auto& u : us) s.push_back(output_of(ctx, u, f).offset());
  return s;
}

}  // namespace

EquivalenceReport classify_equivalence(const FaultQueryContext& ctx, const DeltaSet& u_star) {
  check_input_set(ctx, u_star);
  if (u_star.empty()) throw ArgumentError("classify_equivalence needs a nonempty input set");
  for (const auto& u : u_star.members()) check_input(ctx, u);
  EquivalenceReport rep;
  rep.detectable = DeltaSet(ctx.fault_dim());
  rep.undetectable = DeltaSet(ctx.fault_dim());
  const auto us = u_star.members();
  const auto f0 = ctx.f0();
  const auto healthy = signature_of(ctx, us, f0);
  std::map<Signature, DeltaSet> groups;
  std::vector<Signature> order;
  for (const auto& f : ctx.faults.members()) {
    if (f == f0) continue;
    auto sig = signature_of(ctx, us, f);
    if (sig == healthy) {
      rep.undetectable.insert(f);
      continue;
    }
    rep.detectable.insert(f);
    auto [it, fresh] = groups.try_emplace(sig, DeltaSet(ctx.fault_dim()));
    if (fresh) order.push_back(sig);
    it->second.insert(f);
  }
  for (const auto& sig : order) rep.classes.push_back(groups.at(sig));
  return rep;
}

DeltaSet default_undetectable(const FaultQueryContext& ctx) {
  DeltaSet out(ctx.fault_dim());
  for (const auto& f : ctx.faults.members()) {
    if (f != ctx.f0() && detecting_inputs(ctx, f).empty()) out.insert(f);
  }
  const auto eq = classify_equivalence(ctx, ctx.inputs);
  for (const auto& cls : eq.classes) {
    if (cls.size() >= 2) out = out.united(cls);
  }
  return out;
}

ReporterPlan improve_observability(const AssembledSystem& sys, const FaultQueryContext& ctx,
                                   std::optional<DeltaSet> undetectable) {
  if (sys.kind != AssembledSystem::Kind::BM) throw PreconditionError("reporter design needs a Boolean map");
  if (sys.H.arg_dim("U") != ctx.input_dim() || sys.H.arg_dim("F") != ctx.fault_dim()) {
    throw DimensionError("fault context does not belong to this system");
  }
  const auto f0 = ctx.f0();
  const auto us = ctx.inputs.members();

  // how each fault in F̄ counts as observed: either it differs from F0, or it
  // already does and must also separate from the rest of its class
  const auto eq = classify_equivalence(ctx, ctx.inputs);
  std::map<std::size_t, DeltaSet> class_of;
  for (const auto& cls : eq.classes) {
    for (const auto& f : cls.members()) class_of[f.offset()] = cls;
  }

  ReporterPlan plan;
  DeltaSet fbar = undetectable ? *undetectable : default_undetectable(ctx);
  if (fbar.dim() != ctx.fault_dim()) throw DimensionError("undetectable set must be over delta" + std::to_string(ctx.fault_dim()));
  fbar.erase(f0);
  for (const auto& f : fbar.members()) {
    auto it = class_of.find(f.offset());
    if (it != class_of.end() && it->second.size() == 1) fbar.erase(f);  // already observable on its own
  }
  plan.initial = fbar;

  LogicalMatrix current = sys.H;
  std::vector<std::pair<std::size_t, std::size_t>> used;

  auto observed_at = [&](const LogicalMatrix& aug_pinned, const DeltaVector& u, const DeltaVector& f) {
    const auto out = evaluate(aug_pinned, {{"U", u}, {"F", f}});
    if (out == evaluate(aug_pinned, {{"U", u}, {"F", f0}})) return false;
    auto it = class_of.find(f.offset());
    if (it == class_of.end()) return true;
    for (const auto& g : it->second.members()) {
      if (g != f && evaluate(aug_pinned, {{"U", u}, {"F", g}}) == out) return false;
    }
    return true;
  };
  // over a set of inputs: separated from F0 somewhere and from each class mate somewhere
  auto observed_over = [&](const LogicalMatrix& aug_pinned, const DeltaVector& f) {
    bool differs = false;
    for (const auto& u : us) {
      if (evaluate(aug_pinned, {{"U", u}, {"F", f}}) != evaluate(aug_pinned, {{"U", u}, {"F", f0}})) differs = true;
    }
    if (!differs) return false;
    auto it = class_of.find(f.offset());
    if (it == class_of.end()) return true;
    for (const auto& g : it->second.members()) {
      if (g == f) continue;
      bool separated = false;
      for (const auto& u : us) {
        if (evaluate(aug_pinned, {{"U", u}, {"F", f}}) != evaluate(aug_pinned, {{"U", u}, {"F", g}})) separated = true;
      }
      if (!separated) return false;
    }
    return true;
  };

  const auto d0 = last_delta(sys.H.arg_dim("D"));
  while (!fbar.empty()) {
    ReporterStep step;
    std::optional<std::size_t> best;
    std::vector<LogicalMatrix> augmented;
    for (std::size_t i = 0; i < sys.block_star.size(); ++i) {
      for (std::size_t j = 0; j < sys.block_star[i].size(); ++j) {
        if (std::find(used.begin(), used.end(), std::make_pair(i, j)) != used.end()) continue;
        auto aug = compose_repeated({current, sys.block_star[i][j]}, sys.z_dim).with_args(sys.z_args);
        const auto pinned = pin_argument(aug, "D", d0);
        ReporterCandidate c;
        c.level = i + 1;
        c.index = j + 1;
        c.name = sys.diagram.levels[i][j].name;
        c.detected = DeltaSet(ctx.fault_dim());
        for (const auto& f : fbar.members()) {
          if (observed_over(pinned, f)) c.detected.insert(f);
        }
        for (const auto& u : us) {
          DeltaSet at_u(ctx.fault_dim());
          for (const auto& f : fbar.members()) {
            if (observed_at(pinned, u, f)) at_u.insert(f);
          }
          c.per_input.emplace_back(u, std::move(at_u));
        }
        // strict '>' keeps the lowest level, then the lowest index
        if (!best || c.detected.size() > step.candidates[*best].detected.size()) best = step.candidates.size();
        step.candidates.push_back(std::move(c));
        augmented.push_back(std::move(aug));
      }
    }
    if (!best || step.candidates[*best].detected.empty()) break;
    step.chosen = step.candidates[*best];
    current = augmented[*best];
    used.emplace_back(step.chosen.level - 1, step.chosen.index - 1);
    fbar = fbar.minus(step.chosen.detected);
    plan.steps.push_back(std::move(step));
  }
  plan.residual = fbar;
  return plan;
}

}  // namespace stpfault
