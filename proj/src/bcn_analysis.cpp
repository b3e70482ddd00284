#include "stpfault/bcn_analysis.hpp"

#include <algorithm>
#include <set>

#include "stpfault/bm_intervention.hpp"
#include "stpfault/errors.hpp"
#include "stpfault/stp.hpp"

namespace stpfault {

namespace {

void require_bcn_matrix(const LogicalMatrix& L) {
  for (const char* a : {"U", "F", "D", "X"}) {
    if (!L.has_arg(a)) throw ArgumentError(std::string("transition matrix needs arguments U, F, D, X; missing ") + a);
  }
  if (L.rows() != L.arg_dim("X")) throw DimensionError("transition rows must equal the state dimension");
}

void require_square(const LogicalMatrix& T) {
  if (!T.is_square()) {
    throw DimensionError("transition must be square, got " + std::to_string(T.rows()) + "x" + std::to_string(T.cols()));
  }
}

/// Product of pinned transitions in the given order: T_0 T_1 ⋯ (rightmost applied first).
LogicalMatrix ordered_product(const std::vector<LogicalMatrix>& ts) {
  LogicalMatrix acc = ts.front();
  for (std::size_t i = 1; i < ts.size(); ++i) acc = compose_square(acc, ts[i]);
  return acc;
}

std::vector<LogicalMatrix> pinned_sequence(const LogicalMatrix& L, const std::vector<DeltaVector>& seq,
                                           const DeltaVector& f, const DeltaVector& d) {
  if (seq.empty()) throw ArgumentError("input sequence must be nonempty");
  std::vector<LogicalMatrix> ts;
  for (const auto& u : seq) ts.push_back(pin_transition(L, u, f, d));
  return ts;
}

}  // namespace

LogicalMatrix pin_transition(const LogicalMatrix& L, const DeltaVector& u, const DeltaVector& f, const DeltaVector& d) {
  require_bcn_matrix(L);
  auto m = pin_argument(L, "U", u);
  m = pin_argument(m, "F", f);
  m = pin_argument(m, "D", d);
  return m.without_args();
}

CycleSet attractor_cycles(const LogicalMatrix& T) {
  require_square(T);
  const std::size_t n = T.rows();
  // every state in the image of T^n lies on a cycle
  const auto settled = matrix_power(T, n);
  std::vector<char> on_cycle(n, 0);
  for (std::size_t c = 0; c < n; ++c) on_cycle[settled[c]] = 1;

  CycleSet cs;
  std::vector<char> seen(n, 0);
  std::set<std::size_t> lengths;
  for (std::size_t s = 0; s < n; ++s) {
    if (!on_cycle[s] || seen[s]) continue;
    std::vector<std::size_t> cyc;
    std::size_t x = s;
    do {
      seen[x] = 1;
      cyc.push_back(x + 1);
      x = T[x];
    } while (x != s);
    const std::size_t len = cyc.size();
    lengths.insert(len);
    auto [it, fresh] = cs.states_per_length.try_emplace(len, DeltaSet(n));
    for (auto p : cyc) it->second.insert(delta(n, p));
    cs.cycles.push_back(std::move(cyc));
  }
  cs.lengths.assign(lengths.begin(), lengths.end());
  return cs;
}

std::vector<std::size_t> probe_set(const LogicalMatrix& a, const LogicalMatrix& b) {
  if (a.rows() != b.rows()) throw DimensionError("compared transitions differ in size");
  std::set<std::size_t> ks;
  for (const auto* m : {&a, &b}) {
    for (auto len : attractor_cycles(*m).lengths) {
      for (std::size_t k = 1; k <= len; ++k) {
        if (len % k == 0) ks.insert(k);
      }
    }
  }
  return {ks.begin(), ks.end()};
}

TraceProbe compare_transitions(const LogicalMatrix& a, const LogicalMatrix& b) {
  TraceProbe p;
  p.ks = probe_set(a, b);
  PowerCache pa(a), pb(b);
  for (auto k : p.ks) {
    const auto t = diag_diff_trace(pa, pb, k);
    p.traces.push_back(t);
    if (t != 0) p.differs = true;
  }
  return p;
}

TraceProbe exists_fault_bcn(const LogicalMatrix& L, const DeltaVector& u, const DeltaVector& f) {
  require_bcn_matrix(L);
  const auto d0 = last_delta(L.arg_dim("D"));
  return compare_transitions(pin_transition(L, u, last_delta(L.arg_dim("F")), d0), pin_transition(L, u, f, d0));
}

DeltaSet detecting_inputs_bcn(const LogicalMatrix& L, const DeltaVector& f, const DeltaSet& inputs) {
  require_bcn_matrix(L);
  if (inputs.dim() != L.arg_dim("U")) throw DimensionError("input set must be over delta" + std::to_string(L.arg_dim("U")));
  DeltaSet out(inputs.dim());
  for (const auto& u : inputs.members()) {
    if (exists_fault_bcn(L, u, f).differs) out.insert(u);
  }
  return out;
}

SequenceVerdict sequence_detects(const LogicalMatrix& L, const std::vector<DeltaVector>& seq, const DeltaVector& f) {
  require_bcn_matrix(L);
  const auto d0 = last_delta(L.arg_dim("D"));
  const auto faulty = ordered_product(pinned_sequence(L, seq, f, d0));
  const auto healthy = ordered_product(pinned_sequence(L, seq, last_delta(L.arg_dim("F")), d0));
  SequenceVerdict v;
  v.trace = diag_diff_trace(faulty, healthy, 1);
  v.holds = v.trace != 0;
  return v;
}

bool unique_fault_bcn(const LogicalMatrix& L, const DeltaVector& u, const DeltaVector& f, const DeltaSet& faults) {
  require_bcn_matrix(L);
  if (!faults.contains(f)) throw ArgumentError("fault is not in the hazardous set " + faults.to_string());
  if (!exists_fault_bcn(L, u, f).differs) return false;
  for (const auto& g : faults.members()) {
    if (g != f && exists_fault_bcn(L, u, g).differs) return false;
  }
  return true;
}

namespace {

/// Products for the control check, j = card(π) down to 1.
std::pair<LogicalMatrix, LogicalMatrix> control_products(const LogicalMatrix& L, const DeltaVector& f,
                                                         const std::vector<DeltaVector>& seq, const DeltaVector& d) {
  require_bcn_matrix(L);
  std::vector<DeltaVector> reversed(seq.rbegin(), seq.rend());
  const auto treated = ordered_product(pinned_sequence(L, reversed, f, d));
  const auto healthy =
      ordered_product(pinned_sequence(L, reversed, last_delta(L.arg_dim("F")), last_delta(L.arg_dim("D"))));
  return {treated, healthy};
}

}  // namespace

SequenceVerdict exists_control_bcn(const LogicalMatrix& L, const DeltaVector& f, const std::vector<DeltaVector>& seq,
                                   const DeltaVector& d) {
  const auto [treated, healthy] = control_products(L, f, seq, d);
  SequenceVerdict v;
  v.trace = diag_diff_trace(treated, healthy, 1);
  v.holds = v.trace == 0;
  return v;
}

TraceProbe exists_control_bcn_per_k(const LogicalMatrix& L, const DeltaVector& f, const std::vector<DeltaVector>& seq,
                                    const DeltaVector& d) {
  const auto [treated, healthy] = control_products(L, f, seq, d);
  return compare_transitions(treated, healthy);
}

AssembledSystem rebuild_bcn_with_new_drug(const AssembledSystem& sys, const std::string& name) {
  if (sys.kind != AssembledSystem::Kind::BCN) throw PreconditionError("rebuild_bcn_with_new_drug needs a network with feedback");
  const BlockDiagram& d = sys.diagram;
  const std::size_t k = d.state_position(name);
  if (k == BlockDiagram::npos) throw ArgumentError("'" + name + "' is not a state node");

  AssembledSystem out = sys;
  const std::size_t new_index = d.lambda();
  out.diagram.drugs.push_back({new_drug_id(d), name});
  out.diagram.find_node(name)->added_drug = new_index;
  validate_network(out.diagram);

  const std::size_t omega = d.omega();
  const std::size_t sd = d.state_dim();
  const auto sig = bcn_signature(out.diagram);
  const std::size_t zhat = 2 * omega * sd;

  // (U,F,D,d_new,X) -> (U,F,D,X)
  const auto pad = kron(identity_matrix(omega), dummy_matrix(sd, 2));
  const auto sel_new = tabulate(2, sig, [](std::span<const std::size_t> off) -> std::size_t { return off[2] & 1; });
  const auto md = drug_structure_matrix().without_args();

  out.read_parts.clear();
  out.read_parts.push_back(stp(sys.read_parts[0], pad).with_args(sig));
  for (std::size_t i = 0; i < d.n_feedback(); ++i) {
    auto padded = stp(sys.read_parts[i + 1], pad);
    if (i == k) padded = stp(md, compose_repeated({padded, sel_new.without_args()}, zhat));
    out.read_parts.push_back(padded.with_args(sig));
  }
  out.read_stage = compose_repeated(out.read_parts, zhat).with_args(sig);

  out.select_star.clear();
  for (const auto& sp : sys.select_primary) out.select_star.push_back(stp(sp, out.read_stage).with_args(sig));
  out.L = compose_repeated(out.select_star, zhat).with_args(sig);
  // the core levels read (U,F,D,Xr) and never see the new drug directly
  cross_check(out);
  return out;
}

BcnControlResult improve_controllability_bcn(const AssembledSystem& sys, const DeltaVector& f, const DeltaSet& inputs,
                                             std::optional<std::vector<std::string>> candidates) {
  if (sys.kind != AssembledSystem::Kind::BCN) throw PreconditionError("improve_controllability_bcn needs a network with feedback");
  if (inputs.empty()) throw ArgumentError("permissible input set is empty");
  const auto us = inputs.members();
  auto works_everywhere = [&](const LogicalMatrix& L, const DeltaVector& drug) {
    for (const auto& u : us) {
      if (exists_control_bcn_per_k(L, f, {u}, drug).differs) return false;
    }
    return true;
  };
  for (std::size_t i = 1; i <= sys.L.arg_dim("D"); ++i) {
    const auto drug = delta(sys.L.arg_dim("D"), i);
    if (works_everywhere(sys.L, drug)) {
      throw PreconditionError("drug delta" + std::to_string(drug.dim()) + "^" + std::to_string(i) +
                              " already restores the healthy attractors; nothing to improve");
    }
  }
  BcnControlResult res;
  const auto order = candidates ? *candidates : sys.diagram.feedback;
  for (const auto& site : order) {
    const auto rebuilt = rebuild_bcn_with_new_drug(sys, site);
    const std::size_t dd = rebuilt.L.arg_dim("D");
    BcnSiteTrial trial{site, DeltaSet(dd)};
    for (std::size_t i = 1; i <= dd; ++i) {
      if (works_everywhere(rebuilt.L, delta(dd, i))) trial.drugs.insert(delta(dd, i));
    }
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
