#include "stpfault/assembly.hpp"

#include <string>

#include "stpfault/errors.hpp"
#include "stpfault/stp.hpp"

namespace stpfault {

LogicalMatrix fault_structure_matrix() {
  return delta_matrix(2, {1, 2, 1, 1, 2, 2}).with_args({{"x", 2}, {"f", 3}});
}

LogicalMatrix drug_structure_matrix() { return delta_matrix(2, {2, 1, 2, 2}).with_args({{"x", 2}, {"d", 2}}); }

LogicalMatrix tabulate(std::size_t rows, const ArgSignature& sig,
                       const std::function<std::size_t(std::span<const std::size_t>)>& fn) {
  const std::size_t cols = signature_product(sig);
  std::vector<Index> col(cols);
  std::vector<std::size_t> digits(sig.size(), 0);
  for (std::size_t c = 0; c < cols; ++c) {
    const auto r = fn(digits);
    if (r >= rows) throw AssemblyInconsistency("tabulated row out of range");
    col[c] = static_cast<Index>(r);
    for (std::size_t i = sig.size(); i-- > 0;) {
      if (++digits[i] < sig[i].dim) break;
      digits[i] = 0;
    }
  }
  return LogicalMatrix(rows, std::move(col), sig);
}

ArgSignature bm_signature(const BlockDiagram& d) {
  return {{"U", d.input_dim()}, {"F", d.fault_dim()}, {"D", d.drug_dim()}};
}

ArgSignature bcn_signature(const BlockDiagram& d) {
  auto sig = bm_signature(d);
  sig.push_back({"X", d.state_dim()});
  return sig;
}

namespace {

std::size_t pow2(std::size_t n) { return std::size_t{1} << n; }

/// Write `count` booleans decoded from `offset` into vals[first..].
void fill_bits(std::vector<char>& vals, std::size_t first, std::size_t offset, std::size_t count) {
  for (std::size_t i = count; i-- > 0;) {
    vals[first + i] = (offset & 1) ? 0 : 1;
    offset >>= 1;
  }
}

LogicalMatrix zeros(std::size_t cols, ArgSignature sig) {
  return LogicalMatrix(1, std::vector<Index>(cols, 0), std::move(sig));
}

}  // namespace

LogicalMatrix build_block_matrix(const BlockDiagram& d, std::size_t level, std::size_t index) {
  if (level == 0 || level > d.depth() || index == 0 || index > d.levels[level - 1].size()) {
    throw ArgumentError("no sub-block x" + std::to_string(level) + "_" + std::to_string(index));
  }
  const SubBlock& b = d.levels[level - 1][index - 1];
  const bool bcn = d.is_bcn();
  ArgSignature sig = bm_signature(d);
  if (bcn) sig.push_back({"Xr", d.state_dim()});
  const std::size_t first_level_arg = sig.size();
  for (std::size_t k = 1; k < level; ++k) sig.push_back({"X" + std::to_string(k), pow2(d.levels[k - 1].size())});

  std::vector<char> vals(d.slot_count(), 0);
  Scenario s;
  return tabulate(2, sig, [&](std::span<const std::size_t> off) -> std::size_t {
    s.u = decode_bools(off[0], d.alpha());
    s.f = decode_faults(off[1], d.gamma());
    s.d = decode_bools(off[2], d.lambda());
    fill_bits(vals, 0, off[0], d.alpha());
    if (bcn) fill_bits(vals, d.alpha(), off[3], d.n_feedback());
    for (std::size_t k = 1; k < level; ++k) {
      fill_bits(vals, d.node_slot(k, 1), off[first_level_arg + k - 1], d.levels[k - 1].size());
    }
    bool v = eval(b.expr, vals);
    if (!(bcn && b.feedback)) v = transform_node_value(d, b, v, s);
    return v ? 0 : 1;
  });
}

void compose_levels(AssembledSystem& sys) {
  const std::size_t z = sys.z_dim;
  sys.block_star.clear();
  sys.level_matrices.clear();
  for (std::size_t i = 0; i < sys.raw_blocks.size(); ++i) {
    std::vector<LogicalMatrix> stars;
    for (const auto& raw : sys.raw_blocks[i]) {
      LogicalMatrix star = raw;
      for (std::size_t k = 0; k < i; ++k) star = stp(star, lift_reduce(sys.level_matrices[k], z));
      stars.push_back(star.with_args(sys.z_args));
    }
    sys.level_matrices.push_back(compose_repeated(stars, z).with_args(sys.z_args));
    sys.block_star.push_back(std::move(stars));
  }
  if (sys.level_matrices.empty()) {
    sys.primary = zeros(z, sys.z_args);
  } else {
    sys.primary = compose_repeated(sys.level_matrices, z).with_args(sys.z_args);
  }
}

namespace {

/// H_j over (U, X1..Xm) for a BM, by truth table.
LogicalMatrix output_block(const BlockDiagram& d, const OutputBlock& o) {
  ArgSignature sig{{"U", d.input_dim()}, {"X", pow2(d.node_count())}};
  std::vector<char> vals(d.slot_count(), 0);
  return tabulate(2, sig, [&](std::span<const std::size_t> off) -> std::size_t {
    fill_bits(vals, 0, off[0], d.alpha());
    fill_bits(vals, d.alpha() + d.n_feedback(), off[1], d.node_count());
    return eval(o.expr, vals) ? 0 : 1;
  });
}

}  // namespace

AssembledSystem assemble_bm(const BlockDiagram& d) {
  if (d.is_bcn()) throw PreconditionError("assemble_bm called on a network with feedback");
  AssembledSystem sys;
  sys.kind = AssembledSystem::Kind::BM;
  sys.diagram = d;
  sys.z_dim = d.omega();
  sys.z_args = bm_signature(d);
  for (std::size_t i = 1; i <= d.depth(); ++i) {
    std::vector<LogicalMatrix> blocks;
    for (std::size_t j = 1; j <= d.levels[i - 1].size(); ++j) blocks.push_back(build_block_matrix(d, i, j));
    sys.raw_blocks.push_back(std::move(blocks));
  }
  compose_levels(sys);

  const auto lifted = lift_reduce(sys.primary.without_args(), d.input_dim());
  for (const auto& o : d.outputs) {
    auto raw = output_block(d, o);
    sys.output_star.push_back(stp(raw, lifted).with_args(sys.z_args));
    sys.output_raw.push_back(std::move(raw));
  }
  sys.H = d.outputs.empty() ? zeros(sys.z_dim, sys.z_args)
                            : compose_repeated(sys.output_star, sys.z_dim).with_args(sys.z_args);
  cross_check(sys);
  return sys;
}

AssembledSystem assemble_bcn(const BlockDiagram& d) {
  if (!d.is_bcn()) throw PreconditionError("assemble_bcn called on a network without feedback");
  AssembledSystem sys;
  sys.kind = AssembledSystem::Kind::BCN;
  sys.diagram = d;
  const std::size_t omega = d.omega();
  const std::size_t n = d.n_feedback();
  sys.z_dim = omega * d.state_dim();
  const auto sig = bcn_signature(d);

  // read stage: (U,F,D,X) -> (U,F,D,X read through each state node's fault/drug)
  sys.read_parts.push_back(tabulate(omega, sig, [&](std::span<const std::size_t> off) -> std::size_t {
    return (off[0] * d.fault_dim() + off[1]) * d.drug_dim() + off[2];
  }));
  for (std::size_t k = 0; k < n; ++k) {
    const SubBlock& b = *d.find_node(d.feedback[k]);
    Scenario s;
    sys.read_parts.push_back(tabulate(2, sig, [&](std::span<const std::size_t> off) -> std::size_t {
      s.f = decode_faults(off[1], d.gamma());
      s.d = decode_bools(off[2], d.lambda());
      const bool raw = ((off[3] >> (n - 1 - k)) & 1) == 0;
      return transform_node_value(d, b, raw, s) ? 0 : 1;
    }));
  }
  sys.read_stage = compose_repeated(sys.read_parts, sys.z_dim).with_args(sig);

  // core levels over (U,F,D,Xr)
  sys.z_args = bm_signature(d);
  sys.z_args.push_back({"Xr", d.state_dim()});
  for (std::size_t i = 1; i <= d.depth(); ++i) {
    std::vector<LogicalMatrix> blocks;
    for (std::size_t j = 1; j <= d.levels[i - 1].size(); ++j) blocks.push_back(build_block_matrix(d, i, j));
    sys.raw_blocks.push_back(std::move(blocks));
  }
  compose_levels(sys);

  const std::size_t nodes = d.node_count();
  const std::size_t base = d.alpha() + d.n_feedback();
  for (std::size_t k = 0; k < n; ++k) {
    const SubBlock& b = *d.find_node(d.feedback[k]);
    const std::size_t pos = d.node_slot(b.level, b.index) - base;
    auto sel = tabulate(2, {{"Xall", pow2(nodes)}}, [&](std::span<const std::size_t> off) -> std::size_t {
      return (off[0] >> (nodes - 1 - pos)) & 1;
    });
    sys.select_primary.push_back(stp(sel, sys.primary).with_args(sys.z_args));
    sys.select_star.push_back(stp(sys.select_primary.back(), sys.read_stage).with_args(sig));
  }
  sys.L = compose_repeated(sys.select_star, sys.z_dim).with_args(sig);

  const ArgSignature hsig{{"U", d.input_dim()}, {"X", d.state_dim()}};
  sys.H = tabulate(d.output_dim(), hsig, [&](std::span<const std::size_t> off) -> std::size_t {
    Scenario s;
    s.u = decode_bools(off[0], d.alpha());
    s.x = decode_bools(off[1], n);
    return encode_bools(evaluate_bcn_output(d, s));
  });
  cross_check(sys);
  return sys;
}

AssembledSystem assemble(const BlockDiagram& d) { return d.is_bcn() ? assemble_bcn(d) : assemble_bm(d); }

void cross_check(const AssembledSystem& sys) {
  const auto& d = sys.diagram;
  if (sys.kind == AssembledSystem::Kind::BM) {
    for (std::size_t c = 0; c < sys.H.cols(); ++c) {
      const std::size_t dd = c % d.drug_dim();
      const std::size_t f = (c / d.drug_dim()) % d.fault_dim();
      const std::size_t u = c / (d.drug_dim() * d.fault_dim());
      const auto y = evaluate_bm(d, decode_scenario(d, u, f, dd));
      if (encode_bools(y) != sys.H[c]) {
        throw AssemblyInconsistency("H column " + std::to_string(c + 1) + " disagrees with direct evaluation");
      }
    }
    return;
  }
  const std::size_t sd = d.state_dim();
  for (std::size_t c = 0; c < sys.L.cols(); ++c) {
    const std::size_t x = c % sd;
    const std::size_t rest = c / sd;
    const std::size_t dd = rest % d.drug_dim();
    const std::size_t f = (rest / d.drug_dim()) % d.fault_dim();
    const std::size_t u = rest / (d.drug_dim() * d.fault_dim());
    const auto next = evaluate_bcn_step(d, decode_scenario(d, u, f, dd, x));
    if (encode_bools(next) != sys.L[c]) {
      throw AssemblyInconsistency("L column " + std::to_string(c + 1) + " disagrees with direct evaluation");
    }
  }
}

DeltaVector step_bcn(const AssembledSystem& sys, const DeltaVector& u, const DeltaVector& f, const DeltaVector& d,
                     const DeltaVector& x) {
  if (sys.kind != AssembledSystem::Kind::BCN) throw PreconditionError("step needs a network with feedback");
  return evaluate(sys.L, {{"U", u}, {"F", f}, {"D", d}, {"X", x}});
}

}  // namespace stpfault
