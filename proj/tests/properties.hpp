#pragma once
// Randomized and exhaustive property checks. Each returns a tally so the unit
// tests and the acceptance runner can share them.

#include <random>
#include <sstream>
#include <string>

#include "oracle.hpp"
#include "stpfault/assembly.hpp"
#include "stpfault/bcn_analysis.hpp"
#include "stpfault/bm_analysis.hpp"
#include "stpfault/bm_intervention.hpp"
#include "stpfault/errors.hpp"
#include "stpfault/network.hpp"
#include "stpfault/stp.hpp"

namespace props {

using namespace stpfault;

struct Tally {
  std::size_t cases = 0;
  std::size_t failures = 0;
  std::string first;

  void check(bool ok, const std::string& what) {
    ++cases;
    if (!ok) {
      if (failures == 0) first = what;
      ++failures;
    }
  }
  void merge(const Tally& o) {
    if (failures == 0 && o.failures) first = o.first;
    cases += o.cases;
    failures += o.failures;
  }
};

inline LogicalMatrix col(const DeltaVector& v) { return column_matrix(v); }

// ---------------------------------------------------------------- STP algebra

inline Tally stp_algebra(unsigned seed, std::size_t random_cases) {
  Tally t;
  std::mt19937 rng(seed);
  const std::size_t dims[] = {1, 2, 4, 8, 16};
  std::uniform_int_distribution<int> pick(0, 4);
  for (std::size_t n = 0; n < random_cases; ++n) {
    const auto a = oracle::random_matrix(rng, dims[pick(rng)], dims[pick(rng)]);
    const auto b = oracle::random_matrix(rng, dims[pick(rng)], dims[pick(rng)]);
    const auto c = oracle::random_matrix(rng, dims[pick(rng)], dims[pick(rng) % 3]);
    const auto ab = stp(a, b);
    t.check(oracle::same(ab, oracle::stp(oracle::dense(a), oracle::dense(b))), "stp vs dense " + format_delta_matrix(a) + " " + format_delta_matrix(b));
    t.check(stp(ab, c) == stp(a, stp(b, c)), "associativity");
  }
  // powers of three mixed with two
  const std::size_t mixed[] = {1, 3, 6, 9};
  std::uniform_int_distribution<int> pick3(0, 3);
  for (std::size_t n = 0; n < random_cases / 4; ++n) {
    const std::size_t inner = mixed[pick3(rng)];
    const std::size_t factor = mixed[pick3(rng) % 2 + 1] / 3 * (pick3(rng) % 2 + 1);  // 1 or 2
    const auto a = oracle::random_matrix(rng, mixed[pick3(rng)], inner * factor);
    const auto b = oracle::random_matrix(rng, inner, mixed[pick3(rng)]);
    t.check(oracle::same(stp(a, b), oracle::stp(oracle::dense(a), oracle::dense(b))), "mixed stp vs dense");
  }
  for (std::size_t p = 1; p <= 8; ++p) {
    for (std::size_t q = 1; q <= 8; ++q) {
      const auto W = swap_matrix(p, q);
      const auto E = dummy_matrix(p, q);
      for (std::size_t i = 1; i <= p; ++i) {
        for (std::size_t j = 1; j <= q; ++j) {
          const auto x = delta(p, i), y = delta(q, j);
          t.check(stp(col(x), col(y)) == col(delta(p * q, (i - 1) * q + j)), "delta product law");
          t.check(stp(stp(W, col(x)), col(y)) == stp(col(y), col(x)), "swap law");
          t.check(stp(stp(E, col(y)), col(x)) == col(x), "dummy law");
        }
      }
    }
  }
  for (std::size_t p = 1; p <= 16; ++p) {
    const auto phi = power_reduction_matrix(p);
    for (std::size_t i = 1; i <= p; ++i) {
      const auto a = col(delta(p, i));
      t.check(stp(a, a) == stp(phi, a), "power reduction law");
    }
  }
  // fused lift_reduce against the literal (I_k ⊗ M) Φ_k, and the compose property
  for (std::size_t n = 0; n < random_cases / 4; ++n) {
    const std::size_t k = dims[pick(rng) % 4 + 1];
    const std::size_t tail = dims[pick(rng) % 3];
    const auto m = oracle::random_matrix(rng, dims[pick(rng) % 4], k * tail);
    const auto literal = stp(kron(identity_matrix(k), m), power_reduction_matrix(k));
    t.check(lift_reduce(m, k) == literal, "lift_reduce fused form");
    const auto m1 = oracle::random_matrix(rng, dims[pick(rng) % 3 + 1], k);
    const auto m2 = oracle::random_matrix(rng, dims[pick(rng) % 3 + 1], k);
    const auto m3 = oracle::random_matrix(rng, dims[pick(rng) % 3 + 1], k);
    const auto star = compose_repeated({m1, m2, m3}, k);
    for (std::size_t i = 1; i <= k; ++i) {
      const auto a = col(delta(k, i));
      t.check(stp(star, a) == stp_chain({m1, a, m2, a, m3, a}), "compose_repeated property");
    }
  }
  return t;
}

// ---------------------------------------------------------------- pinning

inline Tally pin_consistency(unsigned seed, std::size_t matrices) {
  Tally t;
  std::mt19937 rng(seed);
  const std::size_t choices[] = {1, 2, 3, 4, 8, 9};
  std::uniform_int_distribution<int> pick(0, 5), nargs(1, 4), rows(1, 8);
  for (std::size_t n = 0; n < matrices; ++n) {
    ArgSignature sig;
    std::size_t cols = 1;
    const int k = nargs(rng);
    for (int i = 0; i < k; ++i) {
      std::size_t d = choices[pick(rng)];
      if (cols * d > 4096) d = 1;
      sig.push_back({std::string(1, static_cast<char>('A' + i)), d});
      cols *= d;
    }
    const auto m = oracle::random_matrix(rng, static_cast<std::size_t>(rows(rng)), cols).with_args(sig);
    std::vector<std::size_t> dims;
    for (const auto& a : sig) dims.push_back(a.dim);
    const auto pin_at = std::uniform_int_distribution<std::size_t>(0, sig.size() - 1)(rng);
    const auto& pinned_arg = sig[pin_at];
    for (std::size_t v = 1; v <= pinned_arg.dim; ++v) {
      const auto pinned = pin_argument(m, pinned_arg.name, delta(pinned_arg.dim, v));
      for (std::size_t c = 0; c < cols; ++c) {
        auto offs = split_offset(c, dims);
        if (offs[pin_at] != v - 1) continue;
        std::vector<std::pair<std::string_view, DeltaVector>> full, rest;
        for (std::size_t i = 0; i < sig.size(); ++i) {
          full.emplace_back(sig[i].name, DeltaVector(sig[i].dim, offs[i]));
          if (i != pin_at) rest.emplace_back(sig[i].name, DeltaVector(sig[i].dim, offs[i]));
        }
        const auto whole = evaluate(m, full);
        t.check(whole == DeltaVector(m.rows(), m[c]), "evaluate matches the column");
        t.check(rest.empty() ? pinned[0] == whole.offset() : evaluate(pinned, rest) == whole, "pin vs evaluate");
      }
    }
    // any permutation evaluates identically
    std::vector<std::string> order;
    for (const auto& a : sig) order.push_back(a.name);
    std::shuffle(order.begin(), order.end(), rng);
    const auto re = reorder_arguments(m, order);
    for (std::size_t c = 0; c < cols; ++c) {
      const auto offs = split_offset(c, dims);
      std::vector<std::pair<std::string_view, DeltaVector>> full;
      for (std::size_t i = 0; i < sig.size(); ++i) full.emplace_back(sig[i].name, DeltaVector(sig[i].dim, offs[i]));
      t.check(evaluate(re, full) == evaluate(m, full), "reorder vs evaluate");
    }
  }
  return t;
}

// ---------------------------------------------------------------- BM assembly vs oracle

inline std::size_t pow3(std::size_t n) {
  std::size_t r = 1;
  while (n--) r *= 3;
  return r;
}

inline Tally bm_assembly(unsigned seed, std::size_t networks) {
  Tally t;
  std::mt19937 rng(seed);
  for (std::size_t n = 0; n < networks; ++n) {
    const auto shape = oracle::random_bm_shape(rng, 8);
    const auto text = oracle::random_network(rng, shape);
    const auto d = parse_network(text);
    const auto sys = assemble(d);
    bool ok = sys.H.args() == ArgSignature{{"U", std::size_t{1} << shape.alpha}, {"F", pow3(shape.gamma)}, {"D", std::size_t{1} << shape.lambda}};
    for (std::size_t c = 0; ok && c < sys.H.cols(); ++c) {
      const std::size_t dd = c % d.drug_dim(), f = (c / d.drug_dim()) % d.fault_dim(), u = c / (d.drug_dim() * d.fault_dim());
      ok = sys.H[c] == oracle::offset_of(oracle::bm_outputs(d, oracle::make_case(d, u, f, dd)));
    }
    // healthy and undrugged pinning is the unannotated map
    const auto healthy = pin_argument(pin_argument(sys.H, "F", no_fault(d)), "D", no_drug(d));
    auto stripped = d;
    for (auto& level : stripped.levels)
      for (auto& b : level) b.annotation = {};
    for (std::size_t u = 0; ok && u < d.input_dim(); ++u) {
      oracle::Case c{oracle::bits_of(u, d.alpha()), std::vector<int>(d.gamma(), 2), std::vector<bool>(d.lambda(), false), {}};
      ok = healthy[u] == oracle::offset_of(oracle::bm_outputs(stripped, c));
    }
    t.check(ok, text);
  }
  return t;
}

// ---------------------------------------------------------------- BM analysis vs oracle

inline DeltaSet random_subset(std::mt19937& rng, std::size_t dim) {
  DeltaSet s(dim);
  std::bernoulli_distribution coin(0.6);
  for (std::size_t i = 1; i <= dim; ++i)
    if (coin(rng)) s.insert(delta(dim, i));
  if (s.empty()) s.insert(delta(dim, std::uniform_int_distribution<std::size_t>(1, dim)(rng)));
  return s;
}

inline Tally bm_analysis(unsigned seed, std::size_t networks) {
  Tally t;
  std::mt19937 rng(seed);
  for (std::size_t n = 0; n < networks; ++n) {
    auto shape = oracle::random_bm_shape(rng, 8);
    if (shape.gamma == 0) shape.gamma = 1;
    if (shape.alpha + shape.gamma + shape.lambda > 8) shape.lambda = 0;
    while (std::accumulate(shape.level_sizes.begin(), shape.level_sizes.end(), std::size_t{0}) < shape.gamma + shape.lambda)
      shape.level_sizes.push_back(1);
    const auto text = oracle::random_network(rng, shape);
    const auto d = parse_network(text);
    const auto sys = assemble(d);
    const auto ud = d.input_dim(), fd = d.fault_dim();
    const auto ctx = make_fault_context(sys.H, random_subset(rng, ud), random_subset(rng, fd));
    // oracle signature of every (u, f) with no drug
    auto out = [&](std::size_t u, std::size_t f) {
      return oracle::offset_of(oracle::bm_outputs(d, oracle::make_case(d, u, f, d.drug_dim() - 1)));
    };
    const std::size_t f0 = fd - 1;
    bool ok = true;
    for (const auto& u : ctx.inputs.members()) {
      DeltaSet expect(fd);
      for (const auto& f : ctx.faults.members())
        if (out(u.offset(), f.offset()) != out(u.offset(), f0)) expect.insert(f);
      ok = ok && detectable_faults(ctx, u) == expect;
      for (const auto& f : ctx.faults.members()) {
        const bool det = expect.contains(f);
        ok = ok && exists_fault(ctx, u, f) == det && detecting_inputs(ctx, f).contains(u) == det;
        ok = ok && uniquely_identifies(ctx, u, f) == (det && expect.size() == 1);
      }
    }
    // equivalence classes by oracle signatures over Û
    const auto eq = classify_equivalence(ctx, ctx.inputs);
    std::map<std::vector<std::size_t>, DeltaSet> groups;
    DeltaSet undet(fd);
    std::vector<std::size_t> healthy;
    for (const auto& u : ctx.inputs.members()) healthy.push_back(out(u.offset(), f0));
    for (const auto& f : ctx.faults.members()) {
      if (f.offset() == f0) continue;
      std::vector<std::size_t> sig;
      for (const auto& u : ctx.inputs.members()) sig.push_back(out(u.offset(), f.offset()));
      if (sig == healthy) {
        undet.insert(f);
      } else {
        groups.try_emplace(sig, DeltaSet(fd)).first->second.insert(f);
      }
    }
    ok = ok && eq.undetectable == undet && eq.classes.size() == groups.size();
    for (const auto& cls : eq.classes) {
      bool found = false;
      for (const auto& [sig, g] : groups) found = found || g == cls;
      ok = ok && found;
    }
    // monotone coverage, antitone common faults
    auto small = random_subset(rng, ud).intersected(ctx.inputs);
    if (small.empty()) small = ctx.inputs;
    const auto big = small.united(random_subset(rng, ud).intersected(ctx.inputs));
    ok = ok && fault_coverage(ctx, small).is_subset_of(fault_coverage(ctx, big));
    ok = ok && common_faults(ctx, big).is_subset_of(common_faults(ctx, small));
    // reporter plan bookkeeping
    const auto plan = improve_observability(sys, ctx);
    DeltaSet covered(fd);
    std::size_t before = plan.initial.size();
    for (const auto& st : plan.steps) {
      ok = ok && !st.chosen.detected.empty() && covered.intersected(st.chosen.detected).empty();
      covered = covered.united(st.chosen.detected);
      ok = ok && plan.initial.size() - covered.size() < before;
      before = plan.initial.size() - covered.size();
    }
    ok = ok && covered.united(plan.residual) == plan.initial && covered.intersected(plan.residual).empty();
    ok = ok && plan.steps.size() <= d.node_count();
    t.check(ok, text);
  }
  return t;
}

// ---------------------------------------------------------------- BCN assembly vs oracle

inline Tally bcn_assembly(unsigned seed, std::size_t networks) {
  Tally t;
  std::mt19937 rng(seed);
  std::uniform_int_distribution<std::size_t> a(1, 2), g(0, 2), l(0, 2), nf(1, 5), extra(0, 2), pre(0, 2);
  for (std::size_t n = 0; n < networks; ++n) {
    oracle::Shape s;
    do {
      s.alpha = a(rng);
      s.gamma = g(rng);
      s.lambda = l(rng);
      s.feedback = nf(rng);
    } while (s.alpha + s.gamma + s.lambda + s.feedback > 12);
    s.level_sizes.assign(pre(rng), 1);
    s.level_sizes.push_back(s.feedback + extra(rng));
    while (std::accumulate(s.level_sizes.begin(), s.level_sizes.end(), std::size_t{0}) < s.gamma + s.lambda)
      s.level_sizes.back()++;
    s.beta = std::uniform_int_distribution<std::size_t>(0, 2)(rng);
    const auto text = oracle::random_network(rng, s);
    const auto d = parse_network(text);
    const auto sys = assemble(d);
    const std::size_t sd = d.state_dim();
    bool ok = true;
    for (std::size_t c = 0; ok && c < sys.L.cols(); ++c) {
      const std::size_t x = c % sd, rest = c / sd;
      const std::size_t dd = rest % d.drug_dim(), f = (rest / d.drug_dim()) % d.fault_dim(), u = rest / (d.drug_dim() * d.fault_dim());
      ok = sys.L[c] == oracle::offset_of(oracle::bcn_next(d, oracle::make_case(d, u, f, dd, x)));
    }
    for (std::size_t c = 0; ok && c < sys.H.cols(); ++c) {
      ok = sys.H[c] == oracle::offset_of(oracle::bcn_outputs(d, oracle::make_case(d, c / sd, 0, 0, c % sd)));
    }
    // a drug added at a random state node: off reproduces L, on matches the oracle
    if (ok && sys.L.cols() * 2 <= (std::size_t{1} << 16)) {
      const auto site = d.feedback[std::uniform_int_distribution<std::size_t>(0, d.n_feedback() - 1)(rng)];
      const auto re = rebuild_bcn_with_new_drug(sys, site);
      const auto& rd = re.diagram;
      for (std::size_t c = 0; ok && c < re.L.cols(); ++c) {
        const std::size_t x = c % sd, rest = c / sd;
        const std::size_t dd = rest % rd.drug_dim(), f = (rest / rd.drug_dim()) % rd.fault_dim(), u = rest / (rd.drug_dim() * rd.fault_dim());
        ok = re.L[c] == oracle::offset_of(oracle::bcn_next(rd, oracle::make_case(rd, u, f, dd, x)));
        if (ok && dd % 2 == 1) ok = re.L[c] == sys.L[((u * d.fault_dim() + f) * d.drug_dim() + dd / 2) * sd + x];
      }
    }
    t.check(ok, text);
  }
  return t;
}

// ---------------------------------------------------------------- attractors

inline LogicalMatrix random_transition(std::mt19937& rng, std::size_t n) {
  // mix of uniform maps and permutations so long cycles appear
  if (std::bernoulli_distribution(0.3)(rng)) {
    std::vector<Index> p(n);
    std::iota(p.begin(), p.end(), 0);
    std::shuffle(p.begin(), p.end(), rng);
    return LogicalMatrix(n, std::move(p));
  }
  return oracle::random_matrix(rng, n, n);
}

inline Tally cycles(unsigned seed, std::size_t per_size) {
  Tally t;
  std::mt19937 rng(seed);
  for (std::size_t N = 1; N <= 10; ++N) {
    const std::size_t n = std::size_t{1} << N;
    for (std::size_t r = 0; r < per_size; ++r) {
      const auto T = random_transition(rng, n);
      std::vector<std::size_t> next(T.columns().begin(), T.columns().end());
      const auto sim = oracle::simulate(next);
      const auto cs = attractor_cycles(T);
      bool ok = std::vector<std::size_t>(sim.lengths.begin(), sim.lengths.end()) == cs.lengths;
      std::size_t states = 0;
      for (const auto& [len, set] : cs.states_per_length) {
        for (auto p : set.positions()) ok = ok && sim.period.count(p - 1) && sim.period.at(p - 1) == len;
        states += set.size();
      }
      ok = ok && states == sim.period.size();
      for (const auto& c : cs.cycles)
        for (std::size_t i = 0; i < c.size(); ++i) ok = ok && T[c[i] - 1] + 1 == c[(i + 1) % c.size()];
      t.check(ok, "cycles N=" + std::to_string(N));
    }
  }
  // trace identity against dense powers
  for (std::size_t r = 0; r < 60; ++r) {
    const std::size_t n = std::size_t{1} << std::uniform_int_distribution<std::size_t>(1, r < 50 ? 6 : 8)(rng);
    const auto A = random_transition(rng, n), B = random_transition(rng, n);
    const std::size_t k = std::uniform_int_distribution<std::size_t>(1, r < 50 ? 8 : 2)(rng);
    t.check(diag_diff_trace(A, B, k) == oracle::dense_diag_diff(oracle::dense(A), oracle::dense(B), k), "trace identity");
  }
  return t;
}

/// B differs from A only away from A's cycles, or anywhere.
inline LogicalMatrix perturb(std::mt19937& rng, const LogicalMatrix& a) {
  const auto cs = attractor_cycles(a);
  std::vector<char> on(a.rows(), 0);
  for (const auto& c : cs.cycles)
    for (auto p : c) on[p - 1] = 1;
  std::vector<Index> cols(a.columns().begin(), a.columns().end());
  const bool transient_only = std::bernoulli_distribution(0.5)(rng);
  std::uniform_int_distribution<std::size_t> pick(0, a.rows() - 1);
  const std::size_t edits = std::uniform_int_distribution<std::size_t>(1, 3)(rng);
  for (std::size_t e = 0; e < edits; ++e) {
    const std::size_t i = pick(rng);
    if (transient_only && on[i]) continue;
    std::size_t target = pick(rng);
    if (transient_only) {
      // keep transients flowing into the same cycle set
      target = cols[pick(rng)];
    }
    cols[i] = static_cast<Index>(target);
  }
  return LogicalMatrix(a.rows(), std::move(cols));
}

inline Tally k_set(unsigned seed, std::size_t pairs) {
  Tally t;
  std::mt19937 rng(seed);
  std::size_t agree_zero = 0;
  for (std::size_t r = 0; r < pairs; ++r) {
    const std::size_t n = std::size_t{1} << std::uniform_int_distribution<std::size_t>(1, 7)(rng);
    const auto A = random_transition(rng, n);
    const auto B = perturb(rng, A);
    const auto probe = compare_transitions(A, B);
    PowerCache pa(A), pb(B);
    bool full = false;
    for (std::size_t k = 1; k <= n && !full; ++k) full = diag_diff_trace(pa, pb, k) != 0;
    agree_zero += !full;
    t.check(probe.differs == full, "k-set restriction, n=" + std::to_string(n));
  }
  // both verdicts must actually occur for the check to mean anything
  t.check(agree_zero > 0 && agree_zero < pairs, "k-set sample covers both verdicts");
  return t;
}

// ---------------------------------------------------------------- intervention

inline Tally intervention(unsigned seed, std::size_t networks) {
  Tally t;
  std::mt19937 rng(seed);
  std::size_t searches = 0;
  for (std::size_t n = 0; n < networks; ++n) {
    auto shape = oracle::random_bm_shape(rng, 7);
    shape.gamma = std::max<std::size_t>(shape.gamma, 1);
    shape.lambda = std::max<std::size_t>(shape.lambda, 1);
    while (shape.alpha + shape.gamma + shape.lambda > 7) --shape.gamma;
    shape.gamma = std::max<std::size_t>(shape.gamma, 1);
    if (shape.alpha + shape.gamma + shape.lambda > 7) shape.alpha = 1;
    while (std::accumulate(shape.level_sizes.begin(), shape.level_sizes.end(), std::size_t{0}) < shape.gamma + shape.lambda)
      shape.level_sizes.push_back(1);
    const auto text = oracle::random_network(rng, shape);
    const auto d = parse_network(text);
    const auto sys = assemble(d);
    const auto us = random_subset(rng, d.input_dim());
    auto restores = [&](const BlockDiagram& dg, std::size_t f, std::size_t drug) {
      for (const auto& u : us.members()) {
        const auto treated = oracle::bm_outputs(dg, oracle::make_case(dg, u.offset(), f, drug));
        const auto healthy = oracle::bm_outputs(dg, oracle::make_case(dg, u.offset(), dg.fault_dim() - 1, dg.drug_dim() - 1));
        if (treated != healthy) return false;
      }
      return true;
    };
    bool ok = true;
    for (std::size_t f = 0; f < d.fault_dim(); ++f) {
      const auto ctx = make_intervention_context(sys.H, DeltaVector(d.fault_dim(), f), us);
      const auto set = drug_set(ctx);
      for (std::size_t dr = 0; dr < d.drug_dim(); ++dr) ok = ok && set.contains(DeltaVector(d.drug_dim(), dr)) == restores(d, f, dr);
    }
    // every site: new drug off reproduces H, on matches the oracle
    for (const auto& site : default_sites(d)) {
      const auto re = rebuild_with_new_drug(sys, site);
      const auto& rd = re.diagram;
      for (std::size_t c = 0; ok && c < re.H.cols(); ++c) {
        const std::size_t dd = c % rd.drug_dim(), f = (c / rd.drug_dim()) % rd.fault_dim(), u = c / (rd.drug_dim() * rd.fault_dim());
        ok = re.H[c] == oracle::offset_of(oracle::bm_outputs(rd, oracle::make_case(rd, u, f, dd)));
        if (ok && dd % 2 == 1) ok = re.H[c] == sys.H[(u * d.fault_dim() + f) * d.drug_dim() + dd / 2];
      }
    }
    // site search against a brute-force scan
    const std::size_t fault = std::uniform_int_distribution<std::size_t>(0, d.fault_dim() - 1)(rng);
    const auto ctx = make_intervention_context(sys.H, DeltaVector(d.fault_dim(), fault), us);
    if (drug_set(ctx).empty()) {
      ++searches;
      const auto res = improve_controllability(sys, ctx);
      std::string expect_site;
      DeltaSet expect_drugs;
      for (const auto& site : default_sites(d)) {
        auto dg = d;
        dg.drugs.push_back({"dx", site.name});
        if (site.kind == TargetSite::Kind::Internal) dg.levels[site.level - 1][site.index - 1].added_drug = d.lambda();
        else dg.outputs[site.index - 1].added_drug = d.lambda();
        DeltaSet found(dg.drug_dim());
        for (std::size_t dr = 0; dr < dg.drug_dim(); ++dr)
          if (restores(dg, fault, dr)) found.insert(DeltaVector(dg.drug_dim(), dr));
        if (!found.empty()) {
          expect_site = site.name;
          expect_drugs = found;
          break;
        }
      }
      ok = ok && res.found == !expect_site.empty();
      if (res.found) ok = ok && res.site.name == expect_site && res.drugs == expect_drugs;
    } else {
      bool threw = false;
      try {
        improve_controllability(sys, ctx);
      } catch (const PreconditionError&) {
        threw = true;
      }
      ok = ok && threw;
    }
    t.check(ok, text);
  }
  t.check(searches > 0, "intervention sample includes site searches");
  return t;
}

// ---------------------------------------------------------------- control soundness

inline Tally control_soundness(unsigned seed, std::size_t networks) {
  Tally t;
  std::mt19937 rng(seed);
  std::size_t positives = 0;
  for (std::size_t n = 0; n < networks; ++n) {
    oracle::Shape s;
    s.alpha = 1;
    s.gamma = 1;
    s.lambda = std::uniform_int_distribution<std::size_t>(1, 2)(rng);
    s.feedback = std::uniform_int_distribution<std::size_t>(2, 5)(rng);
    s.level_sizes = {std::max(s.feedback, s.gamma + s.lambda)};
    s.beta = 0;
    const auto text = oracle::random_network(rng, s);
    const auto d = parse_network(text);
    const auto sys = assemble(d);
    bool ok = true;
    auto attract = [&](std::size_t u, std::size_t f, std::size_t dr) {
      std::vector<std::size_t> next(d.state_dim());
      for (std::size_t x = 0; x < next.size(); ++x)
        next[x] = oracle::offset_of(oracle::bcn_next(d, oracle::make_case(d, u, f, dr, x)));
      return oracle::simulate(next).period;
    };
    for (std::size_t u = 0; u < d.input_dim(); ++u) {
      const auto healthy = attract(u, d.fault_dim() - 1, d.drug_dim() - 1);
      for (std::size_t f = 0; f < d.fault_dim(); ++f) {
        for (std::size_t dr = 0; dr < d.drug_dim(); ++dr) {
          const auto verdict = exists_control_bcn_per_k(sys.L, DeltaVector(d.fault_dim(), f), {DeltaVector(d.input_dim(), u)},
                                                        DeltaVector(d.drug_dim(), dr));
          const bool same = attract(u, f, dr) == healthy;
          positives += !verdict.differs;
          ok = ok && (!verdict.differs) == same;
        }
      }
    }
    t.check(ok, text);
  }
  t.check(positives > 0, "control sample includes controllable cases");
  return t;
}

}  // namespace props
