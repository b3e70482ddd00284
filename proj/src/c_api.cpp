#include "stpfault/stpfault.h"

#include <algorithm>
#include <filesystem>
#include <functional>
#include <map>
#include <new>
#include <optional>
#include <string>

#include "stpfault/assembly.hpp"
#include "stpfault/bcn_analysis.hpp"
#include "stpfault/bm_analysis.hpp"
#include "stpfault/bm_intervention.hpp"
#include "stpfault/errors.hpp"
#include "stpfault/matrix_io.hpp"
#include "stpfault/network.hpp"
#include "stpfault/report.hpp"
#include "stpfault/stp.hpp"

using namespace stpfault;

struct sf_system {
  std::string source;
  std::string digest;
  std::optional<AssembledSystem> net;
  std::optional<LogicalMatrix> matrix;
  std::string args_given;
  std::vector<std::string> pins;
};

struct sf_report {
  Json doc;
  std::string text;
  std::string json;
};

namespace {

thread_local std::string g_error;

sf_status status_of(ErrorCode c) {
  switch (c) {
    case ErrorCode::Argument: return SF_ERR_ARGUMENT;
    case ErrorCode::Io: return SF_ERR_IO;
    case ErrorCode::Parse: return SF_ERR_PARSE;
    case ErrorCode::Dimension: return SF_ERR_DIMENSION;
    case ErrorCode::Precondition: return SF_ERR_PRECONDITION;
    case ErrorCode::Unsupported: return SF_ERR_UNSUPPORTED;
    case ErrorCode::Internal: return SF_ERR_INTERNAL;
  }
  return SF_ERR_INTERNAL;
}

sf_status guarded(const std::function<void()>& fn) {
  try {
    fn();
    g_error.clear();
    return SF_OK;
  } catch (const Error& e) {
    g_error = e.what();
    return status_of(e.code());
  } catch (const nlohmann::json::exception& e) {
    g_error = e.what();
    return SF_ERR_ARGUMENT;
  } catch (const std::bad_alloc&) {
    g_error = "out of memory";
    return SF_ERR_INTERNAL;
  } catch (const std::exception& e) {
    g_error = e.what();
    return SF_ERR_INTERNAL;
  }
}

std::string base_name(const char* path) { return std::filesystem::path(path).filename().string(); }

// ---- query helpers ----

std::string vs(const DeltaVector& v) { return vector_string(v); }

DeltaSet set_or_full(const size_t* p, size_t n, std::size_t dim) {
  if (n == 0) return DeltaSet::full(dim);
  DeltaSet s(dim);
  for (size_t i = 0; i < n; ++i) {
    if (p[i] == 0 || p[i] > dim) throw DimensionError("position " + std::to_string(p[i]) + " outside delta" + std::to_string(dim));
    s.insert(delta(dim, p[i]));
  }
  return s;
}

DeltaVector required(size_t pos, std::size_t dim, const char* what) {
  if (pos == 0) throw ArgumentError(std::string("missing ") + what);
  if (pos > dim) throw DimensionError(std::string(what) + " " + std::to_string(pos) + " outside delta" + std::to_string(dim));
  return delta(dim, pos);
}

DeltaVector or_last(size_t pos, std::size_t dim, const char* what) {
  return pos == 0 ? last_delta(dim) : required(pos, dim, what);
}

std::vector<std::string> split_names(const char* s) {
  std::vector<std::string> out;
  if (!s) return out;
  std::string cur;
  for (const char* p = s;; ++p) {
    if (*p == ',' || *p == '\0') {
      while (!cur.empty() && cur.back() == ' ') cur.pop_back();
      if (!cur.empty()) out.push_back(cur);
      cur.clear();
      if (*p == '\0') break;
    } else if (!(*p == ' ' && cur.empty())) {
      cur += *p;
    }
  }
  return out;
}

Json positions_json(const size_t* p, size_t n) {
  Json a = Json::array();
  for (size_t i = 0; i < n; ++i) a.push_back(p[i]);
  return a;
}

Json query_echo(const sf_query& q) {
  Json j = Json::object();
  if (q.n_inputs) j["inputs"] = positions_json(q.inputs, q.n_inputs);
  if (q.n_faults) j["faults"] = positions_json(q.faults, q.n_faults);
  if (q.n_sequence) j["sequence"] = positions_json(q.sequence, q.n_sequence);
  if (q.input) j["input"] = q.input;
  if (q.fault) j["fault"] = q.fault;
  if (q.drug) j["drug"] = q.drug;
  if (q.state) j["state"] = q.state;
  if (q.k) j["k"] = q.k;
  if (q.sites && *q.sites) j["sites"] = q.sites;
  if (q.compare && *q.compare) j["compare"] = base_name(q.compare);
  return j;
}

// ---- system views ----

const AssembledSystem& network(const sf_system& s) {
  if (!s.net) throw ArgumentError("this command needs a network (--network)");
  return *s.net;
}

/// H over (U,F[,D]) for fault and drug queries.
LogicalMatrix output_matrix(const sf_system& s) {
  if (s.net) {
    if (s.net->kind != AssembledSystem::Kind::BM) throw PreconditionError("output fault queries need a Boolean map; use the bcn commands");
    return s.net->H;
  }
  if (!s.matrix->has_args()) throw ArgumentError("matrix has no argument names; give --args");
  return *s.matrix;
}

LogicalMatrix transition_matrix(const sf_system& s) {
  if (s.net) {
    if (s.net->kind != AssembledSystem::Kind::BCN) throw PreconditionError("this command needs a network with feedback");
    return s.net->L;
  }
  if (!s.matrix->has_args()) throw ArgumentError("matrix has no argument names; give --args U:..,F:..,D:..,X:..");
  return *s.matrix;
}

std::vector<std::string> drug_ids(const sf_system& s, std::size_t dim) {
  std::vector<std::string> ids;
  if (s.net && s.net->diagram.drug_dim() == dim) {
    for (const auto& d : s.net->diagram.drugs) ids.push_back(d.id);
    return ids;
  }
  std::size_t n = 0;
  while ((std::size_t{1} << n) < dim) ++n;
  for (std::size_t i = 1; i <= n; ++i) ids.push_back("d" + std::to_string(i));
  return ids;
}

Json matrix_json(const LogicalMatrix& m) {
  Json j = Json::object();
  j["rows"] = m.rows();
  j["cols"] = m.cols();
  if (m.has_args()) j["args"] = format_signature(m.args());
  j["columns"] = format_delta_matrix(m);
  return j;
}

std::string cycle_string(std::size_t dim, const std::vector<std::size_t>& cyc) {
  std::string s = "delta" + std::to_string(dim) + "(";
  for (std::size_t i = 0; i < cyc.size(); ++i) s += (i ? "," : "") + std::to_string(cyc[i]);
  return s + ")";
}

Json cycles_json(const CycleSet& cs, std::size_t dim) {
  Json j = Json::object();
  j["lengths"] = cs.lengths;
  Json per = Json::object();
  for (const auto& [len, states] : cs.states_per_length) per[std::to_string(len)] = states.to_string();
  j["states_per_length"] = per;
  Json cyc = Json::array();
  for (const auto& c : cs.cycles) cyc.push_back(cycle_string(dim, c));
  j["cycles"] = cyc;
  return j;
}

Json probe_json(const TraceProbe& p) {
  Json j = Json::object();
  j["k"] = p.ks;
  j["traces"] = p.traces;
  return j;
}

/// Reorder `m` to the argument order of `target` when both carry the same names.
bool matrices_equal(const LogicalMatrix& m, const LogicalMatrix& target) {
  if (m.has_args() && target.has_args() && m.args() != target.args()) {
    std::vector<std::string> order;
    for (const auto& a : target.args()) order.push_back(a.name);
    try {
      const auto r = reorder_arguments(m, order);
      return r.args() == target.args() && r.rows() == target.rows() && std::ranges::equal(r.columns(), target.columns());
    } catch (const Error&) {
      return false;
    }
  }
  return m.rows() == target.rows() && std::ranges::equal(m.columns(), target.columns());
}

// ---- commands ----

using Command = std::function<Json(sf_system&, const sf_query&)>;

Json cmd_assemble(sf_system& s, const sf_query& q) {
  const auto& sys = network(s);
  const auto& d = sys.diagram;
  Json r = Json::object();
  r["kind"] = sys.kind == AssembledSystem::Kind::BM ? "boolean-map" : "boolean-control-network";
  r["inputs"] = d.inputs;
  Json faults = Json::array(), drugs = Json::array();
  for (const auto& f : d.faults) faults.push_back(f.id + "@" + f.node);
  for (const auto& x : d.drugs) drugs.push_back(x.id + "@" + x.node);
  r["faults"] = faults;
  r["drugs"] = drugs;
  r["levels"] = d.depth();
  r["omega"] = d.omega();
  r["block_count_rule"] = d.satisfies_block_count();
  if (sys.kind == AssembledSystem::Kind::BCN) {
    r["state_order"] = d.feedback;
    r["L"] = matrix_json(sys.L);
  }
  r["H"] = matrix_json(sys.H);
  if (q.compare && *q.compare) {
    const auto other = read_matrix_file(q.compare);
    const auto& mine = sys.kind == AssembledSystem::Kind::BCN ? sys.L : sys.H;
    Json c = Json::object();
    c["matrix"] = sys.kind == AssembledSystem::Kind::BCN ? "L" : "H";
    c["file_digest"] = fnv1a64_hex(read_text_file(q.compare));
    c["equal"] = matrices_equal(mine, other);
    r["compare"] = c;
  }
  return r;
}

FaultQueryContext context_of(const sf_system& s, const sf_query& q) {
  const auto H = output_matrix(s);
  if (!H.has_arg("U") || !H.has_arg("F")) return make_fault_context(H);  // raises the descriptive error
  return make_fault_context(H, set_or_full(q.inputs, q.n_inputs, H.arg_dim("U")),
                            set_or_full(q.faults, q.n_faults, H.arg_dim("F")));
}

Json cmd_detect(sf_system& s, const sf_query& q) {
  if (!q.input && !q.fault) throw ArgumentError("detect needs --input or --fault");
  const auto ctx = context_of(s, q);
  Json r = Json::object();
  if (q.input) {
    const auto u = required(q.input, ctx.input_dim(), "input");
    r["input"] = vs(u);
    r["detectable"] = detectable_faults(ctx, u).to_string();
  }
  if (q.fault) {
    const auto f = required(q.fault, ctx.fault_dim(), "fault");
    r["fault"] = vs(f);
    r["detecting_inputs"] = detecting_inputs(ctx, f).to_string();
    if (q.input) r["detected"] = exists_fault(ctx, required(q.input, ctx.input_dim(), "input"), f);
  }
  return r;
}

Json cmd_unique(sf_system& s, const sf_query& q) {
  const auto ctx = context_of(s, q);
  const auto f = required(q.fault, ctx.fault_dim(), "fault");
  Json r = Json::object();
  r["fault"] = vs(f);
  r["fault_set"] = ctx.faults.to_string();
  r["unique_inputs"] = unique_inputs(ctx, f).to_string();
  if (q.input) r["unique_at_input"] = uniquely_identifies(ctx, required(q.input, ctx.input_dim(), "input"), f);
  const auto g = generalized_unique(ctx, ctx.inputs, f);
  Json gj = Json::object();
  gj["inputs"] = ctx.inputs.to_string();
  gj["common"] = g.common.to_string();
  gj["verdict"] = g.verdict;
  r["over_inputs"] = gj;
  return r;
}

Json cmd_coverage(sf_system& s, const sf_query& q) {
  if (q.n_inputs == 0) throw ArgumentError("coverage needs a test set (--inputs)");
  sf_query all = q;
  all.n_inputs = 0;
  const auto ctx = context_of(s, all);
  const auto ut = set_or_full(q.inputs, q.n_inputs, ctx.input_dim());
  Json r = Json::object();
  r["test_inputs"] = ut.to_string();
  r["coverage"] = fault_coverage(ctx, ut).to_string();
  r["common"] = common_faults(ctx, ut).to_string();
  return r;
}

Json cmd_testset(sf_system& s, const sf_query& q) {
  const auto ctx = context_of(s, q);
  Json r = Json::object();
  r["inputs"] = ctx.inputs.to_string();
  r["faults"] = ctx.faults.to_string();
  r["test_set"] = test_set(ctx).to_string();
  Json per = Json::object();
  for (const auto& f : ctx.faults.members()) {
    if (f != ctx.f0()) per[vs(f)] = detecting_inputs(ctx, f).to_string();
  }
  r["detecting_inputs"] = per;
  return r;
}

Json cmd_equivalence(sf_system& s, const sf_query& q) {
  const auto ctx = context_of(s, q);
  const auto eq = classify_equivalence(ctx, ctx.inputs);
  Json r = Json::object();
  r["inputs"] = ctx.inputs.to_string();
  r["detectable"] = eq.detectable.to_string();
  r["undetectable"] = eq.undetectable.to_string();
  Json cls = Json::array();
  for (const auto& c : eq.classes) cls.push_back(c.to_string());
  r["classes"] = cls;
  return r;
}

Json candidate_json(const ReporterCandidate& c, bool per_input) {
  Json j = Json::object();
  j["node"] = c.name;
  j["level"] = c.level;
  j["index"] = c.index;
  j["detected"] = c.detected.to_string();
  if (per_input) {
    Json p = Json::object();
    for (const auto& [u, set] : c.per_input) p[vs(u)] = set.to_string();
    j["per_input"] = p;
  }
  return j;
}

Json cmd_reporters(sf_system& s, const sf_query& q) {
  const auto& sys = network(s);
  if (sys.kind != AssembledSystem::Kind::BM) throw PreconditionError("reporters needs a Boolean map");
  const auto ctx = make_fault_context(sys.H, set_or_full(q.inputs, q.n_inputs, sys.H.arg_dim("U")));
  std::optional<DeltaSet> fbar;
  if (q.n_faults) fbar = set_or_full(q.faults, q.n_faults, ctx.fault_dim());
  const auto plan = improve_observability(sys, ctx, fbar);
  Json r = Json::object();
  r["inputs"] = ctx.inputs.to_string();
  r["undetectable"] = plan.initial.to_string();
  Json steps = Json::array();
  for (const auto& st : plan.steps) {
    Json j = candidate_json(st.chosen, true);
    Json cands = Json::array();
    for (const auto& c : st.candidates) cands.push_back(candidate_json(c, false));
    j["candidates"] = cands;
    steps.push_back(j);
  }
  r["steps"] = steps;
  r["residual"] = plan.residual.to_string();
  return r;
}

Json cmd_drugs(sf_system& s, const sf_query& q) {
  const auto H = output_matrix(s);
  const auto ctx = make_intervention_context(H, required(q.fault, H.has_arg("F") ? H.arg_dim("F") : 1, "fault"),
                                             set_or_full(q.inputs, q.n_inputs, H.has_arg("U") ? H.arg_dim("U") : 1));
  const auto set = drug_set(ctx);
  const auto ids = drug_ids(s, H.arg_dim("D"));
  Json r = Json::object();
  r["fault"] = vs(ctx.fault);
  r["inputs"] = ctx.inputs.to_string();
  r["drug_set"] = set.to_string();
  Json useful = Json::array();
  for (const auto& d : set.members()) {
    Json j = Json::object();
    j["drug"] = vs(d);
    j["tuple"] = drug_tuple_json(d, ids);
    useful.push_back(j);
  }
  r["useful"] = useful;
  return r;
}

Json cmd_improve_control(sf_system& s, const sf_query& q) {
  const auto& sys = network(s);
  const auto names = split_names(q.sites);
  Json r = Json::object();
  Json tried = Json::array();
  if (sys.kind == AssembledSystem::Kind::BM) {
    const auto ctx = make_intervention_context(sys.H, required(q.fault, sys.H.arg_dim("F"), "fault"),
                                               set_or_full(q.inputs, q.n_inputs, sys.H.arg_dim("U")));
    std::optional<std::vector<TargetSite>> sites;
    if (!names.empty()) {
      sites.emplace();
      for (const auto& n : names) sites->push_back(find_site(sys.diagram, n));
    }
    const auto res = improve_controllability(sys, ctx, sites);
    r["fault"] = vs(ctx.fault);
    r["inputs"] = ctx.inputs.to_string();
    r["new_drug"] = new_drug_id(sys.diagram);
    for (const auto& t : res.tried) {
      Json j = Json::object();
      j["site"] = t.site.name;
      j["drugs"] = t.drugs.to_string();
      tried.push_back(j);
    }
    r["tried"] = tried;
    r["found"] = res.found;
    if (res.found) {
      r["site"] = res.site.name;
      r["drug_set"] = res.drugs.to_string();
    }
    return r;
  }
  const auto f = required(q.fault, sys.L.arg_dim("F"), "fault");
  const auto us = set_or_full(q.inputs, q.n_inputs, sys.L.arg_dim("U"));
  std::optional<std::vector<std::string>> cands;
  if (q.sites) cands = names;
  const auto res = improve_controllability_bcn(sys, f, us, cands);
  r["fault"] = vs(f);
  r["inputs"] = us.to_string();
  r["new_drug"] = new_drug_id(sys.diagram);
  for (const auto& t : res.tried) {
    Json j = Json::object();
    j["site"] = t.site;
    j["drugs"] = t.drugs.to_string();
    tried.push_back(j);
  }
  r["tried"] = tried;
  r["found"] = res.found;
  if (res.found) {
    r["site"] = res.site;
    r["drug_set"] = res.drugs.to_string();
  }
  return r;
}

/// Square transition for attractor and step commands.
LogicalMatrix pinned_transition(const sf_system& s, const sf_query& q, Json& r) {
  if (s.matrix && (!s.matrix->has_args() || !s.matrix->has_arg("U"))) {
    if (!s.matrix->is_square()) throw DimensionError("a raw transition matrix must be square");
    return s.matrix->without_args();
  }
  const auto L = transition_matrix(s);
  const auto u = required(q.input, L.arg_dim("U"), "input");
  const auto f = or_last(q.fault, L.arg_dim("F"), "fault");
  const auto d = or_last(q.drug, L.arg_dim("D"), "drug");
  r["input"] = vs(u);
  r["fault"] = vs(f);
  r["drug"] = vs(d);
  return pin_transition(L, u, f, d);
}

Json cmd_attractors(sf_system& s, const sf_query& q) {
  Json r = Json::object();
  const auto T = pinned_transition(s, q, r);
  r["transition"] = format_delta_matrix(T);
  r["attractors"] = cycles_json(attractor_cycles(T), T.rows());
  r["probe_k"] = probe_set(T, T);
  if (q.compare && *q.compare) {
    const auto other = read_matrix_file(q.compare).without_args();
    if (other.rows() != T.rows() || !other.is_square()) throw DimensionError("compared matrix must be square of the same size");
    const auto p = compare_transitions(T, other);
    Json c = probe_json(p);
    c["other_attractors"] = cycles_json(attractor_cycles(other), other.rows());
    c["differs"] = p.differs;
    if (q.k) c["trace_at_k"] = diag_diff_trace(T, other, q.k);
    r["compare"] = c;
  }
  return r;
}

std::vector<DeltaVector> sequence_of(const sf_query& q, std::size_t dim) {
  std::vector<DeltaVector> seq;
  for (size_t i = 0; i < q.n_sequence; ++i) seq.push_back(required(q.sequence[i], dim, "sequence entry"));
  return seq;
}

Json cmd_bcn_detect(sf_system& s, const sf_query& q) {
  const auto L = transition_matrix(s);
  const std::size_t ud = L.arg_dim("U"), fd = L.arg_dim("F");
  const auto f = required(q.fault, fd, "fault");
  Json r = Json::object();
  r["fault"] = vs(f);
  if (q.n_sequence) {
    const auto v = sequence_detects(L, sequence_of(q, ud), f);
    r["sequence_trace"] = v.trace;
    r["detected"] = v.holds;
    return r;
  }
  const auto us = set_or_full(q.inputs, q.n_inputs, ud);
  if (q.input) {
    const auto u = required(q.input, ud, "input");
    const auto p = exists_fault_bcn(L, u, f);
    r["input"] = vs(u);
    r["probe"] = probe_json(p);
    r["detected"] = p.differs;
    if (q.n_faults) {
      const auto fs = set_or_full(q.faults, q.n_faults, fd);
      r["fault_set"] = fs.to_string();
      r["unique"] = unique_fault_bcn(L, u, f, fs);
    }
  }
  r["inputs"] = us.to_string();
  r["detecting_inputs"] = detecting_inputs_bcn(L, f, us).to_string();
  return r;
}

Json cmd_bcn_control(sf_system& s, const sf_query& q) {
  const auto L = transition_matrix(s);
  const std::size_t ud = L.arg_dim("U");
  const auto f = required(q.fault, L.arg_dim("F"), "fault");
  const auto d = required(q.drug, L.arg_dim("D"), "drug");
  Json r = Json::object();
  r["fault"] = vs(f);
  r["drug"] = vs(d);
  r["tuple"] = drug_tuple_json(d, drug_ids(s, L.arg_dim("D")));
  auto verdict = [&](const std::vector<DeltaVector>& seq) {
    Json j = Json::object();
    const auto v = exists_control_bcn(L, f, seq, d);
    const auto p = exists_control_bcn_per_k(L, f, seq, d);
    j["trace"] = v.trace;
    j["controlled"] = v.holds;
    j["per_k"] = probe_json(p);
    j["controlled_per_k"] = !p.differs;
    return j;
  };
  if (q.n_sequence) {
    r["sequence"] = verdict(sequence_of(q, ud));
    return r;
  }
  const auto us = q.input ? DeltaSet(ud, {q.input}) : set_or_full(q.inputs, q.n_inputs, ud);
  if (q.input && q.input > ud) throw DimensionError("input outside delta" + std::to_string(ud));
  Json per = Json::object();
  bool all = true, all_k = true;
  for (const auto& u : us.members()) {
    auto j = verdict({u});
    all = all && j["controlled"].get<bool>();
    all_k = all_k && j["controlled_per_k"].get<bool>();
    per[vs(u)] = j;
  }
  r["per_input"] = per;
  r["controlled"] = all;
  r["controlled_per_k"] = all_k;
  return r;
}

Json cmd_step(sf_system& s, const sf_query& q) {
  Json r = Json::object();
  if (s.net && s.net->kind == AssembledSystem::Kind::BM) {
    const auto& H = s.net->H;
    const auto u = required(q.input, H.arg_dim("U"), "input");
    const auto f = or_last(q.fault, H.arg_dim("F"), "fault");
    const auto d = or_last(q.drug, H.arg_dim("D"), "drug");
    r["input"] = vs(u);
    r["fault"] = vs(f);
    r["drug"] = vs(d);
    const auto y = evaluate(H, {{"U", u}, {"F", f}, {"D", d}});
    r["output"] = vs(y);
    Json bits = Json::object();
    const auto& dg = s.net->diagram;
    const auto vals = decode_bools(y.offset(), dg.beta());
    for (std::size_t i = 0; i < dg.beta(); ++i) bits[dg.outputs[i].name] = vals[i] ? 1 : 0;
    r["values"] = bits;
    return r;
  }
  const auto T = pinned_transition(s, q, r);
  const auto x = required(q.state, T.rows(), "state");
  const auto next = T.apply(x);
  r["state"] = vs(x);
  r["next"] = vs(next);
  if (s.net) {
    const auto& dg = s.net->diagram;
    Json bits = Json::object();
    const auto vals = decode_bools(next.offset(), dg.n_feedback());
    for (std::size_t i = 0; i < dg.n_feedback(); ++i) bits[dg.feedback[i]] = vals[i] ? 1 : 0;
    r["values"] = bits;
  }
  return r;
}

const std::map<std::string, Command>& commands() {
  static const std::map<std::string, Command> table{
      {"assemble", cmd_assemble},       {"detect", cmd_detect},
      {"unique", cmd_unique},           {"coverage", cmd_coverage},
      {"testset", cmd_testset},         {"equivalence", cmd_equivalence},
      {"reporters", cmd_reporters},     {"drugs", cmd_drugs},
      {"improve-control", cmd_improve_control}, {"attractors", cmd_attractors},
      {"bcn-detect", cmd_bcn_detect},   {"bcn-control", cmd_bcn_control},
      {"step", cmd_step},
  };
  return table;
}

sf_status run_command(sf_system* sys, const std::string& name, const sf_query* q, sf_report** out) {
  return guarded([&] {
    if (!sys || !out) throw ArgumentError("null argument");
    *out = nullptr;
    sf_query empty;
    sf_query_init(&empty);
    const sf_query& query = q ? *q : empty;
    const auto it = commands().find(name);
    if (it == commands().end()) throw ArgumentError("unknown command '" + name + "'");
    Json doc = Json::object();
    doc["command"] = name;
    doc["source"] = sys->source;
    doc["input_digest"] = sys->digest;
    if (!sys->args_given.empty()) doc["args"] = sys->args_given;
    if (!sys->pins.empty()) doc["pins"] = sys->pins;
    doc["query"] = query_echo(query);
    doc["result"] = it->second(*sys, query);
    *out = new sf_report{std::move(doc), {}, {}};
  });
}

}  // namespace

extern "C" {

SF_API const char* sf_version(void) { return "1.0.0"; }

SF_API const char* sf_last_error(void) { return g_error.c_str(); }

SF_API const char* sf_status_name(sf_status s) {
  switch (s) {
    case SF_OK: return "ok";
    case SF_ERR_ARGUMENT: return "argument";
    case SF_ERR_IO: return "io";
    case SF_ERR_PARSE: return "parse";
    case SF_ERR_DIMENSION: return "dimension";
    case SF_ERR_PRECONDITION: return "precondition";
    case SF_ERR_UNSUPPORTED: return "unsupported";
    case SF_ERR_INTERNAL: return "internal";
  }
  return "unknown";
}

SF_API void sf_query_init(sf_query* q) {
  if (q) *q = sf_query{};
}

SF_API sf_status sf_system_load_network(const char* path, sf_system** out) {
  return guarded([&] {
    if (!path || !out) throw ArgumentError("null argument");
    *out = nullptr;
    const auto text = read_text_file(path);
    auto sys = std::make_unique<sf_system>();
    sys->source = base_name(path);
    sys->digest = fnv1a64_hex(text);
    sys->net = assemble(parse_network(text));
    *out = sys.release();
  });
}

SF_API sf_status sf_system_parse_network(const char* text, sf_system** out) {
  return guarded([&] {
    if (!text || !out) throw ArgumentError("null argument");
    *out = nullptr;
    auto sys = std::make_unique<sf_system>();
    sys->source = "<text>";
    sys->digest = fnv1a64_hex(text);
    sys->net = assemble(parse_network(text));
    *out = sys.release();
  });
}

SF_API sf_status sf_system_load_matrix(const char* path, sf_system** out) {
  return guarded([&] {
    if (!path || !out) throw ArgumentError("null argument");
    *out = nullptr;
    const auto text = read_text_file(path);
    auto sys = std::make_unique<sf_system>();
    sys->source = base_name(path);
    sys->digest = fnv1a64_hex(text);
    sys->matrix = parse_matrix(text);
    *out = sys.release();
  });
}

SF_API sf_status sf_system_set_args(sf_system* sys, const char* signature) {
  return guarded([&] {
    if (!sys || !signature) throw ArgumentError("null argument");
    if (!sys->matrix) throw ArgumentError("argument names apply to loaded matrices only");
    if (!sys->pins.empty()) throw ArgumentError("set argument names before pinning");
    sys->matrix = sys->matrix->with_args(parse_signature(signature));
    sys->args_given = format_signature(sys->matrix->args());
  });
}

SF_API sf_status sf_system_pin(sf_system* sys, const char* name, size_t position) {
  return guarded([&] {
    if (!sys || !name) throw ArgumentError("null argument");
    if (!sys->matrix) throw ArgumentError("pinning applies to loaded matrices only");
    if (!sys->matrix->has_arg(name)) throw ArgumentError(std::string("matrix has no argument '") + name + "'");
    const auto dim = sys->matrix->arg_dim(name);
    sys->matrix = pin_argument(*sys->matrix, name, required(position, dim, name));
    sys->pins.push_back(std::string(name) + "=" + std::to_string(position));
  });
}

SF_API void sf_system_free(sf_system* sys) { delete sys; }

#define SF_COMMAND(fn, name) \
  SF_API sf_status fn(sf_system* sys, const sf_query* q, sf_report** out) { return run_command(sys, name, q, out); }

SF_COMMAND(sf_assemble, "assemble")
SF_COMMAND(sf_detect, "detect")
SF_COMMAND(sf_unique, "unique")
SF_COMMAND(sf_coverage, "coverage")
SF_COMMAND(sf_testset, "testset")
SF_COMMAND(sf_equivalence, "equivalence")
SF_COMMAND(sf_reporters, "reporters")
SF_COMMAND(sf_drugs, "drugs")
SF_COMMAND(sf_improve_control, "improve-control")
SF_COMMAND(sf_attractors, "attractors")
SF_COMMAND(sf_bcn_detect, "bcn-detect")
SF_COMMAND(sf_bcn_control, "bcn-control")
SF_COMMAND(sf_step, "step")

#undef SF_COMMAND

SF_API sf_status sf_run(sf_system* sys, const char* command, const sf_query* q, sf_report** out) {
  if (!command) {
    g_error = "null command";
    return SF_ERR_ARGUMENT;
  }
  return run_command(sys, command, q, out);
}

SF_API sf_status sf_compare_matrices(const char* path_a, const char* path_b, int* equal) {
  return guarded([&] {
    if (!path_a || !path_b || !equal) throw ArgumentError("null argument");
    *equal = matrices_equal(read_matrix_file(path_a), read_matrix_file(path_b)) ? 1 : 0;
  });
}

SF_API const char* sf_report_render(sf_report* rep, sf_format format) {
  const char* result = nullptr;
  guarded([&] {
    if (!rep) throw ArgumentError("null report");
    if (format == SF_FORMAT_JSON) {
      if (rep->json.empty()) rep->json = render_json(rep->doc);
      result = rep->json.c_str();
    } else {
      if (rep->text.empty()) rep->text = render_text(rep->doc);
      result = rep->text.c_str();
    }
  });
  return result;
}

namespace {

const Json& at_pointer(const sf_report* rep, const char* pointer) {
  if (!rep || !pointer) throw ArgumentError("null argument");
  const Json::json_pointer p(pointer);
  if (!rep->doc.contains(p)) throw ArgumentError(std::string("report has no entry ") + pointer);
  return rep->doc.at(p);
}

}  // namespace

SF_API sf_status sf_report_get_bool(const sf_report* rep, const char* pointer, int* out) {
  return guarded([&] {
    const auto& v = at_pointer(rep, pointer);
    if (!out || !v.is_boolean()) throw ArgumentError(std::string(pointer) + " is not a boolean");
    *out = v.get<bool>() ? 1 : 0;
  });
}

SF_API sf_status sf_report_get_size(const sf_report* rep, const char* pointer, size_t* out) {
  return guarded([&] {
    const auto& v = at_pointer(rep, pointer);
    if (!out || !v.is_number_unsigned()) throw ArgumentError(std::string(pointer) + " is not a count");
    *out = v.get<size_t>();
  });
}

SF_API sf_status sf_report_get_string(const sf_report* rep, const char* pointer, const char** out) {
  return guarded([&] {
    const auto& v = at_pointer(rep, pointer);
    if (!out || !v.is_string()) throw ArgumentError(std::string(pointer) + " is not a string");
    *out = v.get_ref<const std::string&>().c_str();
  });
}

SF_API sf_status sf_report_get_set(const sf_report* rep, const char* pointer, size_t* positions, size_t cap,
                                   size_t* count) {
  return guarded([&] {
    const auto& v = at_pointer(rep, pointer);
    if (!count || !v.is_string()) throw ArgumentError(std::string(pointer) + " is not a set");
    const auto [dim, pos] = parse_rendered_set(v.get_ref<const std::string&>());
    *count = pos.size();
    for (size_t i = 0; i < pos.size() && i < cap && positions; ++i) positions[i] = pos[i];
  });
}

SF_API void sf_report_free(sf_report* rep) { delete rep; }

}  // extern "C"
