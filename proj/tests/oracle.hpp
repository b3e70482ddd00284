#pragma once
// Reference implementations used only by tests. Nothing here calls the
// library's evaluators or STP kernels.

#include <algorithm>
#include <map>
#include <numeric>
#include <random>
#include <set>
#include <stdexcept>
#include <string>
#include <vector>

#include "stpfault/logical_matrix.hpp"
#include "stpfault/network.hpp"

namespace oracle {

using stpfault::BlockDiagram;
using stpfault::Expr;
using stpfault::LogicalMatrix;

// ---------------------------------------------------------------- dense algebra

using Dense = std::vector<std::vector<int>>;  // [row][col]

inline Dense zeros(std::size_t r, std::size_t c) { return Dense(r, std::vector<int>(c, 0)); }

inline Dense identity(std::size_t n) {
  auto m = zeros(n, n);
  for (std::size_t i = 0; i < n; ++i) m[i][i] = 1;
  return m;
}

inline Dense dense(const LogicalMatrix& m) {
  auto d = zeros(m.rows(), m.cols());
  for (std::size_t c = 0; c < m.cols(); ++c) d[m[c]][c] = 1;
  return d;
}

inline Dense dense_vector(std::size_t dim, std::size_t pos1) {
  auto d = zeros(dim, 1);
  d[pos1 - 1][0] = 1;
  return d;
}

inline Dense kron(const Dense& a, const Dense& b) {
  const std::size_t ar = a.size(), ac = a[0].size(), br = b.size(), bc = b[0].size();
  auto out = zeros(ar * br, ac * bc);
  for (std::size_t i = 0; i < ar; ++i)
    for (std::size_t j = 0; j < ac; ++j)
      if (a[i][j])
        for (std::size_t k = 0; k < br; ++k)
          for (std::size_t l = 0; l < bc; ++l) out[i * br + k][j * bc + l] = a[i][j] * b[k][l];
  return out;
}

inline Dense mul(const Dense& a, const Dense& b) {
  if (a[0].size() != b.size()) throw std::logic_error("dense mul: inner dimensions differ");
  auto out = zeros(a.size(), b[0].size());
  for (std::size_t i = 0; i < a.size(); ++i)
    for (std::size_t k = 0; k < b.size(); ++k)
      if (a[i][k])
        for (std::size_t j = 0; j < b[0].size(); ++j) out[i][j] += a[i][k] * b[k][j];
  return out;
}

/// Textbook STP: (A ⊗ I_{t/n})(B ⊗ I_{t/p}), t = lcm(n, p).
inline Dense stp(const Dense& a, const Dense& b) {
  const std::size_t n = a[0].size(), p = b.size();
  const std::size_t t = std::lcm(n, p);
  return mul(kron(a, identity(t / n)), kron(b, identity(t / p)));
}

/// Column positions (0-based) of a one-hot dense matrix; throws if not one-hot.
inline std::vector<std::size_t> one_hot_columns(const Dense& d) {
  std::vector<std::size_t> cols(d[0].size());
  for (std::size_t c = 0; c < d[0].size(); ++c) {
    int ones = 0;
    for (std::size_t r = 0; r < d.size(); ++r) {
      if (d[r][c] == 1) {
        ++ones;
        cols[c] = r;
      } else if (d[r][c] != 0) {
        throw std::logic_error("entry outside {0,1}");
      }
    }
    if (ones != 1) throw std::logic_error("column is not one-hot");
  }
  return cols;
}

inline bool same(const LogicalMatrix& m, const Dense& d) {
  if (m.rows() != d.size() || m.cols() != d[0].size()) return false;
  const auto cols = one_hot_columns(d);
  for (std::size_t c = 0; c < m.cols(); ++c)
    if (m[c] != cols[c]) return false;
  return true;
}

/// Diagonal symmetric difference of A^k and B^k, densely.
inline std::size_t dense_diag_diff(const Dense& a, const Dense& b, std::size_t k) {
  Dense pa = identity(a.size()), pb = identity(b.size());
  for (std::size_t i = 0; i < k; ++i) {
    pa = mul(pa, a);
    pb = mul(pb, b);
  }
  std::size_t n = 0;
  for (std::size_t i = 0; i < a.size(); ++i) n += (pa[i][i] != 0) != (pb[i][i] != 0);
  return n;
}

inline LogicalMatrix random_matrix(std::mt19937& rng, std::size_t rows, std::size_t cols) {
  std::uniform_int_distribution<std::size_t> pick(0, rows - 1);
  std::vector<stpfault::Index> c(cols);
  for (auto& x : c) x = static_cast<stpfault::Index>(pick(rng));
  return LogicalMatrix(rows, std::move(c));
}

// ---------------------------------------------------------------- encodings

/// Booleans of a product vector: value 1 <-> offset bit 0, first variable most significant.
inline std::vector<bool> bits_of(std::size_t offset, std::size_t n) {
  std::vector<bool> out(n);
  for (std::size_t i = 0; i < n; ++i) out[i] = ((offset >> (n - 1 - i)) & 1) == 0;
  return out;
}

inline std::size_t offset_of(const std::vector<bool>& v) {
  std::size_t o = 0;
  for (bool b : v) o = o * 2 + (b ? 0 : 1);
  return o;
}

/// Fault digits: 0 stuck-at-1, 1 stuck-at-0, 2 no fault.
inline std::vector<int> fault_digits(std::size_t offset, std::size_t n) {
  std::vector<int> out(n);
  for (std::size_t i = n; i-- > 0;) {
    out[i] = static_cast<int>(offset % 3);
    offset /= 3;
  }
  return out;
}

// ---------------------------------------------------------------- network semantics by name

struct Case {
  std::vector<bool> u;
  std::vector<int> f;
  std::vector<bool> d;
  std::vector<bool> x;  // previous state, feedback order
};

inline bool eval_by_name(const Expr& e, const std::map<std::string, bool>& env) {
  switch (e.kind) {
    case Expr::Kind::Const: return e.value;
    case Expr::Kind::Var: return env.at(e.name);
    case Expr::Kind::Not: return !eval_by_name(e.children.at(0), env);
    case Expr::Kind::And: return eval_by_name(e.children.at(0), env) && eval_by_name(e.children.at(1), env);
    case Expr::Kind::Or: return eval_by_name(e.children.at(0), env) || eval_by_name(e.children.at(1), env);
  }
  throw std::logic_error("bad expression");
}

/// A node's value after its fault or drug, then any added drug.
inline bool transformed(const BlockDiagram& d, const stpfault::SubBlock& b, bool v, const Case& c) {
  using K = stpfault::Annotation::Kind;
  if (b.annotation.kind == K::Fault) {
    const int f = c.f.at(b.annotation.id);
    if (f == 0) v = true;
    if (f == 1) v = false;
  } else if (b.annotation.kind == K::Drug) {
    if (c.d.at(b.annotation.id)) v = false;
  }
  if (b.added_drug && c.d.at(*b.added_drug)) v = false;
  (void)d;
  return v;
}

inline bool is_feedback(const BlockDiagram& d, const std::string& name) {
  return std::find(d.feedback.begin(), d.feedback.end(), name) != d.feedback.end();
}

/// Environment after evaluating every level node. For BCNs, state names are bound
/// to the previous state read through the node's transform, and feedback nodes
/// keep their raw computed value.
inline std::map<std::string, bool> settle(const BlockDiagram& d, const Case& c) {
  std::map<std::string, bool> env;
  for (std::size_t i = 0; i < d.inputs.size(); ++i) env[d.inputs[i]] = c.u.at(i);
  std::map<std::string, bool> state_read;
  for (std::size_t k = 0; k < d.feedback.size(); ++k) {
    const auto* b = d.find_node(d.feedback[k]);
    state_read[d.feedback[k]] = transformed(d, *b, c.x.at(k), c);
  }
  for (const auto& level : d.levels) {
    // a level reads the state (as read) and earlier levels
    std::map<std::string, bool> view = env;
    for (const auto& [n, v] : state_read) view[n] = v;
    std::map<std::string, bool> produced;
    for (const auto& b : level) {
      const bool raw = eval_by_name(b.expr, view);
      produced[b.name] = is_feedback(d, b.name) ? raw : transformed(d, b, raw, c);
    }
    for (const auto& [n, v] : produced) env[n] = v;
  }
  return env;
}

inline std::vector<bool> bm_outputs(const BlockDiagram& d, const Case& c) {
  const auto env = settle(d, c);
  std::vector<bool> y;
  for (const auto& o : d.outputs) {
    bool v = eval_by_name(o.expr, env);
    if (o.added_drug && c.d.at(*o.added_drug)) v = false;
    y.push_back(v);
  }
  return y;
}

inline std::vector<bool> bcn_next(const BlockDiagram& d, const Case& c) {
  const auto env = settle(d, c);
  std::vector<bool> x;
  for (const auto& n : d.feedback) x.push_back(env.at(n));
  return x;
}

/// BCN outputs read the inputs and the stored (raw) state.
inline std::vector<bool> bcn_outputs(const BlockDiagram& d, const Case& c) {
  std::map<std::string, bool> env;
  for (std::size_t i = 0; i < d.inputs.size(); ++i) env[d.inputs[i]] = c.u.at(i);
  for (std::size_t k = 0; k < d.feedback.size(); ++k) env[d.feedback[k]] = c.x.at(k);
  std::vector<bool> y;
  for (const auto& o : d.outputs) y.push_back(eval_by_name(o.expr, env));
  return y;
}

inline Case make_case(const BlockDiagram& d, std::size_t u, std::size_t f, std::size_t dr, std::size_t x = 0) {
  return {bits_of(u, d.inputs.size()), fault_digits(f, d.faults.size()), bits_of(dr, d.drugs.size()),
          bits_of(x, d.feedback.size())};
}

// ---------------------------------------------------------------- attractors by simulation

struct Simulated {
  std::set<std::size_t> lengths;
  std::map<std::size_t, std::size_t> period;  // state -> cycle length (cycle states only)
};

/// Iterate every initial state until a state repeats.
inline Simulated simulate(const std::vector<std::size_t>& next) {
  Simulated s;
  for (std::size_t start = 0; start < next.size(); ++start) {
    std::map<std::size_t, std::size_t> first_seen;
    std::size_t x = start, t = 0;
    while (!first_seen.count(x)) {
      first_seen[x] = t++;
      x = next[x];
    }
    const std::size_t len = t - first_seen[x];
    s.lengths.insert(len);
    std::size_t y = x;
    for (std::size_t i = 0; i < len; ++i) {
      s.period[y] = len;
      y = next[y];
    }
  }
  return s;
}

// ---------------------------------------------------------------- random networks

struct Shape {
  std::size_t alpha = 2, gamma = 1, lambda = 1;
  std::vector<std::size_t> level_sizes{2, 2};
  std::size_t beta = 1;
  std::size_t feedback = 0;  // state nodes, taken from the last level
};

inline std::string random_expr(std::mt19937& rng, const std::vector<std::string>& vars, int depth) {
  std::uniform_int_distribution<int> op(0, depth > 0 ? 5 : 1);
  std::uniform_int_distribution<std::size_t> pick(0, vars.size() - 1);
  switch (op(rng)) {
    case 0:
    case 1: return vars[pick(rng)];
    case 2: return "!" + random_expr(rng, vars, depth - 1);
    case 3: return "(" + random_expr(rng, vars, depth - 1) + " & " + random_expr(rng, vars, depth - 1) + ")";
    case 4: return "(" + random_expr(rng, vars, depth - 1) + " | " + random_expr(rng, vars, depth - 1) + ")";
    default: return std::uniform_int_distribution<int>(0, 7)(rng) == 0 ? "1" : "!" + vars[pick(rng)];
  }
}

/// DSL text for a random network of the given shape. Faults and drugs sit on distinct nodes.
inline std::string random_network(std::mt19937& rng, const Shape& s) {
  std::string t = "inputs";
  std::vector<std::string> inputs;
  for (std::size_t i = 1; i <= s.alpha; ++i) inputs.push_back("u" + std::to_string(i));
  for (const auto& u : inputs) t += " " + u;
  t += ";\n";

  std::vector<std::vector<std::string>> names;
  std::vector<std::string> all_nodes;
  for (std::size_t l = 0; l < s.level_sizes.size(); ++l) {
    names.emplace_back();
    for (std::size_t j = 0; j < s.level_sizes[l]; ++j) {
      names.back().push_back("n" + std::to_string(l + 1) + "_" + std::to_string(j + 1));
      all_nodes.push_back(names.back().back());
    }
  }
  if (all_nodes.size() < s.gamma + s.lambda) throw std::logic_error("shape has too few nodes for its annotations");
  std::vector<std::string> shuffled = all_nodes;
  std::shuffle(shuffled.begin(), shuffled.end(), rng);
  std::map<std::string, std::string> note;
  if (s.gamma) {
    t += "faults";
    for (std::size_t i = 0; i < s.gamma; ++i) {
      t += " f" + std::to_string(i + 1) + "@" + shuffled[i];
      note[shuffled[i]] = "f";
    }
    t += ";\n";
  }
  if (s.lambda) {
    t += "drugs";
    for (std::size_t i = 0; i < s.lambda; ++i) {
      t += " d" + std::to_string(i + 1) + "@" + shuffled[s.gamma + i];
      note[shuffled[s.gamma + i]] = "d";
    }
    t += ";\n";
  }

  std::vector<std::string> state;
  if (s.feedback) state.assign(names.back().begin(), names.back().begin() + static_cast<long>(s.feedback));
  std::vector<std::string> visible = inputs;
  for (const auto& n : state) visible.push_back(n);
  for (std::size_t l = 0; l < names.size(); ++l) {
    t += "level " + std::to_string(l + 1) + " {\n";
    for (const auto& n : names[l]) t += "  " + n + " = " + random_expr(rng, visible, 2) + ";\n";
    t += "}\n";
    for (const auto& n : names[l]) {
      if (std::find(visible.begin(), visible.end(), n) == visible.end()) visible.push_back(n);
    }
  }
  if (s.beta) {
    std::vector<std::string> out_vars = s.feedback ? inputs : visible;
    if (s.feedback) out_vars.insert(out_vars.end(), state.begin(), state.end());
    t += "outputs {\n";
    for (std::size_t j = 1; j <= s.beta; ++j) t += "  y" + std::to_string(j) + " = " + random_expr(rng, out_vars, 2) + ";\n";
    t += "}\n";
  }
  if (s.feedback) {
    t += "feedback";
    for (const auto& n : state) t += " " + n;
    t += ";\n";
  }
  return t;
}

/// Random BM shape with alpha + gamma + lambda <= budget.
inline Shape random_bm_shape(std::mt19937& rng, std::size_t budget) {
  std::uniform_int_distribution<std::size_t> a(1, 3), g(0, 3), l(0, 2), lv(1, 3), sz(1, 3), b(1, 3);
  Shape s;
  do {
    s.alpha = a(rng);
    s.gamma = g(rng);
    s.lambda = l(rng);
  } while (s.alpha + s.gamma + s.lambda > budget);
  do {
    s.level_sizes.assign(lv(rng), 0);
    for (auto& x : s.level_sizes) x = sz(rng);
  } while (std::accumulate(s.level_sizes.begin(), s.level_sizes.end(), std::size_t{0}) < s.gamma + s.lambda);
  s.beta = b(rng);
  return s;
}

}  // namespace oracle
