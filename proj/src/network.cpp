#include "stpfault/network.hpp"

#include <cctype>
#include <functional>
#include <map>
#include <set>

#include "stpfault/errors.hpp"

namespace stpfault {

// ---------------------------------------------------------------- diagram

std::size_t BlockDiagram::node_count() const {
  std::size_t n = 0;
  for (const auto& l : levels) n += l.size();
  return n;
}

namespace {

std::size_t pow_checked(std::size_t base, std::size_t exp) {
  std::size_t r = 1;
  for (std::size_t i = 0; i < exp; ++i) {
    if (r > (std::size_t{1} << 40) / base) throw DimensionError("network too large for structure matrices");
    r *= base;
  }
  return r;
}

}  // namespace

std::size_t BlockDiagram::input_dim() const { return pow_checked(2, alpha()); }
std::size_t BlockDiagram::fault_dim() const { return pow_checked(3, gamma()); }
std::size_t BlockDiagram::drug_dim() const { return pow_checked(2, lambda()); }
std::size_t BlockDiagram::state_dim() const { return pow_checked(2, n_feedback()); }
std::size_t BlockDiagram::output_dim() const { return pow_checked(2, beta()); }
std::size_t BlockDiagram::omega() const { return input_dim() * fault_dim() * drug_dim(); }

bool BlockDiagram::satisfies_block_count() const { return node_count() + beta() == gamma() + lambda() + beta(); }

const SubBlock* BlockDiagram::find_node(std::string_view name) const {
  for (const auto& l : levels) {
    for (const auto& b : l) {
      if (b.name == name) return &b;
    }
  }
  return nullptr;
}

SubBlock* BlockDiagram::find_node(std::string_view name) {
  return const_cast<SubBlock*>(static_cast<const BlockDiagram*>(this)->find_node(name));
}

std::size_t BlockDiagram::state_position(std::string_view name) const {
  for (std::size_t i = 0; i < feedback.size(); ++i) {
    if (feedback[i] == name) return i;
  }
  return npos;
}

std::size_t BlockDiagram::slot_count() const { return alpha() + n_feedback() + node_count(); }

std::size_t BlockDiagram::node_slot(std::size_t level, std::size_t index) const {
  std::size_t s = alpha() + n_feedback();
  for (std::size_t l = 0; l + 1 < level; ++l) s += levels[l].size();
  return s + index - 1;
}

// ---------------------------------------------------------------- encodings

std::size_t encode_bools(std::span<const char> bits) {
  std::size_t off = 0;
  for (char b : bits) off = off * 2 + (b ? 0 : 1);
  return off;
}

std::vector<char> decode_bools(std::size_t offset, std::size_t count) {
  std::vector<char> out(count);
  for (std::size_t i = count; i-- > 0;) {
    out[i] = (offset & 1) ? 0 : 1;
    offset >>= 1;
  }
  return out;
}

std::size_t encode_faults(std::span<const int> values) {
  std::size_t off = 0;
  for (int v : values) off = off * 3 + static_cast<std::size_t>(v);
  return off;
}

std::vector<int> decode_faults(std::size_t offset, std::size_t count) {
  std::vector<int> out(count);
  for (std::size_t i = count; i-- > 0;) {
    out[i] = static_cast<int>(offset % 3);
    offset /= 3;
  }
  return out;
}

bool apply_fault(bool x, int fault) {
  switch (fault) {
    case kStuckAt1:
      return true;
    case kStuckAt0:
      return false;
    default:
      return x;
  }
}

// ---------------------------------------------------------------- lexer

namespace {

struct Tok {
  enum class Type { Ident, Number, Symbol, End };
  Type type = Type::End;
  std::string text;
  std::size_t line = 1;
  std::size_t column = 1;
};

std::vector<Tok> lex(std::string_view src) {
  std::vector<Tok> out;
  std::size_t line = 1;
  std::size_t col = 1;
  std::size_t i = 0;
  auto advance = [&](std::size_t n) {
    for (std::size_t k = 0; k < n; ++k) {
      if (src[i] == '\n') {
        ++line;
        col = 1;
      } else {
        ++col;
      }
      ++i;
    }
  };
  while (i < src.size()) {
    const char c = src[i];
    if (c == ' ' || c == '\t' || c == '\r' || c == '\n') {
      advance(1);
      continue;
    }
    if (c == '#' || (c == '/' && i + 1 < src.size() && src[i + 1] == '/')) {
      while (i < src.size() && src[i] != '\n') advance(1);
      continue;
    }
    Tok t;
    t.line = line;
    t.column = col;
    if (std::isalpha(static_cast<unsigned char>(c)) || c == '_') {
      std::size_t j = i;
      while (j < src.size() && (std::isalnum(static_cast<unsigned char>(src[j])) || src[j] == '_')) ++j;
      t.type = Tok::Type::Ident;
      t.text = std::string(src.substr(i, j - i));
      advance(j - i);
    } else if (std::isdigit(static_cast<unsigned char>(c))) {
      std::size_t j = i;
      while (j < src.size() && std::isdigit(static_cast<unsigned char>(src[j]))) ++j;
      if (j < src.size() && (std::isalpha(static_cast<unsigned char>(src[j])) || src[j] == '_')) {
        throw ParseError("identifiers must not start with a digit", line, col);
      }
      t.type = Tok::Type::Number;
      t.text = std::string(src.substr(i, j - i));
      advance(j - i);
    } else if (std::string_view(";{}=[]&|!()@,").find(c) != std::string_view::npos) {
      t.type = Tok::Type::Symbol;
      t.text = std::string(1, c);
      advance(1);
    } else {
      throw ParseError(std::string("unexpected character '") + c + "'", line, col);
    }
    out.push_back(std::move(t));
  }
  Tok end;
  end.line = line;
  end.column = col;
  out.push_back(end);
  return out;
}

struct PendingAnnotation {
  Annotation::Kind kind;
  std::string id;
  std::size_t line;
  std::size_t column;
};

class Parser {
 public:
  explicit Parser(std::vector<Tok> toks) : toks_(std::move(toks)) {}

  BlockDiagram run() {
    while (peek().type != Tok::Type::End) statement();
    if (d_.levels.empty() && d_.outputs.empty()) {
      throw ParseError("empty network: no levels and no outputs", peek().line, peek().column);
    }
    attach_annotations();
    validate_network(d_);
    return std::move(d_);
  }

 private:
  const Tok& peek() const { return toks_[pos_]; }
  const Tok& take() { return toks_[pos_++]; }
  bool at_symbol(char c) const { return peek().type == Tok::Type::Symbol && peek().text[0] == c; }

  [[noreturn]] void fail(const std::string& what) const {
    const auto& t = peek();
    std::string got = t.type == Tok::Type::End ? "end of input" : "'" + t.text + "'";
    throw ParseError(what + ", got " + got, t.line, t.column);
  }

  void expect(char c) {
    if (!at_symbol(c)) fail(std::string("expected '") + c + "'");
    take();
  }

  std::string ident(const char* what) {
    if (peek().type != Tok::Type::Ident) fail(std::string("expected ") + what);
    return take().text;
  }

  void statement() {
    if (peek().type != Tok::Type::Ident) fail("expected a statement");
    const auto& kw = peek().text;
    if (kw == "inputs") {
      take();
      while (!at_symbol(';')) {
        d_.inputs.push_back(ident("input name"));
        if (at_symbol(',')) take();
      }
      take();
    } else if (kw == "faults" || kw == "drugs") {
      const bool faults = kw == "faults";
      take();
      while (!at_symbol(';')) {
        Declared decl;
        decl.id = ident(faults ? "fault id" : "drug id");
        if (at_symbol('@')) {
          take();
          const auto& t = peek();
          decl.node = ident("node name");
          pending_[decl.node].push_back({faults ? Annotation::Kind::Fault : Annotation::Kind::Drug, decl.id, t.line, t.column});
        }
        (faults ? d_.faults : d_.drugs).push_back(decl);
        if (at_symbol(',')) take();
      }
      take();
    } else if (kw == "level") {
      const auto& lt = take();
      if (peek().type != Tok::Type::Number) fail("expected level number");
      const auto& num = take();
      const auto n = std::stoul(num.text);
      if (n != d_.levels.size() + 1) {
        throw ValidationError(std::to_string(num.line) + ":" + std::to_string(num.column) + ": level " + num.text +
                              " follows level " + std::to_string(d_.levels.size()) + " (levels must be 1, 2, ...)");
      }
      expect('{');
      std::vector<SubBlock> blocks;
      while (!at_symbol('}')) {
        if (peek().type == Tok::Type::End) fail("expected '}'");
        SubBlock b;
        b.line = peek().line;
        b.name = ident("node name");
        expect('=');
        b.expr = expr();
        if (at_symbol('[')) annotation(b.name);
        expect(';');
        blocks.push_back(std::move(b));
      }
      take();
      if (blocks.empty()) {
        throw ValidationError(std::to_string(lt.line) + ":" + std::to_string(lt.column) + ": level " + num.text +
                              " is empty");
      }
      d_.levels.push_back(std::move(blocks));
    } else if (kw == "outputs") {
      take();
      if (at_symbol('{')) {
        take();
        while (!at_symbol('}')) {
          if (peek().type == Tok::Type::End) fail("expected '}'");
          output();
        }
        take();
      } else {
        output();
      }
    } else if (kw == "feedback") {
      take();
      while (!at_symbol(';')) {
        d_.feedback.push_back(ident("state node name"));
        if (at_symbol(',')) take();
      }
      take();
    } else {
      fail("expected inputs, faults, drugs, level, outputs or feedback");
    }
  }

  void output() {
    OutputBlock o;
    o.line = peek().line;
    o.name = ident("output name");
    expect('=');
    o.expr = expr();
    if (at_symbol('[')) {
      const auto& t = peek();
      throw ValidationError(std::to_string(t.line) + ":" + std::to_string(t.column) + ": output '" + o.name +
                            "' cannot carry a fault or drug");
    }
    expect(';');
    d_.outputs.push_back(std::move(o));
  }

  void annotation(const std::string& node) {
    take();
    const auto& t = peek();
    const auto kind = ident("'fault' or 'drug'");
    Annotation::Kind k;
    if (kind == "fault") {
      k = Annotation::Kind::Fault;
    } else if (kind == "drug") {
      k = Annotation::Kind::Drug;
    } else {
      throw ParseError("expected 'fault' or 'drug', got '" + kind + "'", t.line, t.column);
    }
    const auto id = ident("annotation id");
    expect(']');
    pending_[node].push_back({k, id, t.line, t.column});
  }

  Expr expr() {
    Expr lhs = conj();
    while (at_symbol('|')) {
      take();
      lhs = Expr::either(std::move(lhs), conj());
    }
    return lhs;
  }

  Expr conj() {
    Expr lhs = unary();
    while (at_symbol('&')) {
      take();
      lhs = Expr::both(std::move(lhs), unary());
    }
    return lhs;
  }

  Expr unary() {
    if (at_symbol('!')) {
      take();
      return Expr::negate(unary());
    }
    if (at_symbol('(')) {
      take();
      Expr e = expr();
      expect(')');
      return e;
    }
    const auto& t = peek();
    if (t.type == Tok::Type::Number) {
      if (t.text != "0" && t.text != "1") fail("expected 0 or 1");
      take();
      Expr e = Expr::constant(t.text == "1");
      e.line = t.line;
      e.column = t.column;
      return e;
    }
    if (t.type == Tok::Type::Ident) {
      take();
      Expr e = Expr::var(t.text);
      e.line = t.line;
      e.column = t.column;
      return e;
    }
    fail("expected an expression");
  }

  void attach_annotations() {
    std::map<std::string, std::size_t> fault_ids;
    std::map<std::string, std::size_t> drug_ids;
    for (std::size_t i = 0; i < d_.faults.size(); ++i) {
      if (!fault_ids.emplace(d_.faults[i].id, i).second) {
        throw ValidationError("fault id '" + d_.faults[i].id + "' declared twice");
      }
    }
    for (std::size_t i = 0; i < d_.drugs.size(); ++i) {
      if (!drug_ids.emplace(d_.drugs[i].id, i).second) {
        throw ValidationError("drug id '" + d_.drugs[i].id + "' declared twice");
      }
    }
    for (const auto& [node, list] : pending_) {
      SubBlock* b = d_.find_node(node);
      const auto& first = list.front();
      const auto where = std::to_string(first.line) + ":" + std::to_string(first.column) + ": ";
      if (!b) throw ValidationError(where + "annotation targets unknown node '" + node + "'");
      if (list.size() > 1) {
        throw ValidationError(where + "node '" + node + "' carries more than one fault or drug");
      }
      const auto& ids = first.kind == Annotation::Kind::Fault ? fault_ids : drug_ids;
      auto it = ids.find(first.id);
      if (it == ids.end()) {
        throw ValidationError(where + (first.kind == Annotation::Kind::Fault ? "fault '" : "drug '") + first.id +
                              "' is not declared (annotation count does not match the declared " +
                              (first.kind == Annotation::Kind::Fault ? "faults)" : "drugs)"));
      }
      b->annotation = {first.kind, it->second};
      auto& decl = first.kind == Annotation::Kind::Fault ? d_.faults[it->second] : d_.drugs[it->second];
      decl.node = node;
    }
  }

  std::vector<Tok> toks_;
  std::size_t pos_ = 0;
  BlockDiagram d_;
  std::map<std::string, std::vector<PendingAnnotation>> pending_;
};

std::string at(std::size_t line) { return line ? "line " + std::to_string(line) + ": " : std::string(); }

void bind(Expr& e, const std::function<std::size_t(const Expr&)>& resolve) {
  if (e.kind == Expr::Kind::Var) e.slot = resolve(e);
  for (auto& c : e.children) bind(c, resolve);
}

}  // namespace

BlockDiagram parse_network(std::string_view text) { return Parser(lex(text)).run(); }

void validate_network(BlockDiagram& d) {
  if (d.levels.empty() && d.outputs.empty()) throw ValidationError("empty network: no levels and no outputs");
  std::set<std::string> names;
  auto claim = [&](const std::string& n, std::size_t line) {
    if (!names.insert(n).second) throw ValidationError(at(line) + "name '" + n + "' defined more than once");
  };
  for (const auto& u : d.inputs) claim(u, 0);
  for (std::size_t i = 0; i < d.levels.size(); ++i) {
    if (d.levels[i].empty()) throw ValidationError("level " + std::to_string(i + 1) + " is empty");
    for (std::size_t j = 0; j < d.levels[i].size(); ++j) {
      auto& b = d.levels[i][j];
      claim(b.name, b.line);
      b.level = i + 1;
      b.index = j + 1;
      b.feedback = false;
    }
  }
  for (const auto& o : d.outputs) claim(o.name, o.line);

  // annotations: every declared id on exactly one node, at most one per node
  std::vector<std::size_t> fault_use(d.gamma(), 0);
  std::vector<std::size_t> drug_use(d.lambda(), 0);
  for (auto& level : d.levels) {
    for (auto& b : level) {
      if (b.annotation.kind == Annotation::Kind::Fault) {
        if (b.annotation.id >= d.gamma()) throw ValidationError(at(b.line) + "fault index out of range on '" + b.name + "'");
        ++fault_use[b.annotation.id];
        d.faults[b.annotation.id].node = b.name;
      } else if (b.annotation.kind == Annotation::Kind::Drug) {
        if (b.annotation.id >= d.lambda()) throw ValidationError(at(b.line) + "drug index out of range on '" + b.name + "'");
        ++drug_use[b.annotation.id];
        d.drugs[b.annotation.id].node = b.name;
      }
      if (b.added_drug && *b.added_drug >= d.lambda()) throw ValidationError("added drug index out of range");
    }
  }
  for (std::size_t i = 0; i < d.gamma(); ++i) {
    if (fault_use[i] != 1) {
      throw ValidationError("fault '" + d.faults[i].id + "' is attached to " + std::to_string(fault_use[i]) +
                            " nodes (annotation count does not match the declared faults)");
    }
  }
  for (std::size_t i = 0; i < d.lambda(); ++i) {
    // an added drug counts as the attachment of its id
    std::size_t uses = drug_use[i];
    for (const auto& level : d.levels) {
      for (const auto& b : level) uses += b.added_drug == i;
    }
    for (const auto& o : d.outputs) uses += o.added_drug == i;
    if (uses != 1) {
      throw ValidationError("drug '" + d.drugs[i].id + "' is attached to " + std::to_string(uses) +
                            " nodes (annotation count does not match the declared drugs)");
    }
  }

  // feedback nodes
  std::set<std::string> fb;
  for (const auto& n : d.feedback) {
    if (!fb.insert(n).second) throw ValidationError("feedback node '" + n + "' listed twice");
    SubBlock* b = d.find_node(n);
    if (!b) throw ValidationError("feedback name '" + n + "' is not a level node");
    if (b->level != d.depth()) {
      throw ValidationError("feedback node '" + n + "' is on level " + std::to_string(b->level) +
                            "; state nodes must be on the last level " + std::to_string(d.depth()));
    }
    b->feedback = true;
  }

  const bool bcn = d.is_bcn();
  const std::size_t alpha = d.alpha();
  auto input_slot = [&](const std::string& n) -> std::size_t {
    for (std::size_t i = 0; i < alpha; ++i) {
      if (d.inputs[i] == n) return i;
    }
    return BlockDiagram::npos;
  };

  for (auto& level : d.levels) {
    for (auto& b : level) {
      bind(b.expr, [&](const Expr& v) -> std::size_t {
        if (auto s = input_slot(v.name); s != BlockDiagram::npos) return s;
        if (bcn) {
          if (auto p = d.state_position(v.name); p != BlockDiagram::npos) return alpha + p;
        }
        const SubBlock* ref = d.find_node(v.name);
        const auto where = at(v.line ? v.line : b.line);
        if (!ref) throw ValidationError(where + "'" + b.name + "' reads unknown variable '" + v.name + "'");
        if (ref->level >= b.level) {
          throw ValidationError(where + "'" + b.name + "' on level " + std::to_string(b.level) +
                                " reads '" + v.name + "' from level " + std::to_string(ref->level) +
                                " (forward reference)");
        }
        return d.node_slot(ref->level, ref->index);
      });
    }
  }
  for (auto& o : d.outputs) {
    bind(o.expr, [&](const Expr& v) -> std::size_t {
      if (auto s = input_slot(v.name); s != BlockDiagram::npos) return s;
      const auto where = at(v.line ? v.line : o.line);
      if (bcn) {
        if (auto p = d.state_position(v.name); p != BlockDiagram::npos) return alpha + p;
        throw ValidationError(where + "output '" + o.name + "' may read only inputs and state nodes, not '" +
                              v.name + "'");
      }
      const SubBlock* ref = d.find_node(v.name);
      if (!ref) throw ValidationError(where + "output '" + o.name + "' reads unknown variable '" + v.name + "'");
      return d.node_slot(ref->level, ref->index);
    });
  }
}

std::string format_network(const BlockDiagram& d) {
  std::string out;
  auto list = [&](const char* kw, const std::vector<std::string>& xs) {
    if (xs.empty()) return;
    out += kw;
    for (const auto& x : xs) out += " " + x;
    out += ";\n";
  };
  list("inputs", d.inputs);
  auto decls = [&](const char* kw, const std::vector<Declared>& xs) {
    if (xs.empty()) return;
    out += kw;
    for (const auto& x : xs) out += " " + x.id + "@" + x.node;
    out += ";\n";
  };
  decls("faults", d.faults);
  decls("drugs", d.drugs);
  for (std::size_t i = 0; i < d.levels.size(); ++i) {
    out += "level " + std::to_string(i + 1) + " {\n";
    for (const auto& b : d.levels[i]) out += "  " + b.name + " = " + to_string(b.expr) + ";\n";
    out += "}\n";
  }
  for (const auto& o : d.outputs) out += "outputs " + o.name + " = " + to_string(o.expr) + ";\n";
  list("feedback", d.feedback);
  return out;
}

// ---------------------------------------------------------------- evaluation

Scenario decode_scenario(const BlockDiagram& d, std::size_t u, std::size_t f, std::size_t dr, std::size_t x) {
  Scenario s;
  s.u = decode_bools(u, d.alpha());
  s.f = decode_faults(f, d.gamma());
  s.d = decode_bools(dr, d.lambda());
  s.x = decode_bools(x, d.n_feedback());
  return s;
}

bool transform_node_value(const BlockDiagram&, const SubBlock& b, bool value, const Scenario& s) {
  if (b.annotation.kind == Annotation::Kind::Fault) value = apply_fault(value, s.f[b.annotation.id]);
  if (b.annotation.kind == Annotation::Kind::Drug) value = apply_drug(value, s.d[b.annotation.id] != 0);
  if (b.added_drug) value = apply_drug(value, s.d[*b.added_drug] != 0);
  return value;
}

namespace {

void check_scenario(const BlockDiagram& d, const Scenario& s, bool with_state) {
  if (s.u.size() != d.alpha() || s.f.size() != d.gamma() || s.d.size() != d.lambda() ||
      (with_state && s.x.size() != d.n_feedback())) {
    throw DimensionError("scenario does not match the network's inputs, faults, drugs or state");
  }
}

}  // namespace

std::vector<char> evaluate_bm_slots(const BlockDiagram& d, const Scenario& s) {
  check_scenario(d, s, false);
  std::vector<char> vals(d.slot_count(), 0);
  for (std::size_t i = 0; i < d.alpha(); ++i) vals[i] = s.u[i];
  std::size_t slot = d.alpha() + d.n_feedback();
  for (const auto& level : d.levels) {
    for (const auto& b : level) vals[slot++] = transform_node_value(d, b, eval(b.expr, vals), s);
  }
  return vals;
}

std::vector<char> evaluate_bm(const BlockDiagram& d, const Scenario& s) {
  const auto vals = evaluate_bm_slots(d, s);
  std::vector<char> y;
  y.reserve(d.beta());
  for (const auto& o : d.outputs) {
    bool v = eval(o.expr, vals);
    if (o.added_drug) v = apply_drug(v, s.d[*o.added_drug] != 0);
    y.push_back(v);
  }
  return y;
}

std::vector<char> evaluate_bcn_step(const BlockDiagram& d, const Scenario& s) {
  check_scenario(d, s, true);
  std::vector<char> vals(d.slot_count(), 0);
  for (std::size_t i = 0; i < d.alpha(); ++i) vals[i] = s.u[i];
  for (std::size_t k = 0; k < d.n_feedback(); ++k) {
    vals[d.alpha() + k] = transform_node_value(d, *d.find_node(d.feedback[k]), s.x[k] != 0, s);
  }
  std::size_t slot = d.alpha() + d.n_feedback();
  for (const auto& level : d.levels) {
    for (const auto& b : level) {
      bool v = eval(b.expr, vals);
      if (!b.feedback) v = transform_node_value(d, b, v, s);
      vals[slot++] = v;
    }
  }
  std::vector<char> next(d.n_feedback());
  for (std::size_t k = 0; k < d.n_feedback(); ++k) {
    const auto* b = d.find_node(d.feedback[k]);
    next[k] = vals[d.node_slot(b->level, b->index)];
  }
  return next;
}

std::vector<char> evaluate_bcn_output(const BlockDiagram& d, const Scenario& s) {
  if (s.u.size() != d.alpha() || s.x.size() != d.n_feedback()) {
    throw DimensionError("scenario does not match the network's inputs or state");
  }
  std::vector<char> vals(d.slot_count(), 0);
  for (std::size_t i = 0; i < d.alpha(); ++i) vals[i] = s.u[i];
  for (std::size_t k = 0; k < d.n_feedback(); ++k) vals[d.alpha() + k] = s.x[k];
  std::vector<char> y;
  for (const auto& o : d.outputs) y.push_back(eval(o.expr, vals));
  return y;
}

}  // namespace stpfault
