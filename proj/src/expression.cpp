#include "stpfault/expression.hpp"

namespace stpfault {

Expr Expr::constant(bool v) {
  Expr e;
  e.kind = Kind::Const;
  e.value = v;
  return e;
}

Expr Expr::var(std::string name) {
  Expr e;
  e.kind = Kind::Var;
  e.name = std::move(name);
  return e;
}

Expr Expr::negate(Expr a) {
  Expr e;
  e.kind = Kind::Not;
  e.children.push_back(std::move(a));
  return e;
}

Expr Expr::both(Expr a, Expr b) {
  Expr e;
  e.kind = Kind::And;
  e.children.push_back(std::move(a));
  e.children.push_back(std::move(b));
  return e;
}

Expr Expr::either(Expr a, Expr b) {
  Expr e;
  e.kind = Kind::Or;
  e.children.push_back(std::move(a));
  e.children.push_back(std::move(b));
  return e;
}

bool eval(const Expr& e, std::span<const char> values) {
  switch (e.kind) {
    case Expr::Kind::Const:
      return e.value;
    case Expr::Kind::Var:
      return values[e.slot] != 0;
    case Expr::Kind::Not:
      return !eval(e.children[0], values);
    case Expr::Kind::And:
      return eval(e.children[0], values) && eval(e.children[1], values);
    case Expr::Kind::Or:
      return eval(e.children[0], values) || eval(e.children[1], values);
  }
  return false;
}

void collect_vars(const Expr& e, std::set<std::string>& out) {
  if (e.kind == Expr::Kind::Var) out.insert(e.name);
  for (const auto& c : e.children) collect_vars(c, out);
}

namespace {

int precedence(Expr::Kind k) {
  switch (k) {
    case Expr::Kind::Or:
      return 1;
    case Expr::Kind::And:
      return 2;
    case Expr::Kind::Not:
      return 3;
    default:
      return 4;
  }
}

std::string wrap(const Expr& child, int parent) {
  auto s = to_string(child);
  return precedence(child.kind) < parent ? "(" + s + ")" : s;
}

}  // namespace

std::string to_string(const Expr& e) {
  switch (e.kind) {
    case Expr::Kind::Const:
      return e.value ? "1" : "0";
    case Expr::Kind::Var:
      return e.name;
    case Expr::Kind::Not:
      return "!" + wrap(e.children[0], 3);
    case Expr::Kind::And:
      return wrap(e.children[0], 2) + " & " + wrap(e.children[1], 2);
    case Expr::Kind::Or:
      return wrap(e.children[0], 1) + " | " + wrap(e.children[1], 1);
  }
  return {};
}

}  // namespace stpfault
