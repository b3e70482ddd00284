#pragma once

#include <cstddef>
#include <memory>
#include <set>
#include <span>
#include <string>
#include <vector>

namespace stpfault {

/// Boolean expression tree over named variables. Variables are bound to
/// value slots once the enclosing network has been validated.
struct Expr {
  enum class Kind { Const, Var, Not, And, Or };

  Kind kind = Kind::Const;
  bool value = false;
  std::string name;
  std::size_t slot = 0;
  std::vector<Expr> children;
  std::size_t line = 0;
  std::size_t column = 0;

  static Expr constant(bool v);
  static Expr var(std::string name);
  static Expr negate(Expr e);
  static Expr both(Expr a, Expr b);
  static Expr either(Expr a, Expr b);
};

/// Evaluate with every Var read from values[slot].
bool eval(const Expr& e, std::span<const char> values);

void collect_vars(const Expr& e, std::set<std::string>& out);

/// Operators ! & | with minimal parentheses.
std::string to_string(const Expr& e);

}  // namespace stpfault
