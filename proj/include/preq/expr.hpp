#pragma once

#include <memory>
#include <string>
#include <string_view>

#include "preq/errors.hpp"
#include "preq/phase_space.hpp"

namespace preq {

enum class VarKind : unsigned char { q, p };
enum class Func : unsigned char { sin, cos, exp, sqrt, ln };

enum class ExprKind : unsigned char {
  constant,   // value
  variable,   // var, index (1-based)
  pi_const,   // the named constant pi
  negate,     // a
  add,        // a, b
  sub,        // a, b
  mul,        // a, b
  div,        // a, b
  pow_int,    // a, exponent (integer, may be negative)
  call,       // func, a
};

struct Expr;
using ExprPtr = std::shared_ptr<const Expr>;

/// Immutable expression node. Subtrees are shared freely; nothing mutates a
/// node after construction, so concurrent reads are safe.
struct Expr {
  ExprKind kind{};
  double value = 0.0;
  VarKind var{};
  int index = 0;
  int exponent = 0;
  Func func{};
  ExprPtr a, b;
};

// ---- raw node constructors (no rewriting; used by the parser) -------------
ExprPtr expr_constant(double value);
ExprPtr expr_variable(VarKind var, int index);
ExprPtr expr_pi();
ExprPtr expr_negate(ExprPtr a);
ExprPtr expr_binary(ExprKind kind, ExprPtr a, ExprPtr b);  // add/sub/mul/div
ExprPtr expr_pow(ExprPtr base, int exponent);
ExprPtr expr_call(Func func, ExprPtr a);

// ---- folding constructors (used by differentiate/simplify and the
//      symbolic builders downstream; fold constants and the 0/1 identities,
//      always by the same arithmetic evaluate() uses) -----------------------
ExprPtr fold_negate(ExprPtr a);
ExprPtr fold_add(ExprPtr a, ExprPtr b);
ExprPtr fold_sub(ExprPtr a, ExprPtr b);
ExprPtr fold_mul(ExprPtr a, ExprPtr b);
ExprPtr fold_div(ExprPtr a, ExprPtr b);
ExprPtr fold_pow(ExprPtr base, int exponent);
ExprPtr fold_call(Func func, ExprPtr a);

bool structurally_equal(const ExprPtr& a, const ExprPtr& b);
bool contains_variable_kind(const ExprPtr& e, VarKind var);
bool is_constant(const ExprPtr& e, double value);

/// A real-valued expression over q1..qn, p1..pn. Immutable.
class Observable {
 public:
  Observable(int dimension, ExprPtr root);

  int dimension() const noexcept { return n_; }
  const ExprPtr& root() const noexcept { return root_; }

  double operator()(const PhasePoint& z) const;

 private:
  int n_;
  ExprPtr root_;
};

/// Parse expression text at dimension n.
///
/// Grammar (documented in docs/expression-grammar.md):
///   expr    = term { ("+" | "-") term } ;
///   term    = factor { ("*" | "/") factor } ;
///   factor  = unary [ "^" factor ] ;          (right-associative)
///   unary   = "-" unary | primary ;           (binds tighter than "^")
///   primary = number | "pi" | variable | function "(" expr ")" | "(" expr ")" ;
/// Variables are q<digits> / p<digits>; functions are sin cos exp sqrt ln.
/// The "^" exponent must fold to an integer constant.
Observable parse_observable(std::string_view text, int n);

/// Canonical fully parenthesized form; constants carry 17 significant digits
/// so parse(to_string(f)) evaluates identically to f.
std::string to_string(const Observable& f);
std::string to_string(const ExprPtr& e);

/// IEEE double evaluation. Division by zero, ln of a non-positive value and
/// sqrt of a negative value throw DomainError naming the subexpression.
double evaluate(const Observable& f, const PhasePoint& z);

/// Exact symbolic partial derivative with respect to q_index or p_index,
/// returned simplified.
Observable differentiate(const Observable& f, VarKind var, int index);

/// Fixed terminating rewrite pass: constant folding plus the 0/1 identities
/// (0*x, x+0, x-0, x^0, x^1, x/1, double negation, x-x). Idempotent;
/// evaluation-equivalent wherever the input is defined.
Observable simplify(const Observable& f);

/// Integer power by repeated multiplication; the one definition shared by
/// evaluation and constant folding.
double pow_by_int(double base, int exponent);

}  // namespace preq
