#include "preq/expr.hpp"

#include <cmath>
#include <cstdio>
#include <numbers>

namespace preq {

namespace {

ExprPtr node(Expr e) { return std::make_shared<const Expr>(std::move(e)); }

bool is_const(const ExprPtr& e) { return e->kind == ExprKind::constant; }

const char* func_name(Func f) {
  switch (f) {
    case Func::sin: return "sin";
    case Func::cos: return "cos";
    case Func::exp: return "exp";
    case Func::sqrt: return "sqrt";
    case Func::ln: return "ln";
  }
  return "?";
}

std::string format_constant(double v) {
  char buf[64];
  std::snprintf(buf, sizeof buf, "%.17g", v);
  return buf;
}

}  // namespace

double pow_by_int(double base, int exponent) {
  if (exponent < 0) return 1.0 / pow_by_int(base, -exponent);
  double r = 1.0;
  for (int k = 0; k < exponent; ++k) r *= base;
  return r;
}

// ---- raw constructors ------------------------------------------------------

ExprPtr expr_constant(double value) {
  return node({.kind = ExprKind::constant, .value = value});
}

ExprPtr expr_variable(VarKind var, int index) {
  return node({.kind = ExprKind::variable, .var = var, .index = index});
}

ExprPtr expr_pi() { return node({.kind = ExprKind::pi_const}); }

ExprPtr expr_negate(ExprPtr a) {
  return node({.kind = ExprKind::negate, .a = std::move(a)});
}

ExprPtr expr_binary(ExprKind kind, ExprPtr a, ExprPtr b) {
  return node({.kind = kind, .a = std::move(a), .b = std::move(b)});
}

ExprPtr expr_pow(ExprPtr base, int exponent) {
  return node({.kind = ExprKind::pow_int, .exponent = exponent,
               .a = std::move(base)});
}

ExprPtr expr_call(Func func, ExprPtr a) {
  return node({.kind = ExprKind::call, .func = func, .a = std::move(a)});
}

// ---- folding constructors --------------------------------------------------
// Only rewrites that evaluate() would reproduce bit-for-bit are applied;
// anything that could raise a DomainError at evaluation time is left alone.

ExprPtr fold_negate(ExprPtr a) {
  if (is_const(a)) return expr_constant(-a->value);
  if (a->kind == ExprKind::negate) return a->a;
  return expr_negate(std::move(a));
}

ExprPtr fold_add(ExprPtr a, ExprPtr b) {
  if (is_const(a) && is_const(b)) return expr_constant(a->value + b->value);
  if (is_constant(a, 0.0)) return b;
  if (is_constant(b, 0.0)) return a;
  return expr_binary(ExprKind::add, std::move(a), std::move(b));
}

ExprPtr fold_sub(ExprPtr a, ExprPtr b) {
  if (is_const(a) && is_const(b)) return expr_constant(a->value - b->value);
  if (is_constant(b, 0.0)) return a;
  if (is_constant(a, 0.0)) return fold_negate(std::move(b));
  if (structurally_equal(a, b)) return expr_constant(0.0);
  return expr_binary(ExprKind::sub, std::move(a), std::move(b));
}

ExprPtr fold_mul(ExprPtr a, ExprPtr b) {
  if (is_const(a) && is_const(b)) return expr_constant(a->value * b->value);
  if (is_constant(a, 0.0) || is_constant(b, 0.0)) return expr_constant(0.0);
  if (is_constant(a, 1.0)) return b;
  if (is_constant(b, 1.0)) return a;
  return expr_binary(ExprKind::mul, std::move(a), std::move(b));
}

ExprPtr fold_div(ExprPtr a, ExprPtr b) {
  if (is_const(a) && is_const(b) && b->value != 0.0)
    return expr_constant(a->value / b->value);
  if (is_constant(b, 1.0)) return a;
  if (is_constant(a, 0.0) && !is_constant(b, 0.0)) return expr_constant(0.0);
  return expr_binary(ExprKind::div, std::move(a), std::move(b));
}

ExprPtr fold_pow(ExprPtr base, int exponent) {
  if (exponent == 0) return expr_constant(1.0);
  if (exponent == 1) return base;
  if (is_const(base) && !(base->value == 0.0 && exponent < 0))
    return expr_constant(pow_by_int(base->value, exponent));
  return expr_pow(std::move(base), exponent);
}

ExprPtr fold_call(Func func, ExprPtr a) {
  if (is_const(a)) {
    const double v = a->value;
    switch (func) {
      case Func::sin: return expr_constant(std::sin(v));
      case Func::cos: return expr_constant(std::cos(v));
      case Func::exp: return expr_constant(std::exp(v));
      case Func::sqrt:
        if (v >= 0.0) return expr_constant(std::sqrt(v));
        break;
      case Func::ln:
        if (v > 0.0) return expr_constant(std::log(v));
        break;
    }
  }
  return expr_call(func, std::move(a));
}

// ---- structure helpers -----------------------------------------------------

bool structurally_equal(const ExprPtr& a, const ExprPtr& b) {
  if (a.get() == b.get()) return true;
  if (a->kind != b->kind) return false;
  switch (a->kind) {
    case ExprKind::constant: return a->value == b->value;
    case ExprKind::variable: return a->var == b->var && a->index == b->index;
    case ExprKind::pi_const: return true;
    case ExprKind::negate: return structurally_equal(a->a, b->a);
    case ExprKind::add:
    case ExprKind::sub:
    case ExprKind::mul:
    case ExprKind::div:
      return structurally_equal(a->a, b->a) && structurally_equal(a->b, b->b);
    case ExprKind::pow_int:
      return a->exponent == b->exponent && structurally_equal(a->a, b->a);
    case ExprKind::call:
      return a->func == b->func && structurally_equal(a->a, b->a);
  }
  return false;
}

bool contains_variable_kind(const ExprPtr& e, VarKind var) {
  switch (e->kind) {
    case ExprKind::constant:
    case ExprKind::pi_const:
      return false;
    case ExprKind::variable:
      return e->var == var;
    case ExprKind::negate:
    case ExprKind::pow_int:
    case ExprKind::call:
      return contains_variable_kind(e->a, var);
    default:
      return contains_variable_kind(e->a, var) ||
             contains_variable_kind(e->b, var);
  }
}

bool is_constant(const ExprPtr& e, double value) {
  return e->kind == ExprKind::constant && e->value == value;
}

// ---- Observable ------------------------------------------------------------

namespace {

int max_index(const ExprPtr& e) {
  switch (e->kind) {
    case ExprKind::constant:
    case ExprKind::pi_const:
      return 0;
    case ExprKind::variable:
      return e->index;
    case ExprKind::negate:
    case ExprKind::pow_int:
    case ExprKind::call:
      return max_index(e->a);
    default:
      return std::max(max_index(e->a), max_index(e->b));
  }
}

}  // namespace

Observable::Observable(int dimension, ExprPtr root)
    : n_(dimension), root_(std::move(root)) {
  if (n_ <= 0) throw ConfigError("observable dimension must be positive");
  if (!root_) throw ConfigError("observable has no expression");
  const int used = max_index(root_);
  if (used > n_)
    throw UnknownVariable("expression references index " +
                          std::to_string(used) + " beyond dimension " +
                          std::to_string(n_));
}

double Observable::operator()(const PhasePoint& z) const {
  return evaluate(*this, z);
}

// ---- evaluation ------------------------------------------------------------

namespace {

double eval_node(const Expr& e, const PhasePoint& z) {
  switch (e.kind) {
    case ExprKind::constant:
      return e.value;
    case ExprKind::pi_const:
      return std::numbers::pi;
    case ExprKind::variable:
      return e.var == VarKind::q ? z.q[e.index - 1] : z.p[e.index - 1];
    case ExprKind::negate:
      return -eval_node(*e.a, z);
    case ExprKind::add:
      return eval_node(*e.a, z) + eval_node(*e.b, z);
    case ExprKind::sub:
      return eval_node(*e.a, z) - eval_node(*e.b, z);
    case ExprKind::mul:
      return eval_node(*e.a, z) * eval_node(*e.b, z);
    case ExprKind::div: {
      const double num = eval_node(*e.a, z);
      const double den = eval_node(*e.b, z);
      if (den == 0.0)
        throw DomainError("division by zero",
                          to_string(std::make_shared<const Expr>(e)));
      return num / den;
    }
    case ExprKind::pow_int: {
      const double base = eval_node(*e.a, z);
      if (base == 0.0 && e.exponent < 0)
        throw DomainError("zero raised to a negative power",
                          to_string(std::make_shared<const Expr>(e)));
      return pow_by_int(base, e.exponent);
    }
    case ExprKind::call: {
      const double v = eval_node(*e.a, z);
      switch (e.func) {
        case Func::sin: return std::sin(v);
        case Func::cos: return std::cos(v);
        case Func::exp: return std::exp(v);
        case Func::sqrt:
          if (v < 0.0)
            throw DomainError("sqrt of a negative value",
                              to_string(std::make_shared<const Expr>(e)));
          return std::sqrt(v);
        case Func::ln:
          if (v <= 0.0)
            throw DomainError("ln of a non-positive value",
                              to_string(std::make_shared<const Expr>(e)));
          return std::log(v);
      }
      break;
    }
  }
  throw Error("corrupt expression node");
}

}  // namespace

double evaluate(const Observable& f, const PhasePoint& z) {
  if (z.dimension() != f.dimension() ||
      z.p.size() != static_cast<std::size_t>(f.dimension()))
    throw DimMismatch("phase point dimension " +
                      std::to_string(z.dimension()) +
                      " does not match observable dimension " +
                      std::to_string(f.dimension()));
  return eval_node(*f.root(), z);
}

// ---- simplification --------------------------------------------------------

namespace {

ExprPtr simplify_node(const ExprPtr& e) {
  switch (e->kind) {
    case ExprKind::constant:
    case ExprKind::variable:
    case ExprKind::pi_const:
      return e;
    case ExprKind::negate:
      return fold_negate(simplify_node(e->a));
    case ExprKind::add:
      return fold_add(simplify_node(e->a), simplify_node(e->b));
    case ExprKind::sub:
      return fold_sub(simplify_node(e->a), simplify_node(e->b));
    case ExprKind::mul:
      return fold_mul(simplify_node(e->a), simplify_node(e->b));
    case ExprKind::div:
      return fold_div(simplify_node(e->a), simplify_node(e->b));
    case ExprKind::pow_int:
      return fold_pow(simplify_node(e->a), e->exponent);
    case ExprKind::call:
      return fold_call(e->func, simplify_node(e->a));
  }
  throw Error("corrupt expression node");
}

}  // namespace

Observable simplify(const Observable& f) {
  return Observable(f.dimension(), simplify_node(f.root()));
}

// ---- differentiation -------------------------------------------------------

namespace {

ExprPtr diff_node(const ExprPtr& e, VarKind var, int index) {
  switch (e->kind) {
    case ExprKind::constant:
    case ExprKind::pi_const:
      return expr_constant(0.0);
    case ExprKind::variable:
      return expr_constant(e->var == var && e->index == index ? 1.0 : 0.0);
    case ExprKind::negate:
      return fold_negate(diff_node(e->a, var, index));
    case ExprKind::add:
      return fold_add(diff_node(e->a, var, index), diff_node(e->b, var, index));
    case ExprKind::sub:
      return fold_sub(diff_node(e->a, var, index), diff_node(e->b, var, index));
    case ExprKind::mul:
      return fold_add(fold_mul(diff_node(e->a, var, index), e->b),
                      fold_mul(e->a, diff_node(e->b, var, index)));
    case ExprKind::div:
      return fold_div(
          fold_sub(fold_mul(diff_node(e->a, var, index), e->b),
                   fold_mul(e->a, diff_node(e->b, var, index))),
          fold_pow(e->b, 2));
    case ExprKind::pow_int:
      return fold_mul(
          fold_mul(expr_constant(static_cast<double>(e->exponent)),
                   fold_pow(e->a, e->exponent - 1)),
          diff_node(e->a, var, index));
    case ExprKind::call: {
      const ExprPtr da = diff_node(e->a, var, index);
      switch (e->func) {
        case Func::sin:
          return fold_mul(fold_call(Func::cos, e->a), da);
        case Func::cos:
          return fold_mul(fold_negate(fold_call(Func::sin, e->a)), da);
        case Func::exp:
          return fold_mul(fold_call(Func::exp, e->a), da);
        case Func::sqrt:
          return fold_div(da, fold_mul(expr_constant(2.0),
                                       fold_call(Func::sqrt, e->a)));
        case Func::ln:
          return fold_div(da, e->a);
      }
      break;
    }
  }
  throw Error("corrupt expression node");
}

}  // namespace

Observable differentiate(const Observable& f, VarKind var, int index) {
  if (index < 1 || index > f.dimension())
    throw UnknownVariable("derivative index " + std::to_string(index) +
                          " out of range 1.." + std::to_string(f.dimension()));
  // Differentiate the simplified tree so reused subtrees are already clean.
  return Observable(f.dimension(),
                    diff_node(simplify_node(f.root()), var, index));
}

// ---- printing --------------------------------------------------------------

namespace {

void print_node(const ExprPtr& e, std::string& out) {
  switch (e->kind) {
    case ExprKind::constant:
      out += format_constant(e->value);
      return;
    case ExprKind::pi_const:
      out += "pi";
      return;
    case ExprKind::variable:
      out += (e->var == VarKind::q ? 'q' : 'p');
      out += std::to_string(e->index);
      return;
    case ExprKind::negate:
      out += "(-";
      print_node(e->a, out);
      out += ')';
      return;
    case ExprKind::add:
    case ExprKind::sub:
    case ExprKind::mul:
    case ExprKind::div: {
      const char op = e->kind == ExprKind::add   ? '+'
                      : e->kind == ExprKind::sub ? '-'
                      : e->kind == ExprKind::mul ? '*'
                                                 : '/';
      out += '(';
      print_node(e->a, out);
      out += ' ';
      out += op;
      out += ' ';
      print_node(e->b, out);
      out += ')';
      return;
    }
    case ExprKind::pow_int:
      out += '(';
      print_node(e->a, out);
      out += " ^ ";
      out += std::to_string(e->exponent);
      out += ')';
      return;
    case ExprKind::call:
      out += func_name(e->func);
      out += '(';
      print_node(e->a, out);
      out += ')';
      return;
  }
}

}  // namespace

std::string to_string(const ExprPtr& e) {
  std::string out;
  print_node(e, out);
  return out;
}

std::string to_string(const Observable& f) { return to_string(f.root()); }

}  // namespace preq
