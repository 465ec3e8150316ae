#include <cctype>
#include <cstdlib>
#include <string>

#include "preq/expr.hpp"

namespace preq {

namespace {

enum class Tok { number, ident, plus, minus, star, slash, caret, lparen, rparen, end };

struct Token {
  Tok kind;
  std::size_t pos;
  double number = 0.0;
  std::string text;
};

class Lexer {
 public:
  explicit Lexer(std::string_view src) : src_(src) { advance(); }

  const Token& peek() const { return cur_; }

  Token take() {
    Token t = cur_;
    advance();
    return t;
  }

 private:
  void advance() {
    while (i_ < src_.size() && std::isspace(static_cast<unsigned char>(src_[i_]))) ++i_;
    cur_.pos = i_;
    cur_.text.clear();
    if (i_ >= src_.size()) {
      cur_.kind = Tok::end;
      return;
    }
    const char c = src_[i_];
    switch (c) {
      case '+': cur_.kind = Tok::plus; ++i_; return;
      case '-': cur_.kind = Tok::minus; ++i_; return;
      case '*': cur_.kind = Tok::star; ++i_; return;
      case '/': cur_.kind = Tok::slash; ++i_; return;
      case '^': cur_.kind = Tok::caret; ++i_; return;
      case '(': cur_.kind = Tok::lparen; ++i_; return;
      case ')': cur_.kind = Tok::rparen; ++i_; return;
      default: break;
    }
    if (std::isdigit(static_cast<unsigned char>(c)) || c == '.') {
      lex_number();
      return;
    }
    if (std::isalpha(static_cast<unsigned char>(c))) {
      std::size_t j = i_;
      while (j < src_.size() &&
             std::isalnum(static_cast<unsigned char>(src_[j])))
        ++j;
      cur_.kind = Tok::ident;
      cur_.text.assign(src_.substr(i_, j - i_));
      i_ = j;
      return;
    }
    throw SyntaxError("syntax error at position " + std::to_string(i_) +
                          ": unexpected character '" + std::string(1, c) + "'",
                      i_);
  }

  void lex_number() {
    std::size_t j = i_;
    while (j < src_.size() && std::isdigit(static_cast<unsigned char>(src_[j]))) ++j;
    if (j < src_.size() && src_[j] == '.') {
      ++j;
      while (j < src_.size() && std::isdigit(static_cast<unsigned char>(src_[j]))) ++j;
    }
    if (j < src_.size() && (src_[j] == 'e' || src_[j] == 'E')) {
      std::size_t k = j + 1;
      if (k < src_.size() && (src_[k] == '+' || src_[k] == '-')) ++k;
      if (k < src_.size() && std::isdigit(static_cast<unsigned char>(src_[k]))) {
        ++k;
        while (k < src_.size() && std::isdigit(static_cast<unsigned char>(src_[k]))) ++k;
        j = k;
      }
    }
    const std::string text(src_.substr(i_, j - i_));
    cur_.kind = Tok::number;
    cur_.number = std::strtod(text.c_str(), nullptr);
    i_ = j;
  }

  std::string_view src_;
  std::size_t i_ = 0;
  Token cur_;
};

bool is_function_name(const std::string& s, Func& out) {
  if (s == "sin") { out = Func::sin; return true; }
  if (s == "cos") { out = Func::cos; return true; }
  if (s == "exp") { out = Func::exp; return true; }
  if (s == "sqrt") { out = Func::sqrt; return true; }
  if (s == "ln") { out = Func::ln; return true; }
  return false;
}

// Is the identifier shaped like a variable reference q<digits> / p<digits>?
bool variable_shape(const std::string& s, VarKind& var, long& index) {
  if (s.size() < 2 || (s[0] != 'q' && s[0] != 'p')) return false;
  for (std::size_t i = 1; i < s.size(); ++i)
    if (!std::isdigit(static_cast<unsigned char>(s[i]))) return false;
  var = s[0] == 'q' ? VarKind::q : VarKind::p;
  index = std::strtol(s.c_str() + 1, nullptr, 10);
  return true;
}

class Parser {
 public:
  Parser(std::string_view src, int n) : lex_(src), n_(n) {}

  ExprPtr parse() {
    ExprPtr e = parse_expr();
    const Token& t = lex_.peek();
    if (t.kind != Tok::end)
      throw SyntaxError("syntax error at position " + std::to_string(t.pos) +
                            ": expected end of input",
                        t.pos);
    return e;
  }

 private:
  ExprPtr parse_expr() {
    ExprPtr e = parse_term();
    while (lex_.peek().kind == Tok::plus || lex_.peek().kind == Tok::minus) {
      const Tok op = lex_.take().kind;
      e = expr_binary(op == Tok::plus ? ExprKind::add : ExprKind::sub, e,
                      parse_term());
    }
    return e;
  }

  ExprPtr parse_term() {
    ExprPtr e = parse_factor();
    while (lex_.peek().kind == Tok::star || lex_.peek().kind == Tok::slash) {
      const Tok op = lex_.take().kind;
      e = expr_binary(op == Tok::star ? ExprKind::mul : ExprKind::div, e,
                      parse_factor());
    }
    return e;
  }

  // factor = unary [ '^' factor ]; the exponent must fold to an integer.
  ExprPtr parse_factor() {
    ExprPtr base = parse_unary();
    if (lex_.peek().kind != Tok::caret) return base;
    const Token caret = lex_.take();
    ExprPtr raw = parse_factor();
    return expr_pow(std::move(base), fold_to_int_exponent(raw, caret.pos));
  }

  ExprPtr parse_unary() {
    if (lex_.peek().kind == Tok::minus) {
      lex_.take();
      return expr_negate(parse_unary());
    }
    return parse_primary();
  }

  ExprPtr parse_primary() {
    const Token t = lex_.take();
    switch (t.kind) {
      case Tok::number:
        return expr_constant(t.number);
      case Tok::lparen: {
        ExprPtr e = parse_expr();
        expect_rparen(t.pos);
        return e;
      }
      case Tok::ident:
        return parse_ident(t);
      case Tok::end:
        throw SyntaxError("syntax error at position " + std::to_string(t.pos) +
                              ": unexpected end of input, expected expression",
                          t.pos);
      default:
        throw SyntaxError("syntax error at position " + std::to_string(t.pos) +
                              ": expected expression",
                          t.pos);
    }
  }

  ExprPtr parse_ident(const Token& t) {
    Func func;
    if (is_function_name(t.text, func)) {
      const Token open = lex_.take();
      if (open.kind != Tok::lparen)
        throw SyntaxError("syntax error at position " +
                              std::to_string(open.pos) + ": expected '(' after " +
                              t.text,
                          open.pos);
      ExprPtr arg = parse_expr();
      expect_rparen(open.pos);
      return expr_call(func, std::move(arg));
    }
    if (t.text == "pi") return expr_pi();
    VarKind var;
    long index = 0;
    if (variable_shape(t.text, var, index)) {
      if (index < 1 || index > n_)
        throw UnknownVariable("unknown variable '" + t.text +
                              "' (dimension is " + std::to_string(n_) + ")");
      return expr_variable(var, static_cast<int>(index));
    }
    if (lex_.peek().kind == Tok::lparen)
      throw UnknownFunction("unknown function '" + t.text + "'");
    throw UnknownVariable("unknown variable '" + t.text + "'");
  }

  void expect_rparen(std::size_t open_pos) {
    const Token t = lex_.take();
    if (t.kind != Tok::rparen)
      throw SyntaxError("syntax error at position " + std::to_string(t.pos) +
                            ": expected ')' for '(' at position " +
                            std::to_string(open_pos),
                        t.pos);
  }

  // The right-hand side of '^' may be any expression, but it has to fold to
  // an integer constant so differentiation stays closed.
  int fold_to_int_exponent(const ExprPtr& raw, std::size_t caret_pos) {
    ExprPtr folded = fold_exponent(raw);
    if (folded->kind != ExprKind::constant)
      throw NonIntegerExponent("exponent at position " +
                               std::to_string(caret_pos) +
                               " does not fold to a constant: " + to_string(raw));
    const double v = folded->value;
    if (!(v == static_cast<double>(static_cast<long long>(v))) ||
        v > 1e9 || v < -1e9)
      throw NonIntegerExponent("exponent at position " +
                               std::to_string(caret_pos) +
                               " is not an integer: " + to_string(folded));
    return static_cast<int>(v);
  }

  static ExprPtr fold_exponent(const ExprPtr& e) {
    switch (e->kind) {
      case ExprKind::negate: return fold_negate(fold_exponent(e->a));
      case ExprKind::add:
        return fold_add(fold_exponent(e->a), fold_exponent(e->b));
      case ExprKind::sub:
        return fold_sub(fold_exponent(e->a), fold_exponent(e->b));
      case ExprKind::mul:
        return fold_mul(fold_exponent(e->a), fold_exponent(e->b));
      case ExprKind::div:
        return fold_div(fold_exponent(e->a), fold_exponent(e->b));
      case ExprKind::pow_int:
        return fold_pow(fold_exponent(e->a), e->exponent);
      case ExprKind::call:
        return fold_call(e->func, fold_exponent(e->a));
      default:
        return e;
    }
  }

  Lexer lex_;
  int n_;
};

}  // namespace

Observable parse_observable(std::string_view text, int n) {
  if (n <= 0) throw ConfigError("dimension must be positive");
  if (text.empty()) throw SyntaxError("empty expression", 0);
  Parser parser(text, n);
  return Observable(n, parser.parse());
}

}  // namespace preq
