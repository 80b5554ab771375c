#pragma once

// Smooth-map DSL: parser, evaluator, printer.
//
// Grammar:
//   map       := component (";" component)*
//   component := expr
//   expr      := term (("+" | "-") term)*
//   term      := factor (("*" | "/") factor)*
//   factor    := base ("^" factor)?
//   base      := number | "pi" | "e" | var | func "(" expr ")"
//              | "(" expr ")" | "-" base
//   func      := "sin" | "cos" | "exp" | "log" | "sqrt" | "tanh"
//   var       := ("u" | "w" | "x") digits
//
// "^" is right-associative and its exponent must fold to a constant at parse
// time. Unary minus is part of `base`, so it binds tighter than the "^" whose
// base it forms ("-u1^2" is "(-u1)^2") and looser than function application.
// Numbers take decimal or scientific notation; whitespace is insignificant.
//
// Variable slots: "u<i>" and "x<i>" name input slot i-1; "w<i>" names slot
// n/2 + i - 1 and needs an even arity (double-jet sources split their domain
// into a u-half and a w-half).

#include <cctype>
#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <memory>
#include <string>
#include <vector>

#include "jetcalc/errors.hpp"
#include "jetcalc/linalg.hpp"

namespace jetcalc {

enum class ExprOp {
  Constant,
  Variable,
  Add,
  Sub,
  Mul,
  Div,
  Pow,  // constant real exponent, stored in `value`
  Neg,
  Sin,
  Cos,
  Exp,
  Log,
  Sqrt,
  Tanh,
};

struct ExprNode;
using ExprPtr = std::shared_ptr<const ExprNode>;

struct ExprNode {
  ExprOp op = ExprOp::Constant;
  double value = 0.0;    // Constant payload, or Pow exponent
  int slot = -1;         // Variable: 0-based input slot
  char spelling = 'x';   // Variable: prefix it prints with
  int index = 0;         // Variable: 1-based index it prints with
  ExprPtr a;             // unary operand / left operand / Pow base
  ExprPtr b;             // right operand
};

// A parsed map R^n -> R^m. Immutable after construction; safe to share.
struct SmoothMap {
  int arity_in = 0;
  int arity_out = 0;
  std::vector<ExprPtr> components;
};

// ---------------------------------------------------------------------------
// AST builders

inline ExprPtr make_constant(double v) {
  // Negative literals do not exist in the grammar; wrap them so printed
  // trees always reparse to the same structure.
  if (v < 0.0 || (v == 0.0 && std::signbit(v))) {
    auto inner = std::make_shared<ExprNode>();
    inner->op = ExprOp::Constant;
    inner->value = -v;
    auto neg = std::make_shared<ExprNode>();
    neg->op = ExprOp::Neg;
    neg->a = inner;
    return neg;
  }
  auto n = std::make_shared<ExprNode>();
  n->op = ExprOp::Constant;
  n->value = v;
  return n;
}

inline ExprPtr make_variable(char spelling, int index, int slot) {
  auto n = std::make_shared<ExprNode>();
  n->op = ExprOp::Variable;
  n->spelling = spelling;
  n->index = index;
  n->slot = slot;
  return n;
}

inline ExprPtr make_unary(ExprOp op, ExprPtr a) {
  auto n = std::make_shared<ExprNode>();
  n->op = op;
  n->a = std::move(a);
  return n;
}

inline ExprPtr make_binary(ExprOp op, ExprPtr a, ExprPtr b) {
  auto n = std::make_shared<ExprNode>();
  n->op = op;
  n->a = std::move(a);
  n->b = std::move(b);
  return n;
}

inline ExprPtr make_pow(ExprPtr base, double exponent) {
  auto n = std::make_shared<ExprNode>();
  n->op = ExprOp::Pow;
  n->a = std::move(base);
  n->value = exponent;
  return n;
}

// ---------------------------------------------------------------------------
// Scalar evaluation

namespace detail {

inline bool is_integer_exponent(double c) {
  return std::nearbyint(c) == c && std::abs(c) <= 2147483647.0;
}

inline void check_finite(double r, const char* op) {
  if (!std::isfinite(r)) throw DomainError(op, std::string(op) + ": non-finite result");
}

inline double ipow(double x, long long k) {
  // k >= 0
  double r = 1.0, b = x;
  while (k > 0) {
    if (k & 1) r *= b;
    b *= b;
    k >>= 1;
  }
  return r;
}

inline double eval_pow(double x, double c) {
  if (is_integer_exponent(c)) {
    long long k = static_cast<long long>(c);
    if (k < 0) {
      if (x == 0.0) throw DomainError("^", "zero base with negative exponent");
      double r = 1.0 / ipow(x, -k);
      check_finite(r, "^");
      return r;
    }
    double r = ipow(x, k);
    check_finite(r, "^");
    return r;
  }
  if (x <= 0.0) throw DomainError("^", "non-integer exponent needs a positive base");
  double r = std::pow(x, c);
  check_finite(r, "^");
  return r;
}

inline double eval_node(const ExprNode& n, const Vec& point) {
  switch (n.op) {
    case ExprOp::Constant:
      return n.value;
    case ExprOp::Variable:
      return point[static_cast<std::size_t>(n.slot)];
    case ExprOp::Add: {
      double r = eval_node(*n.a, point) + eval_node(*n.b, point);
      check_finite(r, "+");
      return r;
    }
    case ExprOp::Sub: {
      double r = eval_node(*n.a, point) - eval_node(*n.b, point);
      check_finite(r, "-");
      return r;
    }
    case ExprOp::Mul: {
      double r = eval_node(*n.a, point) * eval_node(*n.b, point);
      check_finite(r, "*");
      return r;
    }
    case ExprOp::Div: {
      double num = eval_node(*n.a, point);
      double den = eval_node(*n.b, point);
      if (den == 0.0) throw DomainError("/", "division by zero");
      double r = num / den;
      check_finite(r, "/");
      return r;
    }
    case ExprOp::Pow:
      return eval_pow(eval_node(*n.a, point), n.value);
    case ExprOp::Neg:
      return -eval_node(*n.a, point);
    case ExprOp::Sin:
      return std::sin(eval_node(*n.a, point));
    case ExprOp::Cos:
      return std::cos(eval_node(*n.a, point));
    case ExprOp::Exp: {
      double r = std::exp(eval_node(*n.a, point));
      check_finite(r, "exp");
      return r;
    }
    case ExprOp::Log: {
      double x = eval_node(*n.a, point);
      if (x <= 0.0) throw DomainError("log", "log of a non-positive value");
      return std::log(x);
    }
    case ExprOp::Sqrt: {
      double x = eval_node(*n.a, point);
      if (x < 0.0) throw DomainError("sqrt", "sqrt of a negative value");
      return std::sqrt(x);
    }
    case ExprOp::Tanh:
      return std::tanh(eval_node(*n.a, point));
  }
  throw Error("internal", "unreachable expression op");
}

inline bool contains_variable(const ExprNode& n) {
  if (n.op == ExprOp::Variable) return true;
  if (n.a && contains_variable(*n.a)) return true;
  if (n.b && contains_variable(*n.b)) return true;
  return false;
}

}  // namespace detail

// Componentwise evaluation. Domain errors carry the offending component.
inline Vec eval(const SmoothMap& map, const Vec& point) {
  if (static_cast<int>(point.size()) != map.arity_in)
    throw ShapeError("point size " + std::to_string(point.size()) +
                     " does not match map arity " + std::to_string(map.arity_in));
  Vec out(map.components.size());
  for (std::size_t i = 0; i < map.components.size(); ++i) {
    try {
      out[i] = detail::eval_node(*map.components[i], point);
    } catch (DomainError& e) {
      if (e.component < 0) e.component = static_cast<int>(i);
      throw;
    }
  }
  return out;
}

// ---------------------------------------------------------------------------
// Lexer / parser

namespace detail {

enum class Tok { Number, Ident, Plus, Minus, Star, Slash, Caret, LParen, RParen, Semi, End };

struct Token {
  Tok kind = Tok::End;
  std::string text;
  double number = 0.0;
  std::size_t pos = 0;
};

class Lexer {
 public:
  explicit Lexer(const std::string& src) : src_(src) {}

  Token next() {
    while (pos_ < src_.size() && std::isspace(static_cast<unsigned char>(src_[pos_]))) ++pos_;
    Token t;
    t.pos = pos_;
    if (pos_ >= src_.size()) {
      t.kind = Tok::End;
      return t;
    }
    char c = src_[pos_];
    switch (c) {
      case '+': ++pos_; t.kind = Tok::Plus; return t;
      case '-': ++pos_; t.kind = Tok::Minus; return t;
      case '*': ++pos_; t.kind = Tok::Star; return t;
      case '/': ++pos_; t.kind = Tok::Slash; return t;
      case '^': ++pos_; t.kind = Tok::Caret; return t;
      case '(': ++pos_; t.kind = Tok::LParen; return t;
      case ')': ++pos_; t.kind = Tok::RParen; return t;
      case ';': ++pos_; t.kind = Tok::Semi; return t;
      default: break;
    }
    if (std::isdigit(static_cast<unsigned char>(c)) ||
        (c == '.' && pos_ + 1 < src_.size() &&
         std::isdigit(static_cast<unsigned char>(src_[pos_ + 1])))) {
      std::size_t start = pos_;
      while (pos_ < src_.size() && std::isdigit(static_cast<unsigned char>(src_[pos_]))) ++pos_;
      if (pos_ < src_.size() && src_[pos_] == '.') {
        ++pos_;
        while (pos_ < src_.size() && std::isdigit(static_cast<unsigned char>(src_[pos_]))) ++pos_;
      }
      if (pos_ < src_.size() && (src_[pos_] == 'e' || src_[pos_] == 'E')) {
        std::size_t mark = pos_;
        ++pos_;
        if (pos_ < src_.size() && (src_[pos_] == '+' || src_[pos_] == '-')) ++pos_;
        if (pos_ < src_.size() && std::isdigit(static_cast<unsigned char>(src_[pos_]))) {
          while (pos_ < src_.size() && std::isdigit(static_cast<unsigned char>(src_[pos_]))) ++pos_;
        } else {
          pos_ = mark;  // "e" was an identifier, not an exponent
        }
      }
      t.kind = Tok::Number;
      t.text = src_.substr(start, pos_ - start);
      t.number = std::strtod(t.text.c_str(), nullptr);
      if (!std::isfinite(t.number))
        throw ParseError(start, "numeric literal out of range");
      return t;
    }
    if (std::isalpha(static_cast<unsigned char>(c)) || c == '_') {
      std::size_t start = pos_;
      while (pos_ < src_.size() &&
             (std::isalnum(static_cast<unsigned char>(src_[pos_])) || src_[pos_] == '_'))
        ++pos_;
      t.kind = Tok::Ident;
      t.text = src_.substr(start, pos_ - start);
      return t;
    }
    throw ParseError(pos_, std::string("unexpected character '") + c + "'");
  }

 private:
  const std::string& src_;
  std::size_t pos_ = 0;
};

class Parser {
 public:
  Parser(const std::string& src, int arity_in) : lex_(src), n_(arity_in) { advance(); }

  std::vector<ExprPtr> parse_map() {
    std::vector<ExprPtr> comps;
    comps.push_back(parse_expr());
    while (cur_.kind == Tok::Semi) {
      advance();
      comps.push_back(parse_expr());
    }
    if (cur_.kind != Tok::End)
      throw ParseError(cur_.pos, "trailing input after expression", "';' or end of input");
    return comps;
  }

 private:
  void advance() { cur_ = lex_.next(); }

  ExprPtr parse_expr() {
    ExprPtr lhs = parse_term();
    while (cur_.kind == Tok::Plus || cur_.kind == Tok::Minus) {
      ExprOp op = cur_.kind == Tok::Plus ? ExprOp::Add : ExprOp::Sub;
      advance();
      lhs = make_binary(op, lhs, parse_term());
    }
    return lhs;
  }

  ExprPtr parse_term() {
    ExprPtr lhs = parse_factor();
    while (cur_.kind == Tok::Star || cur_.kind == Tok::Slash) {
      ExprOp op = cur_.kind == Tok::Star ? ExprOp::Mul : ExprOp::Div;
      advance();
      lhs = make_binary(op, lhs, parse_factor());
    }
    return lhs;
  }

  ExprPtr parse_factor() {
    ExprPtr base = parse_base();
    if (cur_.kind == Tok::Caret) {
      std::size_t caret_pos = cur_.pos;
      advance();
      ExprPtr exponent = parse_factor();
      if (contains_variable(*exponent))
        throw ParseError(caret_pos, "exponent must be a constant expression");
      double c;
      try {
        c = eval_node(*exponent, {});
      } catch (const DomainError& e) {
        throw ParseError(caret_pos, std::string("exponent does not evaluate: ") + e.what());
      }
      return make_pow(base, c);
    }
    return base;
  }

  ExprPtr parse_base() {
    switch (cur_.kind) {
      case Tok::Number: {
        double v = cur_.number;
        advance();
        return make_constant(v);
      }
      case Tok::Minus: {
        advance();
        return make_unary(ExprOp::Neg, parse_base());
      }
      case Tok::LParen: {
        advance();
        ExprPtr e = parse_expr();
        expect(Tok::RParen, "')'");
        return e;
      }
      case Tok::Ident:
        return parse_ident();
      default:
        throw ParseError(cur_.pos, "expected an expression",
                         "number, variable, function, '(', or '-'");
    }
  }

  ExprPtr parse_ident() {
    const std::string name = cur_.text;
    const std::size_t pos = cur_.pos;
    advance();
    if (name == "pi") return make_constant(M_PI);
    if (name == "e") return make_constant(M_E);
    ExprOp fn;
    if (name == "sin") fn = ExprOp::Sin;
    else if (name == "cos") fn = ExprOp::Cos;
    else if (name == "exp") fn = ExprOp::Exp;
    else if (name == "log") fn = ExprOp::Log;
    else if (name == "sqrt") fn = ExprOp::Sqrt;
    else if (name == "tanh") fn = ExprOp::Tanh;
    else return parse_variable(name, pos);
    expect(Tok::LParen, "'('");
    ExprPtr arg = parse_expr();
    expect(Tok::RParen, "')'");
    return make_unary(fn, arg);
  }

  ExprPtr parse_variable(const std::string& name, std::size_t pos) {
    char prefix = name[0];
    bool digits = name.size() > 1;
    for (std::size_t i = 1; i < name.size(); ++i)
      if (!std::isdigit(static_cast<unsigned char>(name[i]))) digits = false;
    if ((prefix != 'u' && prefix != 'w' && prefix != 'x') || !digits)
      throw ParseError(pos, "unknown identifier '" + name + "'",
                       "variable (u<i>, w<i>, x<i>), function, pi, or e");
    long idx = std::strtol(name.c_str() + 1, nullptr, 10);
    if (idx < 1) throw ParseError(pos, "variable index must be at least 1");
    int slot;
    if (prefix == 'w') {
      if (n_ % 2 != 0)
        throw ParseError(pos, "w-variables need an even arity (got " + std::to_string(n_) + ")");
      if (idx > n_ / 2)
        throw ParseError(pos, "variable index exceeds arity: " + name + " with n=" + std::to_string(n_));
      slot = n_ / 2 + static_cast<int>(idx) - 1;
    } else {
      if (idx > n_)
        throw ParseError(pos, "variable index exceeds arity: " + name + " with n=" + std::to_string(n_));
      slot = static_cast<int>(idx) - 1;
    }
    return make_variable(prefix, static_cast<int>(idx), slot);
  }

  void expect(Tok kind, const char* what) {
    if (cur_.kind != kind)
      throw ParseError(cur_.pos, std::string("expected ") + what, what);
    advance();
  }

  Lexer lex_;
  Token cur_;
  int n_;
};

}  // namespace detail

// Parse `source` as a map R^n -> R^m; the component count must equal m.
inline SmoothMap parse(const std::string& source, int arity_in, int arity_out) {
  if (arity_in < 1) throw ShapeError("arity_in must be positive");
  if (arity_out < 1) throw ShapeError("arity_out must be positive");
  detail::Parser parser(source, arity_in);
  SmoothMap map;
  map.arity_in = arity_in;
  map.components = parser.parse_map();
  map.arity_out = arity_out;
  if (static_cast<int>(map.components.size()) != arity_out)
    throw ParseError(0, "component count " + std::to_string(map.components.size()) +
                            " does not match declared arity " + std::to_string(arity_out));
  return map;
}

// Parse with the output arity taken from the component count.
inline SmoothMap parse(const std::string& source, int arity_in) {
  if (arity_in < 1) throw ShapeError("arity_in must be positive");
  detail::Parser parser(source, arity_in);
  SmoothMap map;
  map.arity_in = arity_in;
  map.components = parser.parse_map();
  map.arity_out = static_cast<int>(map.components.size());
  return map;
}

// ---------------------------------------------------------------------------
// Printing

namespace detail {

// Shortest decimal string that parses back to exactly `v`.
inline std::string format_double(double v) {
  char buf[40];
  for (int prec = 15; prec <= 17; ++prec) {
    std::snprintf(buf, sizeof buf, "%.*g", prec, v);
    if (std::strtod(buf, nullptr) == v) break;
  }
  return buf;
}

inline void print_node(const ExprNode& n, std::string& out) {
  switch (n.op) {
    case ExprOp::Constant:
      out += format_double(n.value);
      return;
    case ExprOp::Variable:
      out += n.spelling;
      out += std::to_string(n.index);
      return;
    case ExprOp::Add:
    case ExprOp::Sub:
    case ExprOp::Mul:
    case ExprOp::Div: {
      const char* sign = n.op == ExprOp::Add   ? " + "
                         : n.op == ExprOp::Sub ? " - "
                         : n.op == ExprOp::Mul ? " * "
                                               : " / ";
      out += '(';
      print_node(*n.a, out);
      out += sign;
      print_node(*n.b, out);
      out += ')';
      return;
    }
    case ExprOp::Pow:
      out += '(';
      print_node(*n.a, out);
      out += " ^ ";
      out += format_double(n.value);
      out += ')';
      return;
    case ExprOp::Neg:
      out += "(-";
      print_node(*n.a, out);
      out += ')';
      return;
    case ExprOp::Sin: out += "sin("; break;
    case ExprOp::Cos: out += "cos("; break;
    case ExprOp::Exp: out += "exp("; break;
    case ExprOp::Log: out += "log("; break;
    case ExprOp::Sqrt: out += "sqrt("; break;
    case ExprOp::Tanh: out += "tanh("; break;
  }
  print_node(*n.a, out);
  out += ')';
}

}  // namespace detail

inline std::string to_string(const SmoothMap& map) {
  std::string out;
  for (std::size_t i = 0; i < map.components.size(); ++i) {
    if (i) out += "; ";
    detail::print_node(*map.components[i], out);
  }
  return out;
}

// ---------------------------------------------------------------------------
// Structural identity and syntactic operations

inline bool structurally_equal(const ExprNode& a, const ExprNode& b) {
  if (a.op != b.op) return false;
  switch (a.op) {
    case ExprOp::Constant:
      return a.value == b.value;
    case ExprOp::Variable:
      return a.slot == b.slot;
    case ExprOp::Pow:
      return a.value == b.value && structurally_equal(*a.a, *b.a);
    default:
      break;
  }
  if (static_cast<bool>(a.a) != static_cast<bool>(b.a)) return false;
  if (static_cast<bool>(a.b) != static_cast<bool>(b.b)) return false;
  if (a.a && !structurally_equal(*a.a, *b.a)) return false;
  if (a.b && !structurally_equal(*a.b, *b.b)) return false;
  return true;
}

inline bool structurally_equal(const SmoothMap& a, const SmoothMap& b) {
  if (a.arity_in != b.arity_in || a.arity_out != b.arity_out) return false;
  if (a.components.size() != b.components.size()) return false;
  for (std::size_t i = 0; i < a.components.size(); ++i)
    if (!structurally_equal(*a.components[i], *b.components[i])) return false;
  return true;
}

namespace detail {

inline ExprPtr substitute(const ExprPtr& node, const std::vector<ExprPtr>& replacements) {
  if (node->op == ExprOp::Variable)
    return replacements[static_cast<std::size_t>(node->slot)];
  if (!node->a) return node;  // constant
  auto n = std::make_shared<ExprNode>(*node);
  n->a = substitute(node->a, replacements);
  if (node->b) n->b = substitute(node->b, replacements);
  return n;
}

inline ExprPtr permute_halves(const ExprPtr& node, int p) {
  if (node->op == ExprOp::Variable) {
    int slot = node->slot < p ? node->slot + p : node->slot - p;
    char spelling = node->spelling;
    int index = node->index;
    if (spelling == 'u') spelling = 'w';
    else if (spelling == 'w') spelling = 'u';
    else index = slot + 1;
    return make_variable(spelling, index, slot);
  }
  if (!node->a) return node;
  auto n = std::make_shared<ExprNode>(*node);
  n->a = permute_halves(node->a, p);
  if (node->b) n->b = permute_halves(node->b, p);
  return n;
}

}  // namespace detail

// Syntactic composition outer . inner (substitutes inner's components for
// outer's variables). Needs outer.arity_in == inner.arity_out.
inline SmoothMap compose(const SmoothMap& outer, const SmoothMap& inner) {
  if (outer.arity_in != inner.arity_out)
    throw ShapeError("compose: outer arity_in " + std::to_string(outer.arity_in) +
                     " != inner arity_out " + std::to_string(inner.arity_out));
  SmoothMap map;
  map.arity_in = inner.arity_in;
  map.arity_out = outer.arity_out;
  map.components.reserve(outer.components.size());
  for (const auto& c : outer.components)
    map.components.push_back(detail::substitute(c, inner.components));
  return map;
}

// Syntactic precomposition with the flip (u, w) -> (w, u) on R^p x R^p.
inline SmoothMap precompose_flip(const SmoothMap& map) {
  if (map.arity_in % 2 != 0)
    throw ShapeError("flip needs an even arity, got " + std::to_string(map.arity_in));
  const int p = map.arity_in / 2;
  SmoothMap out;
  out.arity_in = map.arity_in;
  out.arity_out = map.arity_out;
  out.components.reserve(map.components.size());
  for (const auto& c : map.components)
    out.components.push_back(detail::permute_halves(c, p));
  return out;
}

}  // namespace jetcalc
