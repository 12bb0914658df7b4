#pragma once

#include <cctype>
#include <cmath>
#include <cstdio>
#include <map>
#include <memory>
#include <stdexcept>
#include <string>
#include <vector>

#include "maggeo/fields.hpp"
#include "maggeo/jet.hpp"

namespace maggeo {

struct ParseError : std::runtime_error {
  size_t offset;
  ParseError(const std::string &msg, size_t at)
      : std::runtime_error(msg + " at offset " + std::to_string(at)), offset(at) {}
};

// Expression tree over coordinates and parameters.  Parentheses are grammar
// only; unary minus is desugared to (0 - x); the '^' exponent is a literal.
struct Expr;
using ExprPtr = std::shared_ptr<const Expr>;

struct Expr {
  enum class Kind { Number, Coordinate, Parameter, Unary, Binary };

  Kind kind = Kind::Number;
  double number = 0.0;  // Number
  int index = -1;       // Coordinate: position in the coordinate list
  std::string name;     // Coordinate/Parameter spelling, or function name
  char op = 0;          // Binary: + - * / ^
  ExprPtr lhs, rhs;     // Binary children; Unary operand in lhs

  static ExprPtr make_number(double v) {
    auto e = std::make_shared<Expr>();
    e->kind = Kind::Number;
    e->number = v;
    return e;
  }
  static ExprPtr make_coordinate(std::string spelling, int idx) {
    auto e = std::make_shared<Expr>();
    e->kind = Kind::Coordinate;
    e->name = std::move(spelling);
    e->index = idx;
    return e;
  }
  static ExprPtr make_parameter(std::string nm) {
    auto e = std::make_shared<Expr>();
    e->kind = Kind::Parameter;
    e->name = std::move(nm);
    return e;
  }
  static ExprPtr make_unary(std::string fn, ExprPtr arg) {
    auto e = std::make_shared<Expr>();
    e->kind = Kind::Unary;
    e->name = std::move(fn);
    e->lhs = std::move(arg);
    return e;
  }
  static ExprPtr make_binary(char op, ExprPtr a, ExprPtr b) {
    auto e = std::make_shared<Expr>();
    e->kind = Kind::Binary;
    e->op = op;
    e->lhs = std::move(a);
    e->rhs = std::move(b);
    return e;
  }
};

inline bool expr_equal(const ExprPtr &a, const ExprPtr &b) {
  if (!a || !b) return a == b;
  if (a->kind != b->kind) return false;
  switch (a->kind) {
    case Expr::Kind::Number: return a->number == b->number;
    case Expr::Kind::Coordinate: return a->index == b->index && a->name == b->name;
    case Expr::Kind::Parameter: return a->name == b->name;
    case Expr::Kind::Unary: return a->name == b->name && expr_equal(a->lhs, b->lhs);
    case Expr::Kind::Binary:
      return a->op == b->op && expr_equal(a->lhs, b->lhs) && expr_equal(a->rhs, b->rhs);
  }
  return false;
}

inline const std::vector<std::string> &known_functions() {
  static const std::vector<std::string> fns = {"sin", "cos", "tan", "exp",
                                               "log", "sqrt", "sinh", "cosh"};
  return fns;
}

// Coordinate spellings: x0..x{n-1} always; n = 2 also (theta, phi) and n = 4
// also (t, r, theta, phi).
inline std::vector<std::string> coordinate_names(int n) {
  std::vector<std::string> names;
  for (int i = 0; i < n; ++i) names.push_back("x" + std::to_string(i));
  return names;
}

inline int resolve_coordinate(const std::string &s, int n) {
  if (s.size() >= 2 && s[0] == 'x') {
    bool digits = true;
    for (size_t i = 1; i < s.size(); ++i) digits = digits && std::isdigit(static_cast<unsigned char>(s[i]));
    if (digits) {
      const int idx = std::stoi(s.substr(1));
      if (idx >= 0 && idx < n) return idx;
    }
  }
  if (n == 2) {
    if (s == "theta") return 0;
    if (s == "phi") return 1;
  }
  if (n == 4) {
    if (s == "t") return 0;
    if (s == "r") return 1;
    if (s == "theta") return 2;
    if (s == "phi") return 3;
  }
  return -1;
}

inline std::vector<std::string> symbol_suggestions(int n, const std::vector<std::string> &params) {
  std::vector<std::string> names = coordinate_names(n);
  if (n == 2) {
    names.push_back("theta");
    names.push_back("phi");
  }
  if (n == 4) {
    names.insert(names.end(), {"t", "r", "theta", "phi"});
  }
  names.insert(names.end(), params.begin(), params.end());
  return names;
}

namespace detail {

class Parser {
public:
  Parser(std::string text, int n, std::vector<std::string> params)
      : text_(std::move(text)), n_(n), params_(std::move(params)) {}

  ExprPtr run() {
    skip_space();
    ExprPtr e = expr();
    skip_space();
    if (pos_ != text_.size()) throw ParseError("unexpected trailing input", pos_);
    return e;
  }

private:
  // expr = term {("+"|"-") term}
  ExprPtr expr() {
    ExprPtr e = term();
    for (;;) {
      skip_space();
      if (peek() == '+' || peek() == '-') {
        const char op = take();
        e = Expr::make_binary(op, e, term());
      } else {
        return e;
      }
    }
  }

  // term = factor {("*"|"/") factor}
  ExprPtr term() {
    ExprPtr e = factor();
    for (;;) {
      skip_space();
      if (peek() == '*' || peek() == '/') {
        const char op = take();
        e = Expr::make_binary(op, e, factor());
      } else {
        return e;
      }
    }
  }

  // factor = "-" factor | base ["^" literal]; unary minus binds below '^'
  ExprPtr factor() {
    skip_space();
    if (peek() == '-') {
      take();
      return Expr::make_binary('-', Expr::make_number(0.0), factor());
    }
    ExprPtr e = base();
    skip_space();
    if (peek() == '^') {
      take();
      e = Expr::make_binary('^', e, exponent_literal());
    }
    return e;
  }

  ExprPtr exponent_literal() {
    skip_space();
    bool neg = false;
    if (peek() == '-') {
      take();
      neg = true;
    }
    skip_space();
    if (!std::isdigit(static_cast<unsigned char>(peek())))
      throw ParseError("expected a literal exponent", pos_);
    ExprPtr num = number();
    if (!neg) return num;
    return Expr::make_number(-num->number);
  }

  // base = literal | symbol | func "(" expr ")" | "(" expr ")"
  ExprPtr base() {
    skip_space();
    const char c = peek();
    if (c == '(') {
      take();
      ExprPtr e = expr();
      expect(')');
      return e;
    }
    if (std::isdigit(static_cast<unsigned char>(c))) return number();
    if (std::isalpha(static_cast<unsigned char>(c)) || c == '_') return symbol();
    throw ParseError("expected a literal, symbol or parenthesized expression", pos_);
  }

  ExprPtr number() {
    const size_t start = pos_;
    while (std::isdigit(static_cast<unsigned char>(peek()))) take();
    if (peek() == '.') {
      take();
      while (std::isdigit(static_cast<unsigned char>(peek()))) take();
    }
    if (peek() == 'e' || peek() == 'E') {
      const size_t mark = pos_;
      take();
      if (peek() == '+' || peek() == '-') take();
      if (std::isdigit(static_cast<unsigned char>(peek()))) {
        while (std::isdigit(static_cast<unsigned char>(peek()))) take();
      } else {
        pos_ = mark; // not an exponent, back off
      }
    }
    return Expr::make_number(std::stod(text_.substr(start, pos_ - start)));
  }

  ExprPtr symbol() {
    const size_t start = pos_;
    while (std::isalnum(static_cast<unsigned char>(peek())) || peek() == '_') take();
    const std::string name = text_.substr(start, pos_ - start);

    for (const auto &fn : known_functions())
      if (name == fn) {
        skip_space();
        expect('(');
        ExprPtr arg = expr();
        expect(')');
        return Expr::make_unary(name, arg);
      }

    const int idx = resolve_coordinate(name, n_);
    if (idx >= 0) return Expr::make_coordinate(name, idx);

    for (const auto &p : params_)
      if (name == p) return Expr::make_parameter(name);

    std::string known;
    for (const auto &s : symbol_suggestions(n_, params_)) {
      if (!known.empty()) known += ", ";
      known += s;
    }
    throw ParseError("unknown symbol '" + name + "' (known symbols: " + known + ")", start);
  }

  void expect(char c) {
    skip_space();
    if (peek() != c) throw ParseError(std::string("expected '") + c + "'", pos_);
    take();
  }

  char peek() const { return pos_ < text_.size() ? text_[pos_] : '\0'; }
  char take() { return text_[pos_++]; }
  void skip_space() {
    while (pos_ < text_.size() && std::isspace(static_cast<unsigned char>(text_[pos_]))) ++pos_;
  }

  std::string text_;
  size_t pos_ = 0;
  int n_;
  std::vector<std::string> params_;
};

} // namespace detail

inline ExprPtr parse_expression(const std::string &text, int n_coords,
                                const std::vector<std::string> &params = {}) {
  return detail::Parser(text, n_coords, params).run();
}

// Fully parenthesized form; reparses to an identical tree.
inline std::string pretty_print(const ExprPtr &e) {
  switch (e->kind) {
    case Expr::Kind::Number: {
      // negative literals only arise as '^' exponents, where the grammar
      // accepts the leading minus
      char buf[40];
      std::snprintf(buf, sizeof buf, "%.17g", e->number);
      return buf;
    }
    case Expr::Kind::Coordinate:
    case Expr::Kind::Parameter:
      return e->name;
    case Expr::Kind::Unary:
      return e->name + "(" + pretty_print(e->lhs) + ")";
    case Expr::Kind::Binary:
      if (e->op == '^') return "(" + pretty_print(e->lhs) + " ^ " + pretty_print(e->rhs) + ")";
      return "(" + pretty_print(e->lhs) + " " + e->op + " " + pretty_print(e->rhs) + ")";
  }
  return "";
}

namespace detail {

template <class T> T apply_function(const std::string &fn, const T &x) {
  using std::cos;
  using std::cosh;
  using std::exp;
  using std::log;
  using std::sin;
  using std::sinh;
  using std::sqrt;
  using std::tan;
  if (fn == "sin") return sin(x);
  if (fn == "cos") return cos(x);
  if (fn == "tan") return tan(x);
  if (fn == "exp") return exp(x);
  if (fn == "log") return log(x);
  if (fn == "sqrt") return sqrt(x);
  if (fn == "sinh") return sinh(x);
  if (fn == "cosh") return cosh(x);
  throw std::invalid_argument("unknown function " + fn);
}

} // namespace detail

// Evaluation over Jet2 scalars (or plain doubles via the second overload).
inline Jet2 evaluate(const ExprPtr &e, const std::vector<Jet2> &coords,
                     const std::map<std::string, double> &params) {
  const int dim = coords.front().dim();
  switch (e->kind) {
    case Expr::Kind::Number: return Jet2::constant(e->number, dim);
    case Expr::Kind::Coordinate: return coords[e->index];
    case Expr::Kind::Parameter: {
      auto it = params.find(e->name);
      if (it == params.end()) throw std::invalid_argument("unbound parameter " + e->name);
      return Jet2::constant(it->second, dim);
    }
    case Expr::Kind::Unary: return detail::apply_function(e->name, evaluate(e->lhs, coords, params));
    case Expr::Kind::Binary: {
      const Jet2 a = evaluate(e->lhs, coords, params);
      if (e->op == '^') return pow(a, e->rhs->number);
      const Jet2 b = evaluate(e->rhs, coords, params);
      switch (e->op) {
        case '+': return a + b;
        case '-': return a - b;
        case '*': return a * b;
        default: return a / b;
      }
    }
  }
  throw std::logic_error("unreachable expression kind");
}

inline double evaluate(const ExprPtr &e, const Vec &x, const std::map<std::string, double> &params) {
  switch (e->kind) {
    case Expr::Kind::Number: return e->number;
    case Expr::Kind::Coordinate: return x(e->index);
    case Expr::Kind::Parameter: {
      auto it = params.find(e->name);
      if (it == params.end()) throw std::invalid_argument("unbound parameter " + e->name);
      return it->second;
    }
    case Expr::Kind::Unary: return detail::apply_function(e->name, evaluate(e->lhs, x, params));
    case Expr::Kind::Binary: {
      const double a = evaluate(e->lhs, x, params);
      if (e->op == '^') return std::pow(a, e->rhs->number);
      const double b = evaluate(e->rhs, x, params);
      switch (e->op) {
        case '+': return a + b;
        case '-': return a - b;
        case '*': return a * b;
        default: return a / b;
      }
    }
  }
  throw std::logic_error("unreachable expression kind");
}

inline ScalarFn expression_field(ExprPtr e, std::map<std::string, double> params) {
  return [e = std::move(e), params = std::move(params)](const std::vector<Jet2> &coords) {
    return evaluate(e, coords, params);
  };
}

} // namespace maggeo
