#include "skelpair/expr.hpp"

#include <algorithm>
#include <cctype>
#include <cmath>
#include <numbers>

#include "skelpair/errors.hpp"

namespace skelpair {

namespace {

using NodePtr = std::shared_ptr<const ExprNode>;

NodePtr make(Op op, std::vector<NodePtr> args = {}) {
  auto n = std::make_shared<ExprNode>();
  n->op = op;
  n->args = std::move(args);
  return n;
}

const char* op_name(Op op) {
  switch (op) {
    case Op::Const: return "const";
    case Op::Var: return "var";
    case Op::Pi: return "pi";
    case Op::Add: return "+";
    case Op::Sub: return "-";
    case Op::Mul: return "*";
    case Op::Div: return "/";
    case Op::Neg: return "neg";
    case Op::Pow: return "^";
    case Op::Sin: return "sin";
    case Op::Cos: return "cos";
    case Op::Exp: return "exp";
    case Op::Abs: return "abs";
    case Op::Min: return "min";
    case Op::Max: return "max";
  }
  return "?";
}

class Parser {
 public:
  Parser(std::string_view text, int max_vars) : s_(text), max_vars_(max_vars) {}

  NodePtr parse() {
    NodePtr e = expr();
    skip();
    if (pos_ != s_.size()) fail("operator or end of input");
    return e;
  }

 private:
  std::string_view s_;
  std::size_t pos_ = 0;
  int max_vars_;

  [[noreturn]] void fail(const std::string& expected) const {
    std::string got = pos_ < s_.size() ? std::string("'") + s_[pos_] + "'" : "end of input";
    throw Error(ErrorKind::SyntaxError,
                "at position " + std::to_string(pos_) + ": expected " + expected + ", got " + got,
                {{"position", std::to_string(pos_)}, {"expected", expected}});
  }

  void skip() {
    while (pos_ < s_.size() && std::isspace(static_cast<unsigned char>(s_[pos_]))) ++pos_;
  }
  bool accept(char c) {
    skip();
    if (pos_ < s_.size() && s_[pos_] == c) {
      ++pos_;
      return true;
    }
    return false;
  }
  void expect(char c) {
    if (!accept(c)) fail(std::string("'") + c + "'");
  }

  NodePtr expr() {
    NodePtr lhs = term();
    for (;;) {
      if (accept('+')) lhs = make(Op::Add, {lhs, term()});
      else if (accept('-')) lhs = make(Op::Sub, {lhs, term()});
      else return lhs;
    }
  }

  NodePtr term() {
    NodePtr lhs = unary();
    for (;;) {
      if (accept('*')) lhs = make(Op::Mul, {lhs, unary()});
      else if (accept('/')) lhs = make(Op::Div, {lhs, unary()});
      else return lhs;
    }
  }

  // -x^2 is -(x^2)
  NodePtr unary() {
    if (accept('-')) return make(Op::Neg, {unary()});
    if (accept('+')) return unary();
    return power();
  }

  NodePtr power() {
    NodePtr base = primary();
    if (!accept('^')) return base;
    bool paren = accept('(');
    bool negative = false;
    if (accept('-')) negative = true;
    else accept('+');
    skip();
    std::size_t start = pos_;
    while (pos_ < s_.size() && std::isdigit(static_cast<unsigned char>(s_[pos_]))) ++pos_;
    if (start == pos_) fail("integer exponent");
    if (pos_ - start > 6) fail("exponent below 10^6");
    long e = std::stol(std::string(s_.substr(start, pos_ - start)));
    if (paren) expect(')');
    auto n = std::make_shared<ExprNode>();
    n->op = Op::Pow;
    n->exponent = negative ? -e : e;
    n->args = {base};
    return n;
  }

  NodePtr number() {
    std::size_t start = pos_;
    while (pos_ < s_.size() && (std::isdigit(static_cast<unsigned char>(s_[pos_])) || s_[pos_] == '.')) ++pos_;
    if (pos_ < s_.size() && (s_[pos_] == 'e' || s_[pos_] == 'E')) {
      std::size_t save = pos_++;
      if (pos_ < s_.size() && (s_[pos_] == '+' || s_[pos_] == '-')) ++pos_;
      if (pos_ < s_.size() && std::isdigit(static_cast<unsigned char>(s_[pos_]))) {
        while (pos_ < s_.size() && std::isdigit(static_cast<unsigned char>(s_[pos_]))) ++pos_;
      } else {
        pos_ = save;
      }
    }
    auto n = std::make_shared<ExprNode>();
    n->op = Op::Const;
    try {
      n->value = parse_rational(s_.substr(start, pos_ - start));
    } catch (const Error&) {
      pos_ = start;
      fail("number");
    }
    return n;
  }

  NodePtr primary() {
    skip();
    if (pos_ >= s_.size()) fail("number, variable, function or '('");
    char c = s_[pos_];
    if (std::isdigit(static_cast<unsigned char>(c)) || c == '.') return number();
    if (accept('(')) {
      NodePtr e = expr();
      expect(')');
      return e;
    }
    if (std::isalpha(static_cast<unsigned char>(c)) || c == '_') {
      std::size_t start = pos_;
      while (pos_ < s_.size() && (std::isalnum(static_cast<unsigned char>(s_[pos_])) || s_[pos_] == '_')) ++pos_;
      std::string id(s_.substr(start, pos_ - start));
      return identifier(id, start);
    }
    fail("number, variable, function or '('");
  }

  NodePtr identifier(const std::string& id, std::size_t start) {
    auto unknown = [&]() {
      return Error(ErrorKind::UnknownIdentifier, "unknown identifier '" + id + "' at position " + std::to_string(start),
                   {{"identifier", id}, {"position", std::to_string(start)}});
    };
    if (id == "pi") return make(Op::Pi);
    if (id.size() >= 2 && id[0] == 'x' &&
        std::all_of(id.begin() + 1, id.end(), [](char ch) { return std::isdigit(static_cast<unsigned char>(ch)); }) &&
        id[1] != '0' && id.size() < 6) {
      int k = std::stoi(id.substr(1));
      if (max_vars_ >= 0 && k > max_vars_) throw unknown();
      auto n = std::make_shared<ExprNode>();
      n->op = Op::Var;
      n->var = k - 1;
      return n;
    }
    Op op;
    std::size_t arity;
    if (id == "sin") op = Op::Sin, arity = 1;
    else if (id == "cos") op = Op::Cos, arity = 1;
    else if (id == "exp") op = Op::Exp, arity = 1;
    else if (id == "abs") op = Op::Abs, arity = 1;
    else if (id == "min") op = Op::Min, arity = 2;
    else if (id == "max") op = Op::Max, arity = 2;
    else throw unknown();
    expect('(');
    std::vector<NodePtr> args;
    if (!accept(')')) {
      args.push_back(expr());
      while (accept(',')) args.push_back(expr());
      expect(')');
    }
    if (args.size() != arity)
      throw Error(ErrorKind::ArityMismatch,
                  id + " takes " + std::to_string(arity) + " argument(s), got " + std::to_string(args.size()),
                  {{"function", id}, {"position", std::to_string(start)}});
    return make(op, std::move(args));
  }
};

[[noreturn]] void eval_fail(Op op, const std::string& reason) {
  throw Error(ErrorKind::EvalError, std::string(op_name(op)) + ": " + reason,
              {{"node", op_name(op)}, {"reason", reason}});
}

double eval_node(const ExprNode& n, std::span<const double> x) {
  auto arg = [&](std::size_t i) { return eval_node(*n.args[i], x); };
  double r = 0;
  switch (n.op) {
    case Op::Const: return n.value.get_d();
    case Op::Var:
      if (static_cast<std::size_t>(n.var) >= x.size()) eval_fail(n.op, "variable outside the point dimension");
      return x[static_cast<std::size_t>(n.var)];
    case Op::Pi: return std::numbers::pi;
    case Op::Add: r = arg(0) + arg(1); break;
    case Op::Sub: r = arg(0) - arg(1); break;
    case Op::Mul: r = arg(0) * arg(1); break;
    case Op::Div: {
      double b = arg(1);
      if (b == 0.0) eval_fail(n.op, "division by zero");
      r = arg(0) / b;
      break;
    }
    case Op::Neg: return -arg(0);
    case Op::Pow: {
      double b = arg(0);
      if (b == 0.0 && n.exponent < 0) eval_fail(n.op, "zero to a negative power");
      r = std::pow(b, static_cast<double>(n.exponent));
      break;
    }
    case Op::Sin: r = std::sin(arg(0)); break;
    case Op::Cos: r = std::cos(arg(0)); break;
    case Op::Exp: r = std::exp(arg(0)); break;
    case Op::Abs: return std::fabs(arg(0));
    case Op::Min: return std::min(arg(0), arg(1));
    case Op::Max: return std::max(arg(0), arg(1));
  }
  if (!std::isfinite(r)) eval_fail(n.op, "non-finite result");
  return r;
}

Rational eval_exact_node(const ExprNode& n, std::span<const Rational> x) {
  auto arg = [&](std::size_t i) { return eval_exact_node(*n.args[i], x); };
  switch (n.op) {
    case Op::Const: return n.value;
    case Op::Var:
      if (static_cast<std::size_t>(n.var) >= x.size()) eval_fail(n.op, "variable outside the point dimension");
      return x[static_cast<std::size_t>(n.var)];
    case Op::Add: return Rational(arg(0) + arg(1));
    case Op::Sub: return Rational(arg(0) - arg(1));
    case Op::Mul: return Rational(arg(0) * arg(1));
    case Op::Div: {
      Rational b = arg(1);
      if (b == 0) eval_fail(n.op, "division by zero");
      return Rational(arg(0) / b);
    }
    case Op::Neg: return Rational(-arg(0));
    case Op::Pow:
      try {
        return pow(arg(0), n.exponent);
      } catch (const Error&) {
        eval_fail(n.op, "zero to a negative power");
      }
    case Op::Abs: return Rational(abs(arg(0)));
    case Op::Min: {
      Rational a = arg(0), b = arg(1);
      return a < b ? a : b;
    }
    case Op::Max: {
      Rational a = arg(0), b = arg(1);
      return a < b ? b : a;
    }
    default: eval_fail(n.op, "no exact value");
  }
}

bool any_node(const ExprNode& n, bool (*pred)(Op)) {
  if (pred(n.op)) return true;
  for (const auto& a : n.args)
    if (any_node(*a, pred)) return true;
  return false;
}

int max_var_node(const ExprNode& n) {
  int m = n.op == Op::Var ? n.var + 1 : 0;
  for (const auto& a : n.args) m = std::max(m, max_var_node(*a));
  return m;
}

std::string show(const ExprNode& n) {
  switch (n.op) {
    case Op::Const: return to_string(n.value);
    case Op::Var: return "x" + std::to_string(n.var + 1);
    case Op::Pi: return "pi";
    case Op::Neg: return "(-" + show(*n.args[0]) + ")";
    case Op::Pow: return "(" + show(*n.args[0]) + "^" + std::to_string(n.exponent) + ")";
    case Op::Add:
    case Op::Sub:
    case Op::Mul:
    case Op::Div: return "(" + show(*n.args[0]) + op_name(n.op) + show(*n.args[1]) + ")";
    default: {
      std::string s = std::string(op_name(n.op)) + "(";
      for (std::size_t i = 0; i < n.args.size(); ++i) s += (i ? "," : "") + show(*n.args[i]);
      return s + ")";
    }
  }
}

}  // namespace

Expr parse_expr(std::string_view text, int max_vars) {
  Parser p(text, max_vars);
  return Expr(p.parse(), std::string(text));
}

double Expr::eval(std::span<const double> x) const { return eval_node(*root_, x); }

Rational Expr::eval_exact(std::span<const Rational> x) const {
  Rational r = eval_exact_node(*root_, x);
  r.canonicalize();
  return r;
}

bool Expr::is_rational() const {
  return !any_node(*root_, [](Op op) { return op == Op::Sin || op == Op::Cos || op == Op::Exp || op == Op::Pi; });
}

bool Expr::is_cube_smooth() const {
  return !any_node(*root_, [](Op op) { return op == Op::Abs || op == Op::Min || op == Op::Max; });
}

int Expr::max_var() const { return max_var_node(*root_); }

std::string Expr::to_string() const { return show(*root_); }

}  // namespace skelpair
