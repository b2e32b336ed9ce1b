#include "psifrac/expr.hpp"

#include <cctype>
#include <charconv>
#include <cmath>
#include <numbers>
#include <sstream>
#include <vector>

#include "psifrac/errors.hpp"

namespace psifrac {

enum class Func { Sin, Cos, Exp, Ln, Sqrt, Abs, Pow, Min, Max };

namespace {

struct FuncInfo {
  const char* name;
  Func func;
  int arity;
};

constexpr FuncInfo kFuncs[] = {
    {"sin", Func::Sin, 1},   {"cos", Func::Cos, 1}, {"exp", Func::Exp, 1},
    {"ln", Func::Ln, 1},     {"sqrt", Func::Sqrt, 1}, {"abs", Func::Abs, 1},
    {"pow", Func::Pow, 2},   {"min", Func::Min, 2}, {"max", Func::Max, 2},
};

const FuncInfo* lookup_func(std::string_view name) {
  for (const auto& f : kFuncs)
    if (name == f.name) return &f;
  return nullptr;
}

}  // namespace

struct Expr::Node {
  enum class Kind { Literal, Var, Neg, Add, Sub, Mul, Div, Pow, Call } kind;
  double value = 0.0;           // Literal
  std::string name;             // Var
  Func func = Func::Sin;        // Call
  std::vector<std::shared_ptr<const Node>> args;
};

namespace {

using NodePtr = std::shared_ptr<const Expr::Node>;
using Kind = Expr::Node::Kind;

NodePtr make_node(Kind k, std::vector<NodePtr> args) {
  auto n = std::make_shared<Expr::Node>();
  n->kind = k;
  n->args = std::move(args);
  return n;
}

NodePtr make_literal(double v) {
  auto n = std::make_shared<Expr::Node>();
  n->kind = Kind::Literal;
  n->value = v;
  return n;
}

class Parser {
 public:
  explicit Parser(std::string_view src) : src_(src) {}

  NodePtr parse() {
    skip_ws();
    if (pos_ >= src_.size()) throw ParseError(pos_, "empty expression");
    NodePtr e = parse_sum();
    skip_ws();
    if (pos_ < src_.size())
      throw ParseError(pos_, "trailing tokens after expression");
    return e;
  }

 private:
  std::string_view src_;
  std::size_t pos_ = 0;

  void skip_ws() {
    while (pos_ < src_.size() && std::isspace(static_cast<unsigned char>(src_[pos_]))) ++pos_;
  }

  bool consume(char c) {
    skip_ws();
    if (pos_ < src_.size() && src_[pos_] == c) {
      ++pos_;
      return true;
    }
    return false;
  }

  char peek() {
    skip_ws();
    return pos_ < src_.size() ? src_[pos_] : '\0';
  }

  NodePtr parse_sum() {
    NodePtr lhs = parse_product();
    for (;;) {
      if (consume('+'))
        lhs = make_node(Kind::Add, {lhs, parse_product()});
      else if (consume('-'))
        lhs = make_node(Kind::Sub, {lhs, parse_product()});
      else
        return lhs;
    }
  }

  NodePtr parse_product() {
    NodePtr lhs = parse_unary();
    for (;;) {
      if (consume('*'))
        lhs = make_node(Kind::Mul, {lhs, parse_unary()});
      else if (consume('/'))
        lhs = make_node(Kind::Div, {lhs, parse_unary()});
      else
        return lhs;
    }
  }

  // Unary minus binds looser than ^, so -z^2 parses as -(z^2).
  NodePtr parse_unary() {
    if (consume('-')) return make_node(Kind::Neg, {parse_unary()});
    return parse_power();
  }

  NodePtr parse_power() {
    NodePtr base = parse_atom();
    if (consume('^')) {
      // Right-associative; the exponent may itself carry a unary minus.
      return make_node(Kind::Pow, {base, parse_unary()});
    }
    return base;
  }

  NodePtr parse_atom() {
    skip_ws();
    if (pos_ >= src_.size()) throw ParseError(pos_, "unexpected end of input");
    char c = src_[pos_];
    if (c == '(') {
      ++pos_;
      NodePtr e = parse_sum();
      if (!consume(')')) throw ParseError(pos_, "expected ')'");
      return e;
    }
    if (std::isdigit(static_cast<unsigned char>(c)) || c == '.') return parse_number();
    if (std::isalpha(static_cast<unsigned char>(c)) || c == '_') return parse_ident();
    throw ParseError(pos_, std::string("unexpected character '") + c + "'");
  }

  NodePtr parse_number() {
    std::size_t start = pos_;
    while (pos_ < src_.size() &&
           (std::isdigit(static_cast<unsigned char>(src_[pos_])) || src_[pos_] == '.'))
      ++pos_;
    // exponent suffix
    if (pos_ < src_.size() && (src_[pos_] == 'e' || src_[pos_] == 'E')) {
      std::size_t mark = pos_;
      ++pos_;
      if (pos_ < src_.size() && (src_[pos_] == '+' || src_[pos_] == '-')) ++pos_;
      if (pos_ < src_.size() && std::isdigit(static_cast<unsigned char>(src_[pos_]))) {
        while (pos_ < src_.size() && std::isdigit(static_cast<unsigned char>(src_[pos_]))) ++pos_;
      } else {
        pos_ = mark;  // 'e' was an identifier start, not an exponent
      }
    }
    double v = 0.0;
    auto res = std::from_chars(src_.data() + start, src_.data() + pos_, v);
    if (res.ec != std::errc() || res.ptr != src_.data() + pos_)
      throw ParseError(start, "malformed number");
    return make_literal(v);
  }

  NodePtr parse_ident() {
    std::size_t start = pos_;
    while (pos_ < src_.size() &&
           (std::isalnum(static_cast<unsigned char>(src_[pos_])) || src_[pos_] == '_'))
      ++pos_;
    std::string name(src_.substr(start, pos_ - start));
    if (name == "pi") return make_literal(std::numbers::pi);
    skip_ws();
    if (pos_ < src_.size() && src_[pos_] == '(') {
      const FuncInfo* fi = lookup_func(name);
      if (!fi) throw ParseError(start, "unknown function '" + name + "'");
      ++pos_;  // '('
      std::vector<NodePtr> args;
      args.push_back(parse_sum());
      while (consume(',')) args.push_back(parse_sum());
      if (!consume(')')) throw ParseError(pos_, "expected ')'");
      if (static_cast<int>(args.size()) != fi->arity)
        throw ParseError(start, "function '" + name + "' takes " +
                                    std::to_string(fi->arity) + " argument(s)");
      auto n = std::make_shared<Expr::Node>();
      n->kind = Kind::Call;
      n->func = fi->func;
      n->args = std::move(args);
      return n;
    }
    auto n = std::make_shared<Expr::Node>();
    n->kind = Kind::Var;
    n->name = std::move(name);
    return n;
  }
};

double eval_node(const Expr::Node& n, const Bindings& b);

double checked(double v, const char* what) {
  if (!std::isfinite(v)) throw EvalError(std::string("non-finite result from ") + what);
  return v;
}

double eval_call(const Expr::Node& n, const Bindings& b) {
  double a0 = eval_node(*n.args[0], b);
  switch (n.func) {
    case Func::Sin: return checked(std::sin(a0), "sin");
    case Func::Cos: return checked(std::cos(a0), "cos");
    case Func::Exp: return checked(std::exp(a0), "exp");
    case Func::Ln:
      if (a0 <= 0.0) throw EvalError("ln of nonpositive value");
      return checked(std::log(a0), "ln");
    case Func::Sqrt:
      if (a0 < 0.0) throw EvalError("sqrt of negative value");
      return checked(std::sqrt(a0), "sqrt");
    case Func::Abs: return std::abs(a0);
    case Func::Pow:
      return checked(std::pow(a0, eval_node(*n.args[1], b)), "pow");
    case Func::Min: return std::min(a0, eval_node(*n.args[1], b));
    case Func::Max: return std::max(a0, eval_node(*n.args[1], b));
  }
  throw EvalError("unreachable function kind");
}

double eval_node(const Expr::Node& n, const Bindings& b) {
  switch (n.kind) {
    case Kind::Literal: return n.value;
    case Kind::Var: {
      auto it = b.find(n.name);
      if (it == b.end()) throw UnboundVariable("unbound variable '" + n.name + "'");
      return it->second;
    }
    case Kind::Neg: return -eval_node(*n.args[0], b);
    case Kind::Add:
      return checked(eval_node(*n.args[0], b) + eval_node(*n.args[1], b), "+");
    case Kind::Sub:
      return checked(eval_node(*n.args[0], b) - eval_node(*n.args[1], b), "-");
    case Kind::Mul:
      return checked(eval_node(*n.args[0], b) * eval_node(*n.args[1], b), "*");
    case Kind::Div: {
      double d = eval_node(*n.args[1], b);
      if (d == 0.0) throw EvalError("division by zero");
      return checked(eval_node(*n.args[0], b) / d, "/");
    }
    case Kind::Pow:
      return checked(std::pow(eval_node(*n.args[0], b), eval_node(*n.args[1], b)), "^");
    case Kind::Call: return eval_call(n, b);
  }
  throw EvalError("unreachable node kind");
}

void collect_vars(const Expr::Node& n, std::set<std::string>& out) {
  if (n.kind == Kind::Var) out.insert(n.name);
  for (const auto& a : n.args) collect_vars(*a, out);
}

const char* func_name(Func f) {
  for (const auto& fi : kFuncs)
    if (fi.func == f) return fi.name;
  return "?";
}

void print_node(const Expr::Node& n, std::ostream& os) {
  // Fully parenthesized: trivially round-trips at any precedence.
  switch (n.kind) {
    case Kind::Literal: {
      std::ostringstream tmp;
      tmp.precision(17);
      tmp << n.value;
      os << tmp.str();
      return;
    }
    case Kind::Var: os << n.name; return;
    case Kind::Neg:
      os << "(-";
      print_node(*n.args[0], os);
      os << ")";
      return;
    case Kind::Add:
    case Kind::Sub:
    case Kind::Mul:
    case Kind::Div:
    case Kind::Pow: {
      const char* op = n.kind == Kind::Add   ? "+"
                       : n.kind == Kind::Sub ? "-"
                       : n.kind == Kind::Mul ? "*"
                       : n.kind == Kind::Div ? "/"
                                             : "^";
      os << "(";
      print_node(*n.args[0], os);
      os << op;
      print_node(*n.args[1], os);
      os << ")";
      return;
    }
    case Kind::Call: {
      os << func_name(n.func) << "(";
      for (std::size_t i = 0; i < n.args.size(); ++i) {
        if (i) os << ",";
        print_node(*n.args[i], os);
      }
      os << ")";
      return;
    }
  }
}

}  // namespace

Expr Expr::parse(std::string_view source) {
  return Expr(Parser(source).parse());
}

double Expr::eval(const Bindings& bindings) const {
  return eval_node(*root_, bindings);
}

std::set<std::string> Expr::free_vars() const {
  std::set<std::string> out;
  collect_vars(*root_, out);
  return out;
}

std::string Expr::str() const {
  std::ostringstream os;
  print_node(*root_, os);
  return os.str();
}

Expr Expr::operator+(const Expr& other) const {
  return Expr(make_node(Kind::Add, {root_, other.root_}));
}

}  // namespace psifrac
