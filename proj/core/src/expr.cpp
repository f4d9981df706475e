#include "navgeo/expr.hpp"

#include <cctype>
#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <cstring>
#include <numbers>

namespace navgeo {

namespace {

double deriv_of(double) { return 0.0; }
double deriv_of(const Dual& d) { return d.deriv; }

bool finite(double v) { return std::isfinite(v); }
bool finite(const Dual& d) { return std::isfinite(d.value) && std::isfinite(d.deriv); }

using std::cos;
using std::exp;
using std::log;
using std::sin;
using std::sqrt;
using std::tanh;

template <class T>
T int_power(const T& base, double p) {
  if constexpr (std::is_same_v<T, double>) {
    return std::pow(base, p);
  } else {
    if (p == 0.0) return T(1.0);
    return T(std::pow(base.value, p), p * std::pow(base.value, p - 1.0) * base.deriv);
  }
}

}  // namespace

class Expression::Parser {
 public:
  Parser(std::string_view text, Expression& out) : text_(text), out_(out) {}

  void run() {
    skip_space();
    out_.root_ = parse_sum();
    skip_space();
    if (pos_ < text_.size()) fail("unexpected '" + std::string(1, text_[pos_]) + "'");
  }

 private:
  [[noreturn]] void fail(const std::string& msg, ErrorKind kind = ErrorKind::SyntaxError) const {
    throw Error(kind, msg + " at offset " + std::to_string(pos_), pos_);
  }
  [[noreturn]] void fail_at(std::size_t at, const std::string& msg, ErrorKind kind) const {
    throw Error(kind, msg + " at offset " + std::to_string(at), at);
  }

  void skip_space() {
    while (pos_ < text_.size() && std::isspace(static_cast<unsigned char>(text_[pos_]))) ++pos_;
  }
  bool peek(char c) {
    skip_space();
    return pos_ < text_.size() && text_[pos_] == c;
  }
  bool accept(char c) {
    if (peek(c)) {
      ++pos_;
      return true;
    }
    return false;
  }
  void expect(char c) {
    if (!accept(c)) {
      if (pos_ >= text_.size()) fail(std::string("expected '") + c + "' but input ended");
      fail(std::string("expected '") + c + "'");
    }
  }

  int add(Node n) {
    out_.nodes_.push_back(n);
    return static_cast<int>(out_.nodes_.size()) - 1;
  }
  int binary(Op op, int l, int r) { return add(Node{op, 0.0, 0, l, r}); }

  int parse_sum() {
    int lhs = parse_product();
    for (;;) {
      if (accept('+')) {
        lhs = binary(Op::Add, lhs, parse_product());
      } else if (accept('-')) {
        lhs = binary(Op::Sub, lhs, parse_product());
      } else {
        return lhs;
      }
    }
  }

  int parse_product() {
    int lhs = parse_unary();
    for (;;) {
      if (accept('*')) {
        lhs = binary(Op::Mul, lhs, parse_unary());
      } else if (accept('/')) {
        lhs = binary(Op::Div, lhs, parse_unary());
      } else {
        return lhs;
      }
    }
  }

  int parse_unary() {
    if (accept('-')) return add(Node{Op::Neg, 0.0, 0, parse_unary(), -1});
    return parse_power();
  }

  int parse_power() {
    const int base = parse_primary();
    if (accept('^')) return binary(Op::Pow, base, parse_unary());
    return base;
  }

  int parse_primary() {
    skip_space();
    if (pos_ >= text_.size()) fail("unexpected end of input");
    const char c = text_[pos_];
    if (c == '(') {
      ++pos_;
      const int inner = parse_sum();
      expect(')');
      return inner;
    }
    if (std::isdigit(static_cast<unsigned char>(c)) || c == '.') return parse_number();
    if (std::isalpha(static_cast<unsigned char>(c)) || c == '_') return parse_identifier();
    fail("unexpected '" + std::string(1, c) + "'");
  }

  int parse_number() {
    const std::size_t start = pos_;
    auto digits = [&] {
      std::size_t n = 0;
      while (pos_ < text_.size() && std::isdigit(static_cast<unsigned char>(text_[pos_]))) {
        ++pos_;
        ++n;
      }
      return n;
    };
    std::size_t mantissa = digits();
    if (pos_ < text_.size() && text_[pos_] == '.') {
      ++pos_;
      mantissa += digits();
    }
    if (mantissa == 0) fail_at(start, "malformed number", ErrorKind::SyntaxError);
    if (pos_ < text_.size() && (text_[pos_] == 'e' || text_[pos_] == 'E')) {
      std::size_t look = pos_ + 1;
      if (look < text_.size() && (text_[look] == '+' || text_[look] == '-')) ++look;
      if (look < text_.size() && std::isdigit(static_cast<unsigned char>(text_[look]))) {
        pos_ = look;
        digits();
      }
    }
    const std::string token(text_.substr(start, pos_ - start));
    const double v = std::strtod(token.c_str(), nullptr);
    if (!std::isfinite(v)) fail_at(start, "number out of range", ErrorKind::SyntaxError);
    return add(Node{Op::Literal, v});
  }

  int parse_identifier() {
    const std::size_t start = pos_;
    while (pos_ < text_.size() &&
           (std::isalnum(static_cast<unsigned char>(text_[pos_])) || text_[pos_] == '_')) {
      ++pos_;
    }
    const std::string name(text_.substr(start, pos_ - start));

    static constexpr std::pair<const char*, Op> kFunctions[] = {
        {"sin", Op::Sin}, {"cos", Op::Cos},   {"exp", Op::Exp},
        {"log", Op::Log}, {"sqrt", Op::Sqrt}, {"tanh", Op::Tanh},
    };
    for (const auto& [fname, op] : kFunctions) {
      if (name == fname) return parse_call(op, name, start);
    }
    if (name == "pi") return add(Node{Op::Literal, std::numbers::pi});
    if (name == "e") return add(Node{Op::Literal, std::numbers::e});

    if (out_.vars_ == Variables::Parameter) {
      if (name == "t") {
        out_.free_vars_.insert(1);
        return add(Node{Op::Var, 0.0, 0});
      }
    } else if (name.size() >= 2 && name[0] == 'x' && name[1] != '0' &&
               name.find_first_not_of("0123456789", 1) == std::string::npos && name.size() <= 4) {
      const int k = std::atoi(name.c_str() + 1);
      if (k >= 1 && k <= out_.dim_) {
        out_.free_vars_.insert(k);
        return add(Node{Op::Var, 0.0, k - 1});
      }
    }
    fail_at(start, "unknown identifier '" + name + "'", ErrorKind::UnknownIdentifier);
  }

  int parse_call(Op op, const std::string& name, std::size_t start) {
    if (!accept('(')) fail("expected '(' after function '" + name + "'");
    if (peek(')')) fail_at(start, name + " takes exactly one argument, got 0", ErrorKind::ArityError);
    const int arg = parse_sum();
    int count = 1;
    while (accept(',')) {
      parse_sum();
      ++count;
    }
    if (count != 1) {
      fail_at(start, name + " takes exactly one argument, got " + std::to_string(count),
              ErrorKind::ArityError);
    }
    expect(')');
    return add(Node{op, 0.0, 0, arg, -1});
  }

  std::string_view text_;
  std::size_t pos_ = 0;
  Expression& out_;
};

Expression Expression::parse(std::string_view text, int dim) {
  if (dim < 1) throw Error(ErrorKind::InvalidArgument, "expression dimension must be >= 1");
  Expression e;
  e.dim_ = dim;
  e.vars_ = Variables::Coordinates;
  e.source_ = std::string(text);
  Parser(text, e).run();
  return e;
}

Expression Expression::parse_parameter(std::string_view text) {
  Expression e;
  e.dim_ = 1;
  e.vars_ = Variables::Parameter;
  e.source_ = std::string(text);
  Parser(text, e).run();
  return e;
}

template <class T>
T Expression::eval_node(int index, std::span<const T> x) const {
  const Node& n = nodes_[static_cast<std::size_t>(index)];
  T r{};
  switch (n.op) {
    case Op::Literal: return T(n.literal);
    case Op::Var: return x[static_cast<std::size_t>(n.var)];
    case Op::Neg: r = -eval_node(n.lhs, x); break;
    case Op::Add: r = eval_node(n.lhs, x) + eval_node(n.rhs, x); break;
    case Op::Sub: r = eval_node(n.lhs, x) - eval_node(n.rhs, x); break;
    case Op::Mul: r = eval_node(n.lhs, x) * eval_node(n.rhs, x); break;
    case Op::Div: {
      const T den = eval_node(n.rhs, x);
      if (value_of(den) == 0.0) throw Error(ErrorKind::NonFinite, "division by zero");
      r = eval_node(n.lhs, x) / den;
      break;
    }
    case Op::Pow: {
      const T base = eval_node(n.lhs, x);
      const T ex = eval_node(n.rhs, x);
      const double b = value_of(base);
      const double p = value_of(ex);
      if (deriv_of(ex) != 0.0) {
        if (!(b > 0.0)) throw Error(ErrorKind::DomainError, "variable exponent needs a positive base");
        using std::pow;
        r = pow(base, ex);
      } else if (p == std::floor(p) && std::abs(p) < 1e15) {
        if (b == 0.0 && p < 0.0) throw Error(ErrorKind::NonFinite, "zero to a negative power");
        r = int_power(base, p);
      } else if (b > 0.0) {
        using std::pow;
        r = pow(base, p);
      } else if (b == 0.0 && p > 0.0) {
        if (p < 1.0 && deriv_of(base) != 0.0) {
          throw Error(ErrorKind::NonFinite, "derivative of fractional power at zero");
        }
        r = T(0.0);
      } else {
        throw Error(ErrorKind::DomainError, "fractional power of a negative number");
      }
      break;
    }
    case Op::Sin: r = sin(eval_node(n.lhs, x)); break;
    case Op::Cos: r = cos(eval_node(n.lhs, x)); break;
    case Op::Exp: r = exp(eval_node(n.lhs, x)); break;
    case Op::Tanh: r = tanh(eval_node(n.lhs, x)); break;
    case Op::Log: {
      const T a = eval_node(n.lhs, x);
      if (!(value_of(a) > 0.0)) throw Error(ErrorKind::DomainError, "log of a nonpositive value");
      r = log(a);
      break;
    }
    case Op::Sqrt: {
      const T a = eval_node(n.lhs, x);
      if (value_of(a) < 0.0) throw Error(ErrorKind::DomainError, "sqrt of a negative value");
      if (value_of(a) == 0.0 && deriv_of(a) == 0.0) return T(0.0);
      r = sqrt(a);
      break;
    }
  }
  if (!finite(r)) throw Error(ErrorKind::NonFinite, "expression evaluated to a non-finite value");
  return r;
}

double Expression::eval(std::span<const double> x) const {
  if (static_cast<int>(x.size()) < dim_) {
    throw Error(ErrorKind::InvalidArgument, "point has fewer coordinates than the expression");
  }
  return eval_node<double>(root_, x);
}

Dual Expression::eval(std::span<const Dual> x) const {
  if (static_cast<int>(x.size()) < dim_) {
    throw Error(ErrorKind::InvalidArgument, "point has fewer coordinates than the expression");
  }
  return eval_node<Dual>(root_, x);
}

std::pair<double, double> Expression::eval_dual(std::span<const double> x,
                                                std::span<const double> dir) const {
  if (x.size() != dir.size()) throw Error(ErrorKind::InvalidArgument, "point/direction size mismatch");
  std::vector<Dual> d(x.size());
  for (std::size_t i = 0; i < x.size(); ++i) d[i] = Dual(x[i], dir[i]);
  const Dual r = eval(std::span<const Dual>(d));
  return {r.value, r.deriv};
}

namespace {

int precedence_of(int op) {
  // Matches Expression::Op ordering: Literal, Var, Neg, Add, Sub, Mul, Div, Pow, functions.
  switch (op) {
    case 3:
    case 4: return 1;
    case 5:
    case 6: return 2;
    case 2: return 3;
    case 7: return 4;
    default: return 5;
  }
}

}  // namespace

void Expression::render_node(int index, int min_prec, bool /*right_side*/, std::string& out) const {
  const Node& n = nodes_[static_cast<std::size_t>(index)];
  const int prec = precedence_of(static_cast<int>(n.op));
  const bool paren = prec < min_prec;
  if (paren) out += '(';
  switch (n.op) {
    case Op::Literal: {
      char buf[40];
      std::snprintf(buf, sizeof buf, "%.17g", n.literal);
      out += buf;
      break;
    }
    case Op::Var:
      out += vars_ == Variables::Parameter ? std::string("t") : "x" + std::to_string(n.var + 1);
      break;
    case Op::Neg:
      out += '-';
      render_node(n.lhs, 3, false, out);
      break;
    case Op::Add:
    case Op::Sub:
    case Op::Mul:
    case Op::Div: {
      const char sym = n.op == Op::Add ? '+' : n.op == Op::Sub ? '-' : n.op == Op::Mul ? '*' : '/';
      render_node(n.lhs, prec, false, out);
      out += ' ';
      out += sym;
      out += ' ';
      render_node(n.rhs, prec + 1, true, out);
      break;
    }
    case Op::Pow:
      render_node(n.lhs, 5, false, out);
      out += '^';
      render_node(n.rhs, 3, true, out);
      break;
    case Op::Sin:
    case Op::Cos:
    case Op::Exp:
    case Op::Log:
    case Op::Sqrt:
    case Op::Tanh: {
      static constexpr const char* kNames[] = {"sin", "cos", "exp", "log", "sqrt", "tanh"};
      out += kNames[static_cast<int>(n.op) - static_cast<int>(Op::Sin)];
      out += '(';
      render_node(n.lhs, 0, false, out);
      out += ')';
      break;
    }
  }
  if (paren) out += ')';
}

std::string Expression::render() const {
  std::string out;
  render_node(root_, 0, false, out);
  return out;
}

bool Expression::equal_nodes(const Expression& a, int ia, const Expression& b, int ib) {
  const Node& na = a.nodes_[static_cast<std::size_t>(ia)];
  const Node& nb = b.nodes_[static_cast<std::size_t>(ib)];
  if (na.op != nb.op) return false;
  switch (na.op) {
    case Op::Literal: return std::memcmp(&na.literal, &nb.literal, sizeof(double)) == 0;
    case Op::Var: return na.var == nb.var;
    default: break;
  }
  if (!equal_nodes(a, na.lhs, b, nb.lhs)) return false;
  if ((na.rhs < 0) != (nb.rhs < 0)) return false;
  return na.rhs < 0 || equal_nodes(a, na.rhs, b, nb.rhs);
}

bool operator==(const Expression& a, const Expression& b) {
  if (a.dim_ != b.dim_ || a.vars_ != b.vars_) return false;
  if (a.root_ < 0 || b.root_ < 0) return a.root_ == b.root_;
  return Expression::equal_nodes(a, a.root_, b, b.root_);
}

}  // namespace navgeo
