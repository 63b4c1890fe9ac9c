#pragma once

// Analytic maps as immutable expression trees.
//
// Grammar accepted by AnalyticMap::parse:
//
//   expr   := ['-'] term (('+'|'-') term)*
//   term   := factor (('*'|'/') factor)*
//   factor := atom ['^' integer]
//   atom   := 'z' | number | number 'i' | 'i' | 'exp' '(' expr ')' | '(' expr ')'
//
// A complex literal a+bi is the sum of a real and an imaginary literal;
// constant subtrees are folded so it evaluates as one constant. Printing via
// to_string() emits text in the same grammar, with composition expanded by
// substitution.

#include <algorithm>
#include <cctype>
#include <charconv>
#include <cmath>
#include <cstdio>
#include <memory>
#include <optional>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

#include "holoflow/error.hpp"

namespace holoflow {

enum class Domain { disc, halfplane, plane };

inline const char* to_string(Domain d) {
  switch (d) {
    case Domain::disc: return "disc";
    case Domain::halfplane: return "halfplane";
    case Domain::plane: return "plane";
  }
  return "disc";
}

inline Domain domain_from_string(std::string_view s) {
  if (s == "disc") return Domain::disc;
  if (s == "halfplane") return Domain::halfplane;
  if (s == "plane") return Domain::plane;
  throw Error(ErrorCode::invalid_spec, "unknown domain tag '" + std::string(s) + "'");
}

/// Value and first derivative of a map at a point.
struct Jet {
  complex value;
  complex derivative;
};

namespace detail {

enum class Op { constant, var, add, sub, mul, div, neg, exp, pow, compose };

struct Node {
  Op op;
  complex value{};
  int exponent = 0;
  std::shared_ptr<const Node> lhs;
  std::shared_ptr<const Node> rhs;  // for compose: lhs = outer, rhs = inner
};

using NodePtr = std::shared_ptr<const Node>;

inline complex ipow(complex base, int n) {
  if (n == 0) return complex(1.0, 0.0);
  bool invert = n < 0;
  unsigned m = invert ? static_cast<unsigned>(-static_cast<long>(n)) : static_cast<unsigned>(n);
  complex result(1.0, 0.0);
  complex b = base;
  while (m) {
    if (m & 1u) result *= b;
    b *= b;
    m >>= 1u;
  }
  return invert ? complex(1.0, 0.0) / result : result;
}

inline complex eval(const Node& n, complex z) {
  switch (n.op) {
    case Op::constant: return n.value;
    case Op::var: return z;
    case Op::add: return eval(*n.lhs, z) + eval(*n.rhs, z);
    case Op::sub: return eval(*n.lhs, z) - eval(*n.rhs, z);
    case Op::mul: return eval(*n.lhs, z) * eval(*n.rhs, z);
    case Op::div: return eval(*n.lhs, z) / eval(*n.rhs, z);
    case Op::neg: return -eval(*n.lhs, z);
    case Op::exp: return std::exp(eval(*n.lhs, z));
    case Op::pow: return ipow(eval(*n.lhs, z), n.exponent);
    case Op::compose: return eval(*n.lhs, eval(*n.rhs, z));
  }
  return {};
}

inline Jet eval_jet(const Node& n, complex z) {
  switch (n.op) {
    case Op::constant: return {n.value, 0.0};
    case Op::var: return {z, 1.0};
    case Op::add: {
      Jet a = eval_jet(*n.lhs, z), b = eval_jet(*n.rhs, z);
      return {a.value + b.value, a.derivative + b.derivative};
    }
    case Op::sub: {
      Jet a = eval_jet(*n.lhs, z), b = eval_jet(*n.rhs, z);
      return {a.value - b.value, a.derivative - b.derivative};
    }
    case Op::mul: {
      Jet a = eval_jet(*n.lhs, z), b = eval_jet(*n.rhs, z);
      return {a.value * b.value, a.derivative * b.value + a.value * b.derivative};
    }
    case Op::div: {
      Jet a = eval_jet(*n.lhs, z), b = eval_jet(*n.rhs, z);
      complex q = a.value / b.value;
      return {q, (a.derivative - q * b.derivative) / b.value};
    }
    case Op::neg: {
      Jet a = eval_jet(*n.lhs, z);
      return {-a.value, -a.derivative};
    }
    case Op::exp: {
      Jet a = eval_jet(*n.lhs, z);
      complex e = std::exp(a.value);
      return {e, e * a.derivative};
    }
    case Op::pow: {
      Jet a = eval_jet(*n.lhs, z);
      if (n.exponent == 0) return {1.0, 0.0};
      complex lower = ipow(a.value, n.exponent - 1);
      return {lower * a.value, static_cast<double>(n.exponent) * lower * a.derivative};
    }
    case Op::compose: {
      Jet inner = eval_jet(*n.rhs, z);
      Jet outer = eval_jet(*n.lhs, inner.value);
      return {outer.value, outer.derivative * inner.derivative};
    }
  }
  return {};
}

inline std::string fmt_real(double x) {
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.17g", x);
  return buf;
}

inline std::string print_constant(complex c) {
  if (c.imag() == 0.0) return "(" + fmt_real(c.real()) + ")";
  if (c.real() == 0.0) return "(" + fmt_real(c.imag()) + "i)";
  std::string im = fmt_real(std::abs(c.imag()));
  return "(" + fmt_real(c.real()) + (c.imag() < 0 ? "-" : "+") + im + "i)";
}

inline std::string print(const Node& n, const std::string& z_text) {
  switch (n.op) {
    case Op::constant: return print_constant(n.value);
    case Op::var: return z_text;
    case Op::add: return "(" + print(*n.lhs, z_text) + "+" + print(*n.rhs, z_text) + ")";
    case Op::sub: return "(" + print(*n.lhs, z_text) + "-" + print(*n.rhs, z_text) + ")";
    case Op::mul: return "(" + print(*n.lhs, z_text) + "*" + print(*n.rhs, z_text) + ")";
    case Op::div: return "(" + print(*n.lhs, z_text) + "/" + print(*n.rhs, z_text) + ")";
    case Op::neg: return "(-" + print(*n.lhs, z_text) + ")";
    case Op::exp: return "exp(" + print(*n.lhs, z_text) + ")";
    case Op::pow: {
      std::string base = print(*n.lhs, z_text);
      if (base.front() != '(') base = "(" + base + ")";
      return base + "^" + std::to_string(n.exponent);
    }
    case Op::compose: {
      std::string inner = print(*n.rhs, z_text);
      if (inner.front() != '(') inner = "(" + inner + ")";
      return print(*n.lhs, inner);
    }
  }
  return {};
}

inline NodePtr make_const(complex c) {
  auto n = std::make_shared<Node>();
  n->op = Op::constant;
  n->value = c;
  return n;
}

inline NodePtr make_var() {
  static const NodePtr var = [] {
    auto n = std::make_shared<Node>();
    n->op = Op::var;
    return NodePtr(n);
  }();
  return var;
}

inline bool is_const(const NodePtr& n) { return n->op == Op::constant; }

inline NodePtr make_binary(Op op, NodePtr a, NodePtr b) {
  if (is_const(a) && is_const(b)) {
    complex x = a->value, y = b->value;
    switch (op) {
      case Op::add: return make_const(x + y);
      case Op::sub: return make_const(x - y);
      case Op::mul: return make_const(x * y);
      case Op::div: return make_const(x / y);
      default: break;
    }
  }
  auto n = std::make_shared<Node>();
  n->op = op;
  n->lhs = std::move(a);
  n->rhs = std::move(b);
  return n;
}

inline NodePtr make_unary(Op op, NodePtr a, int exponent = 0) {
  if (is_const(a)) {
    switch (op) {
      case Op::neg: return make_const(-a->value);
      case Op::exp: return make_const(std::exp(a->value));
      case Op::pow: return make_const(ipow(a->value, exponent));
      default: break;
    }
  }
  auto n = std::make_shared<Node>();
  n->op = op;
  n->exponent = exponent;
  n->lhs = std::move(a);
  return n;
}

inline NodePtr make_compose(NodePtr outer, NodePtr inner) {
  if (is_const(outer)) return outer;
  if (outer->op == Op::var) return inner;
  if (inner->op == Op::var) return outer;
  auto n = std::make_shared<Node>();
  n->op = Op::compose;
  n->lhs = std::move(outer);
  n->rhs = std::move(inner);
  return n;
}

using Poly = std::vector<complex>;

/// Product truncated to the first `trunc` coefficients.
inline Poly poly_mul(const Poly& a, const Poly& b, std::size_t trunc) {
  Poly out(std::min(trunc, a.size() + b.size() - 1), complex(0.0));
  for (std::size_t i = 0; i < a.size() && i < out.size(); ++i) {
    if (a[i] == complex(0.0)) continue;
    for (std::size_t j = 0; j < b.size() && i + j < out.size(); ++j) out[i + j] += a[i] * b[j];
  }
  return out;
}

inline Poly poly_add(Poly a, const Poly& b, double sign) {
  if (b.size() > a.size()) a.resize(b.size(), complex(0.0));
  for (std::size_t i = 0; i < b.size(); ++i) a[i] += sign * b[i];
  return a;
}

/// Coefficients mod z^trunc when the tree is a polynomial in z; nullopt for
/// anything involving exp or a non-constant divisor.
inline std::optional<Poly> to_poly(const Node& n, std::size_t trunc) {
  switch (n.op) {
    case Op::constant: return Poly{n.value};
    case Op::var: return trunc > 1 ? Poly{0.0, 1.0} : Poly{0.0};
    case Op::add:
    case Op::sub: {
      auto a = to_poly(*n.lhs, trunc), b = to_poly(*n.rhs, trunc);
      if (!a || !b) return std::nullopt;
      return poly_add(*a, *b, n.op == Op::add ? 1.0 : -1.0);
    }
    case Op::mul: {
      auto a = to_poly(*n.lhs, trunc), b = to_poly(*n.rhs, trunc);
      if (!a || !b) return std::nullopt;
      return poly_mul(*a, *b, trunc);
    }
    case Op::div: {
      if (n.rhs->op != Op::constant || n.rhs->value == complex(0.0)) return std::nullopt;
      auto a = to_poly(*n.lhs, trunc);
      if (!a) return std::nullopt;
      for (auto& c : *a) c /= n.rhs->value;
      return a;
    }
    case Op::neg: {
      auto a = to_poly(*n.lhs, trunc);
      if (!a) return std::nullopt;
      for (auto& c : *a) c = -c;
      return a;
    }
    case Op::exp: return std::nullopt;
    case Op::pow: {
      if (n.exponent < 0) return std::nullopt;
      auto base = to_poly(*n.lhs, trunc);
      if (!base) return std::nullopt;
      Poly result{1.0};
      Poly b = *base;
      for (unsigned m = static_cast<unsigned>(n.exponent); m; m >>= 1u) {
        if (m & 1u) result = poly_mul(result, b, trunc);
        if (m > 1u) b = poly_mul(b, b, trunc);
      }
      return result;
    }
    case Op::compose: {
      auto outer = to_poly(*n.lhs, trunc), inner = to_poly(*n.rhs, trunc);
      if (!outer || !inner) return std::nullopt;
      Poly result{outer->back()};
      for (std::size_t k = outer->size() - 1; k-- > 0;) {
        result = poly_mul(result, *inner, trunc);
        result[0] += (*outer)[k];
      }
      return result;
    }
  }
  return std::nullopt;
}

class Parser {
 public:
  explicit Parser(std::string_view text) : text_(text) {}

  NodePtr parse() {
    skip_ws();
    if (at_end()) fail("empty expression");
    NodePtr e = expr();
    skip_ws();
    if (!at_end()) fail(std::string("unexpected character '") + text_[pos_] + "'");
    return e;
  }

 private:
  [[noreturn]] void fail(const std::string& msg) const {
    throw ParseError(msg, 1, static_cast<int>(pos_) + 1);
  }

  bool at_end() const { return pos_ >= text_.size(); }
  char peek() const { return at_end() ? '\0' : text_[pos_]; }

  void skip_ws() {
    while (!at_end() && (text_[pos_] == ' ' || text_[pos_] == '\t' || text_[pos_] == '\n' ||
                         text_[pos_] == '\r'))
      ++pos_;
  }

  bool accept(char c) {
    skip_ws();
    if (peek() == c) {
      ++pos_;
      return true;
    }
    return false;
  }

  NodePtr expr() {
    skip_ws();
    NodePtr lhs;
    if (accept('-')) {
      lhs = make_unary(Op::neg, term());
    } else {
      lhs = term();
    }
    for (;;) {
      if (accept('+')) {
        lhs = make_binary(Op::add, lhs, term());
      } else if (accept('-')) {
        lhs = make_binary(Op::sub, lhs, term());
      } else {
        return lhs;
      }
    }
  }

  NodePtr term() {
    NodePtr lhs = factor();
    for (;;) {
      if (accept('*')) {
        lhs = make_binary(Op::mul, lhs, factor());
      } else if (accept('/')) {
        lhs = make_binary(Op::div, lhs, factor());
      } else {
        return lhs;
      }
    }
  }

  NodePtr factor() {
    NodePtr base = atom();
    if (accept('^')) {
      skip_ws();
      std::size_t start = pos_;
      bool negative = false;
      if (peek() == '-' || peek() == '+') {
        negative = peek() == '-';
        ++pos_;
      }
      std::size_t digits = pos_;
      while (!at_end() && std::isdigit(static_cast<unsigned char>(text_[pos_]))) ++pos_;
      if (pos_ == digits) {
        pos_ = start;
        fail("expected integer exponent after '^'");
      }
      long value = 0;
      auto res = std::from_chars(text_.data() + digits, text_.data() + pos_, value);
      if (res.ec != std::errc() || value > 4096) {
        pos_ = start;
        fail("exponent out of range");
      }
      return make_unary(Op::pow, base, static_cast<int>(negative ? -value : value));
    }
    return base;
  }

  NodePtr atom() {
    skip_ws();
    if (at_end()) fail("unexpected end of expression");
    char c = peek();
    if (c == '(') {
      ++pos_;
      NodePtr e = expr();
      if (!accept(')')) fail("expected ')'");
      return e;
    }
    if (std::isdigit(static_cast<unsigned char>(c)) || c == '.') return number();
    if (std::isalpha(static_cast<unsigned char>(c))) {
      std::size_t start = pos_;
      while (!at_end() && std::isalpha(static_cast<unsigned char>(text_[pos_]))) ++pos_;
      std::string_view word = text_.substr(start, pos_ - start);
      if (word == "z") return make_var();
      if (word == "i") return make_const(complex(0.0, 1.0));
      if (word == "exp") {
        if (!accept('(')) fail("expected '(' after exp");
        NodePtr e = expr();
        if (!accept(')')) fail("expected ')'");
        return make_unary(Op::exp, e);
      }
      pos_ = start;
      fail("unknown identifier '" + std::string(word) + "'");
    }
    fail(std::string("unexpected character '") + c + "'");
  }

  NodePtr number() {
    double value = 0.0;
    const char* first = text_.data() + pos_;
    const char* last = text_.data() + text_.size();
    auto res = std::from_chars(first, last, value);
    if (res.ec != std::errc()) fail("malformed number");
    pos_ += static_cast<std::size_t>(res.ptr - first);
    // 'i' suffix, but not the start of another identifier such as "in"
    if (peek() == 'i' && (pos_ + 1 >= text_.size() ||
                          !std::isalpha(static_cast<unsigned char>(text_[pos_ + 1])))) {
      ++pos_;
      return make_const(complex(0.0, value));
    }
    return make_const(complex(value, 0.0));
  }

  std::string_view text_;
  std::size_t pos_ = 0;
};

}  // namespace detail

/// An evaluable holomorphic map (symbol, generator, weight, Riemann map...).
/// Immutable; copies share the tree.
class AnalyticMap {
 public:
  /// The identity map z.
  AnalyticMap() : root_(detail::make_var()) {}

  static AnalyticMap identity(Domain d = Domain::disc) { return AnalyticMap(detail::make_var(), d); }
  static AnalyticMap constant(complex c, Domain d = Domain::disc) {
    return AnalyticMap(detail::make_const(c), d);
  }
  static AnalyticMap parse(std::string_view text, Domain d = Domain::disc) {
    return AnalyticMap(detail::Parser(text).parse(), d);
  }

  complex operator()(complex z) const { return detail::eval(*root_, z); }
  Jet jet(complex z) const { return detail::eval_jet(*root_, z); }
  complex derivative(complex z) const { return jet(z).derivative; }

  std::string to_string() const { return detail::print(*root_, "z"); }

  Domain domain() const { return domain_; }
  AnalyticMap with_domain(Domain d) const { return AnalyticMap(root_, d); }

  bool is_constant() const { return root_->op == detail::Op::constant; }
  bool is_identity() const { return root_->op == detail::Op::var; }

  /// Taylor coefficients mod z^trunc, exactly, when the map is a polynomial.
  std::optional<std::vector<complex>> polynomial(std::size_t trunc) const {
    auto p = detail::to_poly(*root_, trunc);
    if (p) p->resize(trunc, complex(0.0));
    return p;
  }

  friend AnalyticMap operator+(const AnalyticMap& a, const AnalyticMap& b) {
    return {detail::make_binary(detail::Op::add, a.root_, b.root_), a.domain_};
  }
  friend AnalyticMap operator-(const AnalyticMap& a, const AnalyticMap& b) {
    return {detail::make_binary(detail::Op::sub, a.root_, b.root_), a.domain_};
  }
  friend AnalyticMap operator*(const AnalyticMap& a, const AnalyticMap& b) {
    return {detail::make_binary(detail::Op::mul, a.root_, b.root_), a.domain_};
  }
  friend AnalyticMap operator/(const AnalyticMap& a, const AnalyticMap& b) {
    return {detail::make_binary(detail::Op::div, a.root_, b.root_), a.domain_};
  }
  friend AnalyticMap operator-(const AnalyticMap& a) {
    return {detail::make_unary(detail::Op::neg, a.root_), a.domain_};
  }
  friend AnalyticMap operator+(const AnalyticMap& a, complex c) { return a + constant(c, a.domain_); }
  friend AnalyticMap operator+(complex c, const AnalyticMap& a) { return constant(c, a.domain_) + a; }
  friend AnalyticMap operator-(const AnalyticMap& a, complex c) { return a - constant(c, a.domain_); }
  friend AnalyticMap operator-(complex c, const AnalyticMap& a) { return constant(c, a.domain_) - a; }
  friend AnalyticMap operator*(const AnalyticMap& a, complex c) { return a * constant(c, a.domain_); }
  friend AnalyticMap operator*(complex c, const AnalyticMap& a) { return constant(c, a.domain_) * a; }
  friend AnalyticMap operator/(const AnalyticMap& a, complex c) { return a / constant(c, a.domain_); }
  friend AnalyticMap operator/(complex c, const AnalyticMap& a) { return constant(c, a.domain_) / a; }

  friend AnalyticMap exp(const AnalyticMap& a) {
    return {detail::make_unary(detail::Op::exp, a.root_), a.domain_};
  }
  friend AnalyticMap pow(const AnalyticMap& a, int n) {
    return {detail::make_unary(detail::Op::pow, a.root_, n), a.domain_};
  }
  /// outer ∘ inner
  friend AnalyticMap compose(const AnalyticMap& outer, const AnalyticMap& inner) {
    return {detail::make_compose(outer.root_, inner.root_), inner.domain_};
  }

 private:
  AnalyticMap(detail::NodePtr root, Domain d) : root_(std::move(root)), domain_(d) {}

  detail::NodePtr root_;
  Domain domain_ = Domain::disc;
};

}  // namespace holoflow
