#include "bihar/expr.hpp"

#include <cctype>
#include <charconv>
#include <cmath>
#include <limits>
#include <optional>

#include "bihar/error.hpp"

namespace bihar {

namespace {

struct FunctionEntry {
  std::string_view name;
  Function fn;
};

constexpr std::array<FunctionEntry, 8> kFunctions{{
    {"exp", Function::Exp},
    {"log", Function::Log},
    {"sin", Function::Sin},
    {"cos", Function::Cos},
    {"sinh", Function::Sinh},
    {"cosh", Function::Cosh},
    {"tanh", Function::Tanh},
    {"sqrt", Function::Sqrt},
}};

std::optional<Function> lookup_function(std::string_view name) {
  for (const auto& f : kFunctions)
    if (f.name == name) return f.fn;
  return std::nullopt;
}

template <class... Ts>
struct Overloaded : Ts... {
  using Ts::operator()...;
};
template <class... Ts>
Overloaded(Ts...) -> Overloaded<Ts...>;

NodePtr make(auto&& alt) { return std::make_shared<const Node>(Node{std::forward<decltype(alt)>(alt)}); }

// ---------------------------------------------------------------------------
// Lexer / parser

enum class Tok { Number, Ident, Plus, Minus, Star, Slash, Caret, LParen, RParen, End };

struct Token {
  Tok kind;
  std::size_t offset;
  std::string_view text;
  double number = 0.0;
};

class Parser {
 public:
  Parser(std::string_view src, const SymbolTable& symbols) : src_(src), symbols_(symbols) { advance(); }

  Expr parse_all() {
    if (src_.find_first_not_of(" \t\r\n") == std::string_view::npos)
      fail("empty expression", 0);
    NodePtr e = expr();
    if (tok_.kind != Tok::End) fail("unexpected '" + std::string(tok_.text) + "'", tok_.offset);
    return Expr(std::move(e));
  }

 private:
  [[noreturn]] void fail(const std::string& message, std::size_t offset) const {
    int line = 1, column = 1;
    for (std::size_t i = 0; i < offset && i < src_.size(); ++i) {
      if (src_[i] == '\n') {
        ++line;
        column = 1;
      } else {
        ++column;
      }
    }
    throw SyntaxError(message, offset, line, column);
  }

  void advance() {
    while (pos_ < src_.size() && std::isspace(static_cast<unsigned char>(src_[pos_]))) ++pos_;
    const std::size_t start = pos_;
    if (pos_ >= src_.size()) {
      tok_ = {Tok::End, start, "end of input"};
      return;
    }
    const char ch = src_[pos_];
    auto single = [&](Tok k) {
      ++pos_;
      tok_ = {k, start, src_.substr(start, 1)};
    };
    switch (ch) {
      case '+': return single(Tok::Plus);
      case '-': return single(Tok::Minus);
      case '*': return single(Tok::Star);
      case '/': return single(Tok::Slash);
      case '^': return single(Tok::Caret);
      case '(': return single(Tok::LParen);
      case ')': return single(Tok::RParen);
      default: break;
    }
    if (std::isdigit(static_cast<unsigned char>(ch)) || ch == '.') {
      std::size_t end = pos_;
      bool digits = false;
      while (end < src_.size() && std::isdigit(static_cast<unsigned char>(src_[end]))) {
        ++end;
        digits = true;
      }
      if (end < src_.size() && src_[end] == '.') {
        ++end;
        while (end < src_.size() && std::isdigit(static_cast<unsigned char>(src_[end]))) {
          ++end;
          digits = true;
        }
      }
      if (!digits) fail("malformed number", start);
      if (end < src_.size() && (src_[end] == 'e' || src_[end] == 'E')) {
        std::size_t e = end + 1;
        if (e < src_.size() && (src_[e] == '+' || src_[e] == '-')) ++e;
        if (e < src_.size() && std::isdigit(static_cast<unsigned char>(src_[e]))) {
          while (e < src_.size() && std::isdigit(static_cast<unsigned char>(src_[e]))) ++e;
          end = e;
        } else {
          fail("malformed exponent in number", end);
        }
      }
      double v = 0.0;
      const auto* first = src_.data() + start;
      const auto res = std::from_chars(first, src_.data() + end, v);
      if (res.ec != std::errc() || res.ptr != src_.data() + end) fail("malformed number", start);
      pos_ = end;
      tok_ = {Tok::Number, start, src_.substr(start, end - start), v};
      return;
    }
    if (std::isalpha(static_cast<unsigned char>(ch)) || ch == '_') {
      std::size_t end = pos_;
      while (end < src_.size() &&
             (std::isalnum(static_cast<unsigned char>(src_[end])) || src_[end] == '_'))
        ++end;
      pos_ = end;
      tok_ = {Tok::Ident, start, src_.substr(start, end - start)};
      return;
    }
    fail(std::string("unexpected character '") + ch + "'", start);
  }

  void expect(Tok k, const char* what) {
    if (tok_.kind != k) fail(std::string("expected ") + what, tok_.offset);
    advance();
  }

  NodePtr expr() {
    NodePtr lhs = term();
    while (tok_.kind == Tok::Plus || tok_.kind == Tok::Minus) {
      const BinaryOp op = tok_.kind == Tok::Plus ? BinaryOp::Add : BinaryOp::Sub;
      advance();
      lhs = make(BinaryNode{op, lhs, term()});
    }
    return lhs;
  }

  NodePtr term() {
    NodePtr lhs = unary();
    while (tok_.kind == Tok::Star || tok_.kind == Tok::Slash) {
      const BinaryOp op = tok_.kind == Tok::Star ? BinaryOp::Mul : BinaryOp::Div;
      advance();
      lhs = make(BinaryNode{op, lhs, unary()});
    }
    return lhs;
  }

  NodePtr unary() {
    if (tok_.kind == Tok::Minus) {
      advance();
      return make(NegateNode{unary()});
    }
    return power();
  }

  NodePtr power() {
    NodePtr base = primary();
    if (tok_.kind != Tok::Caret) return base;
    advance();
    const int exponent = integer_exponent();
    if (tok_.kind == Tok::Caret) fail("chained '^' needs parentheses", tok_.offset);
    return make(PowerNode{base, exponent});
  }

  int integer_exponent() {
    const bool paren = tok_.kind == Tok::LParen;
    if (paren) advance();
    bool negative = false;
    if (tok_.kind == Tok::Minus) {
      negative = true;
      advance();
    }
    if (tok_.kind != Tok::Number) fail("exponent must be an integer literal", tok_.offset);
    const double v = tok_.number;
    if (v != std::floor(v) || v > 1024.0 || tok_.text.find_first_of(".eE") != std::string_view::npos)
      fail("exponent must be an integer literal", tok_.offset);
    advance();
    if (paren) expect(Tok::RParen, "')'");
    const int n = static_cast<int>(v);
    return negative ? -n : n;
  }

  NodePtr primary() {
    switch (tok_.kind) {
      case Tok::Number: {
        const double v = tok_.number;
        advance();
        return make(NumberNode{v});
      }
      case Tok::LParen: {
        advance();
        NodePtr e = expr();
        expect(Tok::RParen, "')'");
        return e;
      }
      case Tok::Ident: {
        const Token id = tok_;
        advance();
        if (auto fn = lookup_function(id.text)) {
          if (tok_.kind != Tok::LParen) fail("function '" + std::string(id.text) + "' needs '('", tok_.offset);
          advance();
          NodePtr arg = expr();
          expect(Tok::RParen, "')'");
          return make(CallNode{*fn, arg});
        }
        if (tok_.kind == Tok::LParen) throw UnknownSymbol(std::string(id.text), "function");
        const int axis = symbols_.axis_of(id.text);
        if (axis >= 0) return make(CoordinateNode{axis, std::string(id.text)});
        if (symbols_.constants.count(id.text)) return make(ConstantNode{std::string(id.text)});
        throw UnknownSymbol(std::string(id.text));
      }
      case Tok::End:
        fail("unexpected end of input", tok_.offset);
      default:
        fail("unexpected '" + std::string(tok_.text) + "'", tok_.offset);
    }
  }

  std::string_view src_;
  const SymbolTable& symbols_;
  std::size_t pos_ = 0;
  Token tok_{Tok::End, 0, ""};
};

// ---------------------------------------------------------------------------
// Printing

int precedence(const Node& n) {
  return std::visit(Overloaded{
                        [](const BinaryNode& b) {
                          return (b.op == BinaryOp::Add || b.op == BinaryOp::Sub) ? 1 : 2;
                        },
                        [](const NegateNode&) { return 3; },
                        [](const PowerNode&) { return 4; },
                        [](const NumberNode& num) { return num.value < 0 ? 0 : 5; },
                        [](const auto&) { return 5; },
                    },
                    n.v);
}

std::string format_number(double v) {
  char buf[64];
  const auto res = std::to_chars(buf, buf + sizeof buf, v);
  return std::string(buf, res.ptr);
}

void print(const Node& n, std::string& out);

void print_wrapped(const Node& n, bool wrap, std::string& out) {
  if (wrap) out += '(';
  print(n, out);
  if (wrap) out += ')';
}

void print(const Node& n, std::string& out) {
  std::visit(Overloaded{
                 [&](const NumberNode& num) { out += format_number(num.value); },
                 [&](const CoordinateNode& c) { out += c.name; },
                 [&](const ConstantNode& c) { out += c.name; },
                 [&](const NegateNode& neg) {
                   out += '-';
                   print_wrapped(*neg.operand, precedence(*neg.operand) < 3, out);
                 },
                 [&](const BinaryNode& b) {
                   const int p = precedence(n);
                   print_wrapped(*b.lhs, precedence(*b.lhs) < p, out);
                   switch (b.op) {
                     case BinaryOp::Add: out += " + "; break;
                     case BinaryOp::Sub: out += " - "; break;
                     case BinaryOp::Mul: out += '*'; break;
                     case BinaryOp::Div: out += '/'; break;
                   }
                   print_wrapped(*b.rhs, precedence(*b.rhs) <= p, out);
                 },
                 [&](const PowerNode& pw) {
                   print_wrapped(*pw.base, precedence(*pw.base) < 5, out);
                   out += '^';
                   if (pw.exponent < 0)
                     out += "(" + std::to_string(pw.exponent) + ")";
                   else
                     out += std::to_string(pw.exponent);
                 },
                 [&](const CallNode& c) {
                   out += function_name(c.fn);
                   out += '(';
                   print(*c.arg, out);
                   out += ')';
                 },
             },
             n.v);
}

bool equal(const Node& a, const Node& b) {
  if (a.v.index() != b.v.index()) return false;
  return std::visit(Overloaded{
                        [&](const NumberNode& x) { return x.value == std::get<NumberNode>(b.v).value; },
                        [&](const CoordinateNode& x) {
                          const auto& y = std::get<CoordinateNode>(b.v);
                          return x.axis == y.axis && x.name == y.name;
                        },
                        [&](const ConstantNode& x) { return x.name == std::get<ConstantNode>(b.v).name; },
                        [&](const NegateNode& x) { return equal(*x.operand, *std::get<NegateNode>(b.v).operand); },
                        [&](const BinaryNode& x) {
                          const auto& y = std::get<BinaryNode>(b.v);
                          return x.op == y.op && equal(*x.lhs, *y.lhs) && equal(*x.rhs, *y.rhs);
                        },
                        [&](const PowerNode& x) {
                          const auto& y = std::get<PowerNode>(b.v);
                          return x.exponent == y.exponent && equal(*x.base, *y.base);
                        },
                        [&](const CallNode& x) {
                          const auto& y = std::get<CallNode>(b.v);
                          return x.fn == y.fn && equal(*x.arg, *y.arg);
                        },
                    },
                    a.v);
}

template <class F>
void walk(const Node& n, F&& f) {
  f(n);
  std::visit(Overloaded{
                 [&](const NegateNode& x) { walk(*x.operand, f); },
                 [&](const BinaryNode& x) {
                   walk(*x.lhs, f);
                   walk(*x.rhs, f);
                 },
                 [&](const PowerNode& x) { walk(*x.base, f); },
                 [&](const CallNode& x) { walk(*x.arg, f); },
                 [](const auto&) {},
             },
             n.v);
}

// ---------------------------------------------------------------------------
// Evaluation

std::string describe(const Node& n) {
  std::string s;
  print(n, s);
  return s;
}

template <int N>
Jet<N> eval_node(const Node& n, const Point& p, const Constants& constants) {
  using J = Jet<N>;
  J result = std::visit(
      Overloaded{
          [&](const NumberNode& num) { return J::constant(num.value); },
          [&](const CoordinateNode& c) { return J::variable(c.axis, p[c.axis]); },
          [&](const ConstantNode& c) {
            auto it = constants.find(c.name);
            if (it == constants.end()) throw UnknownSymbol(c.name, "unbound constant");
            return J::constant(it->second);
          },
          [&](const NegateNode& x) { return -eval_node<N>(*x.operand, p, constants); },
          [&](const BinaryNode& b) {
            J lhs = eval_node<N>(*b.lhs, p, constants);
            J rhs = eval_node<N>(*b.rhs, p, constants);
            switch (b.op) {
              case BinaryOp::Add: return lhs + rhs;
              case BinaryOp::Sub: return lhs - rhs;
              case BinaryOp::Mul: return lhs * rhs;
              case BinaryOp::Div:
                if (rhs.value() == 0.0) throw DomainError("division by zero", describe(n));
                return lhs / rhs;
            }
            return J{};
          },
          [&](const PowerNode& pw) {
            J base = eval_node<N>(*pw.base, p, constants);
            if (pw.exponent < 0 && base.value() == 0.0)
              throw DomainError("negative power of zero", describe(n));
            return ipow(base, pw.exponent);
          },
          [&](const CallNode& c) {
            J a = eval_node<N>(*c.arg, p, constants);
            switch (c.fn) {
              case Function::Exp: return exp(a);
              case Function::Log:
                if (!(a.value() > 0.0)) throw DomainError("log of non-positive value", describe(n));
                return log(a);
              case Function::Sin: return sin(a);
              case Function::Cos: return cos(a);
              case Function::Sinh: return sinh(a);
              case Function::Cosh: return cosh(a);
              case Function::Tanh: return tanh(a);
              case Function::Sqrt:
                // derivatives blow up at 0, so the jet needs a strictly positive argument
                if (!(a.value() > 0.0)) throw DomainError("sqrt of non-positive value", describe(n));
                return sqrt(a);
            }
            return J{};
          },
      },
      n.v);
  if (!std::isfinite(result.value())) throw DomainError("non-finite value", describe(n));
  return result;
}

}  // namespace

std::string_view function_name(Function f) {
  for (const auto& e : kFunctions)
    if (e.fn == f) return e.name;
  return "?";
}

bool SymbolTable::is_coordinate(std::string_view name) const { return axis_of(name) >= 0; }

int SymbolTable::axis_of(std::string_view name) const {
  for (int a = 0; a < 3; ++a)
    if (coords[a] == name) return a;
  return -1;
}

Expr::Expr() : root_(make(NumberNode{0.0})) {}

Expr Expr::number(double v) { return Expr(make(NumberNode{v})); }
Expr Expr::coordinate(int axis, std::string name) { return Expr(make(CoordinateNode{axis, std::move(name)})); }
Expr Expr::constant(std::string name) { return Expr(make(ConstantNode{std::move(name)})); }
Expr Expr::negate(const Expr& e) { return Expr(make(NegateNode{e.root_})); }
Expr Expr::binary(BinaryOp op, const Expr& lhs, const Expr& rhs) {
  return Expr(make(BinaryNode{op, lhs.root_, rhs.root_}));
}
Expr Expr::power(const Expr& base, int exponent) { return Expr(make(PowerNode{base.root_, exponent})); }
Expr Expr::call(Function fn, const Expr& arg) { return Expr(make(CallNode{fn, arg.root_})); }

std::string Expr::to_string() const {
  std::string s;
  print(*root_, s);
  return s;
}

std::set<std::string> Expr::constant_names() const {
  std::set<std::string> names;
  walk(*root_, [&](const Node& n) {
    if (const auto* c = std::get_if<ConstantNode>(&n.v)) names.insert(c->name);
  });
  return names;
}

std::set<int> Expr::coordinate_axes() const {
  std::set<int> axes;
  walk(*root_, [&](const Node& n) {
    if (const auto* c = std::get_if<CoordinateNode>(&n.v)) axes.insert(c->axis);
  });
  return axes;
}

bool Expr::depends_on_axis(int axis) const { return coordinate_axes().count(axis) > 0; }

bool operator==(const Expr& a, const Expr& b) { return equal(*a.root_, *b.root_); }

Expr parse(std::string_view source, const SymbolTable& symbols) { return Parser(source, symbols).parse_all(); }

Expr parse(std::string_view source, const std::array<std::string, 3>& coords,
           const std::set<std::string, std::less<>>& constants) {
  SymbolTable t;
  t.coords = coords;
  t.constants = constants;
  return parse(source, t);
}

template <int N>
Jet<N> evaluate(const Expr& e, const Point& point, const Constants& constants) {
  return eval_node<N>(e.root(), point, constants);
}

template Jet<0> evaluate<0>(const Expr&, const Point&, const Constants&);
template Jet<1> evaluate<1>(const Expr&, const Point&, const Constants&);
template Jet<2> evaluate<2>(const Expr&, const Point&, const Constants&);
template Jet<3> evaluate<3>(const Expr&, const Point&, const Constants&);

}  // namespace bihar
