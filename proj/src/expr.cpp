#include "gsa/expr.hpp"

#include <charconv>
#include <cmath>
#include <cstdio>
#include <functional>
#include <optional>

#include "gsa/error.hpp"

namespace gsa::expr {

namespace {

struct FuncInfo {
  std::string_view name;
  Func func;
  std::size_t arity;
};

constexpr FuncInfo kFuncs[] = {
    {"sin", Func::sin, 1},   {"cos", Func::cos, 1},     {"tan", Func::tan, 1},   {"asin", Func::asin, 1},
    {"exp", Func::exp, 1},   {"ln", Func::ln, 1},       {"log10", Func::log10, 1}, {"sqrt", Func::sqrt, 1},
    {"abs", Func::abs, 1},   {"min", Func::min, 2},     {"max", Func::max, 2},   {"pow", Func::pow, 2},
};

std::optional<FuncInfo> lookup(std::string_view name) {
  for (const auto& f : kFuncs) {
    if (f.name == name) return f;
  }
  return std::nullopt;
}

char op_char(BinOp op) {
  switch (op) {
    case BinOp::add: return '+';
    case BinOp::sub: return '-';
    case BinOp::mul: return '*';
    case BinOp::div: return '/';
    case BinOp::pow: return '^';
  }
  return '?';
}

bool is_ident_start(char c) { return std::isalpha(static_cast<unsigned char>(c)) || c == '_'; }
bool is_ident_char(char c) { return std::isalnum(static_cast<unsigned char>(c)) || c == '_'; }

}  // namespace

class Parser {
 public:
  explicit Parser(std::string_view src) : src_(src) {}

  Expr run() {
    skip_ws();
    if (pos_ >= src_.size()) fail(pos_, "empty formula, expected an expression");
    const std::size_t root = sum();
    skip_ws();
    if (pos_ < src_.size()) fail(pos_, "unexpected '" + std::string(1, src_[pos_]) + "', expected operator or end of input");
    out_.root_ = root;
    return std::move(out_);
  }

 private:
  static constexpr int kMaxDepth = 200;

  [[noreturn]] void fail(std::size_t at, const std::string& msg) {
    throw ParseError(at, "formula offset " + std::to_string(at) + ": " + msg);
  }

  void skip_ws() {
    while (pos_ < src_.size() && std::isspace(static_cast<unsigned char>(src_[pos_]))) ++pos_;
  }

  bool accept(char c) {
    skip_ws();
    if (pos_ < src_.size() && src_[pos_] == c) {
      ++pos_;
      return true;
    }
    return false;
  }

  std::size_t add(Node n) {
    out_.nodes_.push_back(std::move(n));
    return out_.nodes_.size() - 1;
  }

  std::size_t binary(BinOp op, std::size_t lhs, std::size_t rhs, std::size_t at) {
    Node n;
    n.kind = Kind::binary;
    n.op = op;
    n.args = {lhs, rhs};
    n.offset = at;
    return add(std::move(n));
  }

  struct DepthGuard {
    Parser& p;
    explicit DepthGuard(Parser& parser) : p(parser) {
      if (++p.depth_ > kMaxDepth) p.fail(p.pos_, "expression nested too deeply");
    }
    ~DepthGuard() { --p.depth_; }
  };

  std::size_t sum() {
    std::size_t lhs = product();
    for (;;) {
      skip_ws();
      const std::size_t at = pos_;
      if (accept('+')) {
        lhs = binary(BinOp::add, lhs, product(), at);
      } else if (accept('-')) {
        lhs = binary(BinOp::sub, lhs, product(), at);
      } else {
        return lhs;
      }
    }
  }

  std::size_t product() {
    std::size_t lhs = unary();
    for (;;) {
      skip_ws();
      const std::size_t at = pos_;
      if (accept('*')) {
        lhs = binary(BinOp::mul, lhs, unary(), at);
      } else if (accept('/')) {
        lhs = binary(BinOp::div, lhs, unary(), at);
      } else {
        return lhs;
      }
    }
  }

  std::size_t unary() {
    DepthGuard guard(*this);
    skip_ws();
    const std::size_t at = pos_;
    if (accept('-')) {
      const std::size_t operand = unary();
      Node n;
      n.kind = Kind::negate;
      n.args = {operand};
      n.offset = at;
      return add(std::move(n));
    }
    if (accept('+')) return unary();
    return power();
  }

  std::size_t power() {
    const std::size_t base = primary();
    skip_ws();
    const std::size_t at = pos_;
    if (accept('^')) return binary(BinOp::pow, base, unary(), at);
    return base;
  }

  std::size_t primary() {
    DepthGuard guard(*this);
    skip_ws();
    const std::size_t at = pos_;
    if (pos_ >= src_.size()) fail(at, "unexpected end of input, expected number, name or '('");
    const char c = src_[pos_];
    if (c == '(') {
      ++pos_;
      const std::size_t inner = sum();
      if (!accept(')')) fail(pos_, "expected ')' to close '(' at offset " + std::to_string(at));
      return inner;
    }
    if (std::isdigit(static_cast<unsigned char>(c)) || c == '.') return number();
    if (is_ident_start(c)) {
      std::size_t end = pos_;
      while (end < src_.size() && is_ident_char(src_[end])) ++end;
      std::string name(src_.substr(pos_, end - pos_));
      pos_ = end;
      skip_ws();
      if (pos_ < src_.size() && src_[pos_] == '(') {
        const auto info = lookup(name);
        if (!info) fail(at, "unknown function '" + name + "'");
        ++pos_;
        Node n;
        n.kind = Kind::call;
        n.func = info->func;
        n.offset = at;
        n.args.push_back(sum());
        while (accept(',')) n.args.push_back(sum());
        if (!accept(')')) fail(pos_, "expected ',' or ')' in call to '" + name + "'");
        if (n.args.size() != info->arity) {
          fail(at, "function '" + name + "' takes " + std::to_string(info->arity) + " argument(s), got " +
                       std::to_string(n.args.size()));
        }
        return add(std::move(n));
      }
      Node n;
      n.kind = Kind::variable;
      n.name = std::move(name);
      n.offset = at;
      return add(std::move(n));
    }
    fail(at, "unexpected '" + std::string(1, c) + "', expected number, name or '('");
  }

  std::size_t number() {
    const std::size_t at = pos_;
    std::size_t end = pos_;
    while (end < src_.size() && (std::isdigit(static_cast<unsigned char>(src_[end])) || src_[end] == '.')) ++end;
    if (end < src_.size() && (src_[end] == 'e' || src_[end] == 'E')) {
      std::size_t e = end + 1;
      if (e < src_.size() && (src_[e] == '+' || src_[e] == '-')) ++e;
      if (e < src_.size() && std::isdigit(static_cast<unsigned char>(src_[e]))) {
        while (e < src_.size() && std::isdigit(static_cast<unsigned char>(src_[e]))) ++e;
        end = e;
      }
    }
    double v = 0.0;
    auto [ptr, ec] = std::from_chars(src_.data() + at, src_.data() + end, v);
    if (ec != std::errc() || ptr != src_.data() + end) {
      fail(at, "malformed number '" + std::string(src_.substr(at, end - at)) + "'");
    }
    pos_ = end;
    Node n;
    n.kind = Kind::number;
    n.value = v;
    n.offset = at;
    return add(std::move(n));
  }

  std::string_view src_;
  std::size_t pos_ = 0;
  int depth_ = 0;
  Expr out_;
};

Expr parse(std::string_view source) { return Parser(source).run(); }

std::string_view func_name(Func f) {
  for (const auto& info : kFuncs) {
    if (info.func == f) return info.name;
  }
  return "?";
}

std::string Expr::to_string() const { return nodes_.empty() ? std::string() : to_string(root_); }

std::string Expr::to_string(std::size_t i) const {
  const Node& n = nodes_[i];
  switch (n.kind) {
    case Kind::number: {
      char buf[32];
      std::snprintf(buf, sizeof buf, "%.17g", n.value);
      return buf;
    }
    case Kind::variable: return n.name;
    case Kind::negate: return "(-" + to_string(n.args[0]) + ")";
    case Kind::binary:
      return "(" + to_string(n.args[0]) + " " + op_char(n.op) + " " + to_string(n.args[1]) + ")";
    case Kind::call: {
      std::string s(func_name(n.func));
      s += '(';
      for (std::size_t a = 0; a < n.args.size(); ++a) {
        if (a) s += ", ";
        s += to_string(n.args[a]);
      }
      return s + ")";
    }
  }
  return {};
}

std::vector<std::string> Expr::variables() const {
  std::vector<std::string> out;
  for (const auto& n : nodes_) {
    if (n.kind == Kind::variable && std::find(out.begin(), out.end(), n.name) == out.end()) out.push_back(n.name);
  }
  return out;
}

bool operator==(const Expr& a, const Expr& b) {
  if (a.nodes_.empty() || b.nodes_.empty()) return a.nodes_.empty() && b.nodes_.empty();
  std::function<bool(std::size_t, std::size_t)> same = [&](std::size_t i, std::size_t j) {
    const Node& x = a.nodes_[i];
    const Node& y = b.nodes_[j];
    if (x.kind != y.kind || x.args.size() != y.args.size()) return false;
    switch (x.kind) {
      case Kind::number:
        if (x.value != y.value) return false;
        break;
      case Kind::variable:
        if (x.name != y.name) return false;
        break;
      case Kind::binary:
        if (x.op != y.op) return false;
        break;
      case Kind::call:
        if (x.func != y.func) return false;
        break;
      case Kind::negate: break;
    }
    for (std::size_t t = 0; t < x.args.size(); ++t) {
      if (!same(x.args[t], y.args[t])) return false;
    }
    return true;
  };
  return same(a.root_, b.root_);
}

BoundExpr::BoundExpr(Expr expr, const std::vector<std::string>& names)
    : expr_(std::move(expr)), slot_(expr_.nodes().size(), 0) {
  const auto& nodes = expr_.nodes();
  for (std::size_t i = 0; i < nodes.size(); ++i) {
    if (nodes[i].kind != Kind::variable) continue;
    const auto it = std::find(names.begin(), names.end(), nodes[i].name);
    if (it == names.end()) {
      throw Error(Errc::config, "formula references unknown factor '" + nodes[i].name + "' at offset " +
                                    std::to_string(nodes[i].offset));
    }
    slot_[i] = static_cast<std::size_t>(it - names.begin());
  }
}

double BoundExpr::evaluate(std::span<const double> row) const {
  const auto& nodes = expr_.nodes();
  // Children precede parents in the pool, so one forward pass suffices.
  std::vector<double> val(nodes.size());
  auto fault = [&](std::size_t i, const char* what) {
    throw Error(Errc::evaluation, std::string(what) + " in '" + expr_.to_string(i) + "'");
  };
  for (std::size_t i = 0; i < nodes.size(); ++i) {
    const Node& n = nodes[i];
    double r = 0.0;
    switch (n.kind) {
      case Kind::number: r = n.value; break;
      case Kind::variable: r = row[slot_[i]]; break;
      case Kind::negate: r = -val[n.args[0]]; break;
      case Kind::binary: {
        const double a = val[n.args[0]], b = val[n.args[1]];
        switch (n.op) {
          case BinOp::add: r = a + b; break;
          case BinOp::sub: r = a - b; break;
          case BinOp::mul: r = a * b; break;
          case BinOp::div:
            if (b == 0.0) fault(i, "division by zero");
            r = a / b;
            break;
          case BinOp::pow: r = std::pow(a, b); break;
        }
        break;
      }
      case Kind::call: {
        const double a = val[n.args[0]];
        switch (n.func) {
          case Func::sin: r = std::sin(a); break;
          case Func::cos: r = std::cos(a); break;
          case Func::tan: r = std::tan(a); break;
          case Func::asin:
            if (a < -1.0 || a > 1.0) fault(i, "asin argument outside [-1,1]");
            r = std::asin(a);
            break;
          case Func::exp: r = std::exp(a); break;
          case Func::ln:
            if (!(a > 0.0)) fault(i, "logarithm of nonpositive value");
            r = std::log(a);
            break;
          case Func::log10:
            if (!(a > 0.0)) fault(i, "logarithm of nonpositive value");
            r = std::log10(a);
            break;
          case Func::sqrt:
            if (a < 0.0) fault(i, "square root of negative value");
            r = std::sqrt(a);
            break;
          case Func::abs: r = std::abs(a); break;
          case Func::min: r = std::min(a, val[n.args[1]]); break;
          case Func::max: r = std::max(a, val[n.args[1]]); break;
          case Func::pow: r = std::pow(a, val[n.args[1]]); break;
        }
        break;
      }
    }
    if (!std::isfinite(r)) fault(i, "non-finite result");
    val[i] = r;
  }
  return val[expr_.root()];
}

}  // namespace gsa::expr
