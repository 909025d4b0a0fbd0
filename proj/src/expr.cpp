// SPDX-License-Identifier: Apache-2.0
#include "brain/expr.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <optional>
#include <set>

#include "brain/error.hpp"

namespace brain {

ScalarKind kind_of(const Scalar& v) noexcept {
  return static_cast<ScalarKind>(v.index());
}

std::string_view kind_name(ScalarKind k) noexcept {
  switch (k) {
    case ScalarKind::boolean: return "bool";
    case ScalarKind::number: return "num";
    case ScalarKind::string: return "str";
  }
  return "str";
}

ScalarKind parse_kind(std::string_view name) {
  if (name == "bool") return ScalarKind::boolean;
  if (name == "num") return ScalarKind::number;
  if (name == "str") return ScalarKind::string;
  throw Error(Errc::malformed_expr, std::string(name), "unknown scalar type");
}

std::string scalar_text(const Scalar& v) {
  switch (kind_of(v)) {
    case ScalarKind::boolean: return std::get<bool>(v) ? "true" : "false";
    case ScalarKind::number: {
      char buf[64];
      auto [end, ec] = std::to_chars(buf, buf + sizeof buf, std::get<double>(v));
      return std::string(buf, end);
    }
    case ScalarKind::string: return std::get<std::string>(v);
  }
  return {};
}

Scalar parse_scalar(ScalarKind kind, std::string_view text) {
  switch (kind) {
    case ScalarKind::boolean:
      if (text == "true") return true;
      if (text == "false") return false;
      throw Error(Errc::malformed_expr, std::string(text), "not a boolean");
    case ScalarKind::number: {
      double d = 0;
      auto [ptr, ec] = std::from_chars(text.data(), text.data() + text.size(), d);
      if (ec != std::errc{} || ptr != text.data() + text.size() || !std::isfinite(d)) {
        throw Error(Errc::malformed_expr, std::string(text), "not a finite number");
      }
      return d;
    }
    case ScalarKind::string: return std::string(text);
  }
  return std::string(text);
}

xml::Element scalar_element(std::string element, std::string path, const Scalar& v) {
  xml::Element el(std::move(element));
  el.set("path", std::move(path));
  el.set("type", std::string(kind_name(kind_of(v))));
  el.text = scalar_text(v);
  return el;
}

std::pair<std::string, Scalar> parse_scalar_element(const xml::Element& el) {
  const auto kind = parse_kind(el.attribute("type"));
  return {el.attribute("path"), parse_scalar(kind, el.text)};
}

std::string_view cmp_name(CmpOp op) noexcept {
  switch (op) {
    case CmpOp::eq: return "eq";
    case CmpOp::ne: return "ne";
    case CmpOp::lt: return "lt";
    case CmpOp::le: return "le";
    case CmpOp::gt: return "gt";
    case CmpOp::ge: return "ge";
  }
  return "eq";
}

CmpOp parse_cmp(std::string_view name) {
  for (auto op : {CmpOp::eq, CmpOp::ne, CmpOp::lt, CmpOp::le, CmpOp::gt, CmpOp::ge}) {
    if (cmp_name(op) == name) return op;
  }
  throw Error(Errc::malformed_expr, std::string(name), "unknown comparator");
}

struct Expr::Node {
  Kind kind;
  Scalar value;  // constant
  std::string path;  // variable
  CmpOp op = CmpOp::eq;
  std::vector<Expr> operands;
};

namespace {

bool is_boolean_valued(const Expr& e) {
  switch (e.kind()) {
    case Expr::Kind::compare:
    case Expr::Kind::all:
    case Expr::Kind::any:
    case Expr::Kind::negate: return true;
    default: return false;
  }
}

bool is_ordering(CmpOp op) { return op != CmpOp::eq && op != CmpOp::ne; }

// Operands of and/or/not sit in boolean position.
void require_boolean_position(const Expr& e) {
  if (e.kind() == Expr::Kind::constant && kind_of(e.value()) != ScalarKind::boolean) {
    throw Error(Errc::malformed_expr, scalar_text(e.value()),
                "non-boolean constant in boolean position");
  }
}

}  // namespace

Expr Expr::constant(Scalar value) {
  if (kind_of(value) == ScalarKind::number && !std::isfinite(std::get<double>(value))) {
    throw Error(Errc::malformed_expr, "const", "non-finite number");
  }
  auto n = std::make_shared<Node>();
  n->kind = Kind::constant;
  n->value = std::move(value);
  return Expr(std::move(n));
}

Expr Expr::var(std::string path) {
  if (path.empty()) throw Error(Errc::malformed_expr, "var", "empty path");
  auto n = std::make_shared<Node>();
  n->kind = Kind::variable;
  n->path = std::move(path);
  return Expr(std::move(n));
}

Expr Expr::compare(CmpOp op, Expr lhs, Expr rhs) {
  for (const Expr* side : {&lhs, &rhs}) {
    if (!is_ordering(op)) break;
    if (is_boolean_valued(*side)) {
      throw Error(Errc::malformed_expr, std::string(cmp_name(op)),
                  "ordering comparator on a boolean operand");
    }
    if (side->kind() == Kind::constant && kind_of(side->value()) != ScalarKind::number) {
      throw Error(Errc::malformed_expr, std::string(cmp_name(op)),
                  "ordering comparator on a non-numeric constant");
    }
  }
  auto static_kind = [](const Expr& e) -> std::optional<ScalarKind> {
    if (e.kind() == Kind::constant) return kind_of(e.value());
    if (is_boolean_valued(e)) return ScalarKind::boolean;
    return std::nullopt;
  };
  const auto lk = static_kind(lhs);
  const auto rk = static_kind(rhs);
  if (lk && rk && *lk != *rk) {
    throw Error(Errc::malformed_expr, std::string(cmp_name(op)),
                "operands of different kinds");
  }
  auto n = std::make_shared<Node>();
  n->kind = Kind::compare;
  n->op = op;
  n->operands = {std::move(lhs), std::move(rhs)};
  return Expr(std::move(n));
}

Expr Expr::all(std::vector<Expr> operands) {
  if (operands.size() < 2) throw Error(Errc::malformed_expr, "and", "needs at least two operands");
  for (const auto& o : operands) require_boolean_position(o);
  auto n = std::make_shared<Node>();
  n->kind = Kind::all;
  n->operands = std::move(operands);
  return Expr(std::move(n));
}

Expr Expr::any(std::vector<Expr> operands) {
  if (operands.size() < 2) throw Error(Errc::malformed_expr, "or", "needs at least two operands");
  for (const auto& o : operands) require_boolean_position(o);
  auto n = std::make_shared<Node>();
  n->kind = Kind::any;
  n->operands = std::move(operands);
  return Expr(std::move(n));
}

Expr Expr::negate(Expr operand) {
  require_boolean_position(operand);
  auto n = std::make_shared<Node>();
  n->kind = Kind::negate;
  n->operands = {std::move(operand)};
  return Expr(std::move(n));
}

Expr::Kind Expr::kind() const noexcept { return node_->kind; }
const Scalar& Expr::value() const { return node_->value; }
const std::string& Expr::path() const { return node_->path; }
CmpOp Expr::op() const { return node_->op; }
const std::vector<Expr>& Expr::operands() const { return node_->operands; }

std::vector<std::string> Expr::variables() const {
  std::set<std::string> out;
  std::vector<const Expr*> stack{this};
  while (!stack.empty()) {
    const Expr* e = stack.back();
    stack.pop_back();
    if (e->kind() == Kind::variable) out.insert(e->path());
    for (const auto& o : e->operands()) stack.push_back(&o);
  }
  return {out.begin(), out.end()};
}

bool Expr::operator==(const Expr& other) const {
  if (node_ == other.node_) return true;
  const Node& a = *node_;
  const Node& b = *other.node_;
  if (a.kind != b.kind) return false;
  switch (a.kind) {
    case Kind::constant: return a.value == b.value;
    case Kind::variable: return a.path == b.path;
    case Kind::compare:
      if (a.op != b.op) return false;
      [[fallthrough]];
    default: return a.operands == b.operands;
  }
}

namespace {

// Value of a comparison operand; nullptr-equivalent (monostate) when unresolved.
using Operand = std::optional<Scalar>;

Operand operand_value(const Expr& e, const Env& env) {
  switch (e.kind()) {
    case Expr::Kind::constant: return e.value();
    case Expr::Kind::variable: {
      auto it = env.find(e.path());
      if (it == env.end()) return std::nullopt;
      return it->second;
    }
    default: return Scalar{eval_expr(e, env)};
  }
}

bool compare_values(CmpOp op, const Scalar& l, const Scalar& r) {
  if (l.index() != r.index()) return false;
  switch (op) {
    case CmpOp::eq: return l == r;
    case CmpOp::ne: return l != r;
    default: break;
  }
  if (kind_of(l) != ScalarKind::number) return false;
  const double a = std::get<double>(l);
  const double b = std::get<double>(r);
  switch (op) {
    case CmpOp::lt: return a < b;
    case CmpOp::le: return a <= b;
    case CmpOp::gt: return a > b;
    case CmpOp::ge: return a >= b;
    default: return false;
  }
}

}  // namespace

bool eval_expr(const Expr& expr, const Env& env) {
  switch (expr.kind()) {
    case Expr::Kind::constant:
    case Expr::Kind::variable: {
      auto v = operand_value(expr, env);
      return v && kind_of(*v) == ScalarKind::boolean && std::get<bool>(*v);
    }
    case Expr::Kind::compare: {
      const auto& ops = expr.operands();
      auto l = operand_value(ops[0], env);
      if (!l) return false;
      auto r = operand_value(ops[1], env);
      if (!r) return false;
      return compare_values(expr.op(), *l, *r);
    }
    case Expr::Kind::all:
      return std::all_of(expr.operands().begin(), expr.operands().end(),
                         [&](const Expr& e) { return eval_expr(e, env); });
    case Expr::Kind::any:
      return std::any_of(expr.operands().begin(), expr.operands().end(),
                         [&](const Expr& e) { return eval_expr(e, env); });
    case Expr::Kind::negate: return !eval_expr(expr.operands()[0], env);
  }
  return false;
}

xml::Element expr_to_xml(const Expr& expr) {
  switch (expr.kind()) {
    case Expr::Kind::constant: {
      xml::Element el("const");
      el.set("type", std::string(kind_name(kind_of(expr.value()))));
      el.text = scalar_text(expr.value());
      return el;
    }
    case Expr::Kind::variable: {
      xml::Element el("var");
      el.set("path", expr.path());
      return el;
    }
    case Expr::Kind::compare: {
      xml::Element el("cmp");
      el.set("op", std::string(cmp_name(expr.op())));
      for (const auto& o : expr.operands()) el.add(expr_to_xml(o));
      return el;
    }
    case Expr::Kind::all:
    case Expr::Kind::any:
    case Expr::Kind::negate: {
      xml::Element el(expr.kind() == Expr::Kind::all   ? "and"
                      : expr.kind() == Expr::Kind::any ? "or"
                                                       : "not");
      for (const auto& o : expr.operands()) el.add(expr_to_xml(o));
      return el;
    }
  }
  return xml::Element("const");
}

Expr expr_from_xml(const xml::Element& el) {
  auto children = [&] {
    std::vector<Expr> out;
    out.reserve(el.children.size());
    for (const auto& c : el.children) out.push_back(expr_from_xml(c));
    return out;
  };
  if (el.name == "const") {
    if (!el.children.empty()) throw Error(Errc::malformed_expr, "const", "unexpected children");
    return Expr::constant(parse_scalar(parse_kind(el.attribute("type")), el.text));
  }
  if (el.name == "var") return Expr::var(el.attribute("path"));
  if (el.name == "cmp") {
    const auto op = parse_cmp(el.attribute("op"));
    if (el.children.size() != 2) throw Error(Errc::malformed_expr, "cmp", "needs exactly two operands");
    return Expr::compare(op, expr_from_xml(el.children[0]), expr_from_xml(el.children[1]));
  }
  if (el.name == "and") return Expr::all(children());
  if (el.name == "or") return Expr::any(children());
  if (el.name == "not") {
    if (el.children.size() != 1) throw Error(Errc::malformed_expr, "not", "needs exactly one operand");
    return Expr::negate(expr_from_xml(el.children[0]));
  }
  throw Error(Errc::malformed_expr, el.name, "unknown expression element");
}

}  // namespace brain
