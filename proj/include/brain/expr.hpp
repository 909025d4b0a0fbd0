// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <functional>
#include <map>
#include <memory>
#include <string>
#include <string_view>
#include <variant>
#include <vector>

#include "brain/xml.hpp"

namespace brain {

/// A scalar value in an environment or a constant.
using Scalar = std::variant<bool, double, std::string>;

/// Flat environment keyed by dotted path ("citizen.accountBalance").
using Env = std::map<std::string, Scalar, std::less<>>;

enum class ScalarKind { boolean, number, string };
ScalarKind kind_of(const Scalar& v) noexcept;
std::string_view kind_name(ScalarKind k) noexcept;  // "bool" | "num" | "str"
ScalarKind parse_kind(std::string_view name);       // throws malformed_expr

/// Canonical text of a scalar: true/false, shortest round-trip decimal, raw string.
std::string scalar_text(const Scalar& v);
Scalar parse_scalar(ScalarKind kind, std::string_view text);

/// Typed value element, e.g. <attr path="fulfillmentHours" type="num">1</attr>.
xml::Element scalar_element(std::string element, std::string path, const Scalar& v);
std::pair<std::string, Scalar> parse_scalar_element(const xml::Element& el);

enum class CmpOp { eq, ne, lt, le, gt, ge };
std::string_view cmp_name(CmpOp op) noexcept;
CmpOp parse_cmp(std::string_view name);

/// Immutable boolean expression. Nodes are shared, so copies are cheap and
/// an Expr may be used from any number of threads.
///
/// Well-formedness is enforced by the factories: and/or take at least two
/// operands, ordering comparators reject constant or boolean-valued operands
/// that are not numbers, and boolean positions reject non-boolean constants.
class Expr {
 public:
  enum class Kind { constant, variable, compare, all, any, negate };

  static Expr constant(Scalar value);
  static Expr var(std::string path);
  static Expr compare(CmpOp op, Expr lhs, Expr rhs);
  static Expr all(std::vector<Expr> operands);
  static Expr any(std::vector<Expr> operands);
  static Expr negate(Expr operand);

  Kind kind() const noexcept;
  const Scalar& value() const;              // constant
  const std::string& path() const;          // variable
  CmpOp op() const;                         // compare
  const std::vector<Expr>& operands() const;  // compare (2), all/any (>=2), negate (1)

  /// Variable paths referenced anywhere in the expression, sorted, unique.
  std::vector<std::string> variables() const;

  bool operator==(const Expr& other) const;

 private:
  struct Node;
  explicit Expr(std::shared_ptr<const Node> node) : node_(std::move(node)) {}
  std::shared_ptr<const Node> node_;
};

/// Short-circuit evaluation. Total on well-formed expressions: an unresolved
/// variable or a kind mismatch makes the enclosing comparison false.
bool eval_expr(const Expr& expr, const Env& env);

xml::Element expr_to_xml(const Expr& expr);
Expr expr_from_xml(const xml::Element& el);

}  // namespace brain
