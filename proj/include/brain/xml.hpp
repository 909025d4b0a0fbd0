// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <optional>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

namespace brain::xml {

/// Minimal element tree. Attributes keep document order; the writer emits
/// them in stored order, which is how the canonical forms pin attribute order.
struct Element {
  std::string name;
  std::vector<std::pair<std::string, std::string>> attributes;
  std::vector<Element> children;
  /// Character data of a leaf element, verbatim. Whitespace between child
  /// elements is dropped by the parser.
  std::string text;

  explicit Element(std::string n = {}) : name(std::move(n)) {}

  Element& set(std::string key, std::string value);
  Element& add(Element child);

  const std::string* find_attribute(std::string_view key) const;
  /// Throws Error(missing_attribute) naming `key`.
  const std::string& attribute(std::string_view key) const;
  std::optional<std::string> optional_attribute(std::string_view key) const;

  bool operator==(const Element&) const = default;
};

/// Parses one document. Throws Error(xml_syntax) with line/column on failure.
Element parse(std::string_view document);

/// Canonical writer: no declaration, 2-space indent, one element per line,
/// leaf text inline, empty elements self-closed, trailing newline.
std::string write(const Element& root);

std::string escape_text(std::string_view raw);
std::string escape_attribute(std::string_view raw);

}  // namespace brain::xml
