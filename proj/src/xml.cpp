// SPDX-License-Identifier: Apache-2.0
#include "brain/xml.hpp"

#include <expat.h>

#include <memory>

#include "brain/error.hpp"

namespace brain::xml {

Element& Element::set(std::string key, std::string value) {
  attributes.emplace_back(std::move(key), std::move(value));
  return *this;
}

Element& Element::add(Element child) {
  children.push_back(std::move(child));
  return *this;
}

const std::string* Element::find_attribute(std::string_view key) const {
  for (const auto& [k, v] : attributes) {
    if (k == key) return &v;
  }
  return nullptr;
}

const std::string& Element::attribute(std::string_view key) const {
  if (const auto* v = find_attribute(key)) return *v;
  throw Error(Errc::missing_attribute, std::string(key), "on <" + name + ">");
}

std::optional<std::string> Element::optional_attribute(std::string_view key) const {
  if (const auto* v = find_attribute(key)) return *v;
  return std::nullopt;
}

namespace {

struct ParseState {
  std::vector<Element*> stack;
  Element root;
  bool has_root = false;
};

void on_start(void* data, const XML_Char* name, const XML_Char** attrs) {
  auto* st = static_cast<ParseState*>(data);
  Element el(name);
  for (int i = 0; attrs[i] != nullptr; i += 2) el.set(attrs[i], attrs[i + 1]);
  if (st->stack.empty()) {
    st->root = std::move(el);
    st->has_root = true;
    st->stack.push_back(&st->root);
    return;
  }
  Element* parent = st->stack.back();
  parent->children.push_back(std::move(el));
  st->stack.push_back(&parent->children.back());
}

void on_end(void* data, const XML_Char*) {
  auto* st = static_cast<ParseState*>(data);
  Element* el = st->stack.back();
  // Mixed content is not part of any dialect here: whitespace between
  // children is formatting, not data.
  if (!el->children.empty()) el->text.clear();
  st->stack.pop_back();
}

void on_text(void* data, const XML_Char* s, int len) {
  auto* st = static_cast<ParseState*>(data);
  if (st->stack.empty()) return;
  Element* el = st->stack.back();
  if (!el->children.empty()) return;
  el->text.append(s, static_cast<std::size_t>(len));
}

struct ParserDeleter {
  void operator()(XML_ParserStruct* p) const { XML_ParserFree(p); }
};

}  // namespace

Element parse(std::string_view document) {
  std::unique_ptr<XML_ParserStruct, ParserDeleter> parser(XML_ParserCreate("UTF-8"));
  ParseState state;
  XML_SetUserData(parser.get(), &state);
  XML_SetElementHandler(parser.get(), on_start, on_end);
  XML_SetCharacterDataHandler(parser.get(), on_text);
  const auto status = XML_Parse(parser.get(), document.data(),
                                static_cast<int>(document.size()), XML_TRUE);
  if (status != XML_STATUS_OK) {
    const auto line = XML_GetCurrentLineNumber(parser.get());
    const auto col = XML_GetCurrentColumnNumber(parser.get());
    throw Error(Errc::xml_syntax,
                std::to_string(line) + ":" + std::to_string(col),
                XML_ErrorString(XML_GetErrorCode(parser.get())));
  }
  if (!state.has_root) throw Error(Errc::xml_syntax, "1:0", "no root element");
  return std::move(state.root);
}

std::string escape_text(std::string_view raw) {
  std::string out;
  out.reserve(raw.size());
  for (char c : raw) {
    switch (c) {
      case '&': out += "&amp;"; break;
      case '<': out += "&lt;"; break;
      case '>': out += "&gt;"; break;
      case '\r': out += "&#13;"; break;
      default: out += c;
    }
  }
  return out;
}

std::string escape_attribute(std::string_view raw) {
  std::string out;
  out.reserve(raw.size());
  for (char c : raw) {
    switch (c) {
      case '&': out += "&amp;"; break;
      case '<': out += "&lt;"; break;
      case '>': out += "&gt;"; break;
      case '"': out += "&quot;"; break;
      case '\t': out += "&#9;"; break;
      case '\n': out += "&#10;"; break;
      case '\r': out += "&#13;"; break;
      default: out += c;
    }
  }
  return out;
}

namespace {

void write_element(const Element& el, std::size_t depth, std::string& out) {
  out.append(depth * 2, ' ');
  out += '<';
  out += el.name;
  for (const auto& [k, v] : el.attributes) {
    out += ' ';
    out += k;
    out += "=\"";
    out += escape_attribute(v);
    out += '"';
  }
  if (el.children.empty()) {
    if (el.text.empty()) {
      out += "/>\n";
    } else {
      out += '>';
      out += escape_text(el.text);
      out += "</" + el.name + ">\n";
    }
    return;
  }
  out += ">\n";
  for (const auto& child : el.children) write_element(child, depth + 1, out);
  out.append(depth * 2, ' ');
  out += "</" + el.name + ">\n";
}

}  // namespace

std::string write(const Element& root) {
  std::string out;
  write_element(root, 0, out);
  return out;
}

}  // namespace brain::xml
