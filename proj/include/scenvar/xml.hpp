// Copyright 2026 the scenvar authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//     http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.
//
// Minimal XML document model for the .xodr/.osm/.xosc subsets handled by this
// toolkit: elements, ordered attributes, character data, comments and CDATA.
// No DTDs, namespaces are kept as plain name prefixes. The writer produces
// byte-stable output (fixed indentation, attribute order as stored).

#pragma once

#include <cctype>
#include <charconv>
#include <cstdlib>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

#include "scenvar/errors.hpp"

namespace scenvar {

struct XmlNode {
  std::string name;
  std::vector<std::pair<std::string, std::string>> attributes;
  std::vector<XmlNode> children;
  std::string text;

  const std::string* attr(std::string_view key) const {
    for (const auto& [k, v] : attributes) {
      if (k == key) {
        return &v;
      }
    }
    return nullptr;
  }

  std::string attr_or(std::string_view key, const std::string& fallback) const {
    const std::string* v = attr(key);
    return v != nullptr ? *v : fallback;
  }

  const std::string& require_attr(std::string_view key) const {
    const std::string* v = attr(key);
    if (v == nullptr) {
      throw StructuralError("<" + name + "> missing attribute '" + std::string{key} + "'");
    }
    return *v;
  }

  double attr_double(std::string_view key) const {
    const std::string& raw = require_attr(key);
    char* end = nullptr;
    const double value = std::strtod(raw.c_str(), &end);
    if (end == raw.c_str()) {
      throw StructuralError("<" + name + "> attribute '" + std::string{key} +
                            "' is not a number: " + raw);
    }
    return value;
  }

  int attr_int(std::string_view key) const {
    const std::string& raw = require_attr(key);
    int value = 0;
    const auto res = std::from_chars(raw.data(), raw.data() + raw.size(), value);
    if (res.ec != std::errc{}) {
      throw StructuralError("<" + name + "> attribute '" + std::string{key} +
                            "' is not an integer: " + raw);
    }
    return value;
  }

  void set_attr(std::string key, std::string value) {
    for (auto& [k, v] : attributes) {
      if (k == key) {
        v = std::move(value);
        return;
      }
    }
    attributes.emplace_back(std::move(key), std::move(value));
  }

  XmlNode& add_child(std::string child_name) {
    children.emplace_back();
    children.back().name = std::move(child_name);
    return children.back();
  }

  const XmlNode* child(std::string_view child_name) const {
    for (const auto& c : children) {
      if (c.name == child_name) {
        return &c;
      }
    }
    return nullptr;
  }

  const XmlNode& require_child(std::string_view child_name) const {
    const XmlNode* c = child(child_name);
    if (c == nullptr) {
      throw StructuralError("<" + name + "> missing child <" + std::string{child_name} + ">");
    }
    return *c;
  }

  std::vector<const XmlNode*> children_named(std::string_view child_name) const {
    std::vector<const XmlNode*> out;
    for (const auto& c : children) {
      if (c.name == child_name) {
        out.push_back(&c);
      }
    }
    return out;
  }
};

namespace detail {

class XmlParser {
public:
  explicit XmlParser(std::string_view text) : text_(text) {}

  XmlNode parse_document() {
    skip_prolog();
    if (eof()) {
      fail("document has no root element");
    }
    XmlNode root = parse_element();
    skip_misc();
    if (!eof()) {
      fail("content after the root element");
    }
    return root;
  }

private:
  std::string_view text_;
  size_t pos_{0};
  int line_{1};
  int col_{1};

  [[noreturn]] void fail(const std::string& msg) const { throw ParseError(msg, line_, col_); }

  bool eof() const { return pos_ >= text_.size(); }
  char peek() const { return text_[pos_]; }

  char advance() {
    const char c = text_[pos_++];
    if (c == '\n') {
      ++line_;
      col_ = 1;
    } else {
      ++col_;
    }
    return c;
  }

  bool starts_with(std::string_view s) const { return text_.substr(pos_, s.size()) == s; }

  void expect(std::string_view s) {
    if (!starts_with(s)) {
      fail("expected '" + std::string{s} + "'");
    }
    for (size_t i = 0; i < s.size(); ++i) {
      advance();
    }
  }

  void skip_ws() {
    while (!eof() && std::isspace(static_cast<unsigned char>(peek()))) {
      advance();
    }
  }

  void skip_until(std::string_view terminator) {
    while (!starts_with(terminator)) {
      if (eof()) {
        fail("unterminated '" + std::string{terminator} + "'");
      }
      advance();
    }
    expect(terminator);
  }

  void skip_misc() {
    while (true) {
      skip_ws();
      if (starts_with("<!--")) {
        expect("<!--");
        skip_until("-->");
      } else if (starts_with("<?")) {
        expect("<?");
        skip_until("?>");
      } else {
        return;
      }
    }
  }

  void skip_prolog() {
    skip_misc();
    if (starts_with("<!DOCTYPE")) {
      skip_until(">");
      skip_misc();
    }
  }

  static bool is_name_char(char c) {
    return std::isalnum(static_cast<unsigned char>(c)) || c == '_' || c == '-' || c == '.' ||
           c == ':';
  }

  std::string parse_name() {
    if (eof() || !is_name_char(peek())) {
      fail("expected a name");
    }
    std::string name;
    while (!eof() && is_name_char(peek())) {
      name.push_back(advance());
    }
    return name;
  }

  std::string decode_entity() {
    expect("&");
    std::string entity;
    while (!eof() && peek() != ';') {
      entity.push_back(advance());
      if (entity.size() > 8) {
        fail("unterminated entity reference");
      }
    }
    expect(";");
    if (entity == "amp") return "&";
    if (entity == "lt") return "<";
    if (entity == "gt") return ">";
    if (entity == "quot") return "\"";
    if (entity == "apos") return "'";
    if (!entity.empty() && entity[0] == '#') {
      const bool hex = entity.size() > 1 && (entity[1] == 'x' || entity[1] == 'X');
      const long code = std::strtol(entity.c_str() + (hex ? 2 : 1), nullptr, hex ? 16 : 10);
      if (code <= 0 || code > 0x10FFFF) {
        fail("invalid character reference &" + entity + ";");
      }
      // UTF-8 encode.
      std::string out;
      const auto cp = static_cast<unsigned long>(code);
      if (cp < 0x80) {
        out.push_back(static_cast<char>(cp));
      } else if (cp < 0x800) {
        out.push_back(static_cast<char>(0xC0 | (cp >> 6)));
        out.push_back(static_cast<char>(0x80 | (cp & 0x3F)));
      } else if (cp < 0x10000) {
        out.push_back(static_cast<char>(0xE0 | (cp >> 12)));
        out.push_back(static_cast<char>(0x80 | ((cp >> 6) & 0x3F)));
        out.push_back(static_cast<char>(0x80 | (cp & 0x3F)));
      } else {
        out.push_back(static_cast<char>(0xF0 | (cp >> 18)));
        out.push_back(static_cast<char>(0x80 | ((cp >> 12) & 0x3F)));
        out.push_back(static_cast<char>(0x80 | ((cp >> 6) & 0x3F)));
        out.push_back(static_cast<char>(0x80 | (cp & 0x3F)));
      }
      return out;
    }
    fail("unknown entity &" + entity + ";");
  }

  std::string parse_attr_value() {
    if (eof() || (peek() != '"' && peek() != '\'')) {
      fail("expected a quoted attribute value");
    }
    const char quote = advance();
    std::string value;
    while (true) {
      if (eof()) {
        fail("unterminated attribute value");
      }
      if (peek() == quote) {
        advance();
        return value;
      }
      if (peek() == '&') {
        value += decode_entity();
      } else if (peek() == '<') {
        fail("'<' in attribute value");
      } else {
        value.push_back(advance());
      }
    }
  }

  XmlNode parse_element() {
    expect("<");
    XmlNode node;
    node.name = parse_name();
    while (true) {
      skip_ws();
      if (eof()) {
        fail("unterminated element <" + node.name + ">");
      }
      if (starts_with("/>")) {
        expect("/>");
        return node;
      }
      if (peek() == '>') {
        advance();
        parse_content(node);
        // Indentation between child elements is layout, not data.
        if (node.text.find_first_not_of(" \t\r\n") == std::string::npos) {
          node.text.clear();
        }
        return node;
      }
      std::string key = parse_name();
      skip_ws();
      expect("=");
      skip_ws();
      node.attributes.emplace_back(std::move(key), parse_attr_value());
    }
  }

  void parse_content(XmlNode& node) {
    while (true) {
      if (eof()) {
        fail("unterminated element <" + node.name + ">");
      }
      if (starts_with("</")) {
        expect("</");
        const std::string closing = parse_name();
        if (closing != node.name) {
          fail("mismatched closing tag </" + closing + "> for <" + node.name + ">");
        }
        skip_ws();
        expect(">");
        return;
      }
      if (starts_with("<!--")) {
        expect("<!--");
        skip_until("-->");
      } else if (starts_with("<![CDATA[")) {
        expect("<![CDATA[");
        while (!starts_with("]]>")) {
          if (eof()) {
            fail("unterminated CDATA section");
          }
          node.text.push_back(advance());
        }
        expect("]]>");
      } else if (starts_with("<?")) {
        expect("<?");
        skip_until("?>");
      } else if (peek() == '<') {
        node.children.push_back(parse_element());
      } else if (peek() == '&') {
        node.text += decode_entity();
      } else {
        node.text.push_back(advance());
      }
    }
  }
};

inline void xml_escape_into(std::string& out, std::string_view raw, bool attribute) {
  for (const char c : raw) {
    switch (c) {
      case '&':
        out += "&amp;";
        break;
      case '<':
        out += "&lt;";
        break;
      case '>':
        out += "&gt;";
        break;
      case '"':
        if (attribute) {
          out += "&quot;";
        } else {
          out.push_back(c);
        }
        break;
      default:
        out.push_back(c);
    }
  }
}

inline void xml_write_node(std::string& out, const XmlNode& node, int depth) {
  out.append(static_cast<size_t>(2 * depth), ' ');
  out.push_back('<');
  out += node.name;
  for (const auto& [k, v] : node.attributes) {
    out.push_back(' ');
    out += k;
    out += "=\"";
    xml_escape_into(out, v, true);
    out.push_back('"');
  }
  if (node.children.empty() && node.text.empty()) {
    out += "/>\n";
    return;
  }
  if (node.children.empty()) {
    out.push_back('>');
    xml_escape_into(out, node.text, false);
    out += "</";
    out += node.name;
    out += ">\n";
    return;
  }
  out += ">\n";
  for (const auto& child : node.children) {
    xml_write_node(out, child, depth + 1);
  }
  out.append(static_cast<size_t>(2 * depth), ' ');
  out += "</";
  out += node.name;
  out += ">\n";
}

}  // namespace detail

/// Parses a document and returns the root element.
/// Malformed input raises ParseError with 1-based line/column.
inline XmlNode xml_parse(std::string_view text) {
  return detail::XmlParser(text).parse_document();
}

inline std::string xml_serialize(const XmlNode& root) {
  std::string out = "<?xml version=\"1.0\" encoding=\"UTF-8\"?>\n";
  detail::xml_write_node(out, root, 0);
  return out;
}

}  // namespace scenvar
