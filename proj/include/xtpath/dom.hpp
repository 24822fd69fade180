#ifndef XTPATH_DOM_HPP_
#define XTPATH_DOM_HPP_

#include <atomic>
#include <cstddef>
#include <cstdint>
#include <map>
#include <memory>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

#include "xtpath/error.hpp"
#include "xtpath/xpath.hpp"

namespace xtpath {

using AttributeMap = std::map<std::string, std::string>;

/// Editable element tree. Used while parsing and by the shift simulator;
/// frozen into a Document for everything else.
///
/// `text` always has `children.size() + 1` entries: text[i] precedes
/// children[i] and text.back() follows the last child.
struct MutableNode {
  std::string tag;
  AttributeMap attrs;
  std::vector<MutableNode> children;
  std::vector<std::string> text{std::string()};

  MutableNode() = default;
  explicit MutableNode(std::string t, AttributeMap a = {}) : tag(std::move(t)), attrs(std::move(a)) {}

  MutableNode& add_child(MutableNode child) {
    children.push_back(std::move(child));
    text.emplace_back();
    return children.back();
  }

  void insert_child(std::size_t pos, MutableNode child) {
    children.insert(children.begin() + static_cast<std::ptrdiff_t>(pos), std::move(child));
    text.insert(text.begin() + static_cast<std::ptrdiff_t>(pos) + 1, std::string());
  }

  std::size_t size() const {
    std::size_t n = 1;
    for (const auto& c : children) n += c.size();
    return n;
  }
};

class Document;

/// Immutable element of a parsed document. Only elements are nodes; text is
/// carried as payload between children.
struct DomNode {
  std::string tag;
  AttributeMap attrs;
  std::vector<std::string> text;
  std::vector<const DomNode*> children;
  const DomNode* parent = nullptr;
  std::size_t node_id = 0;
  std::size_t depth = 0;
  /// Node count of the subtree rooted here, self included. Descendants occupy
  /// node ids (node_id, node_id + subtree_size).
  std::size_t subtree_size = 1;
  std::uint64_t document_serial = 0;

  std::optional<std::string_view> attr(std::string_view name) const {
    auto it = attrs.find(std::string(name));
    if (it == attrs.end()) return std::nullopt;
    return std::string_view(it->second);
  }

  bool is_ancestor_or_self_of(const DomNode& other) const noexcept {
    return document_serial == other.document_serial && node_id <= other.node_id &&
           other.node_id < node_id + subtree_size;
  }

  /// 1-based position among same-tag siblings, and the number of such siblings.
  std::pair<std::size_t, std::size_t> same_tag_position() const noexcept {
    if (!parent) return {1, 1};
    std::size_t pos = 0, count = 0;
    for (const DomNode* sib : parent->children) {
      if (sib->tag != tag) continue;
      ++count;
      if (sib == this) pos = count;
    }
    return {pos, count};
  }
};

/// Ordered element tree in pre-order storage. Node addresses are stable for
/// the lifetime of the Document, including across moves.
class Document {
 public:
  Document() = default;
  explicit Document(const MutableNode& root, std::optional<std::string> source_uri = std::nullopt)
      : serial_(next_serial()), source_uri_(std::move(source_uri)) {
    build(root);
  }

  Document(Document&&) noexcept = default;
  Document& operator=(Document&&) noexcept = default;
  Document(const Document&) = delete;
  Document& operator=(const Document&) = delete;

  bool empty() const noexcept { return nodes_.empty(); }
  const DomNode& root() const { return *nodes_.front(); }
  std::size_t size() const noexcept { return nodes_.size(); }
  const DomNode& node(std::size_t id) const { return *nodes_.at(id); }
  std::uint64_t serial() const noexcept { return serial_; }
  const std::optional<std::string>& source_uri() const noexcept { return source_uri_; }

  bool contains(const DomNode& n) const noexcept {
    return n.document_serial == serial_ && n.node_id < nodes_.size() && nodes_[n.node_id].get() == &n;
  }

  /// All nodes in pre-order.
  std::vector<const DomNode*> nodes() const {
    std::vector<const DomNode*> out;
    out.reserve(nodes_.size());
    for (const auto& n : nodes_) out.push_back(n.get());
    return out;
  }

  MutableNode to_mutable() const { return empty() ? MutableNode() : to_mutable(root()); }

  static MutableNode to_mutable(const DomNode& n) {
    MutableNode m(n.tag, n.attrs);
    m.text = n.text;
    m.children.reserve(n.children.size());
    for (const DomNode* c : n.children) m.children.push_back(to_mutable(*c));
    return m;
  }

  Document clone() const { return empty() ? Document() : Document(to_mutable(), source_uri_); }

 private:
  static std::uint64_t next_serial() {
    static std::atomic<std::uint64_t> counter{1};
    return counter.fetch_add(1, std::memory_order_relaxed);
  }

  void build(const MutableNode& root) {
    nodes_.reserve(root.size());
    struct Frame {
      const MutableNode* src;
      DomNode* parent;
    };
    std::vector<Frame> stack{{&root, nullptr}};
    while (!stack.empty()) {
      Frame f = stack.back();
      stack.pop_back();
      auto node = std::make_unique<DomNode>();
      node->tag = f.src->tag;
      node->attrs = f.src->attrs;
      node->text = f.src->text;
      node->text.resize(f.src->children.size() + 1);
      node->parent = f.parent;
      node->node_id = nodes_.size();
      node->depth = f.parent ? f.parent->depth + 1 : 0;
      node->document_serial = serial_;
      DomNode* raw = node.get();
      if (f.parent) f.parent->children.push_back(raw);
      nodes_.push_back(std::move(node));
      for (auto it = f.src->children.rbegin(); it != f.src->children.rend(); ++it) stack.push_back({&*it, raw});
    }
    for (auto it = nodes_.rbegin(); it != nodes_.rend(); ++it) {
      DomNode& n = **it;
      n.subtree_size = 1;
      for (const DomNode* c : n.children) n.subtree_size += c->subtree_size;
    }
  }

  std::vector<std::unique_ptr<DomNode>> nodes_;
  std::uint64_t serial_ = 0;
  std::optional<std::string> source_uri_;
};

namespace detail {

inline bool is_space(char c) noexcept { return c == ' ' || c == '\t' || c == '\n' || c == '\r' || c == '\f'; }

inline void append_utf8(std::string& out, std::uint32_t cp) {
  if (cp < 0x80) {
    out += static_cast<char>(cp);
  } else if (cp < 0x800) {
    out += static_cast<char>(0xC0 | (cp >> 6));
    out += static_cast<char>(0x80 | (cp & 0x3F));
  } else if (cp < 0x10000) {
    out += static_cast<char>(0xE0 | (cp >> 12));
    out += static_cast<char>(0x80 | ((cp >> 6) & 0x3F));
    out += static_cast<char>(0x80 | (cp & 0x3F));
  } else {
    out += static_cast<char>(0xF0 | (cp >> 18));
    out += static_cast<char>(0x80 | ((cp >> 12) & 0x3F));
    out += static_cast<char>(0x80 | ((cp >> 6) & 0x3F));
    out += static_cast<char>(0x80 | (cp & 0x3F));
  }
}

inline std::optional<std::uint32_t> named_entity(std::string_view name) {
  static const std::pair<std::string_view, std::uint32_t> table[] = {
      {"amp", '&'},     {"lt", '<'},       {"gt", '>'},       {"quot", '"'},    {"apos", '\''},
      {"nbsp", 0xA0},   {"copy", 0xA9},    {"reg", 0xAE},     {"trade", 0x2122}, {"mdash", 0x2014},
      {"ndash", 0x2013}, {"hellip", 0x2026}, {"laquo", 0xAB},   {"raquo", 0xBB},  {"middot", 0xB7},
      {"bull", 0x2022}, {"euro", 0x20AC},  {"pound", 0xA3},   {"yen", 0xA5},    {"cent", 0xA2},
      {"deg", 0xB0},    {"times", 0xD7},   {"lsquo", 0x2018}, {"rsquo", 0x2019}, {"ldquo", 0x201C},
      {"rdquo", 0x201D}};
  for (const auto& [k, v] : table)
    if (k == name) return v;
  return std::nullopt;
}

/// Strict, non-validating XML reader producing a MutableNode tree.
class XmlReader {
 public:
  explicit XmlReader(std::string_view src) : src_(src) {}

  MutableNode read() {
    skip_prolog();
    if (at_end() || peek() != '<') throw error("expected root element");
    MutableNode root;
    std::vector<MutableNode*> stack;
    bool root_closed = false;
    read_start_tag(root, stack);
    if (stack.empty()) root_closed = true;

    while (!root_closed) {
      if (at_end()) throw error("unexpected end of input inside <" + stack.back()->tag + ">");
      MutableNode& cur = *stack.back();
      if (peek() != '<') {
        read_text(cur.text.back());
        continue;
      }
      if (starts_with("<!--")) {
        skip_comment();
      } else if (starts_with("<![CDATA[")) {
        advance(9);
        std::size_t end = src_.find("]]>", pos_);
        if (end == std::string_view::npos) throw error("unterminated CDATA section");
        cur.text.back().append(src_.substr(pos_, end - pos_));
        advance(end + 3 - pos_);
      } else if (starts_with("<?")) {
        skip_pi();
      } else if (starts_with("</")) {
        advance(2);
        std::string name = read_name();
        skip_ws();
        expect('>');
        if (name != cur.tag) throw error("mismatched closing tag </" + name + ">, expected </" + cur.tag + ">");
        stack.pop_back();
        if (stack.empty()) root_closed = true;
      } else if (starts_with("<!")) {
        throw error("unexpected markup declaration inside element");
      } else {
        MutableNode& child = cur.add_child(MutableNode());
        read_start_tag(child, stack);
      }
    }

    skip_misc();
    if (!at_end()) throw error("content after the document element");
    return root;
  }

 private:
  bool at_end() const noexcept { return pos_ >= src_.size(); }
  char peek() const noexcept { return src_[pos_]; }
  bool starts_with(std::string_view s) const noexcept { return src_.substr(pos_, s.size()) == s; }

  void advance(std::size_t n) {
    for (std::size_t k = 0; k < n && pos_ < src_.size(); ++k, ++pos_) {
      if (src_[pos_] == '\n') {
        ++line_;
        col_ = 1;
      } else {
        ++col_;
      }
    }
  }

  ParseError error(const std::string& what) const { return ParseError(what, line_, col_); }

  void expect(char c) {
    if (at_end() || peek() != c) throw error(std::string("expected '") + c + "'");
    advance(1);
  }

  void skip_ws() {
    while (!at_end() && is_space(peek())) advance(1);
  }

  void skip_comment() {
    std::size_t end = src_.find("-->", pos_ + 4);
    if (end == std::string_view::npos) throw error("unterminated comment");
    advance(end + 3 - pos_);
  }

  void skip_pi() {
    std::size_t end = src_.find("?>", pos_ + 2);
    if (end == std::string_view::npos) throw error("unterminated processing instruction");
    advance(end + 2 - pos_);
  }

  void skip_doctype() {
    advance(9);
    int bracket = 0;
    while (!at_end()) {
      char c = peek();
      if (c == '[') ++bracket;
      if (c == ']') --bracket;
      if (c == '>' && bracket == 0) {
        advance(1);
        return;
      }
      advance(1);
    }
    throw error("unterminated DOCTYPE");
  }

  void skip_misc() {
    for (;;) {
      skip_ws();
      if (starts_with("<!--")) {
        skip_comment();
      } else if (starts_with("<?")) {
        skip_pi();
      } else {
        return;
      }
    }
  }

  void skip_prolog() {
    if (starts_with("\xEF\xBB\xBF")) advance(3);
    for (;;) {
      skip_misc();
      if (starts_with("<!DOCTYPE") || starts_with("<!doctype")) {
        skip_doctype();
      } else {
        return;
      }
    }
  }

  std::string read_name() {
    std::size_t start = pos_;
    while (!at_end() && (is_name_char(peek()) || static_cast<unsigned char>(peek()) >= 0x80)) advance(1);
    if (pos_ == start) throw error("expected a name");
    return to_lower(src_.substr(start, pos_ - start));
  }

  void read_entity(std::string& out) {
    advance(1);  // '&'
    std::size_t end = src_.find(';', pos_);
    if (end == std::string_view::npos || end - pos_ > 32) throw error("unterminated entity reference");
    std::string_view body = src_.substr(pos_, end - pos_);
    if (body.empty()) throw error("empty entity reference");
    if (body[0] == '#') {
      std::uint32_t cp = 0;
      bool hex = body.size() > 1 && (body[1] == 'x' || body[1] == 'X');
      std::string_view digits = body.substr(hex ? 2 : 1);
      if (digits.empty()) throw error("empty character reference");
      for (char c : digits) {
        int v;
        if (c >= '0' && c <= '9') v = c - '0';
        else if (hex && c >= 'a' && c <= 'f') v = c - 'a' + 10;
        else if (hex && c >= 'A' && c <= 'F') v = c - 'A' + 10;
        else throw error("invalid character reference &" + std::string(body) + ";");
        cp = cp * (hex ? 16u : 10u) + static_cast<std::uint32_t>(v);
        if (cp > 0x10FFFF) throw error("character reference out of range");
      }
      append_utf8(out, cp);
    } else {
      auto cp = named_entity(body);
      if (!cp) throw error("unknown entity &" + std::string(body) + ";");
      append_utf8(out, *cp);
    }
    advance(end + 1 - pos_);
  }

  void read_text(std::string& out) {
    while (!at_end() && peek() != '<') {
      if (peek() == '&') {
        read_entity(out);
      } else {
        out += peek();
        advance(1);
      }
    }
  }

  void read_start_tag(MutableNode& node, std::vector<MutableNode*>& stack) {
    advance(1);  // '<'
    node.tag = read_name();
    for (;;) {
      bool had_space = !at_end() && is_space(peek());
      skip_ws();
      if (at_end()) throw error("unexpected end of input in start tag <" + node.tag + ">");
      if (peek() == '/') {
        advance(1);
        expect('>');
        return;
      }
      if (peek() == '>') {
        advance(1);
        stack.push_back(&node);
        return;
      }
      if (!had_space) throw error("expected whitespace before attribute");
      std::string name = read_name();
      skip_ws();
      expect('=');
      skip_ws();
      if (at_end() || (peek() != '"' && peek() != '\'')) throw error("attribute value must be quoted");
      char quote = peek();
      advance(1);
      std::string value;
      while (!at_end() && peek() != quote) {
        if (peek() == '<') throw error("'<' in attribute value");
        if (peek() == '&') {
          read_entity(value);
        } else {
          value += peek();
          advance(1);
        }
      }
      expect(quote);
      if (!node.attrs.emplace(name, std::move(value)).second) throw error("duplicate attribute '" + name + "'");
    }
  }

  std::string_view src_;
  std::size_t pos_ = 0;
  std::size_t line_ = 1;
  std::size_t col_ = 1;
};

inline void escape_into(std::string& out, std::string_view s, bool attribute) {
  for (char c : s) {
    switch (c) {
      case '&': out += "&amp;"; break;
      case '<': out += "&lt;"; break;
      case '>': out += "&gt;"; break;
      case '"':
        if (attribute) {
          out += "&quot;";
          break;
        }
        [[fallthrough]];
      default: out += c;
    }
  }
}

inline void serialize_into(std::string& out, const DomNode& n) {
  out += '<';
  out += n.tag;
  for (const auto& [k, v] : n.attrs) {
    out += ' ';
    out += k;
    out += "=\"";
    escape_into(out, v, true);
    out += '"';
  }
  bool has_text = false;
  for (const auto& t : n.text) has_text |= !t.empty();
  if (n.children.empty() && !has_text) {
    out += "/>";
    return;
  }
  out += '>';
  for (std::size_t i = 0; i < n.children.size(); ++i) {
    escape_into(out, n.text[i], false);
    serialize_into(out, *n.children[i]);
  }
  escape_into(out, n.text.back(), false);
  out += "</";
  out += n.tag;
  out += '>';
}

inline void collect_text(std::string& out, const DomNode& n) {
  for (std::size_t i = 0; i < n.children.size(); ++i) {
    out += n.text[i];
    collect_text(out, *n.children[i]);
  }
  out += n.text.back();
}

}  // namespace detail

/// Collapses whitespace runs to single spaces and trims both ends.
inline std::string normalize_space(std::string_view s) {
  std::string out;
  out.reserve(s.size());
  bool pending = false;
  for (char c : s) {
    if (detail::is_space(c)) {
      pending = !out.empty();
      continue;
    }
    if (pending) out += ' ';
    pending = false;
    out += c;
  }
  return out;
}

/// Parses well-formed XML/XHTML. Tag and attribute names are lowercased;
/// comments and processing instructions are dropped.
inline Document parse_document(std::string_view xhtml, std::optional<std::string> source_uri = std::nullopt) {
  return Document(detail::XmlReader(xhtml).read(), std::move(source_uri));
}

/// Parses a single element (a fragment) into an editable tree.
inline MutableNode parse_fragment(std::string_view xhtml) { return detail::XmlReader(xhtml).read(); }

inline std::string node_text(const DomNode& node) {
  std::string raw;
  detail::collect_text(raw, node);
  return normalize_space(raw);
}

inline std::string serialize(const DomNode& node) {
  std::string out;
  detail::serialize_into(out, node);
  return out;
}

inline std::string serialize(const Document& doc) { return doc.empty() ? std::string() : serialize(doc.root()); }

/// Index is omitted on steps whose node is the only same-tag child.
inline AbsoluteXPath derive_absolute_xpath(const DomNode& node) {
  std::vector<XPathStep> steps;
  for (const DomNode* n = &node; n; n = n->parent) {
    auto [pos, count] = n->same_tag_position();
    steps.push_back({n->tag, count > 1 ? std::optional<std::size_t>(pos) : std::nullopt});
  }
  return AbsoluteXPath({steps.rbegin(), steps.rend()});
}

}  // namespace xtpath

#endif  // XTPATH_DOM_HPP_
