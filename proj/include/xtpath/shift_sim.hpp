#ifndef XTPATH_SHIFT_SIM_HPP_
#define XTPATH_SHIFT_SIM_HPP_

#include <algorithm>
#include <cstddef>
#include <optional>
#include <span>
#include <sstream>
#include <string>
#include <string_view>
#include <unordered_map>
#include <utility>
#include <vector>

#include "xtpath/dom.hpp"
#include "xtpath/error.hpp"
#include "xtpath/model.hpp"
#include "xtpath/random.hpp"
#include "xtpath/xpath_engine.hpp"

namespace xtpath {

enum class ShiftKind { vertical, horizontal };
enum class ShiftOp { insert, remove };
enum class Placement { before, after };

/// One structural edit.
///
/// vertical insert: a new node s takes the anchor's place and adopts it as
///   its only child.
/// vertical remove: the anchor is spliced out, its children take its place.
/// horizontal insert: s (or `subtree`) becomes a sibling before/after the anchor.
/// horizontal remove: the anchor subtree is deleted.
struct ShiftEdit {
  ShiftKind kind = ShiftKind::vertical;
  ShiftOp op = ShiftOp::insert;
  AbsoluteXPath anchor;
  std::string inserted_tag = "div";
  AttributeMap inserted_attrs;
  std::optional<MutableNode> subtree;
  Placement placement = Placement::before;

  MutableNode inserted_node() const {
    if (subtree) return *subtree;
    return MutableNode(inserted_tag, inserted_attrs);
  }
};

namespace detail {

/// Child positions from the root down to `n`.
inline std::vector<std::size_t> child_positions(const DomNode& n) {
  std::vector<std::size_t> path;
  for (const DomNode* cur = &n; cur->parent; cur = cur->parent) {
    const auto& sib = cur->parent->children;
    path.push_back(static_cast<std::size_t>(std::find(sib.begin(), sib.end(), cur) - sib.begin()));
  }
  std::reverse(path.begin(), path.end());
  return path;
}

inline MutableNode& walk(MutableNode& root, std::span<const std::size_t> path) {
  MutableNode* cur = &root;
  for (std::size_t p : path) cur = &cur->children[p];
  return *cur;
}

inline const DomNode& resolve_anchor(const Document& doc, const ShiftEdit& edit) {
  const DomNode* n = edit.anchor.empty() ? nullptr : evaluate_xpath(edit.anchor, doc);
  if (!n) throw AnchorError("shift anchor '" + edit.anchor.str() + "' does not resolve");
  return *n;
}

}  // namespace detail

inline Document apply_vertical_shift(const Document& doc, const ShiftEdit& edit) {
  if (edit.kind != ShiftKind::vertical) throw InputError("apply_vertical_shift needs a vertical edit");
  const DomNode& anchor = detail::resolve_anchor(doc, edit);
  MutableNode root = doc.to_mutable();
  std::vector<std::size_t> path = detail::child_positions(anchor);

  if (edit.op == ShiftOp::insert) {
    MutableNode s = edit.inserted_node();
    if (path.empty()) {
      s.children.clear();
      s.text.assign(1, std::string());
      s.add_child(std::move(root));
      return Document(s, doc.source_uri());
    }
    MutableNode& parent = detail::walk(root, std::span(path).first(path.size() - 1));
    MutableNode& slot = parent.children[path.back()];
    s.children.clear();
    s.text.assign(1, std::string());
    s.add_child(std::move(slot));
    slot = std::move(s);
    return Document(root, doc.source_uri());
  }

  if (path.empty()) {
    if (root.children.size() != 1) throw AnchorError("cannot splice out a root with other than one child");
    MutableNode only = std::move(root.children.front());
    return Document(only, doc.source_uri());
  }
  MutableNode& parent = detail::walk(root, std::span(path).first(path.size() - 1));
  const std::size_t k = path.back();
  MutableNode removed = std::move(parent.children[k]);
  // Surrounding text is merged into the promoted children's text runs.
  std::vector<std::string> text = removed.text;
  text.front() = parent.text[k] + text.front();
  text.back() += parent.text[k + 1];
  parent.children.erase(parent.children.begin() + static_cast<std::ptrdiff_t>(k));
  parent.children.insert(parent.children.begin() + static_cast<std::ptrdiff_t>(k),
                         std::make_move_iterator(removed.children.begin()),
                         std::make_move_iterator(removed.children.end()));
  parent.text.erase(parent.text.begin() + static_cast<std::ptrdiff_t>(k),
                    parent.text.begin() + static_cast<std::ptrdiff_t>(k) + 2);
  parent.text.insert(parent.text.begin() + static_cast<std::ptrdiff_t>(k), text.begin(), text.end());
  return Document(root, doc.source_uri());
}

inline Document apply_horizontal_shift(const Document& doc, const ShiftEdit& edit) {
  if (edit.kind != ShiftKind::horizontal) throw InputError("apply_horizontal_shift needs a horizontal edit");
  const DomNode& anchor = detail::resolve_anchor(doc, edit);
  if (!anchor.parent) throw AnchorError("the document element has no siblings");
  MutableNode root = doc.to_mutable();
  std::vector<std::size_t> path = detail::child_positions(anchor);
  MutableNode& parent = detail::walk(root, std::span(path).first(path.size() - 1));
  const std::size_t k = path.back();

  if (edit.op == ShiftOp::insert) {
    parent.insert_child(edit.placement == Placement::before ? k : k + 1, edit.inserted_node());
  } else {
    parent.children.erase(parent.children.begin() + static_cast<std::ptrdiff_t>(k));
    parent.text[k] += parent.text[k + 1];
    parent.text.erase(parent.text.begin() + static_cast<std::ptrdiff_t>(k) + 1);
  }
  return Document(root, doc.source_uri());
}

inline Document apply_shift(const Document& doc, const ShiftEdit& edit) {
  return edit.kind == ShiftKind::vertical ? apply_vertical_shift(doc, edit) : apply_horizontal_shift(doc, edit);
}

inline Document apply_shifts(const Document& doc, std::span<const ShiftEdit> edits) {
  Document cur = doc.clone();
  for (const auto& e : edits) cur = apply_shift(cur, e);
  return cur;
}

// ---------------------------------------------------------------------------
// Shift scripts: `kind anchor [tag|<fragment>] [attr=value ...]`

inline std::string_view kind_token(const ShiftEdit& e) {
  if (e.kind == ShiftKind::vertical) return e.op == ShiftOp::insert ? "vertical" : "vertical-remove";
  if (e.op == ShiftOp::remove) return "horizontal-remove";
  return e.placement == Placement::before ? "horizontal" : "horizontal-after";
}

inline std::string format_shift(const ShiftEdit& e) {
  std::string out(kind_token(e));
  out += ' ';
  out += e.anchor.str();
  if (e.op == ShiftOp::remove) return out;
  if (e.subtree) {
    out += ' ';
    out += serialize(Document(*e.subtree).root());
    return out;
  }
  out += ' ';
  out += e.inserted_tag;
  for (const auto& [k, v] : e.inserted_attrs) {
    out += ' ' + k + '=';
    if (v.find_first_of(" \t\"") != std::string::npos || v.empty()) {
      out += '"' + v + '"';
    } else {
      out += v;
    }
  }
  return out;
}

namespace detail {

inline std::vector<std::string> split_tokens(std::string_view line) {
  std::vector<std::string> out;
  std::size_t i = 0;
  while (i < line.size()) {
    while (i < line.size() && is_space(line[i])) ++i;
    if (i >= line.size()) break;
    std::string tok;
    while (i < line.size() && !is_space(line[i])) {
      if (line[i] == '"') {
        std::size_t close = line.find('"', i + 1);
        if (close == std::string_view::npos) throw InputError("unterminated quote in shift script");
        tok.append(line.substr(i + 1, close - i - 1));
        i = close + 1;
      } else {
        tok += line[i++];
      }
    }
    out.push_back(std::move(tok));
  }
  return out;
}

}  // namespace detail

inline ShiftEdit parse_shift_line(std::string_view line) {
  std::string_view rest = line;
  auto next_word = [&]() {
    while (!rest.empty() && detail::is_space(rest.front())) rest.remove_prefix(1);
    std::size_t end = 0;
    while (end < rest.size() && !detail::is_space(rest[end])) ++end;
    std::string_view w = rest.substr(0, end);
    rest.remove_prefix(end);
    return w;
  };
  std::string_view kind = next_word();
  std::string_view anchor = next_word();
  if (kind.empty() || anchor.empty()) throw InputError("shift line needs a kind and an anchor: '" + std::string(line) + "'");

  ShiftEdit e;
  if (kind == "vertical") {
    e.kind = ShiftKind::vertical;
  } else if (kind == "vertical-remove") {
    e.kind = ShiftKind::vertical;
    e.op = ShiftOp::remove;
  } else if (kind == "horizontal") {
    e.kind = ShiftKind::horizontal;
  } else if (kind == "horizontal-after") {
    e.kind = ShiftKind::horizontal;
    e.placement = Placement::after;
  } else if (kind == "horizontal-remove") {
    e.kind = ShiftKind::horizontal;
    e.op = ShiftOp::remove;
  } else {
    throw InputError("unknown shift kind '" + std::string(kind) + "'");
  }
  e.anchor = parse_xpath(anchor);
  if (e.op == ShiftOp::remove) return e;

  while (!rest.empty() && detail::is_space(rest.front())) rest.remove_prefix(1);
  if (!rest.empty() && rest.front() == '<') {
    e.subtree = parse_fragment(rest);
    return e;
  }
  auto tokens = detail::split_tokens(rest);
  if (tokens.empty()) throw InputError("insert shift needs a tag: '" + std::string(line) + "'");
  e.inserted_tag = detail::to_lower(tokens.front());
  for (std::size_t i = 1; i < tokens.size(); ++i) {
    auto eq = tokens[i].find('=');
    if (eq == std::string::npos || eq == 0) throw InputError("expected attr=value, got '" + tokens[i] + "'");
    e.inserted_attrs[detail::to_lower(tokens[i].substr(0, eq))] = tokens[i].substr(eq + 1);
  }
  return e;
}

/// Blank lines and lines starting with '#' are ignored.
inline std::vector<ShiftEdit> parse_shift_script(std::string_view script) {
  std::vector<ShiftEdit> edits;
  std::size_t start = 0;
  while (start <= script.size()) {
    std::size_t end = script.find('\n', start);
    if (end == std::string_view::npos) end = script.size();
    std::string_view line = detail::trim(script.substr(start, end - start));
    if (!line.empty() && line.front() != '#') edits.push_back(parse_shift_line(line));
    start = end + 1;
  }
  return edits;
}

// ---------------------------------------------------------------------------
// Random shifts.

struct ShiftVariant {
  ShiftKind kind;
  ShiftOp op;
  Placement placement = Placement::before;
};

inline ShiftVariant parse_shift_variant(std::string_view token) {
  if (token == "vertical") return {ShiftKind::vertical, ShiftOp::insert};
  if (token == "vertical-remove") return {ShiftKind::vertical, ShiftOp::remove};
  if (token == "horizontal") return {ShiftKind::horizontal, ShiftOp::insert};
  if (token == "horizontal-after") return {ShiftKind::horizontal, ShiftOp::insert, Placement::after};
  if (token == "horizontal-remove") return {ShiftKind::horizontal, ShiftOp::remove};
  throw InputError("unknown shift kind '" + std::string(token) + "'");
}

/// Comma-separated list of shift kinds, e.g. "vertical,horizontal".
inline std::vector<ShiftVariant> parse_shift_kinds(std::string_view csv) {
  std::vector<ShiftVariant> out;
  std::size_t start = 0;
  while (start <= csv.size()) {
    std::size_t end = csv.find(',', start);
    if (end == std::string_view::npos) end = csv.size();
    std::string_view tok = detail::trim(csv.substr(start, end - start));
    if (!tok.empty()) out.push_back(parse_shift_variant(tok));
    start = end + 1;
  }
  return out;
}

inline const std::vector<std::string>& random_shift_tags() {
  static const std::vector<std::string> tags{"div", "span", "p", "section"};
  return tags;
}

/// Uniform over `variants`, then over the nodes the variant can anchor on,
/// then over inserted tags.
inline std::optional<ShiftEdit> random_shift(const Document& doc, Rng& rng, std::span<const ShiftVariant> variants) {
  if (doc.empty() || variants.empty()) return std::nullopt;
  const ShiftVariant& v = variants[rng.uniform(variants.size())];
  std::vector<const DomNode*> eligible;
  for (const DomNode* n : doc.nodes()) {
    bool ok = true;
    if (v.kind == ShiftKind::horizontal) ok = n->parent != nullptr;
    if (v.kind == ShiftKind::vertical && v.op == ShiftOp::remove) ok = n->parent != nullptr;
    if (v.kind == ShiftKind::horizontal && v.op == ShiftOp::remove) ok = ok && n->parent->children.size() > 1;
    if (ok) eligible.push_back(n);
  }
  if (eligible.empty()) return std::nullopt;
  ShiftEdit e;
  e.kind = v.kind;
  e.op = v.op;
  e.placement = v.placement;
  e.anchor = derive_absolute_xpath(*eligible[rng.uniform(eligible.size())]);
  e.inserted_tag = rng.pick(random_shift_tags());
  return e;
}

/// Applies `count` random shifts in sequence; returns the final document and
/// the edits that produced it.
inline std::pair<Document, std::vector<ShiftEdit>> random_shifts(const Document& doc, std::uint64_t seed,
                                                                 std::size_t count,
                                                                 std::span<const ShiftVariant> variants) {
  Rng rng(seed);
  Document cur = doc.clone();
  std::vector<ShiftEdit> edits;
  for (std::size_t i = 0; i < count; ++i) {
    auto e = random_shift(cur, rng, variants);
    if (!e) break;
    cur = apply_shift(cur, *e);
    edits.push_back(std::move(*e));
  }
  return {std::move(cur), std::move(edits)};
}

/// Copy of a subtree's structure cut at `max_depth` levels below `n`, with
/// every text run replaced by `filler`.
inline MutableNode make_decoy(const DomNode& n, std::size_t max_depth, const std::string& filler) {
  MutableNode m(n.tag, n.attrs);
  if (max_depth > 0)
    for (const DomNode* c : n.children) m.add_child(make_decoy(*c, max_depth - 1, filler));
  if (m.children.empty()) m.text.front() = filler;
  return m;
}

/// A shift that lands on the root-to-target path of one of `targets`:
/// either a wrapper inserted above a path node, or a shallow decoy copy of a
/// path node inserted as its preceding sibling.
inline ShiftEdit shift_near(std::span<const DomNode* const> targets, Rng& rng) {
  const DomNode* target = targets[rng.uniform(targets.size())];
  std::vector<const DomNode*> path;
  for (const DomNode* n = target; n && n->parent; n = n->parent) path.push_back(n);
  if (path.empty()) throw InputError("shift_near: target is the document element");
  const DomNode* at = path[rng.uniform(path.size())];
  ShiftEdit e;
  e.anchor = derive_absolute_xpath(*at);
  if (rng.chance(0.5)) {
    e.kind = ShiftKind::vertical;
    e.inserted_tag = rng.pick(random_shift_tags());
  } else {
    e.kind = ShiftKind::horizontal;
    e.subtree = make_decoy(*at, 2, "Sale!");
  }
  return e;
}

// ---------------------------------------------------------------------------
// Compatible-XPath grouping.

/// Distinct absolute XPaths of the targets with page counts, largest group
/// first, ties in first-seen order.
inline std::vector<Counted<AbsoluteXPath>> group_compatible_xpaths(std::span<const DomNode* const> targets) {
  std::vector<Counted<AbsoluteXPath>> groups;
  std::unordered_map<AbsoluteXPath, std::size_t> index;
  for (const DomNode* t : targets) {
    if (!t) continue;
    AbsoluteXPath xp = derive_absolute_xpath(*t);
    auto [it, inserted] = index.emplace(xp, groups.size());
    if (inserted) groups.push_back({std::move(xp), 0});
    ++groups[it->second].count;
  }
  std::stable_sort(groups.begin(), groups.end(), [](const auto& a, const auto& b) { return a.count > b.count; });
  return groups;
}

struct CompatibilityRow {
  std::string domain;
  std::string attribute;
  std::vector<Counted<AbsoluteXPath>> groups;

  std::vector<std::size_t> counts() const {
    std::vector<std::size_t> out;
    for (const auto& g : groups) out.push_back(g.count);
    return out;
  }
};

using CompatibilityTable = std::vector<CompatibilityRow>;

}  // namespace xtpath

#endif  // XTPATH_SHIFT_SIM_HPP_
