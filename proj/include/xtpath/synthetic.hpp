#ifndef XTPATH_SYNTHETIC_HPP_
#define XTPATH_SYNTHETIC_HPP_

// Seeded generator of template-driven product-style pages with ground truth,
// and shift injection that keeps the labels attached to the right nodes.

#include <cstdint>
#include <map>
#include <memory>
#include <string>
#include <utility>
#include <vector>

#include "xtpath/corpus.hpp"
#include "xtpath/dom.hpp"
#include "xtpath/random.hpp"
#include "xtpath/shift_sim.hpp"

namespace xtpath {

inline constexpr const char* kLabelMarker = "data-xtpath-label";

struct SyntheticOptions {
  std::vector<std::string> verticals{"books", "autos", "jobs"};
  std::size_t domains_per_vertical = 2;
  std::size_t pages_per_domain = 40;
  /// More than one template per domain produces several compatible XPaths per attribute.
  std::size_t templates_per_domain = 1;
  /// Fraction of pages that receive `shifts_per_page` random shifts near a label.
  double shift_rate = 0.0;
  std::size_t shifts_per_page = 1;
  /// Probability that a non-leading attribute is missing from a page.
  double missing_attribute_rate = 0.0;
  std::uint64_t seed = 1;
};

namespace synth_detail {

inline const std::vector<std::string>& attributes_for(const std::string& vertical) {
  static const std::map<std::string, std::vector<std::string>> table{
      {"autos", {"model", "price", "engine", "mileage"}},
      {"books", {"title", "author", "price", "isbn"}},
      {"cameras", {"model", "brand", "price"}},
      {"jobs", {"title", "company", "location", "salary"}},
      {"movies", {"title", "director", "genre", "runtime"}},
      {"nbaplayers", {"name", "team", "height", "position"}},
      {"restaurants", {"name", "address", "phone", "cuisine"}},
      {"universities", {"name", "location", "tuition", "type"}},
  };
  static const std::vector<std::string> fallback{"name", "price", "category"};
  auto it = table.find(vertical);
  return it == table.end() ? fallback : it->second;
}

inline const std::vector<std::string>& words() {
  static const std::vector<std::string> w{
      "amber",  "birch",  "cobalt", "delta",  "ember",  "fjord",  "garnet", "harbor", "indigo", "juniper",
      "kestrel", "lumen", "maple",  "nectar", "onyx",   "pepper", "quartz", "raven",  "sierra", "tundra",
      "umber",  "violet", "willow", "xenon",  "yarrow", "zephyr"};
  return w;
}

struct DomainStyle {
  std::size_t wrap_depth = 1;
  std::size_t nav_items = 4;
  bool rows_as_list = false;
  std::string class_prefix;
  bool header_search = false;
};

inline DomainStyle make_style(Rng& rng) {
  static const std::vector<std::string> prefixes{"", "pd-", "item-", "x-"};
  DomainStyle s;
  s.wrap_depth = 1 + rng.uniform(3);
  s.nav_items = 3 + rng.uniform(4);
  s.rows_as_list = rng.chance(0.5);
  s.class_prefix = rng.pick(prefixes);
  s.header_search = rng.chance(0.5);
  return s;
}

inline MutableNode text_element(std::string tag, std::string text, AttributeMap attrs = {}) {
  MutableNode n(std::move(tag), std::move(attrs));
  n.text.front() = std::move(text);
  return n;
}

inline MutableNode marked(MutableNode n, const std::string& attribute) {
  n.attrs[kLabelMarker] = attribute;
  return n;
}

inline MutableNode build_page(const DomainStyle& style, std::size_t tmpl, const std::string& domain,
                              const std::vector<std::pair<std::string, std::string>>& values, Rng& rng) {
  const std::string& p = style.class_prefix;
  MutableNode html("html");
  MutableNode& head = html.add_child(MutableNode("head"));
  head.add_child(text_element("title", domain));
  MutableNode& body = html.add_child(MutableNode("body"));

  MutableNode& header = body.add_child(MutableNode("div", {{"id", "header"}}));
  MutableNode& nav = header.add_child(MutableNode("ul", {{"class", "nav"}}));
  for (std::size_t i = 0; i < style.nav_items; ++i) nav.add_child(MutableNode("li")).add_child(text_element("a", rng.pick(words())));
  if (style.header_search) header.add_child(MutableNode("form", {{"id", "search"}})).add_child(MutableNode("input", {{"name", "q"}}));

  MutableNode* wrap = &body;
  for (std::size_t i = 0; i < style.wrap_depth; ++i) wrap = &wrap->add_child(MutableNode("div", {{"class", p + "wrap"}}));

  MutableNode& sidebar = wrap->add_child(MutableNode("div", {{"class", p + "sidebar"}}));
  MutableNode& links = sidebar.add_child(MutableNode("ul"));
  for (std::size_t i = 0, n = rng.uniform(6); i < n; ++i) links.add_child(MutableNode("li")).add_child(text_element("a", rng.pick(words())));

  if (tmpl == 1) {
    MutableNode& promo = wrap->add_child(MutableNode("div", {{"class", p + "promo"}}));
    promo.add_child(MutableNode("div")).add_child(text_element("span", "Limited offer"));
  }

  MutableNode& content = wrap->add_child(MutableNode("div", {{"class", p + "content"}}));
  MutableNode* info_parent = &content;
  if (tmpl == 2) info_parent = &content.add_child(MutableNode("div", {{"class", p + "panel"}}));

  const auto& [lead_attr, lead_value] = values.front();
  info_parent->add_child(marked(text_element("h1", lead_value, {{"class", p + lead_attr}}), lead_attr));

  MutableNode& info = info_parent->add_child(MutableNode(style.rows_as_list ? "ul" : "div", {{"class", p + "info"}}));
  for (std::size_t i = 1; i < values.size(); ++i) {
    const auto& [attr, value] = values[i];
    MutableNode& row = info.add_child(MutableNode(style.rows_as_list ? "li" : "div", {{"class", p + "row"}}));
    row.add_child(text_element("span", attr + ":", {{"class", p + "label"}}));
    row.add_child(marked(text_element("span", value, {{"class", p + attr}}), attr));
  }

  MutableNode& desc = content.add_child(MutableNode("div", {{"class", p + "desc"}}));
  for (std::size_t i = 0, n = 1 + rng.uniform(3); i < n; ++i)
    desc.add_child(text_element("p", rng.pick(words()) + " " + rng.pick(words()) + " " + rng.pick(words())));

  body.add_child(MutableNode("div", {{"id", "footer"}})).add_child(text_element("p", "(c) " + domain));
  return html;
}

/// Label XPaths read from marker attributes.
inline std::map<std::string, AbsoluteXPath> marked_labels(const Document& doc) {
  std::map<std::string, AbsoluteXPath> out;
  for (const DomNode* n : doc.nodes())
    if (auto m = n->attr(kLabelMarker)) out.emplace(std::string(*m), derive_absolute_xpath(*n));
  return out;
}

inline void strip_attribute(MutableNode& n, const std::string& name) {
  n.attrs.erase(name);
  for (auto& c : n.children) strip_attribute(c, name);
}

inline Document without_attribute(const Document& doc, const std::string& name) {
  MutableNode m = doc.to_mutable();
  strip_attribute(m, name);
  return Document(m, doc.source_uri());
}

inline std::vector<const DomNode*> marked_nodes(const Document& doc) {
  std::vector<const DomNode*> out;
  for (const DomNode* n : doc.nodes())
    if (n->attr(kLabelMarker)) out.push_back(n);
  return out;
}

}  // namespace synth_detail

/// Applies `count` shifts on root-to-label paths and returns the shifted page
/// with its label XPaths updated. Ground-truth values are unchanged.
inline Page inject_shifts(const Page& page, Rng& rng, std::size_t count) {
  // Labeled nodes carry a marker attribute so they can be found after the edits.
  MutableNode tagged = page.doc->to_mutable();
  for (const auto& [attr, node] : resolve_labels(page)) {
    if (!node) continue;
    std::vector<std::size_t> path = detail::child_positions(*node);
    detail::walk(tagged, path).attrs[kLabelMarker] = attr;
  }
  Document marked(tagged);
  for (std::size_t i = 0; i < count; ++i) {
    auto targets = synth_detail::marked_nodes(marked);
    if (targets.empty()) break;
    ShiftEdit e = shift_near(targets, rng);
    if (e.subtree) synth_detail::strip_attribute(*e.subtree, kLabelMarker);
    marked = apply_shift(marked, e);
  }
  Page out{page.id, nullptr, page.truth};
  for (auto& [attr, gt] : out.truth) gt.label_xpath.reset();
  for (auto& [attr, xp] : synth_detail::marked_labels(marked))
    if (auto it = out.truth.find(attr); it != out.truth.end()) it->second.label_xpath = xp;
  out.doc = std::make_shared<const Document>(synth_detail::without_attribute(marked, kLabelMarker));
  return out;
}

inline DomainData generate_domain(const std::string& vertical, const std::string& name, const SyntheticOptions& opt,
                                  Rng& rng) {
  const auto style = synth_detail::make_style(rng);
  const auto& attrs = synth_detail::attributes_for(vertical);
  DomainData d{vertical, name, {}};
  for (std::size_t i = 0; i < opt.pages_per_domain; ++i) {
    std::vector<std::pair<std::string, std::string>> values;
    for (std::size_t a = 0; a < attrs.size(); ++a) {
      if (a > 0 && rng.chance(opt.missing_attribute_rate)) continue;
      std::string v = rng.pick(synth_detail::words()) + " " + rng.pick(synth_detail::words()) + " " +
                      std::to_string(1000 + i * attrs.size() + a);
      values.emplace_back(attrs[a], std::move(v));
    }
    std::size_t tmpl = 0;
    if (opt.templates_per_domain > 1 && rng.chance(0.4)) tmpl = 1 + rng.uniform(std::min<std::size_t>(opt.templates_per_domain, 3) - 1);
    Document tagged(synth_detail::build_page(style, tmpl, name, values, rng));

    Page page;
    page.id = "p" + std::to_string(1000 + i).substr(1);
    for (const auto& [attr, xp] : synth_detail::marked_labels(tagged)) {
      auto it = std::find_if(values.begin(), values.end(), [&](const auto& kv) { return kv.first == attr; });
      page.truth[attr] = GroundTruth{it->second, xp};
    }
    page.doc = std::make_shared<const Document>(synth_detail::without_attribute(tagged, kLabelMarker));
    if (opt.shift_rate > 0 && rng.chance(opt.shift_rate)) page = inject_shifts(page, rng, opt.shifts_per_page);
    d.pages.push_back(std::move(page));
  }
  return d;
}

inline Corpus generate_corpus(const SyntheticOptions& opt) {
  Rng rng(opt.seed);
  Corpus c;
  for (const auto& v : opt.verticals)
    for (std::size_t k = 0; k < opt.domains_per_vertical; ++k) {
      Rng domain_rng = rng.fork(c.domains.size() + 1);
      c.domains.push_back(generate_domain(v, v + "-site" + std::to_string(k + 1), opt, domain_rng));
    }
  return c;
}

}  // namespace xtpath

#endif  // XTPATH_SYNTHETIC_HPP_
