#ifndef XTPATH_TESTS_FIXTURES_HPP_
#define XTPATH_TESTS_FIXTURES_HPP_

// Product-page trees used across the suites, plus small helpers.

#include <stdexcept>
#include <string>
#include <string_view>

#include "xtpath/xtpath.hpp"

namespace fixtures {

// Name / Description / Stock block plus an Info link, no shift.
inline constexpr std::string_view kUnshifted =
    "<html><div><div><div><span>Name</span></div><div><div>Desc</div></div><div>Stock</div></div>"
    "<a>Info</a></div></html>";

// Same page with a div wrapped around the Name span.
inline constexpr std::string_view kVertical =
    "<html><div><div><div><div><span>Name</span></div></div><div><div>Desc</div></div><div>Stock</div></div>"
    "<a>Info</a></div></html>";

// The vertically shifted page with a "Sale!" block inserted before the
// top-level div, under html.
inline constexpr std::string_view kSaleSibling =
    "<html><div><div><span>Sale!</span></div></div>"
    "<div><div><div><div><span>Name</span></div></div><div><div>Desc</div></div><div>Stock</div></div>"
    "<a>Info</a></div></html>";

// Shifted listing page: "Sale!" block inside the top-level div, Name wrapped.
inline constexpr std::string_view kSaleListing = R"(<html><div>
    <div><div><span>Sale!</span></div></div>
    <div>
        <div><div><span>Name</span></div></div>
        <div><div>Desc</div></div>
        <div>Stock</div>
    </div>
    <a>Info</a>
</div></html>)";

// Search trace for Name on the listing page, tree path from the unshifted page.
inline constexpr std::string_view kListingTrace =
    "step0 7 /html/div\n"
    "step0 4 /html/div/div[2]\n"
    "step0 2 /html/div/div[1]\n"
    "step0 2 /html/div/div[2]/div[1]\n"
    "step0 2 /html/div/div[2]/div[2]\n"
    "step0 1 /html/div/div[1]/div\n"
    "step0 1 /html/div/div[2]/div[3]\n"
    "step0 1 /html/div/div[2]/div[1]/div\n"
    "step0 1 /html/div/div[2]/div[2]/div\n"
    "step0 0 /html\n"
    "step0 0 /html/div/a\n"
    "step0 0 /html/div/div[1]/div/span\n"
    "step0 0 /html/div/div[2]/div[1]/div/span\n"
    "step1 5 /html/div/div[2]\n"
    "step1 3 /html/div/div[1]\n"
    "step1 3 /html/div/div[2]/div[1]\n"
    "step1 2 /html/div/div[2]/div[2]\n"
    "step1 1 /html/div/div[1]/div\n"
    "step1 1 /html/div/div[2]/div[3]\n"
    "step1 1 /html/div/div[2]/div[1]/div\n"
    "step1 1 /html/div/div[2]/div[2]/div\n"
    "step1 0 /html/div/a\n"
    "step1 0 /html/div/div[1]/div/span\n"
    "step1 0 /html/div/div[2]/div[1]/div/span\n"
    "step2 2 /html/div/div[2]/div[1]/div\n"
    "step2 1 /html/div/div[2]/div[1]\n"
    "step2 1 /html/div/div[2]/div[2]\n"
    "step2 1 /html/div/div[2]/div[3]\n"
    "step2 1 /html/div/div[2]/div[2]/div\n"
    "step2 0 /html/div/div[2]/div[1]/div/span\n"
    "step3 1 /html/div/div[2]/div[1]/div/span\n";

inline constexpr std::string_view kSaleBlock = "<div><div><span>Sale!</span></div></div>";

inline const xtpath::DomNode& at(const xtpath::Document& doc, std::string_view xpath) {
  const xtpath::DomNode* n = xtpath::evaluate_xpath(xpath, doc);
  if (!n) throw std::runtime_error("fixture xpath does not resolve: " + std::string(xpath));
  return *n;
}

/// Tags, attributes, child structure and leaf text agree. Inter-element
/// whitespace is ignored.
inline bool same_structure(const xtpath::DomNode& a, const xtpath::DomNode& b) {
  if (a.tag != b.tag || a.attrs != b.attrs || a.children.size() != b.children.size()) return false;
  if (a.children.empty() && xtpath::node_text(a) != xtpath::node_text(b)) return false;
  for (std::size_t i = 0; i < a.children.size(); ++i)
    if (!same_structure(*a.children[i], *b.children[i])) return false;
  return true;
}

/// The tree path for Name learned from the unshifted page, with the labeled
/// set {Name, Description, Info}.
inline xtpath::TreePath name_tree_path(const xtpath::Document& unshifted) {
  const auto& name = at(unshifted, "/html/div/div/div[1]/span");
  const auto& desc = at(unshifted, "/html/div/div/div[2]/div");
  const auto& info = at(unshifted, "/html/div/a");
  return xtpath::build_tree_path(unshifted, {&name, &desc, &info}, name, "name");
}

inline xtpath::MatchScore score(double v) {
  return xtpath::MatchScore::from_units(static_cast<std::int64_t>(v * xtpath::MatchScore::kUnitsPerNode));
}

}  // namespace fixtures

#endif  // XTPATH_TESTS_FIXTURES_HPP_
