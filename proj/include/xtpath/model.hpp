#ifndef XTPATH_MODEL_HPP_
#define XTPATH_MODEL_HPP_

#include <algorithm>
#include <cstddef>
#include <map>
#include <optional>
#include <span>
#include <string>
#include <unordered_map>
#include <utility>
#include <vector>

#include "xtpath/dom.hpp"
#include "xtpath/tree_path.hpp"
#include "xtpath/xpath.hpp"

namespace xtpath {

template <class T>
struct Counted {
  T value;
  std::size_t count = 0;
};

/// Learned annotations for one (domain, attribute): every distinct training
/// XPath and tree path, most frequent first, ties in first-seen order.
struct AttributeModel {
  std::string domain;
  std::string attribute;
  std::vector<Counted<AbsoluteXPath>> xpaths;
  std::vector<Counted<TreePath>> tree_paths;

  bool empty() const noexcept { return xpaths.empty() && tree_paths.empty(); }
};

/// Accumulates training examples and produces frequency-ordered models.
class ModelBuilder {
 public:
  /// One training page: each labeled attribute and its node. The tree path for
  /// every attribute starts at the LCA of all labeled nodes of the page.
  void add_page(const std::string& domain, const Document& doc,
                const std::vector<std::pair<std::string, const DomNode*>>& labels) {
    std::vector<const DomNode*> labeled;
    for (const auto& [attr, node] : labels)
      if (node) labeled.push_back(node);
    if (labeled.empty()) return;
    for (const auto& [attr, node] : labels) {
      if (!node) continue;
      Entry& e = entry(domain, attr);
      AbsoluteXPath xp = derive_absolute_xpath(*node);
      std::string xp_key = xp.str();
      bump(e.xpaths, e.xpath_index, xp_key, std::move(xp));
      TreePath tp = build_tree_path(doc, labeled, *node, attr);
      std::string key = tp.key();
      bump(e.tree_paths, e.tree_path_index, key, std::move(tp));
    }
  }

  std::vector<AttributeModel> build() const {
    std::vector<AttributeModel> out;
    for (const auto& [key, e] : entries_) {
      AttributeModel m{key.first, key.second, e.xpaths, e.tree_paths};
      by_frequency(m.xpaths);
      by_frequency(m.tree_paths);
      out.push_back(std::move(m));
    }
    return out;
  }

 private:
  struct Entry {
    std::vector<Counted<AbsoluteXPath>> xpaths;
    std::unordered_map<std::string, std::size_t> xpath_index;
    std::vector<Counted<TreePath>> tree_paths;
    std::unordered_map<std::string, std::size_t> tree_path_index;
  };

  Entry& entry(const std::string& domain, const std::string& attribute) { return entries_[{domain, attribute}]; }

  template <class T>
  static void bump(std::vector<Counted<T>>& list, std::unordered_map<std::string, std::size_t>& index,
                   const std::string& key, T value) {
    auto [it, inserted] = index.emplace(key, list.size());
    if (inserted) list.push_back({std::move(value), 0});
    ++list[it->second].count;
  }

  template <class T>
  static void by_frequency(std::vector<Counted<T>>& list) {
    std::stable_sort(list.begin(), list.end(), [](const auto& a, const auto& b) { return a.count > b.count; });
  }

  std::map<std::pair<std::string, std::string>, Entry> entries_;
};

inline const AttributeModel* find_model(std::span<const AttributeModel> models, std::string_view domain,
                                        std::string_view attribute) {
  for (const auto& m : models)
    if (m.domain == domain && m.attribute == attribute) return &m;
  return nullptr;
}

}  // namespace xtpath

#endif  // XTPATH_MODEL_HPP_
