#ifndef XTPATH_TREE_PATH_HPP_
#define XTPATH_TREE_PATH_HPP_

#include <algorithm>
#include <cstddef>
#include <memory>
#include <span>
#include <string>
#include <vector>

#include "xtpath/dom.hpp"
#include "xtpath/error.hpp"
#include "xtpath/tree_match.hpp"

namespace xtpath {

/// Deepest node that is an ancestor-or-self of every target.
inline const DomNode& least_common_ancestor(std::span<const DomNode* const> targets, const Document& doc) {
  if (targets.empty()) throw InputError("least_common_ancestor needs at least one target");
  for (const DomNode* t : targets)
    if (!t || !doc.contains(*t)) throw InputError("least_common_ancestor: target does not belong to the document");
  const DomNode* candidate = targets.front();
  auto covers_all = [&](const DomNode* c) {
    return std::all_of(targets.begin(), targets.end(), [&](const DomNode* t) { return c->is_ancestor_or_self_of(*t); });
  };
  while (!covers_all(candidate)) candidate = candidate->parent;
  return *candidate;
}

/// Copy of a subtree reduced to what tree matching reads: tags, the four
/// matched attributes and the child structure.
inline MutableNode snapshot_subtree(const DomNode& n) {
  AttributeMap kept;
  for (std::string_view name : kMatchedAttributes)
    if (auto v = n.attr(name)) kept.emplace(std::string(name), std::string(*v));
  MutableNode m(n.tag, std::move(kept));
  m.children.reserve(n.children.size());
  for (const DomNode* c : n.children) m.add_child(snapshot_subtree(*c));
  return m;
}

/// Chain of nested subtrees from the labeled elements' LCA down to one target.
///
/// The trees live in a self-contained snapshot of the LCA subtree, so a
/// TreePath outlives the training document it was built from.
class TreePath {
 public:
  TreePath() = default;

  /// `chain[k]` is the child position of element k+1 within element k.
  TreePath(std::string attribute, MutableNode context_root, std::vector<std::size_t> chain,
           std::vector<std::size_t> source_ids = {})
      : attribute_(std::move(attribute)),
        context_(std::make_shared<const Document>(context_root)),
        chain_(std::move(chain)),
        source_ids_(std::move(source_ids)) {
    const DomNode* cur = &context_->root();
    elements_.push_back(cur);
    for (std::size_t pos : chain_) {
      if (pos >= cur->children.size()) throw InputError("tree path chain leaves the context tree");
      cur = cur->children[pos];
      elements_.push_back(cur);
    }
  }

  static TreePath from_serialized(std::string attribute, std::string_view context_xhtml,
                                  std::vector<std::size_t> chain) {
    return TreePath(std::move(attribute), parse_fragment(context_xhtml), std::move(chain));
  }

  const std::string& attribute() const noexcept { return attribute_; }
  std::size_t size() const noexcept { return elements_.size(); }
  bool empty() const noexcept { return elements_.empty(); }
  const DomNode& operator[](std::size_t i) const { return *elements_.at(i); }
  const std::vector<const DomNode*>& elements() const noexcept { return elements_; }
  const DomNode& lca() const { return *elements_.front(); }
  const DomNode& target() const { return *elements_.back(); }
  const std::vector<std::size_t>& chain() const noexcept { return chain_; }

  /// Node ids in the training document for τ0..τn; empty after deserialization.
  const std::vector<std::size_t>& source_ids() const noexcept { return source_ids_; }

  std::string context_xhtml() const { return context_ ? serialize(*context_) : std::string(); }

  /// Structural identity, used to deduplicate paths learned from different pages.
  std::string key() const {
    std::string k = context_xhtml();
    k += '|';
    for (std::size_t i = 0; i < chain_.size(); ++i) {
      if (i) k += ',';
      k += std::to_string(chain_[i]);
    }
    return k;
  }

 private:
  std::string attribute_;
  std::shared_ptr<const Document> context_;
  std::vector<std::size_t> chain_;
  std::vector<std::size_t> source_ids_;
  std::vector<const DomNode*> elements_;
};

inline TreePath build_tree_path(const Document& doc, std::span<const DomNode* const> labeled, const DomNode& target,
                                std::string attribute = {}) {
  if (std::find(labeled.begin(), labeled.end(), &target) == labeled.end())
    throw InputError("build_tree_path: target is not among the labeled elements");
  const DomNode& lca = least_common_ancestor(labeled, doc);

  // Walk up from the target; the LCA itself is appended once the loop stops.
  std::vector<const DomNode*> upward;
  const DomNode* e = &target;
  while (e != &lca) {
    if (!e) throw InputError("build_tree_path: target is not under the least common ancestor");
    upward.push_back(e);
    e = e->parent;
  }
  upward.push_back(&lca);
  std::reverse(upward.begin(), upward.end());

  std::vector<std::size_t> chain, ids;
  ids.push_back(lca.node_id);
  for (std::size_t k = 1; k < upward.size(); ++k) {
    const auto& siblings = upward[k - 1]->children;
    chain.push_back(static_cast<std::size_t>(std::find(siblings.begin(), siblings.end(), upward[k]) - siblings.begin()));
    ids.push_back(upward[k]->node_id);
  }
  return TreePath(std::move(attribute), snapshot_subtree(lca), std::move(chain), std::move(ids));
}

inline TreePath build_tree_path(const Document& doc, std::initializer_list<const DomNode*> labeled,
                                const DomNode& target, std::string attribute = {}) {
  std::vector<const DomNode*> v(labeled);
  return build_tree_path(doc, std::span<const DomNode* const>(v), target, std::move(attribute));
}

}  // namespace xtpath

#endif  // XTPATH_TREE_PATH_HPP_
