#ifndef XTPATH_XPATH_ENGINE_HPP_
#define XTPATH_XPATH_ENGINE_HPP_

#include "xtpath/dom.hpp"
#include "xtpath/xpath.hpp"

namespace xtpath {

/// Resolves an absolute path against a document. Returns nullptr when any
/// step has no matching child, i.e. the path is incompatible with `doc`.
inline const DomNode* evaluate_xpath(const AbsoluteXPath& xpath, const Document& doc) {
  if (doc.empty() || xpath.empty()) return nullptr;
  const DomNode* cur = &doc.root();
  if (xpath[0].tag != cur->tag || xpath[0].effective_index() != 1) return nullptr;
  for (std::size_t i = 1; i < xpath.size(); ++i) {
    const XPathStep& step = xpath[i];
    const std::size_t wanted = step.effective_index();
    const DomNode* next = nullptr;
    std::size_t seen = 0;
    for (const DomNode* child : cur->children) {
      if (child->tag != step.tag) continue;
      if (++seen == wanted) {
        next = child;
        break;
      }
    }
    if (!next) return nullptr;
    cur = next;
  }
  return cur;
}

inline const DomNode* evaluate_xpath(std::string_view xpath, const Document& doc) {
  return evaluate_xpath(parse_xpath(xpath), doc);
}

}  // namespace xtpath

#endif  // XTPATH_XPATH_ENGINE_HPP_
