#ifndef XTPATH_RECURSIVE_SEARCH_HPP_
#define XTPATH_RECURSIVE_SEARCH_HPP_

#include <algorithm>
#include <cstddef>
#include <optional>
#include <ostream>
#include <string>
#include <string_view>
#include <vector>

#include "xtpath/dom.hpp"
#include "xtpath/model.hpp"
#include "xtpath/tree_match.hpp"
#include "xtpath/tree_path.hpp"
#include "xtpath/xpath_engine.hpp"

namespace xtpath {

enum class Method { xpath, treepath, xtpath };

/// Which stage produced a Found result.
enum class Route { xpath, treepath };

inline std::string_view to_string(Method m) {
  switch (m) {
    case Method::xpath: return "xpath";
    case Method::treepath: return "treepath";
    case Method::xtpath: return "xtpath";
  }
  return "?";
}

inline std::string_view to_string(Route r) { return r == Route::xpath ? "xpath" : "treepath"; }

inline std::optional<Method> parse_method(std::string_view s) {
  if (s == "xpath") return Method::xpath;
  if (s == "treepath") return Method::treepath;
  if (s == "xtpath") return Method::xtpath;
  return std::nullopt;
}

struct TraceCandidate {
  const DomNode* node = nullptr;
  MatchScore score;
};

struct TraceStep {
  std::size_t step = 0;
  std::vector<TraceCandidate> candidates;  // document order
  const DomNode* chosen = nullptr;         // null when every score was 0
};

struct SearchTrace {
  std::vector<TraceStep> steps;

  /// Chosen-node score per step, in order.
  std::vector<MatchScore> chosen_scores() const {
    std::vector<MatchScore> out;
    for (const auto& s : steps)
      for (const auto& c : s.candidates)
        if (c.node == s.chosen && s.chosen) out.push_back(c.score);
    return out;
  }

  /// One `step<i> <score> <xpath>` line per candidate, best first within a step.
  void dump(std::ostream& os) const {
    for (const auto& s : steps) {
      std::vector<TraceCandidate> sorted = s.candidates;
      std::stable_sort(sorted.begin(), sorted.end(), [](const TraceCandidate& a, const TraceCandidate& b) {
        if (a.score != b.score) return a.score > b.score;
        return a.node->depth < b.node->depth;
      });
      for (const auto& c : sorted)
        os << "step" << s.step << ' ' << c.score << ' ' << derive_absolute_xpath(*c.node) << '\n';
    }
  }
};

struct ExtractionResult {
  const DomNode* node = nullptr;
  std::string text;
  Route route = Route::xpath;
  std::optional<SearchTrace> trace;

  bool found() const noexcept { return node != nullptr; }

  static ExtractionResult found_at(const DomNode& n, Route r) { return {&n, node_text(n), r, std::nullopt}; }
};

/// Locates each tree-path element in turn at its most similar node: the first
/// over the whole document, later ones among proper descendants of the
/// previous choice. Ties go to the shallower node, then document order.
inline ExtractionResult recursive_tree_match(const TreePath& tau, const Document& doc, bool collect_trace = false) {
  ExtractionResult result;
  if (collect_trace) result.trace.emplace();
  if (tau.empty() || doc.empty()) return result;

  std::size_t begin = 0;
  std::size_t end = doc.size();
  const DomNode* focus = nullptr;
  for (std::size_t i = 0; i < tau.size(); ++i) {
    const DomNode& tree = tau[i];
    const DomNode* best = nullptr;
    MatchScore best_score;
    TraceStep* step = nullptr;
    if (result.trace) {
      result.trace->steps.push_back({i, {}, nullptr});
      step = &result.trace->steps.back();
      step->candidates.reserve(end - begin);
    }
    for (std::size_t id = begin; id < end; ++id) {
      const DomNode& e = doc.node(id);
      MatchScore s = html_tree_match(tree, e);
      if (step) step->candidates.push_back({&e, s});
      if (s.is_zero()) continue;
      if (!best || s > best_score || (s == best_score && e.depth < best->depth)) {
        best = &e;
        best_score = s;
      }
    }
    if (step) step->chosen = best;
    if (!best) return result;  // not found
    focus = best;
    begin = focus->node_id + 1;
    end = focus->node_id + focus->subtree_size;
  }
  auto trace = std::move(result.trace);
  result = ExtractionResult::found_at(*focus, Route::treepath);
  result.trace = std::move(trace);
  return result;
}

/// Learned XPaths in frequency order; the first that resolves wins.
inline ExtractionResult xpath_extract(const AttributeModel& model, const Document& doc) {
  for (const auto& xp : model.xpaths)
    if (const DomNode* n = evaluate_xpath(xp.value, doc)) return ExtractionResult::found_at(*n, Route::xpath);
  return {};
}

/// Learned tree paths in frequency order; the first Found wins.
inline ExtractionResult treepath_extract(const AttributeModel& model, const Document& doc, bool collect_trace = false) {
  ExtractionResult last;
  for (const auto& tp : model.tree_paths) {
    ExtractionResult r = recursive_tree_match(tp.value, doc, collect_trace);
    if (r.found()) return r;
    last = std::move(r);
  }
  last.node = nullptr;
  return last;
}

/// XPaths first; tree-path recovery only when none of them resolves.
inline ExtractionResult xtpath_extract(const AttributeModel& model, const Document& doc, bool collect_trace = false) {
  ExtractionResult r = xpath_extract(model, doc);
  if (r.found()) return r;
  return treepath_extract(model, doc, collect_trace);
}

inline ExtractionResult extract(Method method, const AttributeModel& model, const Document& doc,
                                bool collect_trace = false) {
  switch (method) {
    case Method::xpath: return xpath_extract(model, doc);
    case Method::treepath: return treepath_extract(model, doc, collect_trace);
    case Method::xtpath: return xtpath_extract(model, doc, collect_trace);
  }
  return {};
}

}  // namespace xtpath

#endif  // XTPATH_RECURSIVE_SEARCH_HPP_
