#ifndef XTPATH_STM_ORACLE_HPP_
#define XTPATH_STM_ORACLE_HPP_

// Exhaustive reference for html_tree_match. Exponential; verification use only.

#include <algorithm>
#include <cstddef>
#include <utility>
#include <vector>

#include "xtpath/error.hpp"
#include "xtpath/tree_match.hpp"

namespace xtpath {

inline constexpr std::size_t kOracleMaxNodes = 10;

using NodeMapping = std::vector<std::pair<const DomNode*, const DomNode*>>;

namespace oracle_detail {

/// Every set of child index pairs (i, j) that is strictly increasing in both
/// coordinates, the empty set included.
inline void noncrossing_pairings(std::size_t m, std::size_t n, std::size_t i0, std::size_t j0,
                                 std::vector<std::pair<std::size_t, std::size_t>>& cur,
                                 std::vector<std::vector<std::pair<std::size_t, std::size_t>>>& out) {
  out.push_back(cur);
  for (std::size_t i = i0; i < m; ++i)
    for (std::size_t j = j0; j < n; ++j) {
      cur.emplace_back(i, j);
      noncrossing_pairings(m, n, i + 1, j + 1, cur, out);
      cur.pop_back();
    }
}

/// All candidate mappings rooted at (a, b), built without any maximization.
inline std::vector<NodeMapping> enumerate(const DomNode& a, const DomNode& b) {
  if (a.tag != b.tag) return {};
  std::vector<std::vector<std::pair<std::size_t, std::size_t>>> pairings;
  std::vector<std::pair<std::size_t, std::size_t>> scratch;
  noncrossing_pairings(a.children.size(), b.children.size(), 0, 0, scratch, pairings);

  std::vector<NodeMapping> result;
  for (const auto& pairing : pairings) {
    std::vector<NodeMapping> partial{NodeMapping{{&a, &b}}};
    for (auto [i, j] : pairing) {
      auto sub = enumerate(*a.children[i], *b.children[j]);
      std::vector<NodeMapping> next;
      for (const auto& p : partial)
        for (const auto& s : sub) {
          NodeMapping merged = p;
          merged.insert(merged.end(), s.begin(), s.end());
          next.push_back(std::move(merged));
        }
      partial = std::move(next);
      if (partial.empty()) break;
    }
    for (auto& p : partial) result.push_back(std::move(p));
  }
  return result;
}

}  // namespace oracle_detail

/// Checks the mapping constraints directly: roots paired, labels equal,
/// one-to-one, parents paired with parents, sibling order preserved.
inline bool is_valid_mapping(const NodeMapping& mapping, const DomNode& a, const DomNode& b) {
  if (mapping.empty()) return false;
  bool has_roots = false;
  for (const auto& [u, v] : mapping) {
    if (u == &a && v == &b) has_roots = true;
    if (u->tag != v->tag) return false;
    if ((u == &a) != (v == &b)) return false;
    if (u != &a) {
      bool parents_paired = std::any_of(mapping.begin(), mapping.end(), [&](const auto& q) {
        return q.first == u->parent && q.second == v->parent;
      });
      if (!parents_paired) return false;
    }
  }
  if (!has_roots) return false;
  for (std::size_t x = 0; x < mapping.size(); ++x)
    for (std::size_t y = x + 1; y < mapping.size(); ++y) {
      const auto& [u1, v1] = mapping[x];
      const auto& [u2, v2] = mapping[y];
      if (u1 == u2 || v1 == v2) return false;
      if (u1->parent == u2->parent && v1->parent == v2->parent &&
          (u1->node_id < u2->node_id) != (v1->node_id < v2->node_id))
        return false;
    }
  return true;
}

inline MatchScore mapping_score(const NodeMapping& mapping) {
  std::int64_t units = 0;
  for (const auto& [u, v] : mapping)
    units += MatchScore::kUnitsPerNode + attribute_matches(*u, *v) * MatchScore::kUnitsPerAttribute;
  return MatchScore::from_units(units);
}

/// Maximum score over all valid mappings rooted at (a, b).
inline MatchScore stm_oracle(const DomNode& a, const DomNode& b) {
  if (a.subtree_size > kOracleMaxNodes || b.subtree_size > kOracleMaxNodes)
    throw SizeError("stm_oracle is limited to trees of at most " + std::to_string(kOracleMaxNodes) + " nodes");
  MatchScore best;
  for (const auto& mapping : oracle_detail::enumerate(a, b)) {
    if (!is_valid_mapping(mapping, a, b)) continue;
    best = std::max(best, mapping_score(mapping));
  }
  return best;
}

}  // namespace xtpath

#endif  // XTPATH_STM_ORACLE_HPP_
