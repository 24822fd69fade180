#ifndef XTPATH_TREE_MATCH_HPP_
#define XTPATH_TREE_MATCH_HPP_

#include <algorithm>
#include <array>
#include <compare>
#include <cstdint>
#include <ostream>
#include <string>
#include <string_view>
#include <vector>

#include "xtpath/dom.hpp"

namespace xtpath {

/// Exact tree-similarity score stored in eighths. Each matched node is worth
/// 8 units and each matched attribute 1 unit (0.25 weighted by 0.5).
class MatchScore {
 public:
  static constexpr std::int64_t kUnitsPerNode = 8;
  static constexpr std::int64_t kUnitsPerAttribute = 1;

  constexpr MatchScore() = default;
  static constexpr MatchScore from_units(std::int64_t units) noexcept {
    MatchScore s;
    s.units_ = units;
    return s;
  }
  static constexpr MatchScore nodes(std::int64_t n) noexcept { return from_units(n * kUnitsPerNode); }

  constexpr std::int64_t units() const noexcept { return units_; }
  constexpr double value() const noexcept { return static_cast<double>(units_) / kUnitsPerNode; }
  constexpr std::int64_t integer_part() const noexcept { return units_ / kUnitsPerNode; }
  constexpr bool is_zero() const noexcept { return units_ == 0; }

  constexpr MatchScore operator+(MatchScore o) const noexcept { return from_units(units_ + o.units_); }
  constexpr auto operator<=>(const MatchScore&) const = default;

  /// "7", "2.125": shortest exact decimal.
  std::string str() const {
    std::string out = std::to_string(integer_part());
    std::int64_t frac = units_ % kUnitsPerNode;
    if (frac) {
      std::string digits = std::to_string(frac * 125);
      digits.insert(0, 3 - digits.size(), '0');
      while (!digits.empty() && digits.back() == '0') digits.pop_back();
      out += '.' + digits;
    }
    return out;
  }

  friend std::ostream& operator<<(std::ostream& os, MatchScore s) { return os << s.str(); }

 private:
  std::int64_t units_ = 0;
};

/// Attributes that earn a matching bonus.
inline constexpr std::array<std::string_view, 4> kMatchedAttributes{"class", "style", "id", "name"};

namespace detail {

inline std::string_view trim(std::string_view s) {
  while (!s.empty() && is_space(s.front())) s.remove_prefix(1);
  while (!s.empty() && is_space(s.back())) s.remove_suffix(1);
  return s;
}

}  // namespace detail

/// Number of matched attributes carried by both nodes with equal, non-empty
/// (trimmed) values.
inline int attribute_matches(const DomNode& a, const DomNode& b) {
  int matches = 0;
  for (std::string_view name : kMatchedAttributes) {
    auto va = a.attr(name);
    auto vb = b.attr(name);
    if (!va || !vb) continue;
    auto ta = detail::trim(*va);
    if (!ta.empty() && ta == detail::trim(*vb)) ++matches;
  }
  return matches;
}

/// Simple Tree Matching over ordered element trees, extended with an
/// attribute bonus. Zero iff the root tags differ.
inline MatchScore html_tree_match(const DomNode& a, const DomNode& b) {
  if (a.tag != b.tag) return {};
  const std::size_t m = a.children.size();
  const std::size_t n = b.children.size();
  std::int64_t best = 0;
  if (m && n) {
    // Rolling rows of the DP table M[i][j].
    std::vector<std::int64_t> prev(n + 1, 0), cur(n + 1, 0);
    for (std::size_t i = 1; i <= m; ++i) {
      cur[0] = 0;
      for (std::size_t j = 1; j <= n; ++j) {
        std::int64_t diag = prev[j - 1] + html_tree_match(*a.children[i - 1], *b.children[j - 1]).units();
        cur[j] = std::max({cur[j - 1], prev[j], diag});
      }
      std::swap(prev, cur);
    }
    best = prev[n];
  }
  return MatchScore::from_units(best + attribute_matches(a, b) * MatchScore::kUnitsPerAttribute +
                                MatchScore::kUnitsPerNode);
}

/// html_tree_match(t, t).
inline MatchScore self_score(const DomNode& t) { return html_tree_match(t, t); }

}  // namespace xtpath

#endif  // XTPATH_TREE_MATCH_HPP_
