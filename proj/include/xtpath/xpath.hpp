#ifndef XTPATH_XPATH_HPP_
#define XTPATH_XPATH_HPP_

#include <cctype>
#include <cstddef>
#include <functional>
#include <optional>
#include <ostream>
#include <string>
#include <string_view>
#include <vector>

#include "xtpath/error.hpp"

namespace xtpath {

/// One location step of a root-anchored path: a tag name and an optional
/// 1-based position among same-tag siblings.
struct XPathStep {
  std::string tag;
  std::optional<std::size_t> index;

  /// A missing index selects the first same-tag child, so it is equivalent to [1].
  std::size_t effective_index() const noexcept { return index.value_or(1); }

  friend bool operator==(const XPathStep& a, const XPathStep& b) noexcept {
    return a.tag == b.tag && a.effective_index() == b.effective_index();
  }
};

/// Restricted absolute XPath: `("/" tag ("[" int "]")?)+`.
///
/// Equality treats "/div" and "/div[1]" as the same path because both select
/// the first same-tag child on every document.
class AbsoluteXPath {
 public:
  AbsoluteXPath() = default;
  explicit AbsoluteXPath(std::vector<XPathStep> steps) : steps_(std::move(steps)) {
    if (steps_.empty()) throw SyntaxError("xpath must have at least one step");
    for (const auto& s : steps_) {
      if (s.tag.empty()) throw SyntaxError("xpath step with empty tag");
      if (s.index && *s.index == 0) throw SyntaxError("xpath indices are 1-based");
    }
  }

  const std::vector<XPathStep>& steps() const noexcept { return steps_; }
  std::size_t size() const noexcept { return steps_.size(); }
  bool empty() const noexcept { return steps_.empty(); }
  const XPathStep& operator[](std::size_t i) const { return steps_[i]; }

  std::string str() const {
    std::string out;
    for (const auto& s : steps_) {
      out += '/';
      out += s.tag;
      if (s.index) {
        out += '[';
        out += std::to_string(*s.index);
        out += ']';
      }
    }
    return out;
  }

  friend bool operator==(const AbsoluteXPath& a, const AbsoluteXPath& b) noexcept {
    return a.steps_ == b.steps_;
  }

  friend std::ostream& operator<<(std::ostream& os, const AbsoluteXPath& p) { return os << p.str(); }

 private:
  std::vector<XPathStep> steps_;
};

namespace detail {

inline bool is_name_char(char c) noexcept {
  return std::isalnum(static_cast<unsigned char>(c)) || c == '-' || c == '_' || c == ':' || c == '.';
}

inline std::string to_lower(std::string_view s) {
  std::string out(s);
  for (auto& c : out) c = static_cast<char>(std::tolower(static_cast<unsigned char>(c)));
  return out;
}

}  // namespace detail

inline AbsoluteXPath parse_xpath(std::string_view text) {
  std::vector<XPathStep> steps;
  std::size_t i = 0;
  auto fail = [&](const std::string& why) -> SyntaxError {
    return SyntaxError("invalid xpath '" + std::string(text) + "' at offset " + std::to_string(i) + ": " + why);
  };
  if (text.empty()) throw fail("empty path");
  while (i < text.size()) {
    if (text[i] != '/') throw fail("expected '/'");
    ++i;
    if (i < text.size() && text[i] == '/') throw fail("descendant axis '//' is not supported");
    std::size_t start = i;
    while (i < text.size() && detail::is_name_char(text[i])) ++i;
    if (i == start || !(std::isalpha(static_cast<unsigned char>(text[start])) || text[start] == '_')) {
      if (start < text.size() && (text[start] == '*' || text[start] == '@' || text[start] == '.'))
        throw fail("wildcards, attributes and relative steps are not supported");
      throw fail("expected a tag name");
    }
    XPathStep step{detail::to_lower(text.substr(start, i - start)), std::nullopt};
    if (i < text.size() && text[i] == '[') {
      ++i;
      std::size_t digits = i;
      std::size_t value = 0;
      while (i < text.size() && std::isdigit(static_cast<unsigned char>(text[i]))) {
        value = value * 10 + static_cast<std::size_t>(text[i] - '0');
        ++i;
      }
      if (i == digits) throw fail("only positional integer predicates are supported");
      if (i >= text.size() || text[i] != ']') throw fail("expected ']'");
      if (value == 0) throw fail("indices are 1-based");
      ++i;
      step.index = value;
    }
    steps.push_back(std::move(step));
  }
  return AbsoluteXPath(std::move(steps));
}

}  // namespace xtpath

template <>
struct std::hash<xtpath::AbsoluteXPath> {
  std::size_t operator()(const xtpath::AbsoluteXPath& p) const noexcept {
    std::size_t h = 0;
    for (const auto& s : p.steps()) {
      h = h * 1000003u ^ std::hash<std::string>{}(s.tag);
      h = h * 1000003u ^ s.effective_index();
    }
    return h;
  }
};

#endif  // XTPATH_XPATH_HPP_
