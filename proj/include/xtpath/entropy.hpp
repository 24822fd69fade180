#ifndef XTPATH_ENTROPY_HPP_
#define XTPATH_ENTROPY_HPP_

#include <cmath>
#include <cstddef>
#include <map>
#include <numeric>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "xtpath/error.hpp"
#include "xtpath/shift_sim.hpp"

namespace xtpath {

/// Shannon entropy (nats) of the compatible-XPath distribution of one attribute.
inline double attribute_entropy(std::span<const std::size_t> counts) {
  if (counts.empty()) throw InputError("attribute_entropy needs at least one count");
  double total = 0;
  for (std::size_t c : counts) {
    if (c == 0) throw InputError("attribute_entropy counts must be positive");
    total += static_cast<double>(c);
  }
  double h = 0;
  for (std::size_t c : counts) {
    double p = static_cast<double>(c) / total;
    h -= p * std::log(p);
  }
  return h == 0.0 ? 0.0 : h;  // no negative zero
}

inline double attribute_entropy(std::initializer_list<std::size_t> counts) {
  std::vector<std::size_t> v(counts);
  return attribute_entropy(std::span<const std::size_t>(v));
}

/// Mean of the attribute entropies of a domain.
inline double domain_entropy(std::span<const double> attribute_entropies) {
  if (attribute_entropies.empty()) throw InputError("domain_entropy needs at least one attribute");
  return std::accumulate(attribute_entropies.begin(), attribute_entropies.end(), 0.0) /
         static_cast<double>(attribute_entropies.size());
}

inline double domain_entropy(std::initializer_list<double> e) {
  std::vector<double> v(e);
  return domain_entropy(std::span<const double>(v));
}

struct AttributeEntropy {
  std::string domain;
  std::string attribute;
  std::size_t unique_xpaths = 0;
  std::size_t pages = 0;
  double entropy = 0;
};

struct DomainEntropy {
  std::string domain;
  double entropy = 0;
};

inline std::vector<AttributeEntropy> attribute_entropies(const CompatibilityTable& table) {
  std::vector<AttributeEntropy> out;
  for (const auto& row : table) {
    if (row.groups.empty()) continue;
    auto counts = row.counts();
    out.push_back({row.domain, row.attribute, counts.size(), std::accumulate(counts.begin(), counts.end(), std::size_t{0}),
                   attribute_entropy(counts)});
  }
  return out;
}

/// Domains in first-appearance order.
inline std::vector<DomainEntropy> domain_entropies(const CompatibilityTable& table) {
  std::vector<std::string> order;
  std::map<std::string, std::vector<double>> per_domain;
  for (const auto& a : attribute_entropies(table)) {
    if (!per_domain.count(a.domain)) order.push_back(a.domain);
    per_domain[a.domain].push_back(a.entropy);
  }
  std::vector<DomainEntropy> out;
  for (const auto& d : order) out.push_back({d, domain_entropy(per_domain[d])});
  return out;
}

struct Trendline {
  double slope = 0;
  double intercept = 0;
};

/// Ordinary least squares fit of y on x; absent with fewer than two points or
/// no spread in x.
inline std::optional<Trendline> fit_trendline(std::span<const double> x, std::span<const double> y) {
  const std::size_t n = std::min(x.size(), y.size());
  if (n < 2) return std::nullopt;
  double mx = 0, my = 0;
  for (std::size_t i = 0; i < n; ++i) {
    mx += x[i];
    my += y[i];
  }
  mx /= static_cast<double>(n);
  my /= static_cast<double>(n);
  double sxx = 0, sxy = 0;
  for (std::size_t i = 0; i < n; ++i) {
    sxx += (x[i] - mx) * (x[i] - mx);
    sxy += (x[i] - mx) * (y[i] - my);
  }
  if (sxx <= 1e-15) return std::nullopt;
  Trendline t{sxy / sxx, 0};
  t.intercept = my - t.slope * mx;
  return t;
}

struct MethodF1 {
  double xpath = 0;
  double treepath = 0;
  double xtpath = 0;
};

struct EntropyF1Row {
  std::string domain;
  double entropy = 0;
  MethodF1 f1;
};

struct EntropyF1Report {
  std::vector<EntropyF1Row> rows;
  std::optional<Trendline> xpath_trend;
  std::optional<Trendline> treepath_trend;
  std::optional<Trendline> xtpath_trend;
};

/// Joins domain entropy with per-method F1; domains missing from either
/// input are left out.
inline EntropyF1Report entropy_f1_report(const CompatibilityTable& table,
                                         const std::map<std::string, MethodF1>& per_domain_f1) {
  EntropyF1Report report;
  for (const auto& d : domain_entropies(table)) {
    auto it = per_domain_f1.find(d.domain);
    if (it == per_domain_f1.end()) continue;
    report.rows.push_back({d.domain, d.entropy, it->second});
  }
  std::vector<double> x, fx, ft, fxt;
  for (const auto& r : report.rows) {
    x.push_back(r.entropy);
    fx.push_back(r.f1.xpath);
    ft.push_back(r.f1.treepath);
    fxt.push_back(r.f1.xtpath);
  }
  report.xpath_trend = fit_trendline(x, fx);
  report.treepath_trend = fit_trendline(x, ft);
  report.xtpath_trend = fit_trendline(x, fxt);
  return report;
}

}  // namespace xtpath

#endif  // XTPATH_ENTROPY_HPP_
