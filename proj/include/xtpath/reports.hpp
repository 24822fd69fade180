#ifndef XTPATH_REPORTS_HPP_
#define XTPATH_REPORTS_HPP_

// CSV report bodies. Headers are fixed; numbers use 3 (entropy, metrics) or
// 6 (trendline) decimals.

#include <map>
#include <span>
#include <string>
#include <vector>

#include "xtpath/entropy.hpp"
#include "xtpath/eval.hpp"
#include "xtpath/io.hpp"
#include "xtpath/shift_sim.hpp"

namespace xtpath {

inline std::string curves_csv(std::span<const CurveRow> rows) {
  std::string out = "method,fraction,precision,recall,f1,stderr\n";
  for (const auto& r : rows)
    out += csv_line({std::string(to_string(r.method)), fixed(r.fraction, 2), fixed(r.aggregate.mean.precision),
                     fixed(r.aggregate.mean.recall), fixed(r.aggregate.mean.f1), fixed(r.aggregate.stderr_f1)});
  return out;
}

inline std::string per_vertical_csv(std::span<const VerticalRow> rows) {
  std::string out = "vertical,method,f1\n";
  for (const auto& r : rows) out += csv_line({r.vertical, std::string(to_string(r.method)), fixed(r.mean_f1)});
  return out;
}

inline std::string entropy_by_attribute_csv(const CompatibilityTable& table) {
  std::string out = "domain,attribute,unique_xpaths,pages,entropy\n";
  for (const auto& a : attribute_entropies(table))
    out += csv_line({a.domain, a.attribute, std::to_string(a.unique_xpaths), std::to_string(a.pages), fixed(a.entropy)});
  return out;
}

inline std::string entropy_by_domain_csv(const CompatibilityTable& table) {
  std::string out = "domain,entropy\n";
  for (const auto& d : domain_entropies(table)) out += csv_line({d.domain, fixed(d.entropy)});
  return out;
}

inline std::string entropy_vs_f1_csv(const EntropyF1Report& report) {
  std::string out = "domain,entropy,f1_xpath,f1_treepath,f1_xtpath\n";
  for (const auto& r : report.rows)
    out += csv_line({r.domain, fixed(r.entropy), fixed(r.f1.xpath), fixed(r.f1.treepath), fixed(r.f1.xtpath)});
  return out;
}

/// Absent fits leave slope and intercept empty.
inline std::string trendlines_csv(const EntropyF1Report& report) {
  std::string out = "method,slope,intercept\n";
  auto row = [&](const char* name, const std::optional<Trendline>& t) {
    out += csv_line({name, t ? fixed(t->slope, 6) : "", t ? fixed(t->intercept, 6) : ""});
  };
  row("xpath", report.xpath_trend);
  row("treepath", report.treepath_trend);
  row("xtpath", report.xtpath_trend);
  return out;
}

inline std::string compatibility_csv(const CompatibilityTable& table) {
  std::string out = "domain,attribute,xpath,count\n";
  for (const auto& row : table)
    for (const auto& g : row.groups) out += csv_line({row.domain, row.attribute, g.value.str(), std::to_string(g.count)});
  return out;
}

/// Reads `domain,attribute,xpath,count` rows (the format compatibility_csv writes).
inline CompatibilityTable parse_compatibility_csv(std::string_view text) {
  CompatibilityTable table;
  std::map<std::pair<std::string, std::string>, std::size_t> index;
  auto rows = parse_csv(text);
  for (std::size_t i = 0; i < rows.size(); ++i) {
    const auto& r = rows[i];
    if (i == 0 && !r.empty() && r[0] == "domain") continue;
    if (r.size() < 4) throw InputError("counts file row " + std::to_string(i + 1) + " needs domain,attribute,xpath,count");
    std::size_t count = 0;
    try {
      count = static_cast<std::size_t>(std::stoull(r[3]));
    } catch (...) {
      throw InputError("counts file row " + std::to_string(i + 1) + ": bad count '" + r[3] + "'");
    }
    auto key = std::make_pair(r[0], r[1]);
    auto [it, inserted] = index.emplace(key, table.size());
    if (inserted) table.push_back({r[0], r[1], {}});
    table[it->second].groups.push_back({parse_xpath(r[2]), count});
  }
  return table;
}

}  // namespace xtpath

#endif  // XTPATH_REPORTS_HPP_
