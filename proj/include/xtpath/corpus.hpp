#ifndef XTPATH_CORPUS_HPP_
#define XTPATH_CORPUS_HPP_

#include <algorithm>
#include <filesystem>
#include <map>
#include <memory>
#include <optional>
#include <set>
#include <string>
#include <utility>
#include <vector>

#include "xtpath/dom.hpp"
#include "xtpath/error.hpp"
#include "xtpath/io.hpp"
#include "xtpath/shift_sim.hpp"
#include "xtpath/xpath_engine.hpp"

namespace xtpath {

struct GroundTruth {
  std::string expected;
  std::optional<AbsoluteXPath> label_xpath;
};

struct Page {
  std::string id;
  std::shared_ptr<const Document> doc;
  std::map<std::string, GroundTruth> truth;
};

struct DomainData {
  std::string vertical;
  std::string name;
  std::vector<Page> pages;

  /// Attribute names in first-appearance order.
  std::vector<std::string> attributes() const {
    std::vector<std::string> out;
    std::set<std::string> seen;
    for (const auto& p : pages)
      for (const auto& [a, gt] : p.truth)
        if (seen.insert(a).second) out.push_back(a);
    return out;
  }
};

struct Corpus {
  std::vector<DomainData> domains;

  std::size_t page_count() const {
    std::size_t n = 0;
    for (const auto& d : domains) n += d.pages.size();
    return n;
  }

  std::vector<std::string> verticals() const {
    std::vector<std::string> out;
    for (const auto& d : domains)
      if (std::find(out.begin(), out.end(), d.vertical) == out.end()) out.push_back(d.vertical);
    return out;
  }
};

/// The labeled node for an attribute: the label XPath when it resolves,
/// otherwise the deepest node whose text equals the expected value.
inline const DomNode* resolve_label(const Page& page, const std::string& attribute) {
  auto it = page.truth.find(attribute);
  if (it == page.truth.end() || !page.doc) return nullptr;
  const GroundTruth& gt = it->second;
  if (gt.label_xpath)
    if (const DomNode* n = evaluate_xpath(*gt.label_xpath, *page.doc)) return n;
  const std::string want = normalize_space(gt.expected);
  const DomNode* best = nullptr;
  for (const DomNode* n : page.doc->nodes())
    if ((!best || n->depth > best->depth) && node_text(*n) == want) best = n;
  return best;
}

inline std::vector<std::pair<std::string, const DomNode*>> resolve_labels(const Page& page) {
  std::vector<std::pair<std::string, const DomNode*>> out;
  for (const auto& [attr, gt] : page.truth) out.emplace_back(attr, resolve_label(page, attr));
  return out;
}

/// Compatible-XPath groups per (domain, attribute) over the labeled nodes.
inline CompatibilityTable compatibility_table(const Corpus& corpus) {
  CompatibilityTable table;
  for (const auto& d : corpus.domains) {
    for (const auto& attr : d.attributes()) {
      std::vector<const DomNode*> targets;
      for (const auto& p : d.pages)
        if (const DomNode* n = resolve_label(p, attr)) targets.push_back(n);
      table.push_back({d.name, attr, group_compatible_xpaths(targets)});
    }
  }
  return table;
}

// ---------------------------------------------------------------------------
// On-disk layout: <root>/<vertical>/<domain>/pages/<id>.html and
// <root>/<vertical>/<domain>/groundtruth.csv (page_id,attribute,expected_value[,label_xpath]).

inline std::vector<std::filesystem::path> sorted_entries(const std::filesystem::path& dir, bool directories) {
  std::vector<std::filesystem::path> out;
  if (!std::filesystem::is_directory(dir)) return out;
  for (const auto& e : std::filesystem::directory_iterator(dir))
    if (directories ? e.is_directory() : e.is_regular_file()) out.push_back(e.path());
  std::sort(out.begin(), out.end());
  return out;
}

inline DomainData load_domain(const std::filesystem::path& dir, const std::string& vertical) {
  DomainData d{vertical, dir.filename().string(), {}};
  std::map<std::string, std::map<std::string, GroundTruth>> truth;
  const auto gt_path = dir / "groundtruth.csv";
  if (std::filesystem::exists(gt_path)) {
    auto rows = parse_csv(read_file(gt_path));
    for (std::size_t i = 0; i < rows.size(); ++i) {
      const auto& r = rows[i];
      if (i == 0 && !r.empty() && r[0] == "page_id") continue;
      if (r.size() < 3) throw InputError(gt_path.string() + ": row " + std::to_string(i + 1) + " has fewer than 3 columns");
      if (normalize_space(r[2]).empty())
        throw InputError(gt_path.string() + ": empty expected value on row " + std::to_string(i + 1));
      GroundTruth gt{r[2], std::nullopt};
      if (r.size() > 3 && !r[3].empty()) gt.label_xpath = parse_xpath(r[3]);
      truth[r[0]][r[1]] = std::move(gt);
    }
  }
  for (const auto& file : sorted_entries(dir / "pages", false)) {
    if (file.extension() != ".html" && file.extension() != ".xhtml" && file.extension() != ".xml") continue;
    Page p;
    p.id = file.stem().string();
    try {
      p.doc = std::make_shared<const Document>(parse_document(read_file(file), file.string()));
    } catch (const ParseError& e) {
      throw InputError(file.string() + ": " + e.what());
    }
    if (auto it = truth.find(p.id); it != truth.end()) p.truth = it->second;
    d.pages.push_back(std::move(p));
  }
  return d;
}

inline Corpus load_corpus(const std::filesystem::path& root) {
  if (!std::filesystem::is_directory(root)) throw InputError("corpus directory not found: " + root.string());
  Corpus c;
  for (const auto& vdir : sorted_entries(root, true))
    for (const auto& ddir : sorted_entries(vdir, true)) {
      DomainData d = load_domain(ddir, vdir.filename().string());
      if (!d.pages.empty()) c.domains.push_back(std::move(d));
    }
  return c;
}

inline void save_corpus(const Corpus& corpus, const std::filesystem::path& root) {
  for (const auto& d : corpus.domains) {
    const auto dir = root / d.vertical / d.name;
    std::string gt = csv_line({"page_id", "attribute", "expected_value", "label_xpath"});
    for (const auto& p : d.pages) {
      write_file_atomic(dir / "pages" / (p.id + ".html"), serialize(*p.doc) + "\n");
      for (const auto& [attr, t] : p.truth)
        gt += csv_line({p.id, attr, t.expected, t.label_xpath ? t.label_xpath->str() : std::string()});
    }
    write_file_atomic(dir / "groundtruth.csv", gt);
  }
}

}  // namespace xtpath

#endif  // XTPATH_CORPUS_HPP_
