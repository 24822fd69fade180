#ifndef XTPATH_MODEL_IO_HPP_
#define XTPATH_MODEL_IO_HPP_

// Learned-model files: JSON, one record per (domain, attribute).
//
//   {"format": "xtpath-model", "version": 1, "records": [
//     {"domain": "...", "attribute": "...",
//      "xpaths":     [{"xpath": "/html/...", "count": 3}, ...],
//      "tree_paths": [{"context": "<div>...</div>", "chain": [1, 0], "count": 3}, ...]}]}

#include <span>
#include <string>
#include <vector>

#include <nlohmann/json.hpp>

#include "xtpath/error.hpp"
#include "xtpath/model.hpp"

namespace xtpath {

inline nlohmann::json model_to_json(std::span<const AttributeModel> models) {
  nlohmann::json records = nlohmann::json::array();
  for (const auto& m : models) {
    nlohmann::json xps = nlohmann::json::array();
    for (const auto& x : m.xpaths) xps.push_back({{"xpath", x.value.str()}, {"count", x.count}});
    nlohmann::json tps = nlohmann::json::array();
    for (const auto& t : m.tree_paths)
      tps.push_back({{"context", t.value.context_xhtml()}, {"chain", t.value.chain()}, {"count", t.count}});
    records.push_back({{"domain", m.domain}, {"attribute", m.attribute}, {"xpaths", xps}, {"tree_paths", tps}});
  }
  return {{"format", "xtpath-model"}, {"version", 1}, {"records", records}};
}

inline std::vector<AttributeModel> model_from_json(const nlohmann::json& j) {
  try {
    if (j.at("format").get<std::string>() != "xtpath-model") throw InputError("not an xtpath model file");
    if (j.at("version").get<int>() != 1) throw InputError("unsupported model version");
    std::vector<AttributeModel> out;
    for (const auto& r : j.at("records")) {
      AttributeModel m;
      m.domain = r.at("domain").get<std::string>();
      m.attribute = r.at("attribute").get<std::string>();
      for (const auto& x : r.at("xpaths"))
        m.xpaths.push_back({parse_xpath(x.at("xpath").get<std::string>()), x.at("count").get<std::size_t>()});
      for (const auto& t : r.at("tree_paths"))
        m.tree_paths.push_back({TreePath::from_serialized(m.attribute, t.at("context").get<std::string>(),
                                                          t.at("chain").get<std::vector<std::size_t>>()),
                                t.at("count").get<std::size_t>()});
      out.push_back(std::move(m));
    }
    return out;
  } catch (const nlohmann::json::exception& e) {
    throw InputError(std::string("malformed model file: ") + e.what());
  }
}

inline std::string model_to_string(std::span<const AttributeModel> models) { return model_to_json(models).dump(2) + "\n"; }

inline std::vector<AttributeModel> model_from_string(std::string_view text) {
  nlohmann::json j;
  try {
    j = nlohmann::json::parse(text);
  } catch (const nlohmann::json::exception& e) {
    throw InputError(std::string("model file is not valid JSON: ") + e.what());
  }
  return model_from_json(j);
}

}  // namespace xtpath

#endif  // XTPATH_MODEL_IO_HPP_
