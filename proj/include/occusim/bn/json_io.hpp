#pragma once

#include <filesystem>
#include <fstream>
#include <initializer_list>
#include <string>
#include <vector>

#include <json.hpp>

#include "occusim/bn/dbn.hpp"
#include "occusim/bn/network.hpp"
#include "occusim/common.hpp"

namespace occusim::bn {

namespace detail {

inline void check_fields(const nlohmann::json& object, std::initializer_list<const char*> allowed,
                         const std::string& context) {
  if (!object.is_object()) throw Error(ErrorCode::ConfigError, context + " must be a JSON object");
  for (const auto& [key, value] : object.items()) {
    (void)value;
    bool known = false;
    for (const char* name : allowed) {
      if (key == name) {
        known = true;
        break;
      }
    }
    if (!known) throw Error(ErrorCode::ConfigError, context + ": unknown field '" + key + "'");
  }
}

inline void require_field(const nlohmann::json& object, const char* name, const std::string& context) {
  if (!object.contains(name)) throw Error(ErrorCode::ConfigError, context + ": missing field '" + name + "'");
}

inline std::vector<VariableSpec> variables_from_json(const nlohmann::json& array) {
  if (!array.is_array()) throw Error(ErrorCode::ConfigError, "'variables' must be an array");
  std::vector<VariableSpec> out;
  for (const auto& item : array) {
    check_fields(item, {"name", "domain"}, "variable");
    require_field(item, "name", "variable");
    require_field(item, "domain", "variable");
    VariableSpec var;
    var.name = item.at("name").get<std::string>();
    for (const auto& label : item.at("domain")) var.domain.push_back(label.get<std::string>());
    out.push_back(std::move(var));
  }
  return out;
}

inline std::vector<Cpt> cpts_from_json(const nlohmann::json& array, const std::string& context) {
  if (!array.is_array()) throw Error(ErrorCode::ConfigError, "'" + context + "' must be an array");
  std::vector<Cpt> out;
  for (const auto& item : array) {
    check_fields(item, {"child", "parents", "rows"}, context + " entry");
    require_field(item, "child", context + " entry");
    require_field(item, "parents", context + " entry");
    require_field(item, "rows", context + " entry");
    Cpt cpt;
    cpt.child = item.at("child").get<std::string>();
    for (const auto& parent : item.at("parents")) cpt.parents.push_back(parent.get<std::string>());
    if (!item.at("rows").is_object()) {
      throw Error(ErrorCode::ConfigError, context + " entry for '" + cpt.child + "': 'rows' must be an object");
    }
    for (const auto& [key, row] : item.at("rows").items()) {
      std::vector<double> values;
      for (const auto& v : row) values.push_back(v.get<double>());
      cpt.rows[key] = std::move(values);
    }
    out.push_back(std::move(cpt));
  }
  return out;
}

inline nlohmann::json variables_to_json(const std::vector<VariableSpec>& variables) {
  nlohmann::json array = nlohmann::json::array();
  for (const auto& var : variables) array.push_back({{"name", var.name}, {"domain", var.domain}});
  return array;
}

inline nlohmann::json cpts_to_json(const std::vector<Cpt>& cpts) {
  nlohmann::json array = nlohmann::json::array();
  for (const auto& cpt : cpts) {
    nlohmann::json rows = nlohmann::json::object();
    for (const auto& [key, row] : cpt.rows) rows[key] = row;
    array.push_back({{"child", cpt.child}, {"parents", cpt.parents}, {"rows", rows}});
  }
  return array;
}

}  // namespace detail

// A document with "prior_cpts" is a two-slice model; without it, a static
// network whose cpts must not use "previous:" parents.
inline bool is_two_slice_json(const nlohmann::json& doc) { return doc.is_object() && doc.contains("prior_cpts"); }

inline NetworkSpec network_from_json(const nlohmann::json& doc) {
  detail::check_fields(doc, {"variables", "cpts"}, "network document");
  detail::require_field(doc, "variables", "network document");
  detail::require_field(doc, "cpts", "network document");
  NetworkSpec spec;
  spec.variables = detail::variables_from_json(doc.at("variables"));
  spec.cpts = detail::cpts_from_json(doc.at("cpts"), "cpts");
  for (const auto& cpt : spec.cpts) {
    for (const auto& parent : cpt.parents) {
      if (is_previous_ref(parent)) {
        throw Error(ErrorCode::ConfigError,
                    "static network cpt of '" + cpt.child + "' uses inter-slice parent '" + parent +
                        "'; two-slice documents need a 'prior_cpts' field");
      }
    }
  }
  return spec;
}

inline TwoSliceSpec two_slice_from_json(const nlohmann::json& doc) {
  detail::check_fields(doc, {"variables", "prior_cpts", "cpts"}, "two-slice document");
  detail::require_field(doc, "variables", "two-slice document");
  detail::require_field(doc, "prior_cpts", "two-slice document");
  detail::require_field(doc, "cpts", "two-slice document");
  TwoSliceSpec spec;
  spec.variables = detail::variables_from_json(doc.at("variables"));
  spec.prior = detail::cpts_from_json(doc.at("prior_cpts"), "prior_cpts");
  spec.transition = detail::cpts_from_json(doc.at("cpts"), "cpts");
  return spec;
}

inline nlohmann::json network_to_json(const NetworkSpec& spec) {
  return {{"variables", detail::variables_to_json(spec.variables)}, {"cpts", detail::cpts_to_json(spec.cpts)}};
}

inline nlohmann::json two_slice_to_json(const TwoSliceSpec& spec) {
  return {{"variables", detail::variables_to_json(spec.variables)},
          {"prior_cpts", detail::cpts_to_json(spec.prior)},
          {"cpts", detail::cpts_to_json(spec.transition)}};
}

inline nlohmann::json load_json_file(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw Error(ErrorCode::FileNotFound, "cannot open '" + path.string() + "'");
  nlohmann::json doc;
  try {
    in >> doc;
  } catch (const nlohmann::json::exception& e) {
    throw Error(ErrorCode::ConfigError, "'" + path.string() + "' is not valid JSON: " + e.what());
  }
  return doc;
}

inline NetworkSpec load_network(const std::filesystem::path& path) {
  return network_from_json(load_json_file(path));
}

inline TwoSliceSpec load_two_slice(const std::filesystem::path& path) {
  return two_slice_from_json(load_json_file(path));
}

inline void save_json_file(const std::filesystem::path& path, const nlohmann::json& doc) {
  std::ofstream out(path);
  if (!out) throw Error(ErrorCode::IoError, "cannot write '" + path.string() + "'");
  out << doc.dump(2) << '\n';
}

}  // namespace occusim::bn
