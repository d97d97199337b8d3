#pragma once

#include <fstream>
#include <string>
#include <utility>
#include <vector>

#include "CLI11.hpp"
#include "dirnet/error.hpp"
#include "json.hpp"

namespace dirnet::cli {

using ConfigEntries = std::vector<std::pair<std::string, std::vector<std::string>>>;

// Flattens a JSON object into (option name, values). Keys may use '_' or '-';
// nested objects join with '-' ({"quadrature": {"inner_points": 16}} becomes
// quadrature-inner-points). Arrays feed multi-value options.
inline void flatten_config(const nlohmann::json& obj, const std::string& prefix,
                           ConfigEntries& out) {
  for (const auto& [key, value] : obj.items()) {
    std::string name = prefix.empty() ? key : prefix + "-" + key;
    for (char& c : name) {
      if (c == '_') c = '-';
    }
    if (value.is_object()) {
      flatten_config(value, name, out);
      continue;
    }
    std::vector<std::string> inputs;
    const auto scalar = [&](const nlohmann::json& v) {
      if (v.is_string()) return v.get<std::string>();
      if (v.is_boolean()) return std::string(v.get<bool>() ? "true" : "false");
      if (v.is_number()) return v.dump();
      throw ConfigError("config key '" + name + "' must hold scalars or an array of scalars");
    };
    if (value.is_array()) {
      for (const auto& v : value) inputs.push_back(scalar(v));
    } else {
      inputs.push_back(scalar(value));
    }
    out.emplace_back(std::move(name), std::move(inputs));
  }
}

inline ConfigEntries read_config(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw IoError("cannot open config file " + path);
  nlohmann::json j;
  try {
    j = nlohmann::json::parse(in);
  } catch (const nlohmann::json::exception& e) {
    throw ConfigError("config file " + path + " is not valid JSON: " + e.what());
  }
  if (!j.is_object()) throw ConfigError("config file " + path + " must hold a JSON object");
  ConfigEntries entries;
  flatten_config(j, "", entries);
  return entries;
}

// Fills options of cmd that were not given on the command line. Unknown keys
// and the config/output keys themselves are rejected.
inline void apply_config(CLI::App* cmd, const ConfigEntries& entries, const std::string& path) {
  for (const auto& [name, inputs] : entries) {
    CLI::Option* opt = cmd->get_option_no_throw("--" + name);
    if (opt == nullptr || name == "config") {
      throw ConfigError("config file " + path + ": unknown option '" + name + "' for " +
                        cmd->get_name());
    }
    if (opt->count() > 0) continue;
    try {
      opt->add_result(inputs);
      opt->run_callback();
    } catch (const CLI::Error& e) {
      throw ConfigError("config file " + path + ": bad value for '" + name + "': " + e.what());
    }
  }
}

}  // namespace dirnet::cli
