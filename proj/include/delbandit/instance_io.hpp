#pragma once

#include <fstream>
#include <stdexcept>
#include <string>

#include <json.hpp>

#include "delbandit/environment.hpp"

namespace delbandit {

// Instance file format, version 1: a JSON document with fields
//   {"version": 1, "n": ..., "k": ..., "delays": [...], "losses": [[...], ...]}
// so externally authored adversarial instances can be replayed. Loaded
// instances are validated, not repaired.

inline void save_instance(const Instance& inst, const std::string& path) {
  validate_instance(inst);
  nlohmann::json j;
  j["version"] = 1;
  j["n"] = inst.n;
  j["k"] = inst.k;
  j["delays"] = inst.delays;
  j["losses"] = inst.losses;
  std::ofstream out(path);
  if (!out) throw std::runtime_error("save_instance: cannot open " + path);
  out << j.dump(1) << "\n";
}

inline Instance load_instance(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw std::runtime_error("load_instance: cannot open " + path);
  nlohmann::json j;
  try {
    in >> j;
  } catch (const nlohmann::json::exception& e) {
    throw std::runtime_error("load_instance: " + path + " is not valid JSON: " + e.what());
  }
  if (!j.contains("version") || j["version"].get<int>() != 1)
    throw std::runtime_error("load_instance: unsupported instance file version");
  Instance inst;
  try {
    inst.n = j.at("n").get<int>();
    inst.k = j.at("k").get<int>();
    inst.delays = j.at("delays").get<std::vector<int>>();
    inst.losses = j.at("losses").get<std::vector<std::vector<double>>>();
  } catch (const nlohmann::json::exception& e) {
    throw std::runtime_error(std::string("load_instance: malformed field: ") + e.what());
  }
  validate_instance(inst);
  return inst;
}

}  // namespace delbandit
