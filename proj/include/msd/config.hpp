#pragma once

#include <fstream>
#include <map>
#include <sstream>
#include <stdexcept>
#include <string>
#include <vector>

#include "msd/bloch.hpp"
#include "msd/render.hpp"

namespace msd {

// Flat key-value text with [section] headers; `#` starts a comment. Keys are
// stored as "section.key". Later assignments win, so a sidecar echo is itself
// a valid input.
class Config {
 public:
  Config() = default;

  static Config parse(std::istream& in) {
    Config cfg;
    std::string line, section;
    int lineno = 0;
    while (std::getline(in, line)) {
      ++lineno;
      auto hash = line.find('#');
      if (hash != std::string::npos) line.erase(hash);
      auto first = line.find_first_not_of(" \t\r");
      if (first == std::string::npos) continue;
      auto last = line.find_last_not_of(" \t\r");
      std::string body = line.substr(first, last - first + 1);
      if (body.front() == '[') {
        if (body.back() != ']')
          throw std::runtime_error("config line " + std::to_string(lineno) +
                                   ": unterminated section header");
        section = body.substr(1, body.size() - 2);
        continue;
      }
      auto eq = body.find('=');
      if (eq == std::string::npos)
        throw std::runtime_error("config line " + std::to_string(lineno) + ": expected key = value");
      auto trim = [](std::string s) {
        auto a = s.find_first_not_of(" \t");
        auto b = s.find_last_not_of(" \t");
        return a == std::string::npos ? std::string{} : s.substr(a, b - a + 1);
      };
      std::string key = trim(body.substr(0, eq));
      std::string value = trim(body.substr(eq + 1));
      if (key.empty()) throw std::runtime_error("config line " + std::to_string(lineno) + ": empty key");
      cfg.values_[section.empty() ? key : section + "." + key] = value;
    }
    return cfg;
  }

  static Config load(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw std::runtime_error("config: cannot open '" + path + "'");
    return parse(in);
  }

  bool has(const std::string& key) const { return values_.count(key) > 0; }

  std::string get(const std::string& key) const {
    auto it = values_.find(key);
    if (it == values_.end()) throw std::runtime_error("config: missing key '" + key + "'");
    return it->second;
  }

  std::string get_or(const std::string& key, const std::string& fallback) const {
    auto it = values_.find(key);
    return it == values_.end() ? fallback : it->second;
  }

  double get_double(const std::string& key) const {
    try {
      return std::stod(get(key));
    } catch (const std::invalid_argument&) {
      throw std::runtime_error("config: key '" + key + "' is not a number");
    }
  }

  double get_double_or(const std::string& key, double fallback) const {
    return has(key) ? get_double(key) : fallback;
  }

  int get_int(const std::string& key) const {
    try {
      return std::stoi(get(key));
    } catch (const std::invalid_argument&) {
      throw std::runtime_error("config: key '" + key + "' is not an integer");
    }
  }

  int get_int_or(const std::string& key, int fallback) const {
    return has(key) ? get_int(key) : fallback;
  }

  BlochVector get_vector(const std::string& key) const {
    std::istringstream ss(get(key));
    BlochVector r;
    if (!(ss >> r.x >> r.y >> r.z))
      throw std::runtime_error("config: key '" + key + "' needs three numbers");
    return r;
  }

  void set(const std::string& key, const std::string& value) { values_[key] = value; }

  const std::map<std::string, std::string>& values() const { return values_; }

  // Echo grouped by section; parseable as input.
  std::string serialize() const {
    std::ostringstream out;
    std::string cur_section;
    bool first = true;
    for (const auto& [key, value] : values_) {
      auto dot = key.find('.');
      std::string section = dot == std::string::npos ? "" : key.substr(0, dot);
      std::string name = dot == std::string::npos ? key : key.substr(dot + 1);
      if (section != cur_section || first) {
        if (!first) out << "\n";
        if (!section.empty()) out << "[" << section << "]\n";
        cur_section = section;
      }
      out << name << " = " << value << "\n";
      first = false;
    }
    return out.str();
  }

 private:
  std::map<std::string, std::string> values_;
};

inline SlicePlane plane_from_config(const Config& cfg) {
  SlicePlane plane;
  std::string preset = cfg.get_or("plane.preset", "");
  if (preset == "z0") {
    plane.origin = {0, 0, 0};
    plane.u_axis = {1, 0, 0};
    plane.v_axis = {0, 1, 0};
  } else if (preset == "xz") {
    plane.origin = {0, 0, 0};
    plane.u_axis = {1, 0, 0};
    plane.v_axis = {0, 0, 1};
  } else if (preset == "diag_z") {
    // plane spanned by the (1,1,0) diagonal and the z axis
    const double s = 1.0 / std::sqrt(2.0);
    plane.origin = {0, 0, 0};
    plane.u_axis = {s, s, 0};
    plane.v_axis = {0, 0, 1};
  } else if (preset == "hz") {
    // plane spanned by the (1,0,1) magic diagonal and its in-plane normal
    const double s = 1.0 / std::sqrt(2.0);
    plane.origin = {0, 0, 0};
    plane.u_axis = {s, 0, s};
    plane.v_axis = {-s, 0, s};
  } else if (!preset.empty()) {
    throw std::runtime_error("config: unknown plane preset '" + preset + "'");
  }
  if (cfg.has("plane.origin")) plane.origin = cfg.get_vector("plane.origin");
  if (cfg.has("plane.u")) plane.u_axis = cfg.get_vector("plane.u");
  if (cfg.has("plane.v")) plane.v_axis = cfg.get_vector("plane.v");
  plane.half_extent = cfg.get_double_or("plane.extent", 1.0);
  int size = cfg.get_int_or("plane.size", 256);
  plane.width = cfg.get_int_or("plane.width", size);
  plane.height = cfg.get_int_or("plane.height", size);
  return plane;
}

}  // namespace msd
