#pragma once

#include <set>
#include <stdexcept>
#include <string>

#include <nlohmann/json.hpp>

namespace qomsync {
namespace detail {

// Strict field access: every getter records the key as consumed so unknown
// keys can be reported, and type errors carry the full field path.
struct ObjectReader {
  const nlohmann::json& j;
  std::string path;
  std::set<std::string> seen;

  ObjectReader(const nlohmann::json& jj, std::string p) : j(jj), path(std::move(p)) {
    if (!j.is_object()) throw std::runtime_error(path + ": expected an object");
  }

  bool has(const std::string& key) { return j.contains(key); }

  const nlohmann::json& get(const std::string& key) {
    seen.insert(key);
    auto it = j.find(key);
    if (it == j.end()) throw std::runtime_error(path + "." + key + ": missing field");
    return *it;
  }

  double number(const std::string& key) {
    const nlohmann::json& v = get(key);
    if (!v.is_number()) throw std::runtime_error(path + "." + key + ": expected a number");
    return v.get<double>();
  }

  double number_or(const std::string& key, double fallback) {
    return has(key) ? number(key) : fallback;
  }

  int integer(const std::string& key, int fallback) {
    if (!has(key)) return fallback;
    const nlohmann::json& v = get(key);
    if (!v.is_number_integer())
      throw std::runtime_error(path + "." + key + ": expected an integer");
    return v.get<int>();
  }

  bool boolean(const std::string& key, bool fallback) {
    if (!has(key)) return fallback;
    const nlohmann::json& v = get(key);
    if (!v.is_boolean())
      throw std::runtime_error(path + "." + key + ": expected a boolean");
    return v.get<bool>();
  }

  std::string str(const std::string& key) {
    const nlohmann::json& v = get(key);
    if (!v.is_string()) throw std::runtime_error(path + "." + key + ": expected a string");
    return v.get<std::string>();
  }

  void finish() {
    for (auto it = j.begin(); it != j.end(); ++it)
      if (!seen.count(it.key()))
        throw std::runtime_error(path + "." + it.key() + ": unknown field");
  }
};

}  // namespace detail
}  // namespace qomsync
