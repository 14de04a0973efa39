// SPDX-License-Identifier: MIT
#include "peridyn/config.hpp"

#include <algorithm>
#include <cctype>
#include <cstdlib>
#include <map>
#include <sstream>

namespace peridyn {

namespace {

std::string normalize_key(const std::string& raw) {
  std::string key;
  key.reserve(raw.size());
  for (char c : raw) {
    if (c == '-')
      key.push_back('_');
    else
      key.push_back(static_cast<char>(
          std::tolower(static_cast<unsigned char>(c))));
  }
  return key;
}

std::string trim(const std::string& s) {
  size_t a = 0, b = s.size();
  while (a < b && std::isspace(static_cast<unsigned char>(s[a]))) ++a;
  while (b > a && std::isspace(static_cast<unsigned char>(s[b - 1]))) --b;
  return s.substr(a, b - a);
}

}  // namespace

void Config::set(const std::string& key, const std::string& value) {
  entries_.emplace_back(normalize_key(trim(key)), trim(value));
}

const std::string* Config::find(const std::string& key) const {
  const std::string k = normalize_key(key);
  const std::string* hit = nullptr;
  for (const auto& [ek, ev] : entries_)
    if (ek == k) hit = &ev;  // later assignments win
  return hit;
}

std::string Config::get_string(const std::string& key,
                               const std::string& dflt) const {
  const std::string* v = find(key);
  return v == nullptr ? dflt : *v;
}

double Config::get_double(const std::string& key, double dflt) const {
  const std::string* v = find(key);
  if (v == nullptr) return dflt;
  const char* s = v->c_str();
  char* end = nullptr;
  const double x = std::strtod(s, &end);
  if (end == s || *end != '\0')
    throw config_error("type-mismatch: key \"" + normalize_key(key) +
                       "\" expects a number, got \"" + *v + "\"");
  return x;
}

long Config::get_long(const std::string& key, long dflt) const {
  const std::string* v = find(key);
  if (v == nullptr) return dflt;
  const char* s = v->c_str();
  char* end = nullptr;
  const long x = std::strtol(s, &end, 10);
  if (end == s || *end != '\0')
    throw config_error("type-mismatch: key \"" + normalize_key(key) +
                       "\" expects an integer, got \"" + *v + "\"");
  return x;
}

bool Config::get_bool(const std::string& key, bool dflt) const {
  const std::string* v = find(key);
  if (v == nullptr) return dflt;
  std::string s = normalize_key(*v);
  if (s == "true" || s == "1" || s == "yes" || s == "on") return true;
  if (s == "false" || s == "0" || s == "no" || s == "off") return false;
  throw config_error("type-mismatch: key \"" + normalize_key(key) +
                     "\" expects a boolean, got \"" + *v + "\"");
}

std::vector<double> Config::get_list(const std::string& key,
                                     const std::vector<double>& dflt) const {
  const std::string* v = find(key);
  if (v == nullptr) return dflt;
  std::vector<double> out;
  std::string item;
  std::stringstream ss(*v);
  while (std::getline(ss, item, ',')) {
    item = trim(item);
    if (item.empty()) continue;
    const char* s = item.c_str();
    char* end = nullptr;
    const double x = std::strtod(s, &end);
    if (end == s || *end != '\0')
      throw config_error("type-mismatch: key \"" + normalize_key(key) +
                         "\" expects comma-separated numbers, got \"" + *v +
                         "\"");
    out.push_back(x);
  }
  if (out.empty())
    throw config_error("type-mismatch: key \"" + normalize_key(key) +
                       "\" expects a non-empty number list");
  return out;
}

std::string Config::canonical() const {
  std::map<std::string, std::string> last;
  for (const auto& [k, v] : entries_) last[k] = v;
  std::string out;
  for (const auto& [k, v] : last) {
    out += k;
    out += '=';
    out += v;
    out += '\n';
  }
  return out;
}

std::uint64_t Config::hash() const { return fnv1a64(canonical()); }

Config parse_config_text(const std::string& text) {
  Config cfg;
  std::stringstream ss(text);
  std::string line;
  long lineno = 0;
  while (std::getline(ss, line)) {
    ++lineno;
    const size_t hash_pos = line.find('#');
    if (hash_pos != std::string::npos) line = line.substr(0, hash_pos);
    line = trim(line);
    if (line.empty()) continue;
    const size_t eq = line.find('=');
    if (eq == std::string::npos)
      throw config_error("malformed config line " + std::to_string(lineno) +
                         ": expected key=value, got \"" + line + "\"");
    const std::string key = trim(line.substr(0, eq));
    if (key.empty())
      throw config_error("malformed config line " + std::to_string(lineno) +
                         ": empty key");
    cfg.set(key, line.substr(eq + 1));
  }
  return cfg;
}

const std::vector<std::string>& known_keys() {
  static const std::vector<std::string> keys = {
      // material / kernel
      "e", "nu", "lambda", "mu", "dim", "kernel", "kernel_c", "kernel_coeffs",
      "allow_lambda_lt_mu",
      // discretization
      "h_max", "h_hat", "delta", "coupling", "ladder", "m0", "eps1",
      "allow_small_horizon", "domain_lo", "domain_hi",
      // solver
      "solver", "direct_dof_limit", "explicit_budget_bytes", "tol",
      // weights command
      "include_swap", "constraint_tol",
      // symbols / scan
      "grid_n", "radial_samples", "radial_dirs", "deltas", "max_shells",
      "sum_rel_tol", "xi",
  };
  return keys;
}

void validate_keys(const Config& config) {
  const auto& known = known_keys();
  for (const auto& [k, v] : config.entries()) {
    if (std::find(known.begin(), known.end(), k) == known.end())
      throw config_error("unknown-key: \"" + k +
                         "\" is not a recognized configuration key");
  }
}

}  // namespace peridyn
