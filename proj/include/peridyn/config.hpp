// SPDX-License-Identifier: MIT
// Flat key=value configuration, validation, and the command-line front end.
#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "peridyn/common.hpp"

namespace peridyn {

/// Ordered key=value store ('#' comments, later assignments win).  Keys are
/// normalized to lower-case with '-' mapped to '_'.
class Config {
 public:
  void set(const std::string& key, const std::string& value);
  const std::string* find(const std::string& key) const;
  bool has(const std::string& key) const { return find(key) != nullptr; }

  // Typed getters with defaults; a malformed value throws
  // config_error("type-mismatch ...") naming the key.
  std::string get_string(const std::string& key, const std::string& dflt) const;
  double get_double(const std::string& key, double dflt) const;
  long get_long(const std::string& key, long dflt) const;
  bool get_bool(const std::string& key, bool dflt) const;
  std::vector<double> get_list(const std::string& key,
                               const std::vector<double>& dflt) const;

  /// FNV-1a hash of the canonical "key=value" lines (sorted, deduplicated);
  /// stamped into every CSV header.
  std::uint64_t hash() const;
  /// Canonical sorted "key=value" lines.
  std::string canonical() const;

  const std::vector<std::pair<std::string, std::string>>& entries() const {
    return entries_;
  }

 private:
  std::vector<std::pair<std::string, std::string>> entries_;
};

/// Parse a line-based key=value document.  Throws config_error on malformed
/// lines.
Config parse_config_text(const std::string& text);

/// Keys the CLI understands; anything else raises
/// config_error("unknown-key ...") naming the offender.
const std::vector<std::string>& known_keys();
void validate_keys(const Config& config);

/// Full command dispatcher:
///   peridyn-rk <command> [--config FILE] [--key value ...] [--out DIR]
/// commands: converge | solve | weights | symbols | truncation.
/// Returns the process exit code: 0 success, 2 configuration error, 3
/// numerical error.
int run_cli(int argc, const char* const* argv);

}  // namespace peridyn
