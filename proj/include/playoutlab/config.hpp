#pragma once

#include <cstdint>
#include <map>
#include <string>
#include <vector>

#include "playoutlab/simulator.hpp"

namespace playoutlab {

/// Flat `key = value` configuration file: one pair per line, `#` starts a
/// comment, dotted prefixes group related keys (policy.V, net.loss_rate).
class KeyValueFile {
 public:
  static KeyValueFile parse_file(const std::string& path);
  static KeyValueFile parse_string(const std::string& text,
                                   const std::string& origin = "<string>");

  bool has(const std::string& key) const;
  std::string get_string(const std::string& key, const std::string& fallback) const;
  double get_double(const std::string& key, double fallback) const;
  std::int64_t get_int(const std::string& key, std::int64_t fallback) const;
  std::vector<double> get_double_list(const std::string& key) const;
  std::vector<std::string> get_string_list(const std::string& key) const;

  /// Keys present in the file but never read by any getter. Loaders use this
  /// to reject misspelled configuration.
  std::vector<std::string> unread_keys() const;

 private:
  std::string origin_;
  std::map<std::string, std::string> values_;
  mutable std::map<std::string, bool> read_;
};

/// Builds a SimConfig from a parsed file, applying the documented defaults
/// and derivations (r bounds from the f box and estimator clamps, the beta
/// variant implied by the controller). Rejects unknown keys.
SimConfig sim_config_from(const KeyValueFile& kv);
SimConfig load_sim_config(const std::string& path);

}  // namespace playoutlab
