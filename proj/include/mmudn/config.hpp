#pragma once

#include <cstdint>
#include <iosfwd>
#include <map>
#include <stdexcept>
#include <string>
#include <vector>

namespace mmudn {

/// Configuration error tied to one key.
class ConfigError : public std::runtime_error {
 public:
  ConfigError(std::string key, const std::string& message)
      : std::runtime_error("config key '" + key + "': " + message), key_(std::move(key)) {}
  const std::string& key() const { return key_; }

 private:
  std::string key_;
};

struct ConfigKey {
  std::string name;
  std::string default_value;
  std::string help;
};

/// Known configuration keys in output order. Units are part of the names.
const std::vector<ConfigKey>& config_schema();

/// key=value configuration over the fixed schema.
class Config {
 public:
  Config();

  /// Parses `key = value` lines; '#' starts a comment.
  void load(std::istream& in, const std::string& source = "config");
  void load_file(const std::string& path);
  /// Applies one `key=value` override.
  void apply_override(const std::string& assignment);
  void set(const std::string& key, const std::string& value);

  const std::string& raw(const std::string& key) const;
  double get_double(const std::string& key) const;
  std::uint64_t get_uint(const std::string& key) const;
  bool get_bool(const std::string& key) const;
  std::string get_choice(const std::string& key, const std::vector<std::string>& allowed) const;
  /// Comma-separated list of numbers.
  std::vector<double> get_list(const std::string& key) const;
  std::vector<std::string> get_strings(const std::string& key) const;

  /// All keys with resolved values, in schema order.
  std::vector<std::pair<std::string, std::string>> resolved() const;

 private:
  std::map<std::string, std::string> values_;
};

}  // namespace mmudn
