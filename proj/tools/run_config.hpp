#pragma once

#include <map>
#include <string>
#include <string_view>
#include <vector>

#include "json.hpp"

namespace echonet::cli {

using json = nlohmann::json;

enum class KeyType { String, Int, Real, Bool, Path };

struct KeySpec {
  std::string name;
  KeyType type;
  json default_value;
  std::string help;
};

// Every recognized configuration key with its default.
const std::vector<KeySpec>& config_keys();
const KeySpec* find_key(std::string_view name);

// "--max-iter" <-> "max_iter", "ECHONET_MAX_ITER" <-> "max_iter".
std::string flag_name(std::string_view key);
std::string env_name(std::string_view key);

// Converts a textual value (environment or flag) to the key's type.
// Throws ConfigError.
json convert_value(const KeySpec& key, std::string_view text);

// Reads a flat JSON config object, or the "config" member of a manifest.
// Throws ConfigError on unreadable files, unknown keys or bad types.
json read_config_file(const std::string& path);

// ECHONET_* variables for all known keys.
std::map<std::string, std::string> environment_overrides();

// Merged configuration: defaults < file < environment < flags.
class RunConfig {
 public:
  static RunConfig resolve(const json& file, const std::map<std::string, std::string>& env,
                           const std::map<std::string, std::string>& flags);

  const json& values() const { return values_; }
  std::string str(std::string_view key) const;
  long long integer(std::string_view key) const;
  double real(std::string_view key) const;
  bool boolean(std::string_view key) const;
  bool has_path(std::string_view key) const { return !str(key).empty(); }

  // Source that set each key: "default", "file", "env" or "flag".
  const std::map<std::string, std::string>& sources() const { return sources_; }

  // SHA-256 of the canonical JSON dump.
  std::string hash() const;

  // Throws ConfigError if a non-empty path key names a missing file.
  void check_paths() const;

 private:
  json values_ = json::object();
  std::map<std::string, std::string> sources_;
};

std::string sha256_hex(std::string_view bytes);
std::string file_sha256(const std::string& path);  // throws ConfigError

// Writes to a temporary sibling and renames it into place.
void atomic_write(const std::string& path, std::string_view content);

// Deterministic JSON rendering used for every report.
std::string render(const json& value);

// {command, config, config_hash, seed, inputs: {key: {path, sha256}}, outputs}
json make_manifest(std::string_view command, const RunConfig& cfg, const std::vector<std::string>& outputs);

}  // namespace echonet::cli
