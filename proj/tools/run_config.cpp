#include "run_config.hpp"

#include <openssl/evp.h>
#include <unistd.h>

#include <cctype>
#include <cstdio>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <sstream>

#include "echonet/error.hpp"

namespace echonet::cli {
namespace {

std::vector<KeySpec> make_keys() {
  using K = KeyType;
  return {
      {"tweets", K::Path, "", "tweets.jsonl input"},
      {"users", K::Path, "", "users.jsonl input"},
      {"labels", K::Path, "", "labels.csv input (user_id,label)"},
      {"embeddings", K::Path, "", "word vectors in text format"},
      {"ira", K::Path, "", "IRA handle list, one per line"},
      {"predictions", K::Path, "", "predictions.csv written by train"},
      {"out", K::String, "out", "output directory"},
      {"seed", K::Int, 0, "master random seed"},
      {"semantics", K::String, "mention", "mention | reply | retweet"},
      {"delta", K::Int, 3, "minimum edge weight"},
      {"include_singletons", K::Bool, false, "keep isolated users in the network"},
      {"as_of", K::String, "", "RFC3339 reference time (default: latest tweet)"},
      {"min_echo_uses", K::Int, 3, "minimum echo tweets per retained user"},
      {"language", K::String, "en", "language tag kept by ingest"},
      {"max_tweets_per_user", K::Int, 0, "keep only the most recent n tweets (0 = all)"},
      {"k", K::Int, 20, "top-k size for generalized centrality"},
      {"limit", K::Int, 20, "rows in the leaders table (0 = all)"},
      {"weighted", K::Bool, false, "weighted centralities"},
      {"damping", K::Real, 0.85, "PageRank damping"},
      {"repr", K::String, "TM_F", "EMBD | TM_S | TM_F"},
      {"reprs", K::String, "EMBD,TM_S,TM_F", "representations compared by cluster"},
      {"topics", K::Int, 30, "LDA topics"},
      {"alpha", K::Real, 0.0, "LDA alpha (<= 0 selects 50/topics)"},
      {"beta", K::Real, 0.01, "LDA beta"},
      {"iterations", K::Int, 1000, "Gibbs sweeps"},
      {"min_df", K::Int, 5, "minimum document frequency"},
      {"n_init", K::Int, 10, "k-means restarts"},
      {"max_iter", K::Int, 300, "k-means iterations"},
      {"tol", K::Real, 1e-4, "k-means tolerance"},
      {"standardize", K::Bool, false, "z-score vectors before k-means"},
      {"streams", K::String, "U+UF+N", "fused blocks for train"},
      {"folds", K::Int, 5, "cross-validation folds"},
      {"t_max", K::Int, 256, "own-score block size"},
      {"f_max", K::Int, 64, "neighbor block size"},
      {"stream_semantics", K::String, "mention", "graph used for neighbor streams"},
      {"classifier", K::String, "logreg", "logreg | gbt"},
      {"scorer_cmd", K::String, "", "external plm/1 scorer command (sh -c)"},
      {"scorer_timeout", K::Real, 120.0, "external scorer timeout, seconds"},
      {"terms", K::String, "", "comma-separated terms for odds ratios"},
      {"smoothing", K::Real, 0.5, "additive smoothing for odds ratios"},
      {"top_hashtags", K::Int, 10, "hashtags listed per group"},
      {"format", K::String, "graphml", "graphml | dot"},
      {"synth_kind", K::String, "planted", "planted | topics"},
      {"synth_users", K::Int, 500, "users in the planted corpus"},
  };
}

std::string lower(std::string_view s) {
  std::string out(s);
  for (auto& c : out) c = static_cast<char>(std::tolower(static_cast<unsigned char>(c)));
  return out;
}

void check_type(const KeySpec& key, const json& v, std::string_view origin) {
  bool ok = false;
  switch (key.type) {
    case KeyType::String:
    case KeyType::Path: ok = v.is_string(); break;
    case KeyType::Int: ok = v.is_number_integer(); break;
    case KeyType::Real: ok = v.is_number(); break;
    case KeyType::Bool: ok = v.is_boolean(); break;
  }
  if (!ok) throw ConfigError("bad type for '" + key.name + "' in " + std::string(origin));
}

}  // namespace

const std::vector<KeySpec>& config_keys() {
  static const std::vector<KeySpec> keys = make_keys();
  return keys;
}

const KeySpec* find_key(std::string_view name) {
  for (const auto& k : config_keys())
    if (k.name == name) return &k;
  return nullptr;
}

std::string flag_name(std::string_view key) {
  std::string f = "--";
  for (char c : key) f += c == '_' ? '-' : c;
  return f;
}

std::string env_name(std::string_view key) {
  std::string e = "ECHONET_";
  for (char c : key) e += static_cast<char>(std::toupper(static_cast<unsigned char>(c)));
  return e;
}

json convert_value(const KeySpec& key, std::string_view text) {
  const std::string s(text);
  try {
    std::size_t used = 0;
    switch (key.type) {
      case KeyType::String:
      case KeyType::Path: return s;
      case KeyType::Int: {
        const long long v = std::stoll(s, &used);
        if (used != s.size()) break;
        return v;
      }
      case KeyType::Real: {
        const double v = std::stod(s, &used);
        if (used != s.size()) break;
        return v;
      }
      case KeyType::Bool: {
        const std::string l = lower(s);
        if (l == "true" || l == "1" || l == "yes" || l == "on") return true;
        if (l == "false" || l == "0" || l == "no" || l == "off") return false;
        break;
      }
    }
  } catch (const std::exception&) {
  }
  throw ConfigError("invalid value '" + s + "' for '" + key.name + "'");
}

json read_config_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw ConfigError("cannot open config file '" + path + "'");
  json doc;
  try {
    doc = json::parse(in);
  } catch (const json::parse_error& e) {
    throw ConfigError("config file '" + path + "' is not valid JSON: " + e.what());
  }
  if (doc.is_object() && doc.contains("config") && doc["config"].is_object()) doc = doc["config"];
  if (!doc.is_object()) throw ConfigError("config file '" + path + "' must hold a JSON object");
  for (const auto& [name, value] : doc.items()) {
    const KeySpec* key = find_key(name);
    if (!key) throw ConfigError("unknown config key '" + name + "'");
    check_type(*key, value, "config file");
  }
  return doc;
}

std::map<std::string, std::string> environment_overrides() {
  std::map<std::string, std::string> env;
  for (const auto& k : config_keys())
    if (const char* v = std::getenv(env_name(k.name).c_str())) env[k.name] = v;
  return env;
}

RunConfig RunConfig::resolve(const json& file, const std::map<std::string, std::string>& env,
                             const std::map<std::string, std::string>& flags) {
  RunConfig cfg;
  for (const auto& k : config_keys()) {
    cfg.values_[k.name] = k.default_value;
    cfg.sources_[k.name] = "default";
  }
  if (!file.is_null()) {
    for (const auto& [name, value] : file.items()) {
      const KeySpec* key = find_key(name);
      if (!key) throw ConfigError("unknown config key '" + name + "'");
      check_type(*key, value, "config file");
      cfg.values_[name] = key->type == KeyType::Real ? json(value.get<double>()) : value;
      cfg.sources_[name] = "file";
    }
  }
  auto apply = [&cfg](const std::map<std::string, std::string>& layer, const char* source) {
    for (const auto& [name, text] : layer) {
      const KeySpec* key = find_key(name);
      if (!key) throw ConfigError("unknown config key '" + name + "'");
      cfg.values_[name] = convert_value(*key, text);
      cfg.sources_[name] = source;
    }
  };
  apply(env, "env");
  apply(flags, "flag");
  return cfg;
}

std::string RunConfig::str(std::string_view key) const { return values_.at(std::string(key)).get<std::string>(); }
long long RunConfig::integer(std::string_view key) const { return values_.at(std::string(key)).get<long long>(); }
double RunConfig::real(std::string_view key) const { return values_.at(std::string(key)).get<double>(); }
bool RunConfig::boolean(std::string_view key) const { return values_.at(std::string(key)).get<bool>(); }

std::string RunConfig::hash() const { return sha256_hex(values_.dump()); }

void RunConfig::check_paths() const {
  for (const auto& k : config_keys()) {
    if (k.type != KeyType::Path) continue;
    const std::string p = str(k.name);
    if (!p.empty() && !std::filesystem::is_regular_file(p))
      throw ConfigError("input '" + k.name + "' does not exist: " + p);
  }
}

std::string sha256_hex(std::string_view bytes) {
  unsigned char digest[EVP_MAX_MD_SIZE];
  unsigned int len = 0;
  if (EVP_Digest(bytes.data(), bytes.size(), digest, &len, EVP_sha256(), nullptr) != 1)
    throw Error("internal_error", "SHA-256 failed", 1);
  static const char* kHex = "0123456789abcdef";
  std::string out;
  for (unsigned int i = 0; i < len; ++i) {
    out += kHex[digest[i] >> 4];
    out += kHex[digest[i] & 0xf];
  }
  return out;
}

std::string file_sha256(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw ConfigError("cannot open '" + path + "'");
  std::ostringstream ss;
  ss << in.rdbuf();
  return sha256_hex(ss.str());
}

void atomic_write(const std::string& path, std::string_view content) {
  namespace fs = std::filesystem;
  const fs::path target(path);
  if (target.has_parent_path()) fs::create_directories(target.parent_path());
  const fs::path tmp = target.string() + ".tmp." + std::to_string(::getpid());
  {
    std::ofstream out(tmp, std::ios::binary | std::ios::trunc);
    if (!out) throw ConfigError("cannot write '" + tmp.string() + "'");
    out.write(content.data(), static_cast<std::streamsize>(content.size()));
    out.flush();
    if (!out) throw ConfigError("write failed for '" + tmp.string() + "'");
  }
  std::error_code ec;
  fs::rename(tmp, target, ec);
  if (ec) {
    fs::remove(tmp);
    throw ConfigError("cannot rename into '" + path + "': " + ec.message());
  }
}

std::string render(const json& value) { return value.dump(2) + "\n"; }

json make_manifest(std::string_view command, const RunConfig& cfg, const std::vector<std::string>& outputs) {
  json m;
  m["command"] = command;
  m["config"] = cfg.values();
  m["config_hash"] = cfg.hash();
  m["seed"] = cfg.integer("seed");
  json inputs = json::object();
  for (const auto& k : config_keys()) {
    if (k.type != KeyType::Path) continue;
    const std::string p = cfg.str(k.name);
    if (p.empty()) continue;
    inputs[k.name] = {{"path", p}, {"sha256", file_sha256(p)}};
  }
  m["inputs"] = inputs;
  json outs = json::array();
  for (const auto& o : outputs) {
    const std::string name = std::filesystem::path(o).filename().string();
    outs.push_back({{"file", name}, {"sha256", file_sha256(o)}});
  }
  m["outputs"] = outs;
  return m;
}

}  // namespace echonet::cli
