#pragma once

// Disk cache for solver results: one JSON file per canonical key string,
// named by an FNV-1a hash of the key.  The key is stored inside the record
// and checked on load, so hash collisions degrade to cache misses.

#include <cstdint>
#include <filesystem>
#include <fstream>
#include <optional>
#include <string>

#include "fichera/io.hpp"

namespace fichera {

inline std::uint64_t fnv1a(const std::string& s) {
  std::uint64_t h = 1469598103934665603ull;
  for (unsigned char c : s) {
    h ^= c;
    h *= 1099511628211ull;
  }
  return h;
}

inline std::string hash_hex(const std::string& s) {
  char buf[24];
  std::snprintf(buf, sizeof(buf), "%016llx",
                static_cast<unsigned long long>(fnv1a(s)));
  return buf;
}

class SolveCache {
 public:
  explicit SolveCache(std::filesystem::path dir) : dir_(std::move(dir)) {}

  // Empty path disables caching entirely.
  bool enabled() const { return !dir_.empty(); }

  std::optional<Json> load(const std::string& key) const {
    if (!enabled()) return std::nullopt;
    std::ifstream in(path_for(key));
    if (!in) return std::nullopt;
    Json j = Json::parse(in, nullptr, /*allow_exceptions=*/false);
    if (j.is_discarded() || !j.contains("key") || j["key"] != key)
      return std::nullopt;
    return j["value"];
  }

  void store(const std::string& key, const Json& value) const {
    if (!enabled()) return;
    std::filesystem::create_directories(dir_);
    Json rec;
    rec["key"] = key;
    rec["value"] = value;
    write_json(path_for(key), rec);
  }

  const std::filesystem::path& dir() const { return dir_; }

 private:
  std::filesystem::path path_for(const std::string& key) const {
    return dir_ / (hash_hex(key) + ".json");
  }

  std::filesystem::path dir_;
};

}  // namespace fichera
