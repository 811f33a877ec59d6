#pragma once

#include <chrono>
#include <cstdint>
#include <cstdio>
#include <ctime>
#include <filesystem>
#include <fstream>
#include <map>
#include <string>

#include <json.hpp>

#include "occusim/common.hpp"

namespace occusim::io {

// FNV-1a 64-bit over the canonical (sorted-key, minified) JSON dump. Key order
// and whitespace in the source file do not affect the digest; any semantic
// field change does.
inline std::uint64_t fnv1a64(const std::string& data) {
  std::uint64_t hash = 0xCBF29CE484222325ULL;
  for (unsigned char c : data) {
    hash ^= c;
    hash *= 0x100000001B3ULL;
  }
  return hash;
}

inline std::string config_hash(const nlohmann::json& config) {
  char buffer[32];
  std::snprintf(buffer, sizeof(buffer), "fnv1a64:%016llx",
                static_cast<unsigned long long>(fnv1a64(config.dump())));
  return buffer;
}

struct RunManifest {
  std::string config_hash;
  std::string tool_version = kToolVersion;
  std::uint64_t master_seed = 0;
  std::string created_utc;
  std::string config_path;
  std::map<std::string, std::string> outputs;
};

inline std::string utc_now_iso8601() {
  const auto now = std::chrono::system_clock::now();
  const std::time_t t = std::chrono::system_clock::to_time_t(now);
  std::tm tm{};
  gmtime_r(&t, &tm);
  char buffer[32];
  std::strftime(buffer, sizeof(buffer), "%Y-%m-%dT%H:%M:%SZ", &tm);
  return buffer;
}

inline nlohmann::json manifest_to_json(const RunManifest& manifest) {
  return {{"config_hash", manifest.config_hash}, {"tool_version", manifest.tool_version},
          {"master_seed", manifest.master_seed}, {"created_utc", manifest.created_utc},
          {"config_path", manifest.config_path}, {"outputs", manifest.outputs}};
}

inline void write_manifest(const std::filesystem::path& path, const RunManifest& manifest) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw Error(ErrorCode::IoError, "cannot write '" + path.string() + "'");
  out << manifest_to_json(manifest).dump(2) << '\n';
}

}  // namespace occusim::io
