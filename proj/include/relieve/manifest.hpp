#pragma once

// Run manifests and file plumbing. Every artifact the CLI writes is
// accompanied by a manifest recording the command, its parameters, the
// content hash of the dataset consumed, and the tool version, so a rerun
// with identical parameters can be checked byte for byte. No wall-clock
// values anywhere; outputs are pure functions of their manifests.

#include <cstdint>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <map>
#include <string>
#include <string_view>

#include "relieve/errors.hpp"
#include "relieve/version.hpp"

#include <json.hpp>

namespace relieve {

// FNV-1a, 64-bit. Stable across platforms, fast enough for MB-scale CSVs.
inline std::uint64_t fnv1a64(std::string_view bytes) {
  std::uint64_t h = 0xcbf29ce484222325ull;
  for (const unsigned char c : bytes) {
    h ^= c;
    h *= 0x100000001b3ull;
  }
  return h;
}

inline std::string fnv1a64_hex(std::string_view bytes) {
  static const char* digits = "0123456789abcdef";
  std::uint64_t h = fnv1a64(bytes);
  std::string out(16, '0');
  for (int i = 15; i >= 0; --i) {
    out[static_cast<std::size_t>(i)] = digits[h & 0xf];
    h >>= 4;
  }
  return "fnv1a64:" + out;
}

struct RunManifest {
  std::string command;
  std::map<std::string, std::string> params;
  std::string dataset_hash;  // empty for generators (they produce the dataset)
  std::uint64_t seed = 0;
  std::string tool_version = std::string(kToolName) + " " + kToolVersion;
};

inline nlohmann::json to_json(const RunManifest& m) {
  nlohmann::json j;
  j["command"] = m.command;
  j["params"] = m.params;
  j["dataset_hash"] = m.dataset_hash;
  j["seed"] = m.seed;
  j["tool_version"] = m.tool_version;
  return j;
}

inline RunManifest manifest_from_json(const nlohmann::json& j) {
  RunManifest m;
  m.command = j.at("command").get<std::string>();
  m.params = j.at("params").get<std::map<std::string, std::string>>();
  m.dataset_hash = j.at("dataset_hash").get<std::string>();
  m.seed = j.at("seed").get<std::uint64_t>();
  m.tool_version = j.at("tool_version").get<std::string>();
  return m;
}

inline std::string read_file(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw IoError("cannot read " + path.string());
  std::string text((std::istreambuf_iterator<char>(in)), std::istreambuf_iterator<char>());
  if (in.bad()) throw IoError("read failed for " + path.string());
  return text;
}

// Write via a sibling temp file and rename, so readers never observe a
// partially written artifact and a failed run leaves the old file intact.
inline void write_file_atomic(const std::filesystem::path& path, std::string_view content) {
  const std::filesystem::path dir =
      path.has_parent_path() ? path.parent_path() : std::filesystem::path(".");
  std::error_code ec;
  std::filesystem::create_directories(dir, ec);  // best effort; open below reports failure
  const std::filesystem::path tmp = path.string() + ".tmp";
  {
    std::ofstream out(tmp, std::ios::binary | std::ios::trunc);
    if (!out) throw IoError("cannot write " + tmp.string());
    out.write(content.data(), static_cast<std::streamsize>(content.size()));
    out.flush();
    if (!out) {
      std::remove(tmp.string().c_str());
      throw IoError("write failed for " + tmp.string());
    }
  }
  std::filesystem::rename(tmp, path, ec);
  if (ec) {
    std::remove(tmp.string().c_str());
    throw IoError("cannot rename " + tmp.string() + " to " + path.string());
  }
}

}  // namespace relieve
