#pragma once

#include <chrono>
#include <cstdint>
#include <cstdio>
#include <ctime>
#include <fstream>
#include <map>
#include <string>
#include <vector>

#include <json.hpp>

#include "eztree/errors.hpp"
#include "eztree/rng.hpp"
#include "eztree/version.hpp"

namespace eztree {

/// Everything needed to replay a run bit-exactly on the same build: the
/// effective configuration after flag/config-file/default resolution, the
/// pinned RNG identifier and seed, plus the verdicts the run produced.
struct RunManifest {
  std::string command;
  std::map<std::string, std::string> config;  // effective key -> value
  std::uint64_t seed{0};
  std::vector<std::pair<std::string, std::string>> checks;  // name -> verdict

  nlohmann::json to_json(const std::string& timestamp) const {
    nlohmann::json j;
    j["tool"] = "eztree";
    j["version"] = kVersion;
    j["command"] = command;
    j["rng"] = kRngId;
    j["seed"] = seed;
    j["timestamp"] = timestamp;
    j["config"] = config;
    nlohmann::json checks_json = nlohmann::json::array();
    for (const auto& [name, verdict] : checks) {
      checks_json.push_back({{"check", name}, {"verdict", verdict}});
    }
    j["checks"] = checks_json;
    return j;
  }
};

inline std::string utc_timestamp_now() {
  const std::time_t now =
      std::chrono::system_clock::to_time_t(std::chrono::system_clock::now());
  std::tm tm{};
  gmtime_r(&now, &tm);
  char buf[32];
  std::strftime(buf, sizeof(buf), "%Y-%m-%dT%H:%M:%SZ", &tm);
  return buf;
}

inline void write_manifest(const RunManifest& manifest, const std::string& path) {
  std::ofstream os(path);
  if (!os) raise(errc::io_failure, "cannot open manifest file '" + path + "'");
  os << manifest.to_json(utc_timestamp_now()).dump(2) << '\n';
  if (!os) raise(errc::io_failure, "write failed for manifest '" + path + "'");
}

}  // namespace eztree
