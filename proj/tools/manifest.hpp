#pragma once

#include <nlohmann/json.hpp>

#include <cstdint>
#include <string>
#include <string_view>
#include <vector>

namespace ucodes::cli {

inline constexpr std::string_view kVersion = "ucodes 0.3.1";

std::string sha256_hex(std::string_view data);

struct InputDigest {
  std::string path;
  std::string sha256;
};

/// Everything needed to repeat a run. Wall-clock time and the output digest
/// live in the sidecar file so the output itself stays byte-identical.
struct RunManifest {
  std::vector<std::string> command;
  std::uint64_t seed = 0;
  nlohmann::json params = nlohmann::json::object();
  std::vector<InputDigest> inputs;
  std::string version{kVersion};
};

nlohmann::json to_json(const RunManifest& m);
/// SHA-256 of the compact dump of to_json(m).
std::string manifest_digest(const RunManifest& m);

/// `<output>.run.json`: manifest, its digest, output digest and timing.
void write_sidecar(const std::string& output_path, const RunManifest& m, std::string_view output_bytes,
                   double wall_seconds);

}  // namespace ucodes::cli
