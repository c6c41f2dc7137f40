#include "manifest.hpp"

#include <openssl/evp.h>

#include <array>
#include <chrono>
#include <cstdio>
#include <fstream>
#include <stdexcept>

namespace ucodes::cli {

std::string sha256_hex(std::string_view data) {
  std::array<unsigned char, EVP_MAX_MD_SIZE> md{};
  unsigned int len = 0;
  if (EVP_Digest(data.data(), data.size(), md.data(), &len, EVP_sha256(), nullptr) != 1) {
    throw std::runtime_error("SHA-256 failed");
  }
  static constexpr char kHex[] = "0123456789abcdef";
  std::string out;
  out.reserve(2 * len);
  for (unsigned int i = 0; i < len; ++i) {
    out.push_back(kHex[md[i] >> 4]);
    out.push_back(kHex[md[i] & 15]);
  }
  return out;
}

nlohmann::json to_json(const RunManifest& m) {
  nlohmann::json inputs = nlohmann::json::array();
  for (const auto& in : m.inputs) inputs.push_back({{"path", in.path}, {"sha256", in.sha256}});
  return {{"command", m.command}, {"seed", m.seed},       {"params", m.params},
          {"inputs", inputs},     {"version", m.version}};
}

std::string manifest_digest(const RunManifest& m) { return sha256_hex(to_json(m).dump()); }

void write_sidecar(const std::string& output_path, const RunManifest& m, std::string_view output_bytes,
                   double wall_seconds) {
  const auto now = std::chrono::system_clock::now().time_since_epoch();
  nlohmann::json side = {
      {"manifest", to_json(m)},
      {"manifest_digest", manifest_digest(m)},
      {"output", {{"path", output_path}, {"sha256", sha256_hex(output_bytes)}}},
      {"wall_clock_seconds", wall_seconds},
      {"finished_unix_ms", std::chrono::duration_cast<std::chrono::milliseconds>(now).count()},
  };
  std::ofstream f(output_path + ".run.json", std::ios::binary);
  if (!f) throw std::runtime_error("cannot write " + output_path + ".run.json");
  f << side.dump(2) << '\n';
}

}  // namespace ucodes::cli
