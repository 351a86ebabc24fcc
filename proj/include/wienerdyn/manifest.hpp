#pragma once

/// @file
/// Run manifests: everything needed to reproduce a run, plus SHA-256
/// digests of the files it wrote. No timestamps, so identical runs give
/// identical manifests.

#include <array>
#include <cstdint>
#include <filesystem>
#include <fstream>
#include <iterator>
#include <memory>
#include <string>
#include <vector>

#include <openssl/evp.h>
#include "json.hpp"

#include "io.hpp"
#include "random.hpp"

namespace wienerdyn {

inline constexpr const char* library_version = "1.0.0";

inline std::string sha256_hex(const std::string& bytes) {
  std::array<unsigned char, EVP_MAX_MD_SIZE> md{};
  unsigned int len = 0;
  std::unique_ptr<EVP_MD_CTX, decltype(&EVP_MD_CTX_free)> ctx(EVP_MD_CTX_new(), &EVP_MD_CTX_free);
  if (!ctx || EVP_DigestInit_ex(ctx.get(), EVP_sha256(), nullptr) != 1 ||
      EVP_DigestUpdate(ctx.get(), bytes.data(), bytes.size()) != 1 ||
      EVP_DigestFinal_ex(ctx.get(), md.data(), &len) != 1)
    throw std::runtime_error("SHA-256 digest failed");
  static constexpr char hex[] = "0123456789abcdef";
  std::string out;
  for (unsigned i = 0; i < len; ++i) {
    out.push_back(hex[md[i] >> 4]);
    out.push_back(hex[md[i] & 0xF]);
  }
  return out;
}

inline std::string read_file_bytes(const std::filesystem::path& p) {
  std::ifstream in(p, std::ios::binary);
  if (!in) throw std::runtime_error("cannot read '" + p.string() + "'");
  return {std::istreambuf_iterator<char>(in), std::istreambuf_iterator<char>()};
}

inline nlohmann::json stream_layout() {
  return {{"engine", "mt19937_64 seeded by seed_seq{seed_lo, seed_hi, id_lo, id_hi}"},
          {"id", "(kind << 48) | index"},
          {"kinds",
           {{"paths", static_cast<int>(StreamKind::paths)},
            {"fresh", static_cast<int>(StreamKind::fresh)},
            {"kernels", static_cast<int>(StreamKind::kernels)},
            {"probes", static_cast<int>(StreamKind::probes)},
            {"gamma", static_cast<int>(StreamKind::gamma)}}}};
}

struct RunManifest {
  std::uint64_t master_seed = 0;
  int m = 0;
  std::size_t paths = 0;
  std::string command;
  nlohmann::json config = nlohmann::json::object();
  std::vector<std::filesystem::path> outputs;

  nlohmann::json to_json(const std::filesystem::path& dir) const {
    nlohmann::json files = nlohmann::json::array();
    for (const auto& f : outputs)
      files.push_back({{"file", f.filename().string()}, {"sha256", sha256_hex(read_file_bytes(dir / f))}});
    return {{"master_seed", master_seed},
            {"m", m},
            {"paths", paths},
            {"command", command},
            {"versions", {{"wienerdyn", library_version}}},
            {"config", config},
            {"streams", stream_layout()},
            {"outputs", files}};
  }

  void write(const std::filesystem::path& dir) const {
    auto out = io::open_output((dir / "manifest.json").string());
    out << to_json(dir).dump(2) << '\n';
  }
};

}  // namespace wienerdyn
