#pragma once

#include <cstdint>
#include <filesystem>
#include <string>
#include <vector>

namespace wmforge {

std::string sha256_hex(const void* data, size_t len);
std::string sha256_hex(const std::string& text);
std::string sha256_file(const std::filesystem::path& path);

/// Reproducibility record for one CLI run: command, effective config, seeds,
/// and a content hash for every input and produced artifact.
struct RunManifest {
  std::string command;
  std::string created_utc;
  std::string config_text;        // canonical effective config
  std::string config_sha256;
  std::vector<std::pair<std::string, uint64_t>> seeds;
  std::vector<std::pair<std::filesystem::path, std::string>> inputs;   // path, sha256
  std::vector<std::pair<std::filesystem::path, std::string>> outputs;  // path, sha256

  void add_input(const std::filesystem::path& path);
  void add_output(const std::filesystem::path& path);
  void write(const std::filesystem::path& json_path) const;
};

std::string utc_timestamp_now();

/// runs/<timestamp>-<command>/ under `base`, created fresh (a numeric suffix
/// resolves collisions).
std::filesystem::path make_run_dir(const std::filesystem::path& base, const std::string& command);

}  // namespace wmforge
