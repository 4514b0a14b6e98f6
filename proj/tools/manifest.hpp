#pragma once

#include <cstdint>
#include <filesystem>
#include <string>
#include <string_view>
#include <vector>

namespace sessbot::cli {

struct RunManifest {
  std::string subcommand;
  std::vector<std::string> args;
  std::string config_hash;  // 16 hex digits
  std::uint64_t seed = 0;
  std::vector<std::string> inputs;
  std::vector<std::string> outputs;
  double duration_seconds = 0.0;
  std::string version;
};

std::uint64_t fnv1a64(std::string_view bytes, std::uint64_t h = 14695981039346656037ull);

// Hash of the arguments that can change the output. --threads and --quiet
// are dropped.
std::string config_hash(const std::vector<std::string>& args, std::string_view extra = {});

std::string to_json(const RunManifest& manifest);
RunManifest manifest_from_json(std::string_view json);

std::filesystem::path manifest_path(const std::filesystem::path& output);

// Writes `<output>.manifest.json` for every output in `manifest`.
void write_manifests(const RunManifest& manifest);

}  // namespace sessbot::cli
